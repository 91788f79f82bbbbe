#include "stc/cluster_space.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "stc/errors.hpp"
#include "stc/rng.hpp"

namespace stc {
namespace {

void insert_sorted(std::vector<NodeId>& v, NodeId id) {
  auto it = std::lower_bound(v.begin(), v.end(), id);
  if (it == v.end() || *it != id) v.insert(it, id);
}

void erase_sorted(std::vector<NodeId>& v, NodeId id) {
  auto it = std::lower_bound(v.begin(), v.end(), id);
  if (it != v.end() && *it == id) v.erase(it);
}

bool has_sorted(const std::vector<NodeId>& v, NodeId id) { return std::binary_search(v.begin(), v.end(), id); }

void erase_value(std::vector<NodeId>& v, NodeId id) {
  if (auto it = std::find(v.begin(), v.end(), id); it != v.end()) v.erase(it);
}

std::string canonical_hex(const BCode& code) {
  std::string hex = code.to_hex();
  const auto first = hex.find_first_not_of('0');
  return first == std::string::npos ? std::string("0") : hex.substr(first);
}

bool strict_subset(const BCode& a, const BCode& b) {
  const simd::Relation r = a.relate(b);
  return r.a_in_b && !r.b_in_a;
}

// Dense bitset over node slots.
struct Bits {
  std::vector<std::uint64_t> w;
  explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(std::size_t i) { w[i / 64] |= 1ULL << (i % 64); }
  bool test(std::size_t i) const { return (w[i / 64] >> (i % 64)) & 1U; }
  void merge(const Bits& o) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] |= o.w[i];
  }
};

}  // namespace

std::string_view kind_name(NodeKind kind) { return kind == NodeKind::kConcrete ? "concrete" : "abstract"; }

NodeKind parse_kind(std::string_view text) {
  if (text == "concrete") return NodeKind::kConcrete;
  if (text == "abstract") return NodeKind::kAbstract;
  throw ValidationError("unknown node kind '" + std::string(text) + "'");
}

std::string_view msp_strategy_name(MspStrategy s) { return s == MspStrategy::kIndexed ? "indexed" : "descent"; }

std::string_view lsc_strategy_name(LscStrategy s) {
  switch (s) {
    case LscStrategy::kIndexed: return "indexed";
    case LscStrategy::kDescendantWalk: return "descendant-walk";
    case LscStrategy::kFullScan: break;
  }
  return "full-scan";
}

std::string CanonicalForm::to_string() const {
  std::ostringstream out;
  for (const auto& n : nodes) {
    out << n.code << ' ' << kind_name(n.kind);
    for (const auto& s : n.services) out << ' ' << s;
    out << '\n';
  }
  for (const auto& [p, c] : edges) out << p << " -> " << c << '\n';
  return out.str();
}

ClusterSpace::ClusterSpace(Feature feature, ClusterOptions options) : feature_(feature), options_(options) {}

const TaxonomyNode& ClusterSpace::node(NodeId id) const {
  if (!contains(id)) throw std::out_of_range("no node " + std::to_string(id));
  return nodes_[id].node;
}

std::vector<NodeId> ClusterSpace::node_ids() const {
  std::vector<NodeId> out;
  out.reserve(alive_);
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].alive) out.push_back(i);
  }
  return out;
}

std::vector<NodeId> ClusterSpace::roots() const { return roots_; }
std::vector<NodeId> ClusterSpace::root_list() const { return roots_; }

std::optional<NodeId> ClusterSpace::node_of(std::string_view service_id) const {
  auto it = by_service_.find(std::string(service_id));
  if (it == by_service_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> ClusterSpace::overlapping(const BCode& code) const {
  std::vector<NodeId> out;
  for (std::size_t p : code.positions()) {
    if (p < postings_.size()) out.insert(out.end(), postings_[p].begin(), postings_[p].end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<NodeId> ClusterSpace::descendants(NodeId id) const {
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<NodeId> stack(node(id).children.begin(), node(id).children.end());
  std::vector<NodeId> out;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (seen[n]) continue;
    seen[n] = 1;
    out.push_back(n);
    for (NodeId c : nodes_[n].node.children) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> ClusterSpace::subsets_of(const BCode& code) const {
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<NodeId> stack(roots_.begin(), roots_.end());
  std::vector<NodeId> out;
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    if (seen[n]) continue;
    seen[n] = 1;
    if (!nodes_[n].node.code.subset_of(code)) continue;
    out.push_back(n);
    for (NodeId c : nodes_[n].node.children) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- scratch ---------------------------------------------------------------

void ClusterSpace::begin_search(const BCode& code) {
  probe_ = &code;
  ++epoch_;
  stamp_.resize(nodes_.size(), 0);
  relation_.resize(nodes_.size());
}

void ClusterSpace::begin_walk() {
  ++walk_epoch_;
  mark_.resize(nodes_.size(), 0);
}

bool ClusterSpace::visit(NodeId id) {
  if (mark_[id] == walk_epoch_) return false;
  mark_[id] = walk_epoch_;
  return true;
}

const ClusterSpace::Relation& ClusterSpace::relate(NodeId id) {
  Relation& r = relation_[id];
  if (stamp_[id] != epoch_) {
    stamp_[id] = epoch_;
    ++comparisons_;
    const simd::Relation x = nodes_[id].node.code.relate(*probe_);
    r = Relation{x.a_in_b, x.b_in_a, x.overlap};
  }
  return r;
}

// --- search ----------------------------------------------------------------

MspResult ClusterSpace::find_msp(const BCode& code) {
  begin_search(code);
  return msp_search();
}

std::vector<NodeId> ClusterSpace::find_lsc(const BCode& code, std::span<const NodeId> msp) {
  begin_search(code);
  return lsc_search(msp);
}

MspResult ClusterSpace::msp_search() {
  MspResult out;
  std::vector<NodeId> above;  // nodes whose code is a subset of the probe
  begin_walk();
  if (options_.msp == MspStrategy::kDescent) {
    std::vector<NodeId> stack(roots_.rbegin(), roots_.rend());
    while (!stack.empty()) {
      const NodeId n = stack.back();
      stack.pop_back();
      if (!visit(n)) continue;
      const Relation& r = relate(n);
      if (!r.node_in_code) continue;
      if (r.code_in_node) out.exact = n;
      above.push_back(n);
      const auto& ch = nodes_[n].node.children;
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
  } else {
    for (std::size_t p : probe_->positions()) {
      if (p >= keyed_.size()) break;
      for (NodeId n : keyed_[p]) {
        const Relation& r = relate(n);
        if (!r.node_in_code) continue;
        if (r.code_in_node) out.exact = n;
        above.push_back(n);
      }
    }
  }
  if (out.exact) {
    out.parents = nodes_[*out.exact].node.parents;
    return out;
  }
  // `above` is closed upward, so a node is most specific when no child is in it.
  begin_walk();
  for (NodeId n : above) visit(n);
  for (NodeId n : above) {
    const auto& ch = nodes_[n].node.children;
    if (std::none_of(ch.begin(), ch.end(), [&](NodeId c) { return visited(c); })) out.parents.push_back(n);
  }
  std::sort(out.parents.begin(), out.parents.end());
  return out;
}

std::vector<NodeId> ClusterSpace::lsc_search(std::span<const NodeId> msp) {
  std::vector<NodeId> below;  // nodes strictly containing the probe
  auto consider = [&](NodeId n) {
    const Relation& r = relate(n);
    if (r.code_in_node && !r.node_in_code) below.push_back(n);
  };
  LscStrategy strategy = options_.lsc;
  if (strategy == LscStrategy::kDescendantWalk && msp.empty()) strategy = LscStrategy::kFullScan;
  switch (strategy) {
    case LscStrategy::kIndexed: {
      const std::size_t p = rarest_bit(*probe_);
      if (p != 0 && p < postings_.size()) {
        for (NodeId n : postings_[p]) consider(n);
      }
      break;
    }
    case LscStrategy::kDescendantWalk: {
      begin_walk();
      std::vector<NodeId> stack;
      for (NodeId m : msp) {
        for (NodeId c : nodes_[m].node.children) stack.push_back(c);
      }
      while (!stack.empty()) {
        const NodeId n = stack.back();
        stack.pop_back();
        if (!visit(n)) continue;
        consider(n);
        for (NodeId c : nodes_[n].node.children) stack.push_back(c);
      }
      break;
    }
    case LscStrategy::kFullScan:
      for (NodeId n = 0; n < nodes_.size(); ++n) {
        if (nodes_[n].alive) consider(n);
      }
      break;
  }
  begin_walk();
  for (NodeId n : below) visit(n);
  std::vector<NodeId> out;
  for (NodeId n : below) {
    const auto& ps = nodes_[n].node.parents;
    if (std::none_of(ps.begin(), ps.end(), [&](NodeId p) { return visited(p); })) out.push_back(n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t ClusterSpace::rarest_bit(const BCode& code) const {
  std::size_t best = 0;
  std::size_t best_count = 0;
  for (std::size_t p : code.positions()) {
    const std::size_t c = p < postings_.size() ? postings_[p].size() : 0;
    if (best == 0 || c < best_count) {
      best = p;
      best_count = c;
    }
  }
  return best;
}

// --- mutation --------------------------------------------------------------

Placement ClusterSpace::insert(const ServiceDescription& service) {
  return insert(service.id, service.gcode(feature_));
}

Placement ClusterSpace::insert(const std::string& service_id, const GCode& code) {
  if (code.feature != feature_) {
    throw ValidationError("a " + std::string(feature_name(code.feature)) + "-code cannot enter the " +
                          std::string(feature_name(feature_)) + "-space");
  }
  if (by_service_.contains(service_id)) throw DuplicateNameError("service '" + service_id + "' already clustered");
  if (code.code.none()) throw ValidationError("service '" + service_id + "' has an empty g-code");
  if (alive_ > 0 && generation_ != 0 && code.generation != generation_) {
    throw StaleCodeError(std::min(code.generation, generation_), std::max(code.generation, generation_));
  }
  generation_ = code.generation;

  Placement report;
  report.size_before = alive_;
  const std::uint64_t before = comparisons_;
  report.node = place(code.code, &service_id, report);
  report.parents = nodes_[report.node].node.parents;
  report.children = nodes_[report.node].node.children;
  report.comparisons = comparisons_ - before;
  return report;
}

NodeId ClusterSpace::place(const BCode& code, const std::string* service_id, Placement& report) {
  MspResult msp;
  bool covered = false;
  for (;;) {
    begin_search(code);
    msp = msp_search();
    if (msp.exact) {
      const NodeId n = *msp.exact;
      if (service_id != nullptr) {
        auto& node = mut(n);
        node.services.insert(std::lower_bound(node.services.begin(), node.services.end(), *service_id), *service_id);
        node.kind = NodeKind::kConcrete;
        by_service_.emplace(*service_id, n);
        report.merged = true;
      }
      return n;
    }
    if (!msp.parents.empty() || !options_.create_abstracts || covered) break;
    // No parent at all: cover each overlapping root with an abstract node.
    std::vector<BCode> covers;
    for (NodeId r : root_list()) {
      const Relation& rel = relate(r);
      if (rel.overlap && !rel.code_in_node) covers.push_back(nodes_[r].node.code & code);
    }
    if (covers.empty()) break;
    for (const BCode& a : covers) place(a, nullptr, report);
    covered = true;
  }
  const std::vector<NodeId> lsc = lsc_search(msp.parents);
  const NodeId id = add_node(code, service_id, msp.parents, lsc);
  if (service_id == nullptr) report.abstracts.push_back(id);
  return id;
}

NodeId ClusterSpace::add_node(const BCode& code, const std::string* service_id, std::vector<NodeId> parents,
                              std::vector<NodeId> children) {
  const NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.emplace_back();
  Slot& s = nodes_.back();
  s.alive = true;
  s.node.id = id;
  s.node.code = code;
  if (service_id != nullptr) {
    s.node.services.push_back(*service_id);
    s.node.kind = NodeKind::kConcrete;
    by_service_.emplace(*service_id, id);
  }
  ++alive_;
  insert_sorted(roots_, id);
  for (NodeId c : children) link(id, c);
  for (NodeId p : parents) link(p, id);
  for (NodeId p : parents) {
    for (NodeId c : children) {
      if (has_sorted(nodes_[p].node.children, c)) unlink(p, c);
    }
  }
  index_node(id);
  return id;
}

void ClusterSpace::link(NodeId parent, NodeId child) {
  auto& cp = mut(child).parents;
  if (cp.empty()) erase_sorted(roots_, child);
  insert_sorted(cp, parent);
  insert_sorted(mut(parent).children, child);
}

void ClusterSpace::unlink(NodeId parent, NodeId child) {
  auto& cp = mut(child).parents;
  erase_sorted(cp, parent);
  erase_sorted(mut(parent).children, child);
  if (cp.empty() && nodes_[child].alive) insert_sorted(roots_, child);
}

void ClusterSpace::index_node(NodeId id) {
  Slot& s = slot(id);
  s.key = rarest_bit(s.node.code);
  for (std::size_t p : s.node.code.positions()) {
    if (p >= postings_.size()) {
      postings_.resize(p + 1);
      keyed_.resize(p + 1);
    }
    postings_[p].push_back(id);
  }
  keyed_[s.key].push_back(id);
}

void ClusterSpace::unindex_node(NodeId id) {
  Slot& s = slot(id);
  for (std::size_t p : s.node.code.positions()) erase_value(postings_[p], id);
  erase_value(keyed_[s.key], id);
}

void ClusterSpace::remove(std::string_view service_id) {
  auto it = by_service_.find(std::string(service_id));
  if (it == by_service_.end()) throw UnknownNameError("service not clustered", {std::string(service_id)});
  const NodeId id = it->second;
  by_service_.erase(it);
  auto& services = mut(id).services;
  services.erase(std::find(services.begin(), services.end(), service_id));
  if (!services.empty()) return;
  const std::vector<NodeId> parents = nodes_[id].node.parents;
  excise(id);
  prune_upward(parents);
}

void ClusterSpace::excise(NodeId id) {
  const std::vector<NodeId> parents = nodes_[id].node.parents;
  const std::vector<NodeId> children = nodes_[id].node.children;
  for (NodeId p : parents) unlink(p, id);
  for (NodeId c : children) unlink(id, c);
  unindex_node(id);
  erase_sorted(roots_, id);
  nodes_[id].alive = false;
  mut(id).kind = NodeKind::kAbstract;
  --alive_;
  for (NodeId p : parents) {
    for (NodeId c : children) {
      const auto& siblings = nodes_[p].node.children;
      const BCode& cc = nodes_[c].node.code;
      const bool implied = std::any_of(siblings.begin(), siblings.end(),
                                       [&](NodeId m) { return m != c && strict_subset(nodes_[m].node.code, cc); });
      if (!implied) link(p, c);
    }
  }
}

void ClusterSpace::prune_upward(std::vector<NodeId> work) {
  while (!work.empty()) {
    const NodeId n = work.back();
    work.pop_back();
    if (!contains(n)) continue;
    const TaxonomyNode& node = nodes_[n].node;
    if (!node.services.empty() || node.children.size() >= 2) continue;
    const std::vector<NodeId> parents = node.parents;
    excise(n);
    work.insert(work.end(), parents.begin(), parents.end());
  }
}

ClusterSpace ClusterSpace::from_nodes(Feature feature, std::uint64_t generation, std::vector<TaxonomyNode> nodes,
                                      ClusterOptions options) {
  ClusterSpace space(feature, options);
  space.generation_ = generation;
  NodeId max_id = 0;
  for (const auto& n : nodes) max_id = std::max(max_id, n.id);
  if (!nodes.empty()) space.nodes_.resize(static_cast<std::size_t>(max_id) + 1);
  for (auto& n : nodes) {
    Slot& s = space.nodes_[n.id];
    if (s.alive) throw ValidationError("duplicate node id " + std::to_string(n.id));
    std::sort(n.services.begin(), n.services.end());
    std::sort(n.parents.begin(), n.parents.end());
    std::sort(n.children.begin(), n.children.end());
    n.kind = n.services.empty() ? NodeKind::kAbstract : NodeKind::kConcrete;
    s.node = std::move(n);
    s.alive = true;
    ++space.alive_;
  }
  for (NodeId id = 0; id < space.nodes_.size(); ++id) {
    if (!space.nodes_[id].alive) continue;
    const TaxonomyNode& n = space.nodes_[id].node;
    for (NodeId p : n.parents) {
      if (!space.contains(p) || !has_sorted(space.nodes_[p].node.children, id)) {
        throw ValidationError("node " + std::to_string(id) + " has inconsistent parent " + std::to_string(p));
      }
    }
    for (NodeId c : n.children) {
      if (!space.contains(c) || !has_sorted(space.nodes_[c].node.parents, id)) {
        throw ValidationError("node " + std::to_string(id) + " has inconsistent child " + std::to_string(c));
      }
    }
    if (n.parents.empty()) space.roots_.push_back(id);
    for (const auto& s : n.services) {
      if (!space.by_service_.emplace(s, id).second) throw DuplicateNameError("service '" + s + "' appears twice");
    }
  }
  // Key nodes in id order, which is insertion order for spaces built here.
  for (NodeId id = 0; id < space.nodes_.size(); ++id) {
    if (space.nodes_[id].alive) space.index_node(id);
  }
  return space;
}

// --- views -----------------------------------------------------------------

std::vector<Taxonomy> ClusterSpace::taxonomies() const {
  std::vector<Taxonomy> out;
  for (NodeId r : roots_) {
    Taxonomy t;
    t.root = r;
    t.nodes = descendants(r);
    insert_sorted(t.nodes, r);
    for (NodeId n : t.nodes) {
      const auto& s = nodes_[n].node.services;
      t.services.insert(t.services.end(), s.begin(), s.end());
    }
    std::sort(t.services.begin(), t.services.end());
    t.services.erase(std::unique(t.services.begin(), t.services.end()), t.services.end());
    out.push_back(std::move(t));
  }
  return out;
}

CanonicalForm ClusterSpace::canonical() const {
  CanonicalForm f;
  for (NodeId id : node_ids()) {
    const TaxonomyNode& n = nodes_[id].node;
    f.nodes.push_back({canonical_hex(n.code), n.kind, n.services});
    for (NodeId c : n.children) f.edges.emplace_back(canonical_hex(n.code), canonical_hex(nodes_[c].node.code));
  }
  std::sort(f.nodes.begin(), f.nodes.end(),
            [](const auto& a, const auto& b) { return std::tie(a.code, a.kind) < std::tie(b.code, b.kind); });
  std::sort(f.edges.begin(), f.edges.end());
  return f;
}

CanonicalForm ClusterSpace::canonical_concrete() const {
  const std::size_t n = nodes_.size();
  // Topological order, children before parents.
  std::vector<std::size_t> pending(n, 0);
  std::vector<NodeId> order;
  for (NodeId id : node_ids()) {
    pending[id] = nodes_[id].node.children.size();
    if (pending[id] == 0) order.push_back(id);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (NodeId p : nodes_[order[i]].node.parents) {
      if (--pending[p] == 0) order.push_back(p);
    }
  }
  // Concrete nodes reachable below each node.
  std::vector<Bits> reach(n, Bits(n));
  for (NodeId id : order) {
    for (NodeId c : nodes_[id].node.children) {
      reach[id].merge(reach[c]);
      if (nodes_[c].node.kind == NodeKind::kConcrete) reach[id].set(c);
    }
  }
  CanonicalForm f;
  for (NodeId id : node_ids()) {
    const TaxonomyNode& node = nodes_[id].node;
    if (node.kind != NodeKind::kConcrete) continue;
    f.nodes.push_back({canonical_hex(node.code), node.kind, node.services});
    // First concrete nodes met walking down; the reduction keeps those not
    // reachable from another one.
    std::vector<NodeId> frontier;
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack(node.children.begin(), node.children.end());
    while (!stack.empty()) {
      const NodeId m = stack.back();
      stack.pop_back();
      if (seen[m]) continue;
      seen[m] = 1;
      if (nodes_[m].node.kind == NodeKind::kConcrete) {
        frontier.push_back(m);
      } else {
        for (NodeId c : nodes_[m].node.children) stack.push_back(c);
      }
    }
    for (NodeId d : frontier) {
      const bool implied = std::any_of(frontier.begin(), frontier.end(),
                                       [&](NodeId e) { return e != d && reach[e].test(d); });
      if (!implied) f.edges.emplace_back(canonical_hex(node.code), canonical_hex(nodes_[d].node.code));
    }
  }
  std::sort(f.nodes.begin(), f.nodes.end(),
            [](const auto& a, const auto& b) { return std::tie(a.code, a.kind) < std::tie(b.code, b.kind); });
  std::sort(f.edges.begin(), f.edges.end());
  return f;
}

std::vector<std::string> ClusterSpace::check_invariants() const {
  std::vector<std::string> bad;
  auto fail = [&](NodeId id, const std::string& what) { bad.push_back("node " + std::to_string(id) + ": " + what); };
  const std::vector<NodeId> ids = node_ids();
  const std::size_t n = nodes_.size();

  std::size_t service_total = 0;
  for (NodeId id : ids) {
    const TaxonomyNode& node = nodes_[id].node;
    if (node.id != id) fail(id, "stored id differs");
    if (!std::is_sorted(node.parents.begin(), node.parents.end()) ||
        std::adjacent_find(node.parents.begin(), node.parents.end()) != node.parents.end()) {
      fail(id, "parent list not sorted and unique");
    }
    if (!std::is_sorted(node.children.begin(), node.children.end()) ||
        std::adjacent_find(node.children.begin(), node.children.end()) != node.children.end()) {
      fail(id, "child list not sorted and unique");
    }
    for (NodeId p : node.parents) {
      if (p == id) fail(id, "self edge");
      if (!contains(p)) {
        fail(id, "dead parent " + std::to_string(p));
        continue;
      }
      if (!has_sorted(nodes_[p].node.children, id)) fail(id, "parent " + std::to_string(p) + " lacks back edge");
      if (!strict_subset(nodes_[p].node.code, node.code)) {
        fail(id, "parent " + std::to_string(p) + " is not strictly more general");
      }
    }
    for (NodeId c : node.children) {
      if (!contains(c)) {
        fail(id, "dead child " + std::to_string(c));
        continue;
      }
      if (!has_sorted(nodes_[c].node.parents, id)) fail(id, "child " + std::to_string(c) + " lacks back edge");
    }
    const bool concrete = node.kind == NodeKind::kConcrete;
    if (concrete == node.services.empty()) fail(id, "kind does not match service set");
    for (const auto& s : node.services) {
      auto it = by_service_.find(s);
      if (it == by_service_.end() || it->second != id) fail(id, "service '" + s + "' not indexed here");
    }
    service_total += node.services.size();
    if (node.parents.empty() != has_sorted(roots_, id)) fail(id, "root set disagrees with parent list");
    const Slot& s = nodes_[id];
    if (s.key >= keyed_.size() || std::find(keyed_[s.key].begin(), keyed_[s.key].end(), id) == keyed_[s.key].end()) {
      fail(id, "missing from key index");
    }
    for (std::size_t p : node.code.positions()) {
      if (p >= postings_.size() || std::find(postings_[p].begin(), postings_[p].end(), id) == postings_[p].end()) {
        fail(id, "missing from posting " + std::to_string(p));
      }
    }
  }
  if (service_total != by_service_.size()) bad.push_back("service index size differs from node contents");
  if (roots_.size() != static_cast<std::size_t>(std::count_if(ids.begin(), ids.end(), [&](NodeId id) {
        return nodes_[id].node.parents.empty();
      }))) {
    bad.push_back("root set has stale entries");
  }
  if (!bad.empty()) return bad;

  // Acyclicity: every node must drain in a parents-first topological pass.
  std::vector<std::size_t> pending(n, 0);
  std::vector<NodeId> order;
  for (NodeId id : ids) {
    pending[id] = nodes_[id].node.parents.size();
    if (pending[id] == 0) order.push_back(id);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (NodeId c : nodes_[order[i]].node.children) {
      if (--pending[c] == 0) order.push_back(c);
    }
  }
  if (order.size() != ids.size()) {
    bad.push_back("cycle among " + std::to_string(ids.size() - order.size()) + " nodes");
    return bad;
  }

  // Ancestor sets, then: no edge p->c where p also reaches c via another parent.
  std::vector<Bits> anc(n, Bits(n));
  for (NodeId id : order) {
    for (NodeId p : nodes_[id].node.parents) {
      anc[id].merge(anc[p]);
      anc[id].set(p);
    }
  }
  for (NodeId id : ids) {
    const auto& ps = nodes_[id].node.parents;
    for (NodeId p : ps) {
      for (NodeId q : ps) {
        if (p != q && anc[q].test(p)) fail(id, "transitive edge from " + std::to_string(p));
      }
    }
  }
  // The diagram covers the code order exactly.
  for (NodeId a : ids) {
    for (NodeId b : ids) {
      if (a == b) continue;
      const bool below = strict_subset(nodes_[a].node.code, nodes_[b].node.code);
      if (below != anc[b].test(a)) {
        fail(b, std::string(below ? "missing ancestor " : "spurious ancestor ") + std::to_string(a));
      }
      if (a < b && nodes_[a].node.code == nodes_[b].node.code) fail(b, "duplicate code of " + std::to_string(a));
    }
  }
  return bad;
}

SpacePair converge(std::span<const ServiceDescription> services, ClusterOptions options,
                   std::optional<std::uint64_t> shuffle_seed) {
  SpacePair spaces{ClusterSpace(Feature::kInput, options), ClusterSpace(Feature::kOutput, options)};
  std::vector<std::size_t> order(services.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (shuffle_seed) {
    Rng rng(*shuffle_seed);
    shuffle(order, rng);
  }
  for (std::size_t i : order) {
    spaces.input.insert(services[i]);
    spaces.output.insert(services[i]);
  }
  return spaces;
}

}  // namespace stc

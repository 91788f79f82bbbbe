#include "stc/ontology.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <stdexcept>

#include "stc/errors.hpp"

namespace stc {
namespace {

bool reserved(std::string_view name) { return name == kTopName || name == kBottomName; }

void push_unique(std::vector<ConceptId>& v, ConceptId id) {
  if (std::find(v.begin(), v.end(), id) == v.end()) v.push_back(id);
}

void erase_value(std::vector<ConceptId>& v, ConceptId id) { std::erase(v, id); }

}  // namespace

Ontology Ontology::load(const OntologyDocument& document) {
  Ontology o;
  o.name_ = document.name;
  o.nodes_.push_back(Node{std::string(kTopName), {}, {}});
  o.nodes_.push_back(Node{std::string(kBottomName), {}, {}});
  o.by_name_.emplace(std::string(kTopName), top());
  o.by_name_.emplace(std::string(kBottomName), bottom());

  // Pass 1: names.
  for (const auto& entry : document.concepts) {
    if (entry.name.empty()) throw ValidationError("concept with empty name in ontology '" + o.name_ + "'");
    if (entry.name == kTopName) {
      if (!entry.parents.empty()) throw ValidationError(std::string(kTopName) + " cannot have parents");
      continue;
    }
    if (entry.name == kBottomName) continue;
    const ConceptId id{static_cast<std::uint32_t>(o.nodes_.size())};
    if (!o.by_name_.emplace(entry.name, id).second) {
      throw DuplicateNameError("duplicate concept name '" + entry.name + "' in ontology '" + o.name_ + "'");
    }
    o.nodes_.push_back(Node{entry.name, {}, {}});
  }

  // Pass 2: edges.
  std::vector<std::string> dangling;
  for (const auto& entry : document.concepts) {
    if (reserved(entry.name)) continue;
    const ConceptId child = o.by_name_.at(entry.name);
    for (const auto& parent_name : entry.parents) {
      if (parent_name == kBottomName) {
        throw ValidationError("'" + entry.name + "' declares " + std::string(kBottomName) + " as a parent");
      }
      auto it = o.by_name_.find(parent_name);
      if (it == o.by_name_.end()) {
        dangling.push_back(entry.name + " -> " + parent_name);
        continue;
      }
      if (it->second == top()) continue;  // roots are linked to ⊤ below
      if (it->second == child) throw CycleError({entry.name, entry.name});
      o.link(it->second, child);
    }
  }
  if (!dangling.empty()) throw UnknownNameError("dangling parent reference", std::move(dangling));

  // Cycle check over ordinary concepts: iterative DFS, white/grey/black.
  const std::size_t n = o.nodes_.size();
  std::vector<std::uint8_t> color(n, 0);
  std::vector<std::uint32_t> path;
  for (std::uint32_t start = 2; start < n; ++start) {
    if (color[start] != 0) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{start, 0}};
    color[start] = 1;
    path.assign(1, start);
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const auto& kids = o.nodes_[v].children;
      if (next < kids.size()) {
        const std::uint32_t w = kids[next++].value;
        if (color[w] == 1) {
          std::vector<std::string> cycle;
          auto from = std::find(path.begin(), path.end(), w);
          for (auto p = from; p != path.end(); ++p) cycle.push_back(o.nodes_[*p].name);
          cycle.push_back(o.nodes_[w].name);
          throw CycleError(std::move(cycle));
        }
        if (color[w] == 0) {
          color[w] = 1;
          path.push_back(w);
          stack.emplace_back(w, 0);
        }
      } else {
        color[v] = 2;
        path.pop_back();
        stack.pop_back();
      }
    }
  }

  for (std::uint32_t i = 2; i < n; ++i) {
    if (o.nodes_[i].parents.empty()) o.link(top(), ConceptId{i});
  }
  o.attach_bottom();
  o.encode();
  return o;
}

const Ontology::Node& Ontology::node(ConceptId id) const {
  if (id.value >= nodes_.size()) {
    throw std::out_of_range("concept id " + std::to_string(id.value) + " not in ontology '" + name_ + "'");
  }
  return nodes_[id.value];
}

void Ontology::link(ConceptId parent, ConceptId child) {
  push_unique(node(parent).children, child);
  push_unique(node(child).parents, parent);
}

void Ontology::unlink(ConceptId parent, ConceptId child) {
  erase_value(node(parent).children, child);
  erase_value(node(child).parents, parent);
}

void Ontology::attach_bottom() {
  for (ConceptId p : std::vector<ConceptId>(nodes_[1].parents)) unlink(p, bottom());
  bool any = false;
  for (std::uint32_t i = 2; i < nodes_.size(); ++i) {
    if (nodes_[i].children.empty()) {
      link(ConceptId{i}, bottom());
      any = true;
    }
  }
  if (!any) link(top(), bottom());
}

void Ontology::encode() {
  const std::size_t n = nodes_.size();
  width_ = n;
  codes_.assign(n, BCode(width_));
  position_.assign(n, 0);
  visit_order_.clear();

  std::vector<std::size_t> pending(n, 0);
  for (std::uint32_t i = 2; i < n; ++i) {
    for (ConceptId p : nodes_[i].parents) {
      if (p != top()) ++pending[i];
    }
  }
  // Min-heap on name: ties among ready concepts go to the smallest name.
  auto later = [this](std::uint32_t a, std::uint32_t b) { return nodes_[a].name > nodes_[b].name; };
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, decltype(later)> ready(later);
  for (std::uint32_t i = 2; i < n; ++i) {
    if (pending[i] == 0) ready.push(i);
  }
  std::size_t next_position = 0;
  while (!ready.empty()) {
    const std::uint32_t v = ready.top();
    ready.pop();
    BCode code(width_);
    for (ConceptId p : nodes_[v].parents) code |= codes_[p.value];
    code.set(++next_position);
    codes_[v] = std::move(code);
    position_[v] = next_position;
    visit_order_.push_back(ConceptId{v});
    for (ConceptId c : nodes_[v].children) {
      if (c == bottom()) continue;
      if (--pending[c.value] == 0) ready.push(c.value);
    }
  }
  codes_[bottom().value] = BCode::ones(width_);
  ++generation_;
}

void Ontology::reencode() { encode(); }

std::optional<ConceptId> Ontology::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

ConceptId Ontology::id_of(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw UnknownNameError("unknown concept in ontology '" + name_ + "'", {std::string(name)});
}

const std::string& Ontology::name_of(ConceptId id) const { return node(id).name; }

std::span<const ConceptId> Ontology::parents(ConceptId id) const { return node(id).parents; }

std::span<const ConceptId> Ontology::children(ConceptId id) const { return node(id).children; }

const BCode& Ontology::code(ConceptId id) const {
  node(id);
  return codes_[id.value];
}

StampedCode Ontology::stamped_code(ConceptId id) const { return StampedCode{id, code(id), generation_}; }

std::size_t Ontology::identity_position(ConceptId id) const {
  node(id);
  return position_[id.value];
}

bool Ontology::is_subsumed_by(ConceptId x, ConceptId y) const { return code(y).subset_of(code(x)); }

void Ontology::check_fresh(const StampedCode& code) const {
  if (code.generation != generation_) throw StaleCodeError(code.generation, generation_);
}

ConceptId Ontology::add_concept(std::string name, std::span<const ConceptId> parents,
                                std::span<const ConceptId> children) {
  if (name.empty() || reserved(name)) throw ValidationError("invalid concept name '" + name + "'");
  if (by_name_.contains(name)) {
    throw DuplicateNameError("duplicate concept name '" + name + "' in ontology '" + name_ + "'");
  }
  std::vector<ConceptId> parent_set;
  for (ConceptId p : parents) {
    if (p.value >= nodes_.size()) {
      throw UnknownNameError("unknown parent concept", {"#" + std::to_string(p.value)});
    }
    if (p == bottom()) throw ValidationError(std::string(kBottomName) + " cannot be a parent");
    push_unique(parent_set, p);
  }
  if (parent_set.empty()) parent_set.push_back(top());
  if (parent_set.size() > 1) erase_value(parent_set, top());

  std::vector<ConceptId> child_set;
  for (ConceptId c : children) {
    if (c.value >= nodes_.size()) {
      throw UnknownNameError("unknown child concept", {"#" + std::to_string(c.value)});
    }
    if (c == top()) throw ValidationError(std::string(kTopName) + " cannot be a child");
    if (c == bottom()) continue;
    for (ConceptId p : parent_set) {
      // p ⊑ c would close a loop c ⊒ p ⊒ new ⊒ c.
      if (p == c || is_subsumed_by(p, c)) {
        throw CycleError({name, name_of(c), name_of(p), name});
      }
    }
    push_unique(child_set, c);
  }

  const ConceptId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(Node{name, {}, {}});
  by_name_.emplace(std::move(name), id);
  for (ConceptId p : parent_set) link(p, id);

  if (child_set.empty()) {
    attach_bottom();
    width_ = nodes_.size();
    BCode code(width_);
    for (ConceptId p : parent_set) code |= codes_[p.value];
    code.set(width_);
    codes_.push_back(std::move(code));
    position_.push_back(width_);
    visit_order_.push_back(id);
    codes_[bottom().value] = BCode::ones(width_);
    return id;
  }

  // Inserting above existing concepts: drop child edges now implied through
  // the new concept, then re-encode so descendants inherit its bit.
  for (ConceptId c : child_set) {
    for (ConceptId old_parent : std::vector<ConceptId>(node(c).parents)) {
      const bool implied = old_parent == top() || std::any_of(parent_set.begin(), parent_set.end(), [&](ConceptId p) {
                             return p == old_parent || is_subsumed_by(p, old_parent);
                           });
      if (implied) unlink(old_parent, c);
    }
    link(id, c);
  }
  codes_.emplace_back();
  position_.push_back(0);
  attach_bottom();
  encode();
  return id;
}

OntologyDocument Ontology::to_document() const {
  OntologyDocument doc;
  doc.name = name_;
  for (std::uint32_t i = 2; i < nodes_.size(); ++i) {
    OntologyDocument::Entry e;
    e.name = nodes_[i].name;
    for (ConceptId p : nodes_[i].parents) {
      if (p != top()) e.parents.push_back(nodes_[p.value].name);
    }
    doc.concepts.push_back(std::move(e));
  }
  return doc;
}

bool subsumes(const StampedCode& x, const StampedCode& y, const Ontology& ontology) {
  ontology.check_fresh(x);
  ontology.check_fresh(y);
  return y.code.subset_of(x.code);
}

}  // namespace stc

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stc/bcode.hpp"
#include "stc/service.hpp"

namespace stc {

using NodeId = std::uint32_t;

enum class NodeKind { kConcrete, kAbstract };
std::string_view kind_name(NodeKind kind);
NodeKind parse_kind(std::string_view text);

struct TaxonomyNode {
  NodeId id = 0;
  NodeKind kind = NodeKind::kAbstract;
  std::vector<std::string> services;  // sorted; empty iff abstract
  BCode code;
  std::vector<NodeId> parents;   // sorted
  std::vector<NodeId> children;  // sorted
};

/// How the most specific parents of a new code are found.
enum class MspStrategy {
  kIndexed,  // nodes keyed under their rarest bit; only keys inside the code are probed
  kDescent,  // depth-first from the roots along plug-in branches
};

/// How the least specific children are found.
enum class LscStrategy {
  kIndexed,         // posting list of the code's rarest bit
  kDescendantWalk,  // descendants of the parents found, or every node when there are none
  kFullScan,
};

std::string_view msp_strategy_name(MspStrategy s);
std::string_view lsc_strategy_name(LscStrategy s);

struct ClusterOptions {
  MspStrategy msp = MspStrategy::kIndexed;
  LscStrategy lsc = LscStrategy::kIndexed;
  bool create_abstracts = true;
};

struct Placement {
  NodeId node = 0;
  bool merged = false;  // joined an existing node with an equal code
  std::vector<NodeId> parents;
  std::vector<NodeId> children;
  std::vector<NodeId> abstracts;  // abstract nodes created by this insert
  std::uint64_t comparisons = 0;
  std::size_t size_before = 0;  // node count before the insert
};

struct MspResult {
  std::vector<NodeId> parents;
  std::optional<NodeId> exact;
};

/// Canonical rendering of a topology: independent of node ids and insertion
/// history. Codes are printed as hex with leading zeros stripped.
struct CanonicalForm {
  struct Node {
    std::string code;
    NodeKind kind;
    std::vector<std::string> services;
    friend bool operator==(const Node&, const Node&) = default;
  };
  std::vector<Node> nodes;
  std::vector<std::pair<std::string, std::string>> edges;  // parent code, child code
  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  std::string to_string() const;
};

/// All nodes reachable from one root.
struct Taxonomy {
  NodeId root = 0;
  std::vector<NodeId> nodes;
  std::vector<std::string> services;  // sorted, unique
};

/// The Hasse diagram of the services of one feature under g-subsumption.
///
/// Parents are more general (their code is a subset of the child's).
/// Services with equal codes share one concrete node. Abstract nodes carry the
/// AND of two sibling codes and hold no services.
///
/// Mutating members and the search functions use per-operation scratch
/// state; const members are safe to call concurrently on an unchanging space.
class ClusterSpace {
 public:
  explicit ClusterSpace(Feature feature = Feature::kOutput, ClusterOptions options = {});

  /// Rebuild from serialized nodes. Ids are kept; indexes are recomputed.
  static ClusterSpace from_nodes(Feature feature, std::uint64_t generation, std::vector<TaxonomyNode> nodes,
                                 ClusterOptions options = {});

  Feature feature() const noexcept { return feature_; }
  /// Code generation of the services held; 0 while nothing was inserted.
  std::uint64_t generation() const noexcept { return generation_; }
  const ClusterOptions& options() const noexcept { return options_; }
  void set_options(ClusterOptions options) { options_ = options; }

  /// Throws DuplicateNameError for a known id, StaleCodeError when the code
  /// generation differs from the space's, ValidationError on a feature
  /// mismatch.
  Placement insert(const ServiceDescription& service);
  Placement insert(const std::string& service_id, const GCode& code);

  /// Throws UnknownNameError.
  void remove(std::string_view service_id);

  MspResult find_msp(const BCode& code);
  std::vector<NodeId> find_lsc(const BCode& code, std::span<const NodeId> msp);

  std::size_t node_count() const noexcept { return alive_; }
  std::size_t service_count() const noexcept { return by_service_.size(); }
  bool empty() const noexcept { return alive_ == 0; }
  bool contains(NodeId id) const noexcept { return id < nodes_.size() && nodes_[id].alive; }
  const TaxonomyNode& node(NodeId id) const;
  std::vector<NodeId> node_ids() const;
  std::vector<NodeId> roots() const;
  std::optional<NodeId> node_of(std::string_view service_id) const;
  /// Nodes whose code shares a bit with `code`.
  std::vector<NodeId> overlapping(const BCode& code) const;
  std::vector<NodeId> descendants(NodeId id) const;
  /// Nodes whose code is a subset of `code`, found by descending from the
  /// roots (the set is closed upward).
  std::vector<NodeId> subsets_of(const BCode& code) const;

  /// Total code comparisons since construction.
  std::uint64_t comparisons() const noexcept { return comparisons_; }
  void reset_comparisons() noexcept { comparisons_ = 0; }

  std::vector<Taxonomy> taxonomies() const;
  CanonicalForm canonical() const;
  /// Concrete nodes only, with edges from reachability restricted to them and
  /// transitively reduced.
  CanonicalForm canonical_concrete() const;

  /// Structural checks: edge symmetry, acyclicity, parent codes strictly
  /// below child codes, no transitive edges, kind/service consistency, and
  /// index consistency. Empty when sound.
  std::vector<std::string> check_invariants() const;

 private:
  struct Slot {
    TaxonomyNode node;
    bool alive = false;
    std::size_t key = 0;  // bit position the node is keyed under
  };
  struct Relation {
    bool node_in_code = false;  // node ⊆ code
    bool code_in_node = false;  // code ⊆ node
    bool overlap = false;
  };

  NodeId place(const BCode& code, const std::string* service_id, Placement& report);
  NodeId add_node(const BCode& code, const std::string* service_id, std::vector<NodeId> parents,
                  std::vector<NodeId> children);
  void excise(NodeId id);
  void prune_upward(std::vector<NodeId> start);
  void link(NodeId parent, NodeId child);
  void unlink(NodeId parent, NodeId child);
  void index_node(NodeId id);
  void unindex_node(NodeId id);
  std::size_t rarest_bit(const BCode& code) const;

  void begin_search(const BCode& code);
  void begin_walk();
  bool visit(NodeId id);  // false if already visited in this walk
  bool visited(NodeId id) const { return mark_[id] == walk_epoch_; }
  const Relation& relate(NodeId id);
  MspResult msp_search();
  std::vector<NodeId> lsc_search(std::span<const NodeId> msp);
  std::vector<NodeId> root_list() const;

  Slot& slot(NodeId id) { return nodes_[id]; }
  TaxonomyNode& mut(NodeId id) { return nodes_[id].node; }

  Feature feature_;
  ClusterOptions options_;
  std::uint64_t generation_ = 0;
  std::vector<Slot> nodes_;
  std::size_t alive_ = 0;
  std::unordered_map<std::string, NodeId> by_service_;
  std::vector<std::vector<NodeId>> postings_;  // bit position -> nodes having it
  std::vector<std::vector<NodeId>> keyed_;     // bit position -> nodes keyed there
  std::vector<NodeId> roots_;                  // sorted
  std::uint64_t comparisons_ = 0;

  // Per-search scratch, valid while stamp == epoch_.
  const BCode* probe_ = nullptr;
  std::uint64_t epoch_ = 0;
  std::vector<std::uint64_t> stamp_;
  std::vector<Relation> relation_;
  std::uint64_t walk_epoch_ = 0;
  std::vector<std::uint64_t> mark_;  // visited flags for walks, valid while == walk_epoch_
};

struct SpacePair {
  ClusterSpace input{Feature::kInput};
  ClusterSpace output{Feature::kOutput};
  ClusterSpace& space(Feature f) { return f == Feature::kInput ? input : output; }
  const ClusterSpace& space(Feature f) const { return f == Feature::kInput ? input : output; }
};

/// Inserts every service into both spaces, in the given order or shuffled
/// with `shuffle_seed`.
SpacePair converge(std::span<const ServiceDescription> services, ClusterOptions options = {},
                   std::optional<std::uint64_t> shuffle_seed = std::nullopt);

}  // namespace stc

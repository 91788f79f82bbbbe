#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stc/bcode.hpp"

namespace stc {

struct ConceptId {
  std::uint32_t value = 0;
  friend auto operator<=>(const ConceptId&, const ConceptId&) = default;
};

/// Reserved names for the universal parent and child. Declaring either in a
/// document binds it to the synthesized one instead of creating a concept.
inline constexpr std::string_view kTopName = "owl:Thing";
inline constexpr std::string_view kBottomName = "owl:Nothing";

/// Parsed form of an ontology file: concepts with the names of their direct
/// parents. Forward references are allowed.
struct OntologyDocument {
  struct Entry {
    std::string name;
    std::vector<std::string> parents;
  };
  std::string name;
  std::vector<Entry> concepts;
};

/// A code together with the ontology generation it was read under.
struct StampedCode {
  ConceptId id;
  BCode code;
  std::uint64_t generation = 0;
};

/// A concept taxonomy closed into a lattice with ⊤ and ⊥, carrying one b-code
/// per concept.
///
/// Encoding walks the DAG topologically from ⊤; among concepts whose parents
/// are all visited the lexicographically smallest name goes next. The i-th
/// visited concept owns bit i and inherits the OR of its parents' codes, so
/// x ⊑ y exactly when code(y) ⊆ code(x). ⊤ is all zeros and ⊥ all ones at the
/// current width, where width counts every concept including ⊤ and ⊥.
///
/// The object is a plain value: const member functions never mutate and may
/// be called from any number of threads. Use SnapshotCell to publish new
/// versions to concurrent readers.
class Ontology {
 public:
  static Ontology load(const OntologyDocument& document);

  const std::string& name() const noexcept { return name_; }
  static constexpr ConceptId top() noexcept { return ConceptId{0}; }
  static constexpr ConceptId bottom() noexcept { return ConceptId{1}; }
  bool is_ordinary(ConceptId id) const noexcept { return id.value > 1 && id.value < nodes_.size(); }

  std::size_t concept_count() const noexcept { return nodes_.size(); }
  std::size_t width() const noexcept { return width_; }
  std::uint64_t generation() const noexcept { return generation_; }

  std::optional<ConceptId> find(std::string_view name) const;
  /// Throws UnknownNameError.
  ConceptId id_of(std::string_view name) const;
  const std::string& name_of(ConceptId id) const;

  std::span<const ConceptId> parents(ConceptId id) const;
  std::span<const ConceptId> children(ConceptId id) const;

  const BCode& code(ConceptId id) const;
  StampedCode stamped_code(ConceptId id) const;
  /// Position of the concept's identity bit; 0 for ⊤ and ⊥.
  std::size_t identity_position(ConceptId id) const;
  /// Ordinary concepts in the order their identity bits were assigned.
  std::span<const ConceptId> visit_order() const noexcept { return visit_order_; }

  /// x ⊑ y: y is at least as general as x. Linear in the code word count.
  bool is_subsumed_by(ConceptId x, ConceptId y) const;

  /// Throws StaleCodeError when the code predates the current generation.
  void check_fresh(const StampedCode& code) const;

  /// Adds a concept under `parents` (⊤ when empty) and above `children`.
  ///
  /// Without children the concept takes the next bit position and every
  /// existing code stays valid (generation unchanged). With children their
  /// codes must inherit the new bit, so the whole ontology is re-encoded and
  /// the generation advances.
  ConceptId add_concept(std::string name, std::span<const ConceptId> parents,
                        std::span<const ConceptId> children = {});

  /// Full re-encode; advances the generation.
  void reencode();

  OntologyDocument to_document() const;

 private:
  struct Node {
    std::string name;
    std::vector<ConceptId> parents;
    std::vector<ConceptId> children;
  };

  Node& node(ConceptId id) { return nodes_[id.value]; }
  const Node& node(ConceptId id) const;
  void link(ConceptId parent, ConceptId child);
  void unlink(ConceptId parent, ConceptId child);
  void attach_bottom();
  void encode();

  std::string name_;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, ConceptId> by_name_;
  std::vector<BCode> codes_;
  std::vector<std::size_t> position_;
  std::vector<ConceptId> visit_order_;
  std::size_t width_ = 0;
  std::uint64_t generation_ = 0;
};

/// Concept-level subsumption test on codes held by a caller: x ⊑ y.
/// Throws StaleCodeError if either code is from an older generation.
bool subsumes(const StampedCode& x, const StampedCode& y, const Ontology& ontology);

}  // namespace stc

template <>
struct std::hash<stc::ConceptId> {
  std::size_t operator()(stc::ConceptId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};

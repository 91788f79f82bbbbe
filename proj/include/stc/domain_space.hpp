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
#include "stc/ontology.hpp"

namespace stc {

/// A concept in a multi-ontology domain space.
struct ConceptRef {
  std::uint32_t ontology = 0;
  ConceptId concept_id;
  friend auto operator<=>(const ConceptRef&, const ConceptRef&) = default;
};

/// Several ontologies sharing one composite code space.
///
/// Each ontology's identity bits are mapped onto a disjoint range of global
/// positions, so codes from different ontologies never overlap and a service
/// may mix concepts freely. Appending a leaf concept allocates the next global
/// bit and leaves every other code valid; re-encoding any ontology rebuilds
/// the whole mapping and advances generation().
class DomainSpace {
 public:
  DomainSpace() = default;
  explicit DomainSpace(std::vector<Ontology> ontologies);

  /// Throws DuplicateNameError if an ontology with that name exists.
  void add_ontology(Ontology ontology);

  std::size_t ontology_count() const noexcept { return ontologies_.size(); }
  const Ontology& ontology(std::size_t index) const { return ontologies_.at(index); }
  std::optional<std::size_t> ontology_index(std::string_view name) const;

  /// Accepts "Concept" when the name is unique across ontologies, or a
  /// qualified "Ontology#Concept" where the ontology part may also be a URI
  /// whose last path segment (minus extension) names the ontology.
  std::optional<ConceptRef> try_resolve(std::string_view name) const;
  /// Throws UnknownNameError, or ValidationError when a bare name is ambiguous.
  ConceptRef resolve(std::string_view name) const;
  std::string qualified_name(ConceptRef ref) const;

  const BCode& code(ConceptRef ref) const;
  bool is_top(ConceptRef ref) const { return ref.concept_id == Ontology::top(); }
  bool is_bottom(ConceptRef ref) const { return ref.concept_id == Ontology::bottom(); }

  /// x ⊑ y. Concepts of different ontologies are never related.
  bool is_subsumed_by(ConceptRef x, ConceptRef y) const;

  std::size_t width() const noexcept { return width_; }
  std::uint64_t generation() const noexcept { return generation_; }

  ConceptRef add_concept(std::size_t ontology, std::string name, std::span<const ConceptRef> parents,
                         std::span<const ConceptRef> children = {});

 private:
  void rebuild();
  void map_ontology(std::size_t index);
  BCode globalize(std::size_t index, const BCode& local) const;

  std::vector<Ontology> ontologies_;
  // Per ontology: local bit position -> global bit position (0 = unmapped).
  std::vector<std::vector<std::size_t>> local_to_global_;
  std::vector<std::vector<BCode>> global_codes_;
  std::unordered_map<std::string, std::vector<ConceptRef>> by_name_;
  std::size_t width_ = 0;
  std::uint64_t generation_ = 1;
};

}  // namespace stc

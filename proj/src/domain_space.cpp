#include "stc/domain_space.hpp"

#include <algorithm>

#include "stc/errors.hpp"

namespace stc {
namespace {

// "http://host/path/Vehicle.owl" -> "Vehicle"
std::string_view uri_stem(std::string_view uri) {
  if (auto slash = uri.find_last_of('/'); slash != std::string_view::npos) uri.remove_prefix(slash + 1);
  if (auto dot = uri.find_last_of('.'); dot != std::string_view::npos && dot > 0) uri = uri.substr(0, dot);
  return uri;
}

}  // namespace

DomainSpace::DomainSpace(std::vector<Ontology> ontologies) {
  for (auto& o : ontologies) add_ontology(std::move(o));
}

void DomainSpace::add_ontology(Ontology ontology) {
  if (ontology_index(ontology.name())) {
    throw DuplicateNameError("duplicate ontology name '" + ontology.name() + "'");
  }
  ontologies_.push_back(std::move(ontology));
  local_to_global_.emplace_back();
  global_codes_.emplace_back();
  map_ontology(ontologies_.size() - 1);
}

void DomainSpace::map_ontology(std::size_t index) {
  const Ontology& o = ontologies_[index];
  auto& mapping = local_to_global_[index];
  mapping.assign(o.width() + 1, 0);
  for (ConceptId id : o.visit_order()) mapping[o.identity_position(id)] = ++width_;

  auto& codes = global_codes_[index];
  codes.clear();
  codes.reserve(o.concept_count());
  for (std::uint32_t i = 0; i < o.concept_count(); ++i) {
    codes.push_back(globalize(index, o.code(ConceptId{i})));
    if (i > 1) by_name_[o.name_of(ConceptId{i})].push_back(ConceptRef{static_cast<std::uint32_t>(index), ConceptId{i}});
  }
}

void DomainSpace::rebuild() {
  width_ = 0;
  by_name_.clear();
  for (std::size_t i = 0; i < ontologies_.size(); ++i) map_ontology(i);
  ++generation_;
}

BCode DomainSpace::globalize(std::size_t index, const BCode& local) const {
  const auto& mapping = local_to_global_[index];
  BCode out(width_);
  for (std::size_t p : local.positions()) {
    if (p < mapping.size() && mapping[p] != 0) out.set(mapping[p]);
  }
  return out;
}

std::optional<std::size_t> DomainSpace::ontology_index(std::string_view name) const {
  for (std::size_t i = 0; i < ontologies_.size(); ++i) {
    if (ontologies_[i].name() == name) return i;
  }
  for (std::size_t i = 0; i < ontologies_.size(); ++i) {
    if (ontologies_[i].name() == uri_stem(name)) return i;
  }
  return std::nullopt;
}

std::optional<ConceptRef> DomainSpace::try_resolve(std::string_view name) const {
  if (auto hash = name.find_last_of('#'); hash != std::string_view::npos) {
    auto index = ontology_index(name.substr(0, hash));
    if (!index) return std::nullopt;
    auto id = ontologies_[*index].find(name.substr(hash + 1));
    if (!id) return std::nullopt;
    return ConceptRef{static_cast<std::uint32_t>(*index), *id};
  }
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end() || it->second.size() != 1) return std::nullopt;
  return it->second.front();
}

ConceptRef DomainSpace::resolve(std::string_view name) const {
  if (auto ref = try_resolve(name)) return *ref;
  if (name.find('#') == std::string_view::npos) {
    auto it = by_name_.find(std::string(name));
    if (it != by_name_.end() && it->second.size() > 1) {
      throw ValidationError("ambiguous concept name '" + std::string(name) + "'; qualify it as Ontology#" +
                            std::string(name));
    }
  }
  throw UnknownNameError("unknown concept", {std::string(name)});
}

std::string DomainSpace::qualified_name(ConceptRef ref) const {
  const Ontology& o = ontology(ref.ontology);
  return o.name() + "#" + o.name_of(ref.concept_id);
}

const BCode& DomainSpace::code(ConceptRef ref) const {
  const auto& codes = global_codes_.at(ref.ontology);
  if (ref.concept_id.value >= codes.size()) {
    throw std::out_of_range("concept id outside ontology '" + ontology(ref.ontology).name() + "'");
  }
  return codes[ref.concept_id.value];
}

bool DomainSpace::is_subsumed_by(ConceptRef x, ConceptRef y) const {
  if (x.ontology != y.ontology) return false;
  return ontologies_.at(x.ontology).is_subsumed_by(x.concept_id, y.concept_id);
}

ConceptRef DomainSpace::add_concept(std::size_t index, std::string name, std::span<const ConceptRef> parents,
                                    std::span<const ConceptRef> children) {
  Ontology& o = ontologies_.at(index);
  auto local_ids = [&](std::span<const ConceptRef> refs) {
    std::vector<ConceptId> ids;
    for (const ConceptRef& r : refs) {
      if (r.ontology != index) throw ValidationError("concept links must stay within one ontology");
      ids.push_back(r.concept_id);
    }
    return ids;
  };
  const auto parent_ids = local_ids(parents);
  const auto child_ids = local_ids(children);
  const std::uint64_t before = o.generation();
  const ConceptId id = o.add_concept(std::move(name), parent_ids, child_ids);
  const ConceptRef ref{static_cast<std::uint32_t>(index), id};

  if (o.generation() != before) {
    rebuild();
    return ref;
  }
  auto& mapping = local_to_global_[index];
  mapping.resize(o.width() + 1, 0);
  mapping[o.identity_position(id)] = ++width_;
  auto& codes = global_codes_[index];
  codes.push_back(globalize(index, o.code(id)));
  codes[Ontology::bottom().value] = globalize(index, o.code(Ontology::bottom()));
  by_name_[o.name_of(id)].push_back(ref);
  return ref;
}

}  // namespace stc

#include "stc/discovery.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "stc/errors.hpp"

namespace stc {
namespace {

void check_generation(const ClusterSpace& space, std::uint64_t generation) {
  if (space.generation() != 0 && space.generation() != generation) {
    throw StaleCodeError(std::min(space.generation(), generation), std::max(space.generation(), generation));
  }
}

}  // namespace

std::vector<std::string> RetrievalResult::ids(bool after_phase2) const {
  std::vector<std::string> out;
  for (const auto& r : after_phase2 ? phase2 : phase1) out.push_back(r.service_id);
  return out;
}

Query make_query(const RawQuery& raw, const DomainSpace& domain) {
  if (raw.outputs.empty()) throw ValidationError("query '" + raw.id + "' requests no outputs");
  RawService as_service{raw.id, raw.id, raw.inputs, raw.outputs, std::nullopt};
  StratifiedArrays arrays = feature_stratify(as_service, domain);
  Query q;
  q.id = raw.id;
  q.provided_inputs = std::move(arrays.inputs);
  q.desired_outputs = std::move(arrays.outputs);
  q.o_code = compute_gcode(q.desired_outputs, Feature::kOutput, domain);
  return q;
}

std::vector<std::string> invocable_services(std::span<const ConceptRef> provided, const Registry& registry) {
  std::unordered_map<std::string, const ServiceDescription*> by_id;
  for (const auto& s : registry.services) by_id.emplace(s.id, &s);

  std::vector<ConceptRef> pool(provided.begin(), provided.end());
  std::unordered_set<std::string> done;
  std::vector<std::string> out;
  auto satisfied = [&](const ConceptRef& required) {
    const BCode& need = registry.domain.code(required);
    return std::any_of(pool.begin(), pool.end(), [&](const ConceptRef& p) {
      return need.subset_of(registry.domain.code(p));  // p is subsumed by the required type
    });
  };
  bool changed = true;
  while (changed) {
    changed = false;
    BCode pool_code(registry.domain.width());
    for (const auto& p : pool) pool_code |= registry.domain.code(p);
    // A service can only be callable if its whole I-code is covered by the pool.
    for (NodeId n : registry.input_space.subsets_of(pool_code)) {
      for (const auto& id : registry.input_space.node(n).services) {
        if (done.contains(id)) continue;
        auto it = by_id.find(id);
        if (it == by_id.end()) continue;
        const ServiceDescription& s = *it->second;
        if (!std::all_of(s.inputs.begin(), s.inputs.end(), satisfied)) continue;
        done.insert(id);
        out.push_back(id);
        pool.insert(pool.end(), s.outputs.begin(), s.outputs.end());
        changed = true;
      }
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

RetrievalResult discover(const Query& query, const Registry& registry, const DiscoveryOptions& options) {
  check_generation(registry.output_space, query.o_code.generation);
  RetrievalResult result;
  result.query_id = query.id;
  const MatchStrength floor = options.include_siblings ? MatchStrength::kSibling : MatchStrength::kSubsume;
  for (NodeId n : registry.output_space.overlapping(query.o_code.code)) {
    const TaxonomyNode& node = registry.output_space.node(n);
    const MatchStrength strength = classify(node.code, query.o_code.code);
    if (strength < floor) continue;
    for (const auto& id : node.services) result.phase1.push_back({id, strength, false, 0});
  }
  std::sort(result.phase1.begin(), result.phase1.end(), [](const Retrieved& a, const Retrieved& b) {
    if (a.strength != b.strength) return a.strength > b.strength;
    return a.service_id < b.service_id;
  });
  for (std::size_t i = 0; i < result.phase1.size(); ++i) result.phase1[i].rank = i + 1;

  if (!options.prune) {
    for (auto& r : result.phase1) r.invocable = true;
    result.phase2 = result.phase1;
    return result;
  }
  const auto callable = invocable_services(query.provided_inputs, registry);
  for (auto& r : result.phase1) {
    r.invocable = std::binary_search(callable.begin(), callable.end(), r.service_id);
    if (r.invocable) {
      result.phase2.push_back(r);
      result.phase2.back().rank = result.phase2.size();
    }
  }
  return result;
}

}  // namespace stc

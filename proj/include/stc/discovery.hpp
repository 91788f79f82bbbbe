#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stc/cluster_space.hpp"
#include "stc/domain_space.hpp"
#include "stc/match.hpp"
#include "stc/service.hpp"

namespace stc {

struct RawQuery {
  std::string id;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

struct Query {
  std::string id;
  std::vector<ConceptRef> provided_inputs;  // may be empty
  std::vector<ConceptRef> desired_outputs;
  GCode o_code;
};

/// Throws ValidationError when no outputs are requested and
/// UnknownNameError for unresolvable names.
Query make_query(const RawQuery& raw, const DomainSpace& domain);

struct Retrieved {
  std::string service_id;
  MatchStrength strength = MatchStrength::kNoMatch;
  bool invocable = false;
  std::size_t rank = 0;  // 1-based within its list
};

struct RetrievalResult {
  std::string query_id;
  std::vector<Retrieved> phase1;  // every output-side candidate
  std::vector<Retrieved> phase2;  // invocable candidates, same order, re-ranked
  std::vector<std::string> ids(bool after_phase2 = true) const;
};

struct DiscoveryOptions {
  bool include_siblings = true;
  bool prune = true;  // run the invocability phase
};

/// Read-only view of a clustered registry.
struct Registry {
  const DomainSpace& domain;
  std::span<const ServiceDescription> services;
  const ClusterSpace& input_space;
  const ClusterSpace& output_space;
};

/// Phase 1 ranks services whose O-code matches the query's by strength,
/// ties by ascending id. Phase 2 keeps those whose inputs can be supplied,
/// directly or through outputs of other invocable services.
RetrievalResult discover(const Query& query, const Registry& registry, const DiscoveryOptions& options = {});

/// Ids of every service invocable from `provided`, reached by iterating to a
/// fixpoint over the input space.
std::vector<std::string> invocable_services(std::span<const ConceptRef> provided, const Registry& registry);

}  // namespace stc

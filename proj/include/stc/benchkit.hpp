#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stc/cluster_space.hpp"
#include "stc/discovery.hpp"
#include "stc/domain_space.hpp"
#include "stc/metrics.hpp"
#include "stc/ontology.hpp"
#include "stc/service.hpp"

namespace stc {

/// Synthetic workload knobs. Read from and written as flat `key = value`
/// text; unknown keys are rejected.
struct GenConfig {
  std::size_t ontology_count = 10;
  std::size_t avg_concepts = 300;
  double concept_spread = 0.2;     // concept count drawn uniformly within ±spread·avg
  std::size_t max_depth = 6;       // levels below the ontology's ⊤
  double root_fraction = 0.03;     // share of concepts at level 1
  double second_parent_p = 0.25;   // chance of a second parent from any shallower level
  std::size_t avg_params = 5;      // inputs + outputs per service
  std::size_t service_count = 100;
  double domain_affinity = 0.0;    // chance a later parameter is drawn from the home ontology
  std::size_t query_count = 29;
  std::uint64_t seed = 42;

  static GenConfig parse(const std::string& text);
  std::string to_text() const;
  /// Throws ValidationError on a non-positive count or a probability outside [0, 1].
  void validate() const;
};

/// FNV-1a, hex.
std::string fnv1a_hex(std::string_view data);

std::vector<OntologyDocument> gen_domain_space(const GenConfig& cfg);
std::vector<RawService> gen_services(const GenConfig& cfg, const DomainSpace& domain);
std::vector<RawService> gen_services(const GenConfig& cfg, const DomainSpace& domain, std::size_t count,
                                     std::uint64_t stream);

struct GeneratedQuery {
  RawQuery query;
  std::vector<std::string> relevant;  // sorted service ids
};

/// Queries built from random services' outputs, generalized one step where
/// possible. A service is relevant when one of its outputs is subsumed by a
/// desired output (by graph reachability, not codes).
std::vector<GeneratedQuery> gen_queries(const GenConfig& cfg, const DomainSpace& domain,
                                        std::span<const ServiceDescription> services);

/// Undirected shortest-path distance between concepts, with every ontology's
/// ⊤ joined to one virtual root and ⊥ left out; normalized as L / (L + 1).
class TaxonomicDistance {
 public:
  explicit TaxonomicDistance(const DomainSpace& domain);
  double operator()(ConceptRef a, ConceptRef b);
  std::size_t path_length(ConceptRef a, ConceptRef b);

 private:
  const std::vector<std::uint32_t>& row(std::uint32_t ontology, ConceptId from);
  const DomainSpace& domain_;
  std::vector<std::map<std::uint32_t, std::vector<std::uint32_t>>> rows_;
};

struct BaselineResult {
  std::vector<std::vector<std::string>> clusters;  // in creation order, members in arrival order
  std::uint64_t comparisons = 0;                   // service-pair distance evaluations
};

/// Online nearest-neighbour clustering over individual services with an
/// equal-weight I/O distance (greedy one-to-one concept pairing, leftovers
/// take their nearest concept). A service opens a new cluster when its
/// nearest predecessor is farther than `threshold`.
class Baseline {
 public:
  explicit Baseline(const DomainSpace& domain) : distance_(domain) {}
  double service_distance(const ServiceDescription& a, const ServiceDescription& b);
  BaselineResult cluster(std::span<const ServiceDescription> services, double threshold);

 private:
  double array_distance(std::span<const ConceptRef> a, std::span<const ConceptRef> b);
  TaxonomicDistance distance_;
};

/// Partition as sorted groups of sorted ids, for order-insensitive comparison.
std::vector<std::vector<std::string>> normalized_partition(const BaselineResult& r);

struct BenchRecord {
  std::size_t size = 0;
  // Deterministic columns.
  std::uint64_t stc_comparisons_o = 0;
  std::uint64_t stc_comparisons_i = 0;
  std::uint64_t space_sum_o = 0;  // Σ node count at each insert
  std::uint64_t space_sum_i = 0;
  double fraction_o = 0;          // comparisons / space_sum
  double fraction_i = 0;
  double mean_ratio_o = 0;        // mean over inserts of comparisons / node count (non-empty spaces)
  std::size_t nodes_o = 0;
  std::size_t nodes_i = 0;
  std::size_t abstract_o = 0;
  std::size_t roots_o = 0;
  std::uint64_t baseline_comparisons = 0;
  std::size_t baseline_clusters = 0;
  // Wall clock.
  double stc_total_s = 0;
  double stc_insert_mean_us = 0;
  double stc_insert_p50_us = 0;
  double stc_insert_p95_us = 0;
  double baseline_total_s = 0;
};

struct BenchOptions {
  ClusterOptions cluster;
  bool run_baseline = true;
  double baseline_threshold = 0.5;
};

/// One record per size; each size uses the first `size` services of one
/// generated batch so records grow monotonically.
std::vector<BenchRecord> bench(std::span<const std::size_t> sizes, const GenConfig& cfg,
                               const BenchOptions& options = {});

/// "50:1500:100" -> 50,150,...,1450 ; "50,100" -> 50,100.
std::vector<std::size_t> parse_sizes(const std::string& text);

}  // namespace stc

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace stc {

using RelevantSet = std::unordered_set<std::string>;

/// Fraction of the first r retrieved ids that are relevant. 1 <= r <= size.
double precision_at(std::span<const std::string> ranked, const RelevantSet& relevant, std::size_t r);
/// Fraction of the relevant set found in the first r. Throws on an empty set.
double recall_at(std::span<const std::string> ranked, const RelevantSet& relevant, std::size_t r);

inline constexpr std::size_t kRecallLevels = 11;  // 0.0, 0.1, ..., 1.0
using Curve = std::array<double, kRecallLevels>;

/// Value at level k/10 is the best precision at any rank whose recall is at
/// least k/10, or 0 if no rank reaches it. Throws on an empty relevant set.
Curve interpolated_precision(std::span<const std::string> ranked, const RelevantSet& relevant);

struct QueryRun {
  std::string id;
  std::vector<std::string> ranked;
  RelevantSet relevant;
};

struct MeanCurve {
  Curve values{};
  std::size_t queries = 0;
  std::vector<std::string> excluded;  // queries with no relevant services
  double average() const;             // mean over the 11 levels
};

MeanCurve mean_interpolated(std::span<const QueryRun> runs);

struct FMeasure {
  double value = 0;
  bool degenerate = false;  // precision and recall both zero
};
/// Harmonic mean. Throws ValidationError outside [0, 1].
FMeasure f_measure(double precision, double recall);

using Labels = std::unordered_map<std::string, std::string>;

/// Size-weighted Shannon entropy (base 2) of label proportions over clusters
/// of service ids. Throws ValidationError for an unlabeled service.
double cluster_entropy(std::span<const std::vector<std::string>> clusters, const Labels& labels);

struct DomainScore {
  std::optional<double> precision;  // absent for an empty cluster
  std::optional<double> recall;     // absent for an empty domain
};
/// Share of the cluster labelled `domain`, and share of the domain inside
/// the cluster.
DomainScore domain_score(std::span<const std::string> cluster, const std::string& domain, const Labels& labels);
/// Mean of per-domain precision over the given domains; absent when the
/// cluster is empty.
std::optional<double> average_domain_precision(std::span<const std::string> cluster,
                                               std::span<const std::string> domains, const Labels& labels);
std::optional<double> average_domain_recall(std::span<const std::string> cluster, std::span<const std::string> domains,
                                            const Labels& labels);

}  // namespace stc

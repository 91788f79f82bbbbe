#include "stc/metrics.hpp"

#include <cmath>
#include <map>

#include "stc/errors.hpp"

namespace stc {
namespace {

std::size_t hits_in(std::span<const std::string> ranked, const RelevantSet& relevant, std::size_t r) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < r; ++i) hits += relevant.count(ranked[i]);
  return hits;
}

void check_rank(std::span<const std::string> ranked, std::size_t r) {
  if (r < 1 || r > ranked.size()) {
    throw ValidationError("rank " + std::to_string(r) + " outside 1.." + std::to_string(ranked.size()));
  }
}

}  // namespace

double precision_at(std::span<const std::string> ranked, const RelevantSet& relevant, std::size_t r) {
  check_rank(ranked, r);
  return static_cast<double>(hits_in(ranked, relevant, r)) / static_cast<double>(r);
}

double recall_at(std::span<const std::string> ranked, const RelevantSet& relevant, std::size_t r) {
  check_rank(ranked, r);
  if (relevant.empty()) throw ValidationError("recall undefined for an empty relevant set");
  return static_cast<double>(hits_in(ranked, relevant, r)) / static_cast<double>(relevant.size());
}

Curve interpolated_precision(std::span<const std::string> ranked, const RelevantSet& relevant) {
  if (relevant.empty()) throw ValidationError("interpolation undefined for an empty relevant set");
  Curve out{};
  // Running max from the deepest rank upward; recall only grows with rank,
  // so level k is reached from the first rank where hits*10 >= k*N.
  std::vector<double> prec(ranked.size());
  std::vector<std::size_t> hits(ranked.size());
  std::size_t h = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    h += relevant.count(ranked[i]);
    hits[i] = h;
    prec[i] = static_cast<double>(h) / static_cast<double>(i + 1);
  }
  std::vector<double> suffix_max(ranked.size() + 1, 0.0);
  for (std::size_t i = ranked.size(); i-- > 0;) suffix_max[i] = std::max(suffix_max[i + 1], prec[i]);
  const std::size_t n = relevant.size();
  std::size_t i = 0;
  for (std::size_t k = 0; k < kRecallLevels; ++k) {
    while (i < ranked.size() && hits[i] * 10 < k * n) ++i;
    out[k] = suffix_max[i];
  }
  return out;
}

double MeanCurve::average() const {
  double s = 0;
  for (double v : values) s += v;
  return s / static_cast<double>(kRecallLevels);
}

MeanCurve mean_interpolated(std::span<const QueryRun> runs) {
  MeanCurve m;
  for (const auto& run : runs) {
    if (run.relevant.empty()) {
      m.excluded.push_back(run.id);
      continue;
    }
    const Curve c = interpolated_precision(run.ranked, run.relevant);
    for (std::size_t k = 0; k < kRecallLevels; ++k) m.values[k] += c[k];
    ++m.queries;
  }
  if (m.queries > 0) {
    for (double& v : m.values) v /= static_cast<double>(m.queries);
  }
  return m;
}

FMeasure f_measure(double precision, double recall) {
  if (!(precision >= 0 && precision <= 1 && recall >= 0 && recall <= 1)) {
    throw ValidationError("precision and recall must lie in [0, 1]");
  }
  if (precision == 0 && recall == 0) return {0, true};
  return {2 * precision * recall / (precision + recall), false};
}

double cluster_entropy(std::span<const std::vector<std::string>> clusters, const Labels& labels) {
  double total = 0;
  double weighted = 0;
  for (const auto& cluster : clusters) {
    if (cluster.empty()) continue;
    std::map<std::string, std::size_t> counts;
    for (const auto& s : cluster) {
      auto it = labels.find(s);
      if (it == labels.end()) throw ValidationError("service '" + s + "' has no domain label");
      ++counts[it->second];
    }
    const double size = static_cast<double>(cluster.size());
    double h = 0;
    for (const auto& [label, k] : counts) {
      const double p = static_cast<double>(k) / size;
      h -= p * std::log2(p);
    }
    weighted += h * size;
    total += size;
  }
  return total == 0 ? 0.0 : weighted / total;
}

DomainScore domain_score(std::span<const std::string> cluster, const std::string& domain, const Labels& labels) {
  std::size_t in_cluster = 0;
  for (const auto& s : cluster) {
    auto it = labels.find(s);
    if (it != labels.end() && it->second == domain) ++in_cluster;
  }
  std::size_t in_domain = 0;
  for (const auto& [s, l] : labels) in_domain += l == domain ? 1 : 0;
  DomainScore out;
  if (!cluster.empty()) out.precision = static_cast<double>(in_cluster) / static_cast<double>(cluster.size());
  if (in_domain > 0) out.recall = static_cast<double>(in_cluster) / static_cast<double>(in_domain);
  return out;
}

std::optional<double> average_domain_precision(std::span<const std::string> cluster,
                                               std::span<const std::string> domains, const Labels& labels) {
  if (cluster.empty() || domains.empty()) return std::nullopt;
  double s = 0;
  for (const auto& d : domains) s += *domain_score(cluster, d, labels).precision;
  return s / static_cast<double>(domains.size());
}

std::optional<double> average_domain_recall(std::span<const std::string> cluster, std::span<const std::string> domains,
                                            const Labels& labels) {
  if (domains.empty()) return std::nullopt;
  double s = 0;
  for (const auto& d : domains) s += domain_score(cluster, d, labels).recall.value_or(0.0);
  return s / static_cast<double>(domains.size());
}

}  // namespace stc

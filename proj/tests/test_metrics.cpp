#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "stc/errors.hpp"
#include "stc/metrics.hpp"

using namespace stc;

TEST_CASE("hand-computed precision and recall") {
  const std::vector<std::string> ranked{"a", "x", "b"};
  const RelevantSet rel{"a", "b", "c"};
  CHECK(precision_at(ranked, rel, 1) == 1.0);
  CHECK(precision_at(ranked, rel, 2) == 0.5);
  CHECK(precision_at(ranked, rel, 3) == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(recall_at(ranked, rel, 3) == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK_THROWS_AS(precision_at(ranked, rel, 0), ValidationError);
  CHECK_THROWS_AS(precision_at(ranked, rel, 4), ValidationError);
  CHECK_THROWS_AS(recall_at(ranked, {}, 1), ValidationError);

  const Curve c = interpolated_precision(ranked, rel);
  for (int k = 0; k <= 3; ++k) CHECK(c[static_cast<std::size_t>(k)] == 1.0);
  for (int k = 4; k <= 6; ++k) CHECK(c[static_cast<std::size_t>(k)] == doctest::Approx(2.0 / 3));
  for (int k = 7; k <= 10; ++k) CHECK(c[static_cast<std::size_t>(k)] == 0.0);
}

TEST_CASE("perfect and hopeless rankings") {
  const std::vector<std::string> ranked{"a", "b", "c"};
  for (double v : interpolated_precision(ranked, {"a", "b", "c"})) CHECK(v == 1.0);
  const std::vector<std::string> junk{"x", "y"};
  CHECK(precision_at(junk, {"a"}, 1) == 0.0);
  CHECK(precision_at(junk, {"a"}, 2) == 0.0);
  CHECK(interpolated_precision({}, {"a"})[0] == 0.0);
}

TEST_CASE("randomized fixtures against naive recounts") {
  Rng rng(99);
  std::vector<QueryRun> runs;
  for (int f = 0; f < 100; ++f) {
    const std::size_t universe = 5 + bounded(rng, 40);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < universe; ++i) ids.push_back("s" + std::to_string(i));
    shuffle(ids, rng);
    const std::size_t retrieved = 1 + bounded(rng, universe);
    std::vector<std::string> ranked(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(retrieved));
    RelevantSet rel;
    std::set<std::string> rel_set;
    for (const auto& id : ids) {
      if (bounded(rng, 3) == 0) {
        rel.insert(id);
        rel_set.insert(id);
      }
    }
    if (f % 10 == 0) {
      rel.clear();
      rel_set.clear();
    }
    double prev_recall = 0;
    for (std::size_t r = 1; r <= ranked.size(); ++r) {
      const double p = precision_at(ranked, rel, r);
      CHECK(std::abs(p - oracle::precision_at(ranked, rel_set, r)) <= 1e-12);
      const double count = p * static_cast<double>(r);
      CHECK(std::abs(count - std::round(count)) <= 1e-9);
      if (rel.empty()) continue;
      const double re = recall_at(ranked, rel, r);
      CHECK(std::abs(re - oracle::recall_at(ranked, rel_set, r)) <= 1e-12);
      CHECK(re >= prev_recall);
      prev_recall = re;
    }
    if (!rel.empty()) {
      const Curve c = interpolated_precision(ranked, rel);
      const auto expect = oracle::interpolated(ranked, rel_set);
      for (std::size_t k = 0; k < kRecallLevels; ++k) {
        CHECK(std::abs(c[k] - expect[k]) <= 1e-12);
        if (k > 0) CHECK(c[k] <= c[k - 1]);
      }
    }
    runs.push_back({"q" + std::to_string(f), ranked, rel});
  }
  const MeanCurve m = mean_interpolated(runs);
  const auto empty = static_cast<std::size_t>(
      std::count_if(runs.begin(), runs.end(), [](const QueryRun& r) { return r.relevant.empty(); }));
  CHECK(empty >= 10);
  CHECK(m.excluded.size() == empty);
  CHECK(m.queries == runs.size() - empty);
  for (std::size_t k = 0; k < kRecallLevels; ++k) {
    double s = 0;
    for (const auto& run : runs) {
      if (run.relevant.empty()) continue;
      std::set<std::string> rs(run.relevant.begin(), run.relevant.end());
      s += oracle::interpolated(run.ranked, rs)[k];
    }
    CHECK(std::abs(m.values[k] - s / static_cast<double>(m.queries)) <= 1e-12);
  }
}

TEST_CASE("F-measure") {
  CHECK(f_measure(1, 1).value == 1.0);
  CHECK(f_measure(1, 0).value == 0.0);
  CHECK_FALSE(f_measure(1, 0).degenerate);
  CHECK(f_measure(0.8, 0.74).value == doctest::Approx(0.7688311688).epsilon(1e-9));
  CHECK(f_measure(0, 0).degenerate);
  CHECK(f_measure(0, 0).value == 0.0);
  CHECK_THROWS_AS(f_measure(1.5, 0.2), ValidationError);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const double p = uniform01(rng), r = uniform01(rng);
    CHECK(std::abs(f_measure(p, r).value - 2 * p * r / (p + r)) <= 1e-12);
  }
}

TEST_CASE("entropy") {
  Labels labels{{"a", "X"}, {"b", "X"}, {"c", "Y"}, {"d", "Y"}};
  const std::vector<std::vector<std::string>> pure{{"a", "b"}};
  CHECK(cluster_entropy(pure, labels) == 0.0);
  const std::vector<std::vector<std::string>> mixed{{"a", "c"}};
  CHECK(cluster_entropy(mixed, labels) == doctest::Approx(1.0));
  const std::vector<std::vector<std::string>> unlabeled{{"a", "zz"}};
  CHECK_THROWS_AS(cluster_entropy(unlabeled, labels), ValidationError);

  Rng rng(6);
  for (int f = 0; f < 100; ++f) {
    Labels lab;
    std::vector<std::vector<std::string>> clusters(1 + bounded(rng, 6));
    for (int s = 0; s < 40; ++s) {
      const std::string id = "s" + std::to_string(s);
      lab[id] = "D" + std::to_string(bounded(rng, 4));
      clusters[bounded(rng, clusters.size())].push_back(id);
    }
    std::vector<std::vector<std::string>> as_labels;
    for (const auto& c : clusters) {
      std::vector<std::string> l;
      for (const auto& s : c) l.push_back(lab[s]);
      as_labels.push_back(l);
    }
    CHECK(std::abs(cluster_entropy(clusters, lab) - oracle::entropy(as_labels)) <= 1e-12);
  }
}

TEST_CASE("domain precision and recall") {
  Labels labels;
  for (int i = 0; i < 20; ++i) labels["d" + std::to_string(i)] = "D";
  for (int i = 0; i < 10; ++i) labels["e" + std::to_string(i)] = "E";
  std::vector<std::string> pure;
  for (int i = 0; i < 10; ++i) pure.push_back("d" + std::to_string(i));
  CHECK(*domain_score(pure, "D", labels).precision == 1.0);
  CHECK(*domain_score(pure, "D", labels).recall == 0.5);

  std::vector<std::string> mixed{"d0", "d1", "d2", "d3", "d4", "e0", "e1", "e2"};
  CHECK(*domain_score(mixed, "D", labels).precision == 0.625);
  CHECK(*domain_score(mixed, "D", labels).recall == 0.25);
  CHECK_FALSE(domain_score({}, "D", labels).precision.has_value());
  CHECK_FALSE(domain_score(mixed, "Nope", labels).recall.has_value());

  const std::vector<std::string> domains{"D", "E"};
  CHECK(*average_domain_precision(mixed, domains, labels) == doctest::Approx((0.625 + 0.375) / 2));
  CHECK(*average_domain_recall(mixed, domains, labels) == doctest::Approx((0.25 + 0.3) / 2));
  CHECK_FALSE(average_domain_precision({}, domains, labels).has_value());
}

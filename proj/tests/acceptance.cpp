// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "stc/benchkit.hpp"
#include "stc/cli.hpp"
#include "stc/cluster_space.hpp"
#include "stc/discovery.hpp"
#include "stc/io.hpp"
#include "stc/metrics.hpp"

using namespace stc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

DomainSpace load_all(const std::vector<OntologyDocument>& docs) {
  std::vector<Ontology> os;
  for (const auto& d : docs) os.push_back(Ontology::load(d));
  return DomainSpace(std::move(os));
}

std::vector<ServiceDescription> describe(const DomainSpace& d, const std::vector<RawService>& raw) {
  std::vector<ServiceDescription> out;
  for (const auto& r : raw) out.push_back(make_service(r, d));
  return out;
}

oracle::PosSet as_set(const BCode& c) {
  const auto p = c.positions();
  return {p.begin(), p.end()};
}

// Neighbours of `id` against brute-force MSP/LSC over every other node.
bool placement_matches(const ClusterSpace& space, NodeId id) {
  std::vector<NodeId> ids;
  std::vector<oracle::PosSet> sets;
  for (const NodeId n : space.node_ids()) {
    if (n == id) continue;
    ids.push_back(n);
    sets.push_back(as_set(space.node(n).code));
  }
  const auto s = as_set(space.node(id).code);
  std::set<NodeId> msp, lsc;
  for (auto i : oracle::msp(sets, s)) msp.insert(ids[i]);
  for (auto i : oracle::lsc(sets, s)) lsc.insert(ids[i]);
  const auto& node = space.node(id);
  return std::set<NodeId>(node.parents.begin(), node.parents.end()) == msp &&
         std::set<NodeId>(node.children.begin(), node.children.end()) == lsc;
}

// ---------------------------------------------------------------------------

Outcome subsumption_vs_reachability() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1);
  std::uint64_t pairs = 0, wrong = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = (k % 10 == 0) ? 512 : static_cast<std::size_t>(uniform_int(rng, 16, 512));
    const auto doc = oracle::random_dag(rng, n, "R" + std::to_string(k));
    const auto o = Ontology::load(doc);
    const auto anc = oracle::ancestors(doc);
    std::vector<ConceptId> ids;
    std::vector<const std::set<std::string>*> up;
    for (const auto& c : doc.concepts) {
      ids.push_back(o.id_of(c.name));
      up.push_back(&anc.at(c.name));
    }
    std::vector<StampedCode> codes;
    for (auto id : ids) codes.push_back(o.stamped_code(id));
    for (std::size_t x = 0; x < ids.size(); ++x) {
      for (std::size_t y = 0; y < ids.size(); ++y) {
        const bool expect = x == y || up[x]->count(doc.concepts[y].name) > 0;
        wrong += subsumes(codes[x], codes[y], o) != expect;
        ++pairs;
      }
      // ⊤ above everything, ⊥ below everything.
      wrong += !subsumes(codes[x], o.stamped_code(Ontology::top()), o);
      wrong += !subsumes(o.stamped_code(Ontology::bottom()), codes[x], o);
      wrong += subsumes(o.stamped_code(Ontology::top()), codes[x], o);
      pairs += 3;
    }
  }
  const double t = seconds_since(t0);
  return {wrong == 0 && t < 60.0,
          std::to_string(pairs) + " ordered pairs over 100 DAGs, " + std::to_string(wrong) + " disagreements, " +
              fmt("%.2f s", t)};
}

Outcome vehicle_codes() {
  const auto o = Ontology::load(fixture::vehicle());
  const auto land = o.code(o.id_of("LandVehicle")).to_binary();
  const auto car = o.code(o.id_of("Car")).to_binary();
  const bool sub = subsumes(o.stamped_code(o.id_of("Car")), o.stamped_code(o.id_of("LandVehicle")), o);
  const bool ok = land == "0000000000011" && car == "0000000010011" && sub;
  return {ok, "LandVehicle=" + land + " Car=" + car + " Car⊑LandVehicle=" + (sub ? "true" : "false")};
}

Outcome placement_vs_brute_force() {
  std::uint64_t checked = 0, wrong = 0;
  for (std::uint64_t batch = 0; batch < 50; ++batch) {
    GenConfig cfg;
    // Alternate a dense small domain with the default-shaped one.
    if (batch % 2 == 0) {
      cfg.ontology_count = 3;
      cfg.avg_concepts = 40;
    }
    cfg.service_count = 100;
    cfg.seed = 1000 + batch;
    const auto d = load_all(gen_domain_space(cfg));
    const auto services = describe(d, gen_services(cfg, d));
    SpacePair spaces;
    for (const auto& s : services) {
      for (auto f : {Feature::kInput, Feature::kOutput}) {
        auto& space = spaces.space(f);
        const auto p = space.insert(s);
        wrong += !placement_matches(space, p.node);
        ++checked;
        for (const NodeId a : p.abstracts) {
          wrong += !placement_matches(space, a);
          ++checked;
        }
      }
    }
  }
  return {wrong == 0, std::to_string(checked) + " placements (services and abstract covers) over 50x100 services, " +
                          std::to_string(wrong) + " mismatches"};
}

Outcome order_independence() {
  const auto d = fixture::domain(fixture::travel());
  const auto scenario = fixture::travel_services(d);
  std::set<std::string> concrete, full;
  std::vector<int> perm{0, 1, 2};
  do {
    ClusterSpace space(Feature::kOutput);
    for (int i : perm) space.insert(scenario[static_cast<std::size_t>(i)]);
    concrete.insert(space.canonical_concrete().to_string());
    full.insert(space.canonical().to_string());
  } while (std::next_permutation(perm.begin(), perm.end()));

  GenConfig cfg;
  cfg.ontology_count = 4;
  cfg.avg_concepts = 50;
  cfg.service_count = 100;
  cfg.seed = 7;
  const auto dom = load_all(gen_domain_space(cfg));
  const auto services = describe(dom, gen_services(cfg, dom));
  const auto base = converge(services);
  const auto ci = base.input.canonical_concrete(), co = base.output.canonical_concrete();
  const auto fi = base.input.canonical(), fo = base.output.canonical();
  int same = 0, full_diverged = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto p = converge(services, {}, seed);
    same += p.input.canonical_concrete() == ci && p.output.canonical_concrete() == co;
    full_diverged += !(p.input.canonical() == fi && p.output.canonical() == fo);
  }
  const bool ok = concrete.size() == 1 && same == 20;
  return {ok, "scenario: " + std::to_string(concrete.size()) + " concrete topology over 6 orders (abstract covers differ: " +
                  std::to_string(full.size()) + " full topologies); synthetic: " + std::to_string(same) +
                  "/20 identical concrete diagrams, " + std::to_string(full_diverged) +
                  "/20 with diverging abstract covers"};
}

Outcome invariants_under_edits() {
  GenConfig cfg;
  cfg.ontology_count = 4;
  cfg.avg_concepts = 50;
  cfg.service_count = 400;
  cfg.seed = 99;
  const auto d = load_all(gen_domain_space(cfg));
  const auto pool = describe(d, gen_services(cfg, d));
  Rng rng(5);
  SpacePair spaces;
  std::vector<std::size_t> present, absent;
  for (std::size_t i = 0; i < pool.size(); ++i) absent.push_back(i);
  std::size_t inserts = 0, removes = 0, violations = 0;
  std::string first;
  for (int op = 0; op < 1000; ++op) {
    const bool remove = !present.empty() && (absent.empty() || bounded(rng, 3) == 0);
    auto& from = remove ? present : absent;
    auto& to = remove ? absent : present;
    const std::size_t k = bounded(rng, from.size());
    const auto& s = pool[from[k]];
    for (auto f : {Feature::kInput, Feature::kOutput}) {
      if (remove) spaces.space(f).remove(s.id);
      else spaces.space(f).insert(s);
      const auto bad = spaces.space(f).check_invariants();
      violations += bad.size();
      if (!bad.empty() && first.empty()) first = bad.front();
    }
    (remove ? removes : inserts) += 1;
    to.push_back(from[k]);
    from.erase(from.begin() + static_cast<std::ptrdiff_t>(k));
  }
  std::string detail = std::to_string(inserts) + " inserts, " + std::to_string(removes) + " removes, " +
                       std::to_string(violations) + " violations (acyclic, symmetric edges, no transitive edges)";
  if (!first.empty()) detail += "; first: " + first;
  return {violations == 0, detail};
}

Outcome comparison_efficiency() {
  GenConfig cfg;
  cfg.service_count = 850;
  const std::vector<std::size_t> sizes{850};
  BenchOptions opt;
  opt.run_baseline = false;
  const auto r = bench(sizes, cfg, opt).front();
  BenchOptions descent = opt;
  descent.cluster.msp = MspStrategy::kDescent;
  const auto rd = bench(sizes, cfg, descent).front();
  const double worst = std::max({r.fraction_o, r.fraction_i, r.mean_ratio_o});
  const bool ok = worst <= 0.10 && r.stc_total_s < 5.0;
  return {ok, "850 inserts: amortized comparisons/space " + fmt("%.2f%%", 100 * r.fraction_o) + " (O) " +
                  fmt("%.2f%%", 100 * r.fraction_i) + " (I), per-insert mean " + fmt("%.2f%%", 100 * r.mean_ratio_o) +
                  " (O); reference ~3%; gate 10%; descent search " + fmt("%.2f%%", 100 * rd.fraction_o) +
                  " (O); both spaces built in " + fmt("%.3f s", r.stc_total_s)};
}

Outcome metrics_vs_naive() {
  Rng rng(2);
  std::size_t checks = 0, wrong = 0;
  auto near = [&](double a, double b) {
    ++checks;
    if (std::fabs(a - b) > 1e-12) ++wrong;
  };
  std::vector<QueryRun> runs;
  std::vector<std::vector<double>> curves;
  for (int q = 0; q < 100; ++q) {
    const std::size_t universe = 5 + bounded(rng, 40);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < universe; ++i) ids.push_back("d" + std::to_string(i));
    shuffle(ids, rng);
    const std::size_t retrieved = 1 + bounded(rng, universe);
    std::vector<std::string> ranked(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(retrieved));
    std::set<std::string> rel;
    for (const auto& id : ids) {
      if (bounded(rng, 3) == 0) rel.insert(id);
    }
    RelevantSet rs(rel.begin(), rel.end());
    runs.push_back({"q" + std::to_string(q), ranked, rs});
    for (std::size_t r = 1; r <= ranked.size(); ++r) {
      near(precision_at(ranked, rs, r), oracle::precision_at(ranked, rel, r));
      if (!rel.empty()) near(recall_at(ranked, rs, r), oracle::recall_at(ranked, rel, r));
    }
    if (rel.empty()) continue;
    const auto c = interpolated_precision(ranked, rs);
    const auto o = oracle::interpolated(ranked, rel);
    for (std::size_t k = 0; k < kRecallLevels; ++k) near(c[k], o[k]);
    curves.push_back(o);
    const double p = oracle::precision_at(ranked, rel, ranked.size());
    const double rc = oracle::recall_at(ranked, rel, ranked.size());
    near(f_measure(p, rc).value, p + rc == 0 ? 0.0 : 2 * p * rc / (p + rc));
  }
  const auto mean = mean_interpolated(runs);
  for (std::size_t k = 0; k < kRecallLevels; ++k) {
    double s = 0;
    for (const auto& c : curves) s += c[k];
    near(mean.values[k], s / static_cast<double>(curves.size()));
  }
  // Entropy on random labelled clusterings.
  for (int t = 0; t < 100; ++t) {
    Labels labels;
    std::vector<std::vector<std::string>> clusters(1 + bounded(rng, 6));
    std::vector<std::vector<std::string>> label_lists(clusters.size());
    int next = 0;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const std::size_t size = 1 + bounded(rng, 12);
      for (std::size_t i = 0; i < size; ++i) {
        const std::string id = "s" + std::to_string(next++);
        const std::string label = "D" + std::to_string(bounded(rng, 4));
        labels[id] = label;
        clusters[c].push_back(id);
        label_lists[c].push_back(label);
      }
    }
    near(cluster_entropy(clusters, labels), oracle::entropy(label_lists));
  }
  // Hand case.
  const std::vector<std::string> hand{"a", "x", "b"};
  const RelevantSet hrel{"a", "b", "c"};
  const bool hand_ok = precision_at(hand, hrel, 1) == 1.0 && precision_at(hand, hrel, 2) == 0.5 &&
                       std::fabs(precision_at(hand, hrel, 3) - 2.0 / 3.0) < 1e-15;
  return {wrong == 0 && hand_ok, std::to_string(checks) + " values against naive recomputation, " +
                                     std::to_string(wrong) + " off by more than 1e-12; hand case Pr@{1,2,3}=" +
                                     (hand_ok ? "{1, 0.5, 2/3}" : "wrong")};
}

Outcome two_phase_chain() {
  const auto d = fixture::domain(fixture::chain_domain());
  const auto services = fixture::chain_services(d);
  const auto spaces = converge(services);
  const Registry reg{d, services, spaces.input, spaces.output};
  const auto q = make_query(RawQuery{"q", {"Ticket"}, {"Itinerary"}}, d);
  const auto r = discover(q, reg);
  const auto p1 = r.ids(false), p2 = r.ids(true);
  const bool ok = p1 == std::vector<std::string>{"guide", "planner", "day"} &&
                  p2 == std::vector<std::string>{"planner", "day"};
  std::string detail = "phase 1 [";
  for (const auto& s : p1) detail += " " + s;
  detail += " ] phase 2 [";
  for (const auto& s : p2) detail += " " + s;
  return {ok, detail + " ]: planner kept through booker's output, guide pruned (needs Passport)"};
}

Outcome flattened_dataset_pipeline() {
  const fs::path data = STC_TEST_DATA;
  const auto dir = fs::temp_directory_path() / "stc_acceptance_owlstc";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream out, err;
  const auto onto = (data / "owlstc_mini/ontologies").string();
  int rc = run_cli({"-q", "cluster", "--services", (data / "owlstc_mini/services.json").string(), "--ontologies", onto,
                    "--out", (dir / "space.json").string()},
                   out, err);
  if (rc == 0) {
    rc = run_cli({"-q", "eval", "--space", (dir / "space.json").string(), "--ontologies", onto, "--queries",
                  (data / "owlstc_mini/queries.json").string(), "--relevance",
                  (data / "owlstc_mini/relevance.json").string(), "--report", (dir / "report.csv").string(),
                  "--emit-plotdata", (dir / "plot.csv").string(), "--clusters", (dir / "clusters.csv").string()},
                 out, err);
  }
  const bool ok = rc == 0 && fs::exists(dir / "report.csv") && fs::exists(dir / "plot.csv");
  return {ok, "flattened URI-qualified fixture loads and evaluates (exit " + std::to_string(rc) +
                  "); reference F-measure 0.77 / entropy 0.19551 need the external OWLS-TC v2 data and judgments, "
                  "not reproduced here and not gated" +
                  (err.str().empty() ? std::string() : "; stderr: " + err.str())};
}

Outcome baseline_contrast() {
  const auto d = fixture::domain(fixture::travel());
  const auto s = fixture::travel_services(d);
  Baseline b(d);
  std::optional<double> witness;
  for (int t = 1; t < 1000 && !witness; ++t) {
    std::set<std::vector<std::vector<std::string>>> partitions;
    std::vector<int> perm{0, 1, 2};
    do {
      std::vector<ServiceDescription> order{s[perm[0]], s[perm[1]], s[perm[2]]};
      partitions.insert(normalized_partition(b.cluster(order, t / 1000.0)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (partitions.size() >= 2) witness = t / 1000.0;
  }
  GenConfig cfg;
  cfg.ontology_count = 4;
  cfg.avg_concepts = 50;
  cfg.service_count = 200;
  const auto dom = load_all(gen_domain_space(cfg));
  const auto services = describe(dom, gen_services(cfg, dom));
  Baseline bb(dom);
  std::size_t previous = services.size() + 1, lo = 0, hi = 0;
  bool monotone = true;
  for (int t = 1; t < 100; ++t) {
    const auto n = bb.cluster(services, t / 100.0).clusters.size();
    monotone = monotone && n <= previous;
    if (t == 1) hi = n;
    lo = n;
    previous = n;
  }
  return {witness.has_value() && monotone,
          (witness ? "scenario partitions depend on order at threshold " + fmt("%.3f", *witness)
                   : std::string("no order-dependent threshold found")) +
              "; cluster count non-increasing over 99 thresholds (" + std::to_string(hi) + " -> " +
              std::to_string(lo) + " clusters for 200 services)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"subsumption test equals DAG reachability", subsumption_vs_reachability},
      {"vehicle taxonomy codes", vehicle_codes},
      {"parents/children equal brute-force MSP/LSC", placement_vs_brute_force},
      {"insertion-order independence of concrete topology", order_independence},
      {"partial-order invariants under insert/remove", invariants_under_edits},
      {"amortized comparison efficiency", comparison_efficiency},
      {"metric correctness", metrics_vs_naive},
      {"two-phase discovery on a composition chain", two_phase_chain},
      {"benchmark-format dataset pipeline", flattened_dataset_pipeline},
      {"threshold baseline order and threshold sensitivity", baseline_contrast},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

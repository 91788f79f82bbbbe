#include "stc/benchkit.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

#include "stc/errors.hpp"
#include "stc/rng.hpp"

namespace stc {
namespace {

constexpr std::uint32_t kFar = std::numeric_limits<std::uint32_t>::max();

// Independent streams per artifact kind so adding queries never shifts services.
enum Stream : std::uint64_t { kOntologies = 1, kServices = 2, kQueries = 3 };

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ValidationError("config: bad value for " + key + ": '" + value + "'");
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string padded(char prefix, std::size_t index, std::size_t total, std::size_t min_digits) {
  std::size_t digits = std::to_string(total).size();
  digits = std::max(digits, min_digits);
  std::string n = std::to_string(index);
  return std::string(1, prefix) + std::string(digits - std::min(digits, n.size()), '0') + n;
}

ConceptRef random_concept(Rng& rng, const DomainSpace& domain, std::uint32_t ontology) {
  const auto& o = domain.ontology(ontology);
  // Ordinary concepts occupy ids 2..count-1.
  const auto id = static_cast<std::uint32_t>(2 + bounded(rng, o.concept_count() - 2));
  return {ontology, ConceptId{id}};
}

bool reaches(const Ontology& o, ConceptId from, ConceptId to) {
  if (from == to) return true;
  std::vector<ConceptId> stack{from};
  std::set<std::uint32_t> seen{from.value};
  while (!stack.empty()) {
    const auto c = stack.back();
    stack.pop_back();
    for (const auto p : o.parents(c)) {
      if (p == to) return true;
      if (seen.insert(p.value).second) stack.push_back(p);
    }
  }
  return false;
}

double percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size())));
  rank = std::clamp<std::size_t>(rank, 1, v.size());
  return v[rank - 1];
}

}  // namespace

GenConfig GenConfig::parse(const std::string& text) {
  GenConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "ontology_count") cfg.ontology_count = parse_number<std::size_t>(key, value);
    else if (key == "avg_concepts") cfg.avg_concepts = parse_number<std::size_t>(key, value);
    else if (key == "concept_spread") cfg.concept_spread = parse_number<double>(key, value);
    else if (key == "max_depth") cfg.max_depth = parse_number<std::size_t>(key, value);
    else if (key == "root_fraction") cfg.root_fraction = parse_number<double>(key, value);
    else if (key == "second_parent_p") cfg.second_parent_p = parse_number<double>(key, value);
    else if (key == "avg_params") cfg.avg_params = parse_number<std::size_t>(key, value);
    else if (key == "service_count") cfg.service_count = parse_number<std::size_t>(key, value);
    else if (key == "domain_affinity") cfg.domain_affinity = parse_number<double>(key, value);
    else if (key == "query_count") cfg.query_count = parse_number<std::size_t>(key, value);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else throw ValidationError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

std::string GenConfig::to_text() const {
  std::string s;
  s += "ontology_count = " + std::to_string(ontology_count) + "\n";
  s += "avg_concepts = " + std::to_string(avg_concepts) + "\n";
  s += "concept_spread = " + format_double(concept_spread) + "\n";
  s += "max_depth = " + std::to_string(max_depth) + "\n";
  s += "root_fraction = " + format_double(root_fraction) + "\n";
  s += "second_parent_p = " + format_double(second_parent_p) + "\n";
  s += "avg_params = " + std::to_string(avg_params) + "\n";
  s += "service_count = " + std::to_string(service_count) + "\n";
  s += "domain_affinity = " + format_double(domain_affinity) + "\n";
  s += "query_count = " + std::to_string(query_count) + "\n";
  s += "seed = " + std::to_string(seed) + "\n";
  return s;
}

void GenConfig::validate() const {
  auto positive = [](std::size_t v, const char* key) {
    if (v == 0) throw ValidationError(std::string("config: ") + key + " must be positive");
  };
  auto unit = [](double v, const char* key) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string("config: ") + key + " must lie in [0, 1]");
  };
  positive(ontology_count, "ontology_count");
  positive(avg_concepts, "avg_concepts");
  positive(max_depth, "max_depth");
  if (avg_params < 2) throw ValidationError("config: avg_params must be at least 2");
  unit(concept_spread, "concept_spread");
  unit(root_fraction, "root_fraction");
  unit(second_parent_p, "second_parent_p");
  unit(domain_affinity, "domain_affinity");
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<OntologyDocument> gen_domain_space(const GenConfig& cfg) {
  cfg.validate();
  Rng rng = make_rng(cfg.seed, kOntologies);
  std::vector<OntologyDocument> docs;
  for (std::size_t k = 0; k < cfg.ontology_count; ++k) {
    const auto avg = static_cast<double>(cfg.avg_concepts);
    const auto lo = std::max<std::int64_t>(1, std::llround(avg * (1.0 - cfg.concept_spread)));
    const auto hi = std::max<std::int64_t>(lo, std::llround(avg * (1.0 + cfg.concept_spread)));
    const auto n = static_cast<std::size_t>(uniform_int(rng, lo, hi));

    // Level populations: level 1 holds the roots, the rest spread uniformly.
    const std::size_t depth = std::min(cfg.max_depth, n);
    std::size_t roots = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.root_fraction * n)));
    roots = std::min(roots, n);
    std::vector<std::size_t> level_of(n, 1);
    std::vector<std::vector<std::size_t>> levels(depth + 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (i >= roots) level_of[i] = depth < 2 ? 1 : static_cast<std::size_t>(uniform_int(rng, 2, depth));
    }
    // Levels must be contiguous so every non-root has a level directly above.
    std::sort(level_of.begin(), level_of.end());
    for (std::size_t i = 1; i < n; ++i) level_of[i] = std::min(level_of[i], level_of[i - 1] + 1);
    for (std::size_t i = 0; i < n; ++i) levels[level_of[i]].push_back(i);

    OntologyDocument doc;
    doc.name = "O" + std::to_string(k + 1);
    auto name = [&](std::size_t i) { return doc.name + "_C" + std::to_string(i + 1); };
    for (std::size_t i = 0; i < n; ++i) {
      OntologyDocument::Entry e{name(i), {}};
      const std::size_t lvl = level_of[i];
      if (lvl > 1) {
        const auto& above = levels[lvl - 1];
        const std::size_t first = above[bounded(rng, above.size())];
        e.parents.push_back(name(first));
        if (uniform01(rng) < cfg.second_parent_p) {
          // Any strictly shallower concept other than the first parent.
          std::size_t pool = 0;
          for (std::size_t l = 1; l < lvl; ++l) pool += levels[l].size();
          if (pool > 1) {
            std::size_t pick = bounded(rng, pool);
            std::size_t second = 0;
            for (std::size_t l = 1; l < lvl; ++l) {
              if (pick < levels[l].size()) {
                second = levels[l][pick];
                break;
              }
              pick -= levels[l].size();
            }
            if (second != first) e.parents.push_back(name(second));
          }
        }
      }
      doc.concepts.push_back(std::move(e));
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<RawService> gen_services(const GenConfig& cfg, const DomainSpace& domain) {
  return gen_services(cfg, domain, cfg.service_count, 0);
}

std::vector<RawService> gen_services(const GenConfig& cfg, const DomainSpace& domain, std::size_t count,
                                     std::uint64_t stream) {
  cfg.validate();
  if (domain.ontology_count() == 0) throw ValidationError("gen_services: empty domain space");
  for (std::size_t k = 0; k < domain.ontology_count(); ++k) {
    if (domain.ontology(k).concept_count() < 3) throw ValidationError("gen_services: ontology without concepts");
  }
  Rng rng = make_rng(cfg.seed, kServices + (stream << 8));
  const auto n_ont = static_cast<std::uint32_t>(domain.ontology_count());
  const auto avg = static_cast<std::int64_t>(cfg.avg_params);

  std::vector<RawService> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const auto home = static_cast<std::uint32_t>(bounded(rng, n_ont));
    const auto params = static_cast<std::size_t>(uniform_int(rng, std::max<std::int64_t>(2, avg - 2), avg + 2));
    const auto n_in = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<std::int64_t>(params) - 1));
    const std::size_t n_out = params - n_in;

    auto draw = [&](bool from_home) {
      const auto o = from_home ? home : static_cast<std::uint32_t>(bounded(rng, n_ont));
      return random_concept(rng, domain, o);
    };
    // Distinct concepts have distinct codes, so distinctness by reference is
    // enough for the input/output check.
    std::set<ConceptRef> used;
    std::vector<ConceptRef> outputs, inputs;
    auto take = [&](std::vector<ConceptRef>& dst, bool first) {
      for (int attempt = 0; attempt < 64; ++attempt) {
        const bool from_home = first || uniform01(rng) < cfg.domain_affinity;
        const auto c = draw(from_home);
        if (used.insert(c).second) {
          dst.push_back(c);
          return;
        }
      }
    };
    for (std::size_t i = 0; i < n_out; ++i) take(outputs, i == 0);
    for (std::size_t i = 0; i < n_in; ++i) take(inputs, false);
    if (inputs.empty() || outputs.empty()) throw ValidationError("gen_services: concept pool too small");

    RawService raw;
    raw.id = padded('S', s + 1, count, 4);
    raw.name = "service_" + std::to_string(s + 1);
    for (const auto& c : inputs) raw.inputs.push_back(domain.qualified_name(c));
    for (const auto& c : outputs) raw.outputs.push_back(domain.qualified_name(c));
    raw.domain = domain.ontology(home).name();
    out.push_back(std::move(raw));
  }
  return out;
}

std::vector<GeneratedQuery> gen_queries(const GenConfig& cfg, const DomainSpace& domain,
                                        std::span<const ServiceDescription> services) {
  std::vector<GeneratedQuery> out;
  if (services.empty()) return out;
  Rng rng = make_rng(cfg.seed, kQueries);
  for (std::size_t q = 0; q < cfg.query_count; ++q) {
    const auto& seed_service = services[bounded(rng, services.size())];
    std::vector<ConceptRef> pool(seed_service.outputs);
    shuffle(pool, rng);
    const std::size_t want = std::min<std::size_t>(pool.size(), 1 + bounded(rng, 2));
    std::set<ConceptRef> desired;
    for (std::size_t i = 0; i < want; ++i) {
      ConceptRef c = pool[i];
      const auto& o = domain.ontology(c.ontology);
      const auto parents = o.parents(c.concept_id);
      if (uniform01(rng) < 0.5 && !parents.empty()) {
        const auto p = parents[bounded(rng, parents.size())];
        if (o.is_ordinary(p)) c.concept_id = p;
      }
      desired.insert(c);
    }

    GeneratedQuery g;
    g.query.id = padded('Q', q + 1, cfg.query_count, 2);
    for (const auto& c : seed_service.inputs) g.query.inputs.push_back(domain.qualified_name(c));
    for (const auto& c : desired) g.query.outputs.push_back(domain.qualified_name(c));
    for (const auto& s : services) {
      const bool hit = std::any_of(s.outputs.begin(), s.outputs.end(), [&](const ConceptRef& o) {
        return std::any_of(desired.begin(), desired.end(), [&](const ConceptRef& d) {
          return o.ontology == d.ontology && reaches(domain.ontology(o.ontology), o.concept_id, d.concept_id);
        });
      });
      if (hit) g.relevant.push_back(s.id);
    }
    std::sort(g.relevant.begin(), g.relevant.end());
    out.push_back(std::move(g));
  }
  return out;
}

TaxonomicDistance::TaxonomicDistance(const DomainSpace& domain) : domain_(domain), rows_(domain.ontology_count()) {}

const std::vector<std::uint32_t>& TaxonomicDistance::row(std::uint32_t ontology, ConceptId from) {
  auto& cache = rows_.at(ontology);
  if (auto it = cache.find(from.value); it != cache.end()) return it->second;
  const auto& o = domain_.ontology(ontology);
  std::vector<std::uint32_t> dist(o.concept_count(), kFar);
  std::deque<ConceptId> queue{from};
  dist[from.value] = 0;
  while (!queue.empty()) {
    const auto c = queue.front();
    queue.pop_front();
    auto relax = [&](ConceptId n) {
      if (n == Ontology::bottom() || dist[n.value] != kFar) return;
      dist[n.value] = dist[c.value] + 1;
      queue.push_back(n);
    };
    for (const auto p : o.parents(c)) relax(p);
    for (const auto ch : o.children(c)) relax(ch);
  }
  return cache.emplace(from.value, std::move(dist)).first->second;
}

std::size_t TaxonomicDistance::path_length(ConceptRef a, ConceptRef b) {
  if (a.ontology == b.ontology) return row(a.ontology, a.concept_id)[b.concept_id.value];
  // Through both ⊤s and the virtual root joining them.
  return std::size_t{row(a.ontology, a.concept_id)[0]} + 2 + row(b.ontology, b.concept_id)[0];
}

double TaxonomicDistance::operator()(ConceptRef a, ConceptRef b) {
  const auto l = static_cast<double>(path_length(a, b));
  return l / (l + 1.0);
}

double Baseline::array_distance(std::span<const ConceptRef> a, std::span<const ConceptRef> b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return 1.0;
  struct Pair {
    double d;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) pairs.push_back({distance_(a[i], b[j]), i, j});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    if (x.d != y.d) return x.d < y.d;
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });
  std::vector<bool> used_a(a.size()), used_b(b.size());
  std::vector<double> best_a(a.size(), 1.0), best_b(b.size(), 1.0);
  for (const auto& p : pairs) {
    best_a[p.i] = std::min(best_a[p.i], p.d);
    best_b[p.j] = std::min(best_b[p.j], p.d);
  }
  double sum = 0;
  std::size_t matched = 0;
  for (const auto& p : pairs) {
    if (used_a[p.i] || used_b[p.j]) continue;
    used_a[p.i] = used_b[p.j] = true;
    sum += p.d;
    ++matched;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!used_a[i]) sum += best_a[i];
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!used_b[j]) sum += best_b[j];
  }
  return sum / static_cast<double>(std::max(a.size(), b.size()));
}

double Baseline::service_distance(const ServiceDescription& a, const ServiceDescription& b) {
  return 0.5 * array_distance(a.inputs, b.inputs) + 0.5 * array_distance(a.outputs, b.outputs);
}

BaselineResult Baseline::cluster(std::span<const ServiceDescription> services, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ValidationError("baseline threshold must lie in (0, 1)");
  BaselineResult r;
  std::vector<std::size_t> cluster_of(services.size());
  for (std::size_t i = 0; i < services.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t nearest = 0;
    for (std::size_t j = 0; j < i; ++j) {
      const double d = service_distance(services[i], services[j]);
      ++r.comparisons;
      if (d < best) {
        best = d;
        nearest = j;
      }
    }
    if (i == 0 || best > threshold) {
      cluster_of[i] = r.clusters.size();
      r.clusters.push_back({services[i].id});
    } else {
      cluster_of[i] = cluster_of[nearest];
      r.clusters[cluster_of[i]].push_back(services[i].id);
    }
  }
  return r;
}

std::vector<std::vector<std::string>> normalized_partition(const BaselineResult& r) {
  auto groups = r.clusters;
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end());
  return groups;
}

std::vector<BenchRecord> bench(std::span<const std::size_t> sizes, const GenConfig& cfg, const BenchOptions& options) {
  using Clock = std::chrono::steady_clock;
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw ValidationError("bench: sizes must increase strictly");
  }
  std::vector<BenchRecord> records;
  if (sizes.empty()) return records;

  std::vector<Ontology> ontologies;
  for (const auto& d : gen_domain_space(cfg)) ontologies.push_back(Ontology::load(d));
  DomainSpace domain(std::move(ontologies));
  std::vector<ServiceDescription> services;
  for (const auto& raw : gen_services(cfg, domain, sizes.back(), 0)) services.push_back(make_service(raw, domain));

  Baseline baseline(domain);
  for (const std::size_t n : sizes) {
    BenchRecord rec;
    rec.size = n;
    ClusterSpace o_space(Feature::kOutput, options.cluster);
    ClusterSpace i_space(Feature::kInput, options.cluster);
    std::vector<double> insert_us;
    insert_us.reserve(n);
    double ratio_sum = 0;
    std::size_t ratio_count = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto t0 = Clock::now();
      const auto po = o_space.insert(services[k]);
      const auto pi = i_space.insert(services[k]);
      const auto t1 = Clock::now();
      insert_us.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
      rec.stc_comparisons_o += po.comparisons;
      rec.stc_comparisons_i += pi.comparisons;
      rec.space_sum_o += po.size_before;
      rec.space_sum_i += pi.size_before;
      if (po.size_before > 0) {
        ratio_sum += static_cast<double>(po.comparisons) / static_cast<double>(po.size_before);
        ++ratio_count;
      }
    }
    for (double us : insert_us) rec.stc_total_s += us * 1e-6;
    rec.stc_insert_mean_us = insert_us.empty() ? 0 : rec.stc_total_s * 1e6 / static_cast<double>(insert_us.size());
    rec.stc_insert_p50_us = percentile(insert_us, 0.50);
    rec.stc_insert_p95_us = percentile(insert_us, 0.95);
    rec.fraction_o = rec.space_sum_o ? static_cast<double>(rec.stc_comparisons_o) / static_cast<double>(rec.space_sum_o) : 0;
    rec.fraction_i = rec.space_sum_i ? static_cast<double>(rec.stc_comparisons_i) / static_cast<double>(rec.space_sum_i) : 0;
    rec.mean_ratio_o = ratio_count ? ratio_sum / static_cast<double>(ratio_count) : 0;
    rec.nodes_o = o_space.node_count();
    rec.nodes_i = i_space.node_count();
    for (const auto id : o_space.node_ids()) {
      if (o_space.node(id).kind == NodeKind::kAbstract) ++rec.abstract_o;
    }
    rec.roots_o = o_space.roots().size();

    if (options.run_baseline) {
      const auto t0 = Clock::now();
      const auto r = baseline.cluster(std::span(services).first(n), options.baseline_threshold);
      rec.baseline_total_s = std::chrono::duration<double>(Clock::now() - t0).count();
      rec.baseline_comparisons = r.comparisons;
      rec.baseline_clusters = r.clusters.size();
    }
    records.push_back(rec);
  }
  return records;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  auto number = [&](const std::string& s) {
    const auto t = trim(s);
    return parse_number<std::size_t>("sizes", t);
  };
  std::vector<std::size_t> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ValidationError("sizes: expected start:stop:step");
    const auto start = number(parts[0]), stop = number(parts[1]), step = number(parts[2]);
    if (step == 0 || start == 0) throw ValidationError("sizes: start and step must be positive");
    for (std::size_t v = start; v <= stop; v += step) out.push_back(v);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
  }
  if (out.empty()) throw ValidationError("sizes: empty sweep");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == 0 || (i > 0 && out[i] <= out[i - 1])) throw ValidationError("sizes: must be positive and increasing");
  }
  return out;
}

}  // namespace stc

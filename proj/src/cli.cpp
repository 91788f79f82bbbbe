#include "stc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "stc/benchkit.hpp"
#include "stc/cluster_space.hpp"
#include "stc/discovery.hpp"
#include "stc/errors.hpp"
#include "stc/io.hpp"
#include "stc/match.hpp"
#include "stc/metrics.hpp"
#include "stc/rng.hpp"
#include "stc/simd/bitops.hpp"

#ifndef STC_VERSION
#define STC_VERSION "0.0.0"
#endif

namespace stc {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string join(const std::vector<std::string>& v, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

template <class T>
std::string join_ids(const std::vector<T>& v) {
  std::vector<std::string> s;
  for (const auto& x : v) s.push_back(std::to_string(x));
  return "[" + join(s, " ") + "]";
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", fraction * 100.0);
  return buf;
}

std::string opt_number(const std::optional<double>& v) { return v ? io::format_number(*v) : std::string(); }

struct Globals {
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

// Per-invocation state: output streams and the manifest being assembled.
class Run {
 public:
  Run(std::string command, const std::vector<std::string>& args, const Globals& g, std::ostream& out,
      std::ostream& err)
      : out(out), err(err), globals(g), start_(Clock::now()) {
    manifest_.command = std::move(command);
    manifest_.arguments = args;
  }

  std::ostream& out;
  std::ostream& err;
  const Globals& globals;

  void info(const std::string& line) {
    if (!globals.quiet) out << line << "\n";
  }
  void warn(const std::string& line) {
    if (!globals.quiet) err << "warning: " << line << "\n";
  }

  std::string read(const std::string& role, const fs::path& path) {
    auto text = io::read_file(path);
    manifest_.inputs[role] = fnv1a_hex(text);
    return text;
  }
  void note_directory(const std::string& role, const fs::path& path) {
    std::string all;
    if (fs::is_directory(path)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(path)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) all += f.filename().string() + "\n" + io::read_file(f);
    } else {
      all = io::read_file(path);
    }
    manifest_.inputs[role] = fnv1a_hex(all);
  }
  void seed(const std::string& name, std::uint64_t value) { manifest_.seeds[name] = value; }
  void generation(const std::string& name, std::uint64_t value) { manifest_.generations[name] = value; }
  void config(const std::string& text) { config_ += text; }
  void timing(const std::string& name, double seconds) { manifest_.timings_s[name] = seconds; }

  /// Writes `content` to `path`, or to `out` when the path is empty.
  void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
      out << content;
      return;
    }
    io::write_file(path, content);
    outputs_.push_back(path);
  }

  /// Manifest next to the first artifact, or at `path` if given.
  void finish(const std::string& path = {}) {
    if (outputs_.empty() && path.empty()) return;
    manifest_.outputs = outputs_;
    manifest_.timings_s["total"] = std::chrono::duration<double>(Clock::now() - start_).count();
    std::string digest_src = manifest_.command + "\n" + config_;
    for (const auto& [role, digest] : manifest_.inputs) digest_src += role + "=" + digest + "\n";
    for (const auto& [name, value] : manifest_.seeds) digest_src += name + "=" + std::to_string(value) + "\n";
    manifest_.config_digest = fnv1a_hex(digest_src);
    io::write_file(path.empty() ? outputs_.front() + ".manifest.json" : path, manifest_.to_json());
  }

 private:
  io::RunManifest manifest_;
  std::vector<std::string> outputs_;
  std::string config_;
  Clock::time_point start_;
};

std::vector<Feature> parse_features(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "both") return {Feature::kInput, Feature::kOutput};
  return {parse_feature(text)};
}

ClusterOptions parse_cluster_options(const std::string& msp, const std::string& lsc) {
  ClusterOptions o;
  if (msp == "indexed") o.msp = MspStrategy::kIndexed;
  else if (msp == "descent") o.msp = MspStrategy::kDescent;
  else throw ValidationError("unknown --msp strategy '" + msp + "' (indexed, descent)");
  if (lsc == "indexed") o.lsc = LscStrategy::kIndexed;
  else if (lsc == "walk") o.lsc = LscStrategy::kDescendantWalk;
  else if (lsc == "scan") o.lsc = LscStrategy::kFullScan;
  else throw ValidationError("unknown --lsc strategy '" + lsc + "' (indexed, walk, scan)");
  return o;
}

DomainSpace load_domain(Run& run, const std::string& path) {
  run.note_directory("ontologies", path);
  auto d = io::load_domain(path);
  run.generation("domain", d.generation());
  return d;
}

std::vector<ServiceDescription> describe(Run& run, const std::vector<RawService>& raw, const DomainSpace& d) {
  std::vector<ServiceDescription> out;
  out.reserve(raw.size());
  for (const auto& r : raw) {
    std::vector<std::string> warnings;
    out.push_back(make_service(r, d, &warnings));
    for (const auto& w : warnings) run.warn(r.id + ": " + w);
  }
  return out;
}

void check_generation(const io::SpaceFile& f, const DomainSpace& d) {
  if (f.generation != d.generation()) throw StaleCodeError(f.generation, d.generation());
}

std::string describe_space(const ClusterSpace& s) {
  std::size_t abstract = 0;
  for (const auto id : s.node_ids()) abstract += s.node(id).kind == NodeKind::kAbstract;
  return std::string(feature_name(s.feature())) + ": " + std::to_string(s.service_count()) + " services, " +
         std::to_string(s.node_count()) + " nodes (" + std::to_string(abstract) + " abstract), " +
         std::to_string(s.roots().size()) + " taxonomies";
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string config;
  std::string out;
  std::optional<std::size_t> services;
  std::optional<std::size_t> queries;
};

int cmd_gen(Run& run, const GenArgs& a) {
  GenConfig cfg = a.config.empty() ? GenConfig{} : GenConfig::parse(run.read("config", a.config));
  if (run.globals.seed) cfg.seed = *run.globals.seed;
  if (a.services) cfg.service_count = *a.services;
  if (a.queries) cfg.query_count = *a.queries;
  cfg.validate();
  run.seed("generator", cfg.seed);
  run.config(cfg.to_text());

  const fs::path dir = a.out;
  const auto docs = gen_domain_space(cfg);
  std::vector<Ontology> os;
  const std::size_t digits = std::to_string(docs.size()).size();
  for (std::size_t k = 0; k < docs.size(); ++k) {
    std::string file = std::to_string(k + 1);
    file = "O" + std::string(digits - file.size(), '0') + file + ".json";
    run.emit((dir / "ontologies" / file).string(), io::ontology_to_json(docs[k]));
    os.push_back(Ontology::load(docs[k]));
  }
  DomainSpace domain(std::move(os));
  run.generation("domain", domain.generation());
  const auto raw = gen_services(cfg, domain);
  run.emit((dir / "services.json").string(), io::services_to_json(raw));
  const auto services = describe(run, raw, domain);
  const auto queries = gen_queries(cfg, domain, services);
  std::vector<RawQuery> rq;
  io::Relevance rel;
  for (const auto& q : queries) {
    rq.push_back(q.query);
    rel[q.query.id] = q.relevant;
  }
  run.emit((dir / "queries.json").string(), io::queries_to_json(rq));
  run.emit((dir / "relevance.json").string(), io::relevance_to_json(rel));
  run.emit((dir / "config.txt").string(), cfg.to_text());
  run.finish((dir / "manifest.json").string());
  std::size_t concepts = 0;
  for (const auto& d : docs) concepts += d.concepts.size();
  run.info("generated " + std::to_string(docs.size()) + " ontologies (" + std::to_string(concepts) + " concepts), " +
           std::to_string(raw.size()) + " services, " + std::to_string(rq.size()) + " queries in " + dir.string());
  return kExitOk;
}

// ---------------------------------------------------------------- encode

struct EncodeArgs {
  std::string ontology;
  std::string dump;
};

int cmd_encode(Run& run, const EncodeArgs& a) {
  const auto domain = load_domain(run, a.ontology);
  const bool qualify = domain.ontology_count() > 1;
  io::CsvWriter csv({"concept", "hex_code", "width", "generation"});
  for (std::size_t k = 0; k < domain.ontology_count(); ++k) {
    const auto& o = domain.ontology(k);
    auto row = [&](ConceptId id) {
      BCode c = o.code(id);
      c.widen(o.width());
      const std::string name = qualify ? o.name() + "#" + o.name_of(id) : o.name_of(id);
      csv.row({name, c.to_hex(), std::to_string(o.width()), std::to_string(o.generation())});
    };
    row(Ontology::top());
    for (const auto id : o.visit_order()) row(id);
    row(Ontology::bottom());
  }
  run.emit(a.dump, csv.str());
  run.finish();
  if (!a.dump.empty()) run.info("encoded " + std::to_string(csv.rows()) + " concepts into " + a.dump);
  return kExitOk;
}

// ---------------------------------------------------------------- cluster

struct ClusterArgs {
  std::string services;
  std::string ontologies;
  std::string feature = "both";
  std::string out;
  std::string msp = "indexed";
  std::string lsc = "indexed";
  std::optional<std::uint64_t> shuffle_seed;
};

int cmd_cluster(Run& run, const ClusterArgs& a) {
  const auto options = parse_cluster_options(a.msp, a.lsc);
  const auto features = parse_features(a.feature);
  const auto domain = load_domain(run, a.ontologies);
  const auto raw = io::parse_services(run.read("services", a.services));
  auto services = describe(run, raw, domain);
  if (a.shuffle_seed) {
    Rng rng(*a.shuffle_seed);
    shuffle(services, rng);
    run.seed("shuffle", *a.shuffle_seed);
  }
  run.config("feature=" + a.feature + "\nmsp=" + a.msp + "\nlsc=" + a.lsc + "\n");

  io::SpaceFile file;
  file.generation = domain.generation();
  for (const auto f : features) (f == Feature::kInput ? file.input : file.output).emplace(f, options);
  const auto t0 = Clock::now();
  for (const auto& s : services) {
    if (file.input) file.input->insert(s);
    if (file.output) file.output->insert(s);
  }
  run.timing("cluster", std::chrono::duration<double>(Clock::now() - t0).count());
  // Document order of the source file, regardless of shuffling.
  for (const auto& r : raw) file.services.push_back(to_raw(make_service(r, domain), domain));
  run.emit(a.out, io::space_to_json(file));
  run.finish();
  if (file.input) run.info(describe_space(*file.input));
  if (file.output) run.info(describe_space(*file.output));
  return kExitOk;
}

// ---------------------------------------------------------------- insert / remove

struct InsertArgs {
  std::string space;
  std::string service;
  std::string ontologies;
  std::string out;
};

int cmd_insert(Run& run, const InsertArgs& a) {
  const auto domain = load_domain(run, a.ontologies);
  auto file = io::parse_space(run.read("space", a.space));
  check_generation(file, domain);
  const auto raw = io::parse_services(run.read("services", a.service));
  const auto services = describe(run, raw, domain);
  std::set<std::string> known;
  for (const auto& s : file.services) known.insert(s.id);
  for (const auto& s : services) {
    if (!known.insert(s.id).second) throw DuplicateNameError("service '" + s.id + "' is already registered");
  }
  for (const auto& s : services) {
    for (auto* space : {file.input ? &*file.input : nullptr, file.output ? &*file.output : nullptr}) {
      if (!space) continue;
      const auto p = space->insert(s);
      std::string line = std::string(feature_name(space->feature())) + " " + s.id + " -> node " +
                         std::to_string(p.node) + (p.merged ? " (merged)" : "") + " parents " +
                         join_ids(p.parents) + " children " + join_ids(p.children);
      if (!p.abstracts.empty()) line += " abstracts " + join_ids(p.abstracts);
      line += " comparisons " + std::to_string(p.comparisons);
      run.info(line);
    }
    file.services.push_back(to_raw(s, domain));
  }
  run.emit(a.out.empty() ? a.space : a.out, io::space_to_json(file));
  run.finish();
  return kExitOk;
}

struct RemoveArgs {
  std::string space;
  std::vector<std::string> ids;
  std::string out;
};

int cmd_remove(Run& run, const RemoveArgs& a) {
  auto file = io::parse_space(run.read("space", a.space));
  for (const auto& id : a.ids) {
    auto it = std::find_if(file.services.begin(), file.services.end(), [&](const RawService& s) { return s.id == id; });
    if (it == file.services.end()) throw UnknownNameError("unknown service", {id});
    file.services.erase(it);
    if (file.input) file.input->remove(id);
    if (file.output) file.output->remove(id);
    run.info("removed " + id);
  }
  run.emit(a.out.empty() ? a.space : a.out, io::space_to_json(file));
  run.finish();
  return kExitOk;
}

// ---------------------------------------------------------------- match

struct MatchArgs {
  std::string ontologies;
  std::string services;
  std::string a;
  std::string b;
  std::string feature = "both";
};

int cmd_match(Run& run, const MatchArgs& a) {
  const auto domain = load_domain(run, a.ontologies);
  const auto services = describe(run, io::parse_services(run.read("services", a.services)), domain);
  auto find = [&](const std::string& id) -> const ServiceDescription& {
    auto it = std::find_if(services.begin(), services.end(), [&](const auto& s) { return s.id == id; });
    if (it == services.end()) throw UnknownNameError("unknown service", {id});
    return *it;
  };
  const auto& x = find(a.a);
  const auto& y = find(a.b);
  io::CsvWriter csv({"feature", "a", "b", "strength", "abstract_parent"});
  for (const auto f : parse_features(a.feature)) {
    const auto r = g_subsumption(x.gcode(f), y.gcode(f));
    csv.row({std::string(feature_name(f)), x.id, y.id, std::string(strength_name(r.strength)),
             r.abstract_parent_code ? r.abstract_parent_code->to_hex() : ""});
  }
  run.out << csv.str();
  return kExitOk;
}

// ---------------------------------------------------------------- query / eval

struct Loaded {
  DomainSpace domain;
  io::SpaceFile file;
  std::vector<ServiceDescription> services;
};

Loaded load_registry(Run& run, const std::string& space, const std::string& ontologies) {
  Loaded l{load_domain(run, ontologies), io::parse_space(run.read("space", space)), {}};
  check_generation(l.file, l.domain);
  if (!l.file.input || !l.file.output) throw ValidationError("discovery needs a space file with both I and O spaces");
  l.services = describe(run, l.file.services, l.domain);
  return l;
}

struct QueryArgs {
  std::string space;
  std::string ontologies;
  std::string queries;
  std::string out;
  bool no_siblings = false;
  bool no_prune = false;
};

int cmd_query(Run& run, const QueryArgs& a) {
  const auto reg = load_registry(run, a.space, a.ontologies);
  const Registry registry{reg.domain, reg.services, *reg.file.input, *reg.file.output};
  DiscoveryOptions opt{!a.no_siblings, !a.no_prune};
  run.config(std::string("siblings=") + (opt.include_siblings ? "1" : "0") + "\nprune=" + (opt.prune ? "1" : "0") + "\n");
  io::CsvWriter csv({"query_id", "phase", "rank", "service_id", "strength", "invocable"});
  for (const auto& rq : io::parse_queries(run.read("queries", a.queries))) {
    const auto r = discover(make_query(rq, reg.domain), registry, opt);
    auto rows = [&](const std::vector<Retrieved>& list, const char* phase) {
      for (const auto& x : list) {
        csv.row({r.query_id, phase, std::to_string(x.rank), x.service_id, std::string(strength_name(x.strength)),
                 x.invocable ? "1" : "0"});
      }
    };
    rows(r.phase1, "1");
    if (opt.prune) rows(r.phase2, "2");
  }
  run.emit(a.out, csv.str());
  run.finish();
  return kExitOk;
}

struct EvalArgs {
  std::string space;
  std::string ontologies;
  std::string queries;
  std::string relevance;
  std::string report;
  std::string plotdata;
  std::string clusters;
  bool no_siblings = false;
};

int cmd_eval(Run& run, const EvalArgs& a) {
  const auto reg = load_registry(run, a.space, a.ontologies);
  const Registry registry{reg.domain, reg.services, *reg.file.input, *reg.file.output};
  DiscoveryOptions opt{!a.no_siblings, true};
  run.config(std::string("siblings=") + (opt.include_siblings ? "1" : "0") + "\nlevels=0.0..1.0 step 0.1\n");
  const auto queries = io::parse_queries(run.read("queries", a.queries));
  const auto relevance = io::parse_relevance(run.read("relevance", a.relevance));

  io::CsvWriter report({"query_id", "phase", "relevant", "retrieved", "hits", "precision", "recall", "f_measure",
                        "avg_interpolated_precision"});
  std::vector<QueryRun> runs1, runs2;
  for (const auto& rq : queries) {
    const auto r = discover(make_query(rq, reg.domain), registry, opt);
    RelevantSet rel;
    if (auto it = relevance.find(rq.id); it != relevance.end()) rel.insert(it->second.begin(), it->second.end());
    else run.warn("no relevance judgments for query " + rq.id);
    for (int phase : {1, 2}) {
      const auto ranked = r.ids(phase == 2);
      std::size_t hits = 0;
      for (const auto& id : ranked) hits += rel.count(id);
      std::optional<double> p, rc, ap;
      FMeasure f;
      if (!ranked.empty()) p = static_cast<double>(hits) / static_cast<double>(ranked.size());
      if (!rel.empty()) {
        rc = static_cast<double>(hits) / static_cast<double>(rel.size());
        const auto curve = interpolated_precision(ranked, rel);
        double sum = 0;
        for (double v : curve) sum += v;
        ap = sum / static_cast<double>(kRecallLevels);
      }
      std::string fm;
      if (p && rc) {
        f = f_measure(*p, *rc);
        fm = io::format_number(f.value);
      }
      report.row({rq.id, std::to_string(phase), std::to_string(rel.size()), std::to_string(ranked.size()),
                  std::to_string(hits), opt_number(p), opt_number(rc), fm, opt_number(ap)});
      (phase == 1 ? runs1 : runs2).push_back({rq.id, ranked, rel});
    }
  }
  const auto mean1 = mean_interpolated(runs1);
  const auto mean2 = mean_interpolated(runs2);
  for (const auto& [phase, mean] : {std::pair{1, &mean1}, std::pair{2, &mean2}}) {
    report.row({"MEAN", std::to_string(phase), "", "", std::to_string(mean->queries), "", "", "",
                mean->queries ? io::format_number(mean->average()) : ""});
  }
  run.emit(a.report, report.str());

  if (!a.plotdata.empty()) {
    io::CsvWriter plot({"recall", "precision_phase1", "precision_phase2"});
    for (std::size_t k = 0; k < kRecallLevels; ++k) {
      plot.row({io::format_number(static_cast<double>(k) / 10.0), io::format_number(mean1.values[k]),
                io::format_number(mean2.values[k])});
    }
    run.emit(a.plotdata, plot.str());
  }

  // Cluster quality of the O-space taxonomies against the services' domain labels.
  Labels labels;
  std::set<std::string> domains;
  bool labelled = true;
  for (const auto& s : reg.services) {
    if (!s.domain) {
      labelled = false;
      continue;
    }
    labels[s.id] = *s.domain;
    domains.insert(*s.domain);
  }
  std::optional<double> entropy;
  if (!a.clusters.empty() || !run.globals.quiet) {
    const auto taxonomies = reg.file.output->taxonomies();
    std::vector<std::vector<std::string>> groups;
    for (const auto& t : taxonomies) groups.push_back(t.services);
    if (labelled && !groups.empty()) entropy = cluster_entropy(groups, labels);
    if (!a.clusters.empty()) {
      if (!labelled) throw ValidationError("cluster report needs a domain label on every service");
      const std::vector<std::string> all(domains.begin(), domains.end());
      io::CsvWriter csv({"root_node", "services", "dominant_domain", "domain_precision", "domain_recall",
                         "avg_domain_precision", "avg_domain_recall"});
      for (const auto& t : taxonomies) {
        std::map<std::string, std::size_t> count;
        for (const auto& id : t.services) ++count[labels.at(id)];
        std::string dominant;
        std::size_t best = 0;
        for (const auto& [d, c] : count) {
          if (c > best) {
            best = c;
            dominant = d;
          }
        }
        DomainScore score;
        if (!dominant.empty()) score = domain_score(t.services, dominant, labels);
        csv.row({std::to_string(t.root), std::to_string(t.services.size()), dominant, opt_number(score.precision),
                 opt_number(score.recall), opt_number(average_domain_precision(t.services, all, labels)),
                 opt_number(average_domain_recall(t.services, all, labels))});
      }
      run.emit(a.clusters, csv.str());
    }
  }
  run.finish();

  run.info("queries: " + std::to_string(queries.size()) + ", judged: " + std::to_string(mean2.queries));
  run.info("mean interpolated precision: phase 1 " + io::format_number(mean1.average()) + ", phase 2 " +
           io::format_number(mean2.average()));
  if (entropy) run.info("O-space taxonomy entropy: " + io::format_number(*entropy));
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string sizes = "50:1500:100";
  std::string config;
  std::string report;
  std::string msp = "indexed";
  std::string lsc = "indexed";
  double threshold = 0.5;
  bool no_baseline = false;
};

int cmd_bench(Run& run, const BenchArgs& a) {
  GenConfig cfg = a.config.empty() ? GenConfig{} : GenConfig::parse(run.read("config", a.config));
  if (run.globals.seed) cfg.seed = *run.globals.seed;
  const auto sizes = parse_sizes(a.sizes);
  BenchOptions opt;
  opt.cluster = parse_cluster_options(a.msp, a.lsc);
  opt.run_baseline = !a.no_baseline;
  opt.baseline_threshold = a.threshold;
  if (opt.run_baseline && !(a.threshold > 0 && a.threshold < 1)) throw ValidationError("--threshold must lie in (0, 1)");
  run.seed("generator", cfg.seed);
  run.config(cfg.to_text() + "sizes=" + a.sizes + "\nmsp=" + a.msp + "\nlsc=" + a.lsc + "\nthreshold=" +
             io::format_number(a.threshold) + "\n");
  run.info("simd kernels: " + std::string(simd::isa_name(simd::active().isa)));

  const auto records = bench(sizes, cfg, opt);
  io::CsvWriter csv({"size", "stc_comparisons_o", "stc_comparisons_i", "space_sum_o", "space_sum_i", "fraction_o",
                     "fraction_i", "mean_ratio_o", "nodes_o", "nodes_i", "abstract_o", "roots_o",
                     "baseline_comparisons", "baseline_clusters", "stc_total_s", "stc_insert_mean_us",
                     "stc_insert_p50_us", "stc_insert_p95_us", "baseline_total_s"});
  auto n = [](auto v) { return std::to_string(v); };
  auto d = [](double v) { return io::format_number(v); };
  for (const auto& r : records) {
    csv.row({n(r.size), n(r.stc_comparisons_o), n(r.stc_comparisons_i), n(r.space_sum_o), n(r.space_sum_i),
             d(r.fraction_o), d(r.fraction_i), d(r.mean_ratio_o), n(r.nodes_o), n(r.nodes_i), n(r.abstract_o),
             n(r.roots_o), opt.run_baseline ? n(r.baseline_comparisons) : "", opt.run_baseline ? n(r.baseline_clusters) : "",
             d(r.stc_total_s), d(r.stc_insert_mean_us), d(r.stc_insert_p50_us), d(r.stc_insert_p95_us),
             opt.run_baseline ? d(r.baseline_total_s) : ""});
    run.info("n=" + n(r.size) + "  comparisons/space " + percent(r.fraction_o) + " (O) " + percent(r.fraction_i) +
             " (I)  insert mean " + d(std::round(r.stc_insert_mean_us * 10) / 10) + " us" +
             (opt.run_baseline ? "  baseline comparisons " + n(r.baseline_comparisons) : ""));
  }
  run.emit(a.report, csv.str());
  run.finish();
  return kExitOk;
}

// ---------------------------------------------------------------- export-dot

struct DotArgs {
  std::string space;
  std::string feature = "O";
  std::string out;
};

int cmd_export_dot(Run& run, const DotArgs& a) {
  const auto file = io::parse_space(run.read("space", a.space));
  const auto f = parse_feature(a.feature);
  const auto& space = f == Feature::kInput ? file.input : file.output;
  if (!space) throw ValidationError("space file has no " + std::string(feature_name(f)) + " space");
  run.emit(a.out, io::to_dot(*space, std::string(feature_name(f)) + "-space"));
  run.finish();
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Taxonomical service clustering: encode ontologies, cluster services, discover and evaluate.", "stc"};
  app.set_version_flag("--version", STC_VERSION);
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for generation and benchmarks");
  app.add_flag("--quiet,-q", g.quiet, "Suppress progress output");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic domain space, services, queries and judgments");
  gen_cmd->add_option("--config", gen.config, "Flat key = value configuration file")->check(CLI::ExistingFile);
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--services", gen.services, "Override service_count");
  gen_cmd->add_option("--queries", gen.queries, "Override query_count");

  EncodeArgs enc;
  auto* enc_cmd = app.add_subcommand("encode", "Encode ontologies and dump the code table");
  enc_cmd->add_option("--ontology,--ontologies", enc.ontology, "Ontology document or directory")->required();
  enc_cmd->add_option("--dump-codes", enc.dump, "CSV output (stdout when omitted)");

  ClusterArgs cl;
  auto* cl_cmd = app.add_subcommand("cluster", "Cluster a service batch into I/O spaces");
  cl_cmd->add_option("--services", cl.services, "Service batch")->required();
  cl_cmd->add_option("--ontologies", cl.ontologies, "Ontology document or directory")->required();
  cl_cmd->add_option("--feature", cl.feature, "I, O or both")->capture_default_str();
  cl_cmd->add_option("--out", cl.out, "Space file")->required();
  cl_cmd->add_option("--msp", cl.msp, "indexed or descent")->capture_default_str();
  cl_cmd->add_option("--lsc", cl.lsc, "indexed, walk or scan")->capture_default_str();
  cl_cmd->add_option("--shuffle-seed", cl.shuffle_seed, "Insert in a seeded random order");

  InsertArgs ins;
  auto* ins_cmd = app.add_subcommand("insert", "Insert services into an existing space file");
  ins_cmd->add_option("--space", ins.space, "Space file")->required();
  ins_cmd->add_option("--service,--services", ins.service, "Service document or batch")->required();
  ins_cmd->add_option("--ontologies", ins.ontologies, "Ontology document or directory")->required();
  ins_cmd->add_option("--out", ins.out, "Write here instead of updating the space file");

  RemoveArgs rm;
  auto* rm_cmd = app.add_subcommand("remove", "Remove services from a space file");
  rm_cmd->add_option("--space", rm.space, "Space file")->required();
  rm_cmd->add_option("--service-id,--id", rm.ids, "Service id (repeatable)")->required();
  rm_cmd->add_option("--out", rm.out, "Write here instead of updating the space file");

  MatchArgs mt;
  auto* mt_cmd = app.add_subcommand("match", "Classify the match between two services");
  mt_cmd->add_option("--ontologies", mt.ontologies, "Ontology document or directory")->required();
  mt_cmd->add_option("--services", mt.services, "Service batch")->required();
  mt_cmd->add_option("--a", mt.a, "First service id")->required();
  mt_cmd->add_option("--b", mt.b, "Second service id")->required();
  mt_cmd->add_option("--feature", mt.feature, "I, O or both")->capture_default_str();

  QueryArgs qa;
  auto* q_cmd = app.add_subcommand("query", "Two-phase discovery over a space file");
  q_cmd->add_option("--space,--spaces", qa.space, "Space file with I and O spaces")->required();
  q_cmd->add_option("--ontologies", qa.ontologies, "Ontology document or directory")->required();
  q_cmd->add_option("--queries", qa.queries, "Query file")->required();
  q_cmd->add_option("--out", qa.out, "CSV output (stdout when omitted)");
  q_cmd->add_flag("--no-siblings", qa.no_siblings, "Drop sibling-strength candidates");
  q_cmd->add_flag("--no-prune", qa.no_prune, "Skip the invocability phase");

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "Evaluate discovery against relevance judgments");
  ev_cmd->add_option("--space,--spaces", ev.space, "Space file with I and O spaces")->required();
  ev_cmd->add_option("--ontologies", ev.ontologies, "Ontology document or directory")->required();
  ev_cmd->add_option("--queries", ev.queries, "Query file")->required();
  ev_cmd->add_option("--relevance", ev.relevance, "Relevance judgments")->required();
  ev_cmd->add_option("--report", ev.report, "Per-query CSV (stdout when omitted)");
  ev_cmd->add_option("--emit-plotdata", ev.plotdata, "Mean 11-point curve CSV");
  ev_cmd->add_option("--clusters", ev.clusters, "Per-taxonomy domain precision/recall CSV");
  ev_cmd->add_flag("--no-siblings", ev.no_siblings, "Drop sibling-strength candidates");

  BenchArgs bn;
  auto* bn_cmd = app.add_subcommand("bench", "Runtime and comparison-count sweep against the baseline");
  bn_cmd->add_option("--sizes", bn.sizes, "start:stop:step or a comma list")->capture_default_str();
  bn_cmd->add_option("--config", bn.config, "Generator configuration")->check(CLI::ExistingFile);
  bn_cmd->add_option("--report", bn.report, "CSV output (stdout when omitted)");
  bn_cmd->add_option("--msp", bn.msp, "indexed or descent")->capture_default_str();
  bn_cmd->add_option("--lsc", bn.lsc, "indexed, walk or scan")->capture_default_str();
  bn_cmd->add_option("--threshold", bn.threshold, "Baseline distance threshold")->capture_default_str();
  bn_cmd->add_flag("--no-baseline", bn.no_baseline, "Skip the baseline");

  DotArgs dot;
  auto* dot_cmd = app.add_subcommand("export-dot", "Write a space as a Graphviz graph");
  dot_cmd->add_option("--space", dot.space, "Space file")->required();
  dot_cmd->add_option("--feature", dot.feature, "I or O")->capture_default_str();
  dot_cmd->add_option("--out", dot.out, "DOT output (stdout when omitted)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  auto* chosen = app.get_subcommands().front();
  Run run(chosen->get_name(), args, g, out, err);
  try {
    if (chosen == gen_cmd) return cmd_gen(run, gen);
    if (chosen == enc_cmd) return cmd_encode(run, enc);
    if (chosen == cl_cmd) return cmd_cluster(run, cl);
    if (chosen == ins_cmd) return cmd_insert(run, ins);
    if (chosen == rm_cmd) return cmd_remove(run, rm);
    if (chosen == mt_cmd) return cmd_match(run, mt);
    if (chosen == q_cmd) return cmd_query(run, qa);
    if (chosen == ev_cmd) return cmd_eval(run, ev);
    if (chosen == bn_cmd) return cmd_bench(run, bn);
    if (chosen == dot_cmd) return cmd_export_dot(run, dot);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  err << "internal error: unhandled subcommand\n";
  return kExitInternal;
}

}  // namespace stc

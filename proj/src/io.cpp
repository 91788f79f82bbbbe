#include "stc/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stc/errors.hpp"

#ifndef STC_VERSION
#define STC_VERSION "0.0.0"
#endif

namespace stc::io {
namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + ": missing \"" + key + "\"");
  return *it;
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_string()) throw ValidationError(where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ValidationError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ValidationError(where + ": expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<std::string> optional_list(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  return string_list(*it, where + "." + key);
}

template <class T>
std::vector<T> id_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ValidationError(where + ": expected an array of ids");
  std::vector<T> out;
  for (const auto& e : v) {
    if (!e.is_number_unsigned()) throw ValidationError(where + ": expected an array of ids");
    out.push_back(e.get<T>());
  }
  return out;
}

std::string dump(const ordered& j) { return j.dump(2) + "\n"; }

RawService service_from(const json& o, std::size_t index) {
  const std::string where = "service[" + std::to_string(index) + "]";
  if (!o.is_object()) throw ValidationError(where + ": expected an object");
  RawService s;
  s.id = string_field(o, "id", where);
  if (auto it = o.find("name"); it != o.end() && it->is_string()) s.name = it->get<std::string>();
  s.inputs = optional_list(o, "inputs", where);
  s.outputs = optional_list(o, "outputs", where);
  if (auto it = o.find("domain"); it != o.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError(where + ": \"domain\" must be a string");
    s.domain = it->get<std::string>();
  }
  s.has_preconditions = o.contains("preconditions");
  s.has_results = o.contains("results");
  return s;
}

ordered service_to(const RawService& s) {
  ordered o;
  o["id"] = s.id;
  if (!s.name.empty()) o["name"] = s.name;
  o["inputs"] = s.inputs;
  o["outputs"] = s.outputs;
  if (s.domain) o["domain"] = *s.domain;
  return o;
}

ordered space_to(const ClusterSpace& space) {
  ordered o;
  o["feature"] = std::string(feature_name(space.feature()));
  o["generation"] = space.generation();
  ordered nodes = ordered::array();
  for (const auto id : space.node_ids()) {
    const auto& n = space.node(id);
    ordered e;
    e["id"] = n.id;
    e["kind"] = std::string(kind_name(n.kind));
    e["services"] = n.services;
    e["gcode_hex"] = n.code.to_hex();
    e["width"] = n.code.width();
    e["parents"] = n.parents;
    e["children"] = n.children;
    nodes.push_back(std::move(e));
  }
  o["nodes"] = std::move(nodes);
  return o;
}

ClusterSpace space_from(const json& o, std::size_t index, const ClusterOptions& options) {
  const std::string where = "spaces[" + std::to_string(index) + "]";
  Feature f;
  try {
    f = parse_feature(string_field(o, "feature", where));
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
  const auto& gen = field(o, "generation", where);
  if (!gen.is_number_unsigned()) throw ValidationError(where + ": \"generation\" must be a non-negative integer");
  const auto& nodes = field(o, "nodes", where);
  if (!nodes.is_array()) throw ValidationError(where + ": \"nodes\" must be an array");
  std::vector<TaxonomyNode> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& e = nodes[i];
    const std::string at = where + ".nodes[" + std::to_string(i) + "]";
    TaxonomyNode n;
    const auto& id = field(e, "id", at);
    if (!id.is_number_unsigned()) throw ValidationError(at + ": \"id\" must be a non-negative integer");
    n.id = id.get<NodeId>();
    try {
      n.kind = parse_kind(string_field(e, "kind", at));
      std::size_t width = 0;
      if (auto w = e.find("width"); w != e.end()) {
        if (!w->is_number_unsigned()) throw ValidationError("\"width\" must be a non-negative integer");
        width = w->get<std::size_t>();
      }
      n.code = BCode::from_hex(string_field(e, "gcode_hex", at), width);
    } catch (const ValidationError& err) {
      throw ValidationError(at + ": " + err.what());
    }
    n.services = optional_list(e, "services", at);
    n.parents = id_list<NodeId>(field(e, "parents", at), at + ".parents");
    n.children = id_list<NodeId>(field(e, "children", at), at + ".children");
    out.push_back(std::move(n));
  }
  return ClusterSpace::from_nodes(f, gen.get<std::uint64_t>(), std::move(out), options);
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ValidationError("write failed: " + path.string());
}

OntologyDocument parse_ontology(std::string_view text) {
  const json j = parse_json(text, "ontology");
  if (!j.is_object()) throw ValidationError("ontology: expected an object");
  OntologyDocument doc;
  doc.name = string_field(j, "name", "ontology");
  const auto& concepts = field(j, "concepts", "ontology " + doc.name);
  if (!concepts.is_array()) throw ValidationError("ontology " + doc.name + ": \"concepts\" must be an array");
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    const std::string where = "ontology " + doc.name + ", concept[" + std::to_string(i) + "]";
    const auto& c = concepts[i];
    if (!c.is_object()) throw ValidationError(where + ": expected an object");
    doc.concepts.push_back({string_field(c, "name", where), optional_list(c, "parents", where)});
  }
  return doc;
}

std::string ontology_to_json(const OntologyDocument& doc) {
  ordered j;
  j["name"] = doc.name;
  ordered concepts = ordered::array();
  for (const auto& c : doc.concepts) {
    ordered e;
    e["name"] = c.name;
    e["parents"] = c.parents;
    concepts.push_back(std::move(e));
  }
  j["concepts"] = std::move(concepts);
  return dump(j);
}

std::vector<OntologyDocument> load_ontologies(const std::filesystem::path& path) {
  std::vector<OntologyDocument> docs;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ValidationError("no ontology documents in " + path.string());
    for (const auto& f : files) docs.push_back(parse_ontology(read_file(f)));
  } else {
    docs.push_back(parse_ontology(read_file(path)));
  }
  return docs;
}

DomainSpace load_domain(const std::filesystem::path& path) {
  std::vector<Ontology> os;
  for (const auto& d : load_ontologies(path)) os.push_back(Ontology::load(d));
  return DomainSpace(std::move(os));
}

std::vector<RawService> parse_services(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return {};
  const json j = parse_json(text, "services");
  std::vector<RawService> out;
  if (j.is_object()) {
    out.push_back(service_from(j, 0));
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(service_from(j[i], i));
  } else {
    throw ValidationError("services: expected an array or an object");
  }
  return out;
}

std::string services_to_json(std::span<const RawService> services) {
  ordered j = ordered::array();
  for (const auto& s : services) j.push_back(service_to(s));
  return dump(j);
}

std::vector<RawQuery> parse_queries(std::string_view text) {
  const json j = parse_json(text, "queries");
  auto one = [](const json& o, std::size_t i) {
    const std::string where = "query[" + std::to_string(i) + "]";
    if (!o.is_object()) throw ValidationError(where + ": expected an object");
    return RawQuery{string_field(o, "id", where), optional_list(o, "inputs", where), optional_list(o, "outputs", where)};
  };
  std::vector<RawQuery> out;
  if (j.is_object()) {
    out.push_back(one(j, 0));
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(one(j[i], i));
  } else {
    throw ValidationError("queries: expected an array or an object");
  }
  return out;
}

std::string queries_to_json(std::span<const RawQuery> queries) {
  ordered j = ordered::array();
  for (const auto& q : queries) {
    ordered o;
    o["id"] = q.id;
    o["inputs"] = q.inputs;
    o["outputs"] = q.outputs;
    j.push_back(std::move(o));
  }
  return dump(j);
}

Relevance parse_relevance(std::string_view text) {
  const json j = parse_json(text, "relevance");
  if (!j.is_object()) throw ValidationError("relevance: expected an object keyed by query id");
  Relevance out;
  for (const auto& [k, v] : j.items()) out[k] = string_list(v, "relevance." + k);
  return out;
}

std::string relevance_to_json(const Relevance& relevance) {
  ordered j = ordered::object();
  for (const auto& [k, v] : relevance) j[k] = v;
  return dump(j);
}

std::string space_to_json(const SpaceFile& file) {
  ordered j;
  j["format"] = "stc-space/1";
  j["generation"] = file.generation;
  ordered services = ordered::array();
  for (const auto& s : file.services) services.push_back(service_to(s));
  j["services"] = std::move(services);
  ordered spaces = ordered::array();
  if (file.input) spaces.push_back(space_to(*file.input));
  if (file.output) spaces.push_back(space_to(*file.output));
  j["spaces"] = std::move(spaces);
  return dump(j);
}

SpaceFile parse_space(std::string_view text, const ClusterOptions& options) {
  const json j = parse_json(text, "space");
  if (!j.is_object()) throw ValidationError("space: expected an object");
  SpaceFile file;
  const auto& gen = field(j, "generation", "space");
  if (!gen.is_number_unsigned()) throw ValidationError("space: \"generation\" must be a non-negative integer");
  file.generation = gen.get<std::uint64_t>();
  if (auto it = j.find("services"); it != j.end()) {
    if (!it->is_array()) throw ValidationError("space: \"services\" must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) file.services.push_back(service_from((*it)[i], i));
  }
  const auto& spaces = field(j, "spaces", "space");
  if (!spaces.is_array()) throw ValidationError("space: \"spaces\" must be an array");
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    auto s = space_from(spaces[i], i, options);
    auto& slot = s.feature() == Feature::kInput ? file.input : file.output;
    if (slot) throw ValidationError("space: two spaces for feature " + std::string(feature_name(s.feature())));
    slot.emplace(std::move(s));
  }
  return file;
}

std::string to_dot(const ClusterSpace& space, std::string_view graph_name) {
  std::string out = "digraph " + dot_quote(graph_name) + " {\n  rankdir=TB;\n  node [shape=box];\n";
  for (const auto id : space.node_ids()) {
    const auto& n = space.node(id);
    std::string label = n.code.to_hex();
    for (const auto& s : n.services) label += "\\n" + s;
    out += "  n" + std::to_string(id) + " [label=" + dot_quote(label);
    if (n.kind == NodeKind::kAbstract) out += ", style=dashed";
    out += "];\n";
  }
  for (const auto id : space.node_ids()) {
    for (const auto c : space.node(id).children) {
      out += "  n" + std::to_string(id) + " -> n" + std::to_string(c) + ";\n";
    }
  }
  return out + "}\n";
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) { append(header); }

CsvWriter& CsvWriter::row(std::vector<std::string> fields) {
  if (fields.size() != columns_) {
    throw ValidationError("csv: row has " + std::to_string(fields.size()) + " fields, header has " +
                          std::to_string(columns_));
  }
  append(fields);
  ++rows_;
  return *this;
}

void CsvWriter::append(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ += ',';
    const auto& f = fields[i];
    if (f.find_first_of(",\"\n\r") == std::string::npos) {
      out_ += f;
      continue;
    }
    out_ += '"';
    for (char c : f) {
      if (c == '"') out_ += '"';
      out_ += c;
    }
    out_ += '"';
  }
  out_ += '\n';
}

std::string RunManifest::to_json() const {
  ordered j;
  j["command"] = command;
  j["arguments"] = arguments;
  j["version"] = STC_VERSION;
  j["config_digest"] = config_digest;
  j["seeds"] = ordered(seeds);
  j["generations"] = ordered(generations);
  j["inputs"] = ordered(inputs);
  j["outputs"] = outputs;
  ordered t = ordered::object();
  for (const auto& [k, v] : timings_s) t[k] = v;
  j["timings_s"] = std::move(t);
  return dump(j);
}

}  // namespace stc::io

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stc/cluster_space.hpp"
#include "stc/discovery.hpp"
#include "stc/domain_space.hpp"
#include "stc/ontology.hpp"
#include "stc/service.hpp"

namespace stc::io {

/// Throws ValidationError when the file cannot be read or written.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// All parse_* functions throw ValidationError on malformed input, naming the
// offending element.

OntologyDocument parse_ontology(std::string_view json);
std::string ontology_to_json(const OntologyDocument& doc);
/// A single document, or every *.json in a directory in file-name order.
std::vector<OntologyDocument> load_ontologies(const std::filesystem::path& path);
DomainSpace load_domain(const std::filesystem::path& path);

/// An array of service objects, or a single object.
std::vector<RawService> parse_services(std::string_view json);
std::string services_to_json(std::span<const RawService> services);

std::vector<RawQuery> parse_queries(std::string_view json);
std::string queries_to_json(std::span<const RawQuery> queries);

/// {"query id": ["service id", ...]}
using Relevance = std::map<std::string, std::vector<std::string>>;
Relevance parse_relevance(std::string_view json);
std::string relevance_to_json(const Relevance& relevance);

/// Clustered registry snapshot: the services (qualified names) and one or
/// both feature spaces.
struct SpaceFile {
  std::uint64_t generation = 0;  // domain generation the codes were computed under
  std::vector<RawService> services;
  std::optional<ClusterSpace> input;
  std::optional<ClusterSpace> output;
};

std::string space_to_json(const SpaceFile& file);
SpaceFile parse_space(std::string_view json, const ClusterOptions& options = {});

/// Graphviz digraph; abstract nodes dashed, edges point from parent to child.
std::string to_dot(const ClusterSpace& space, std::string_view graph_name);

/// Shortest round-trip decimal form with '.' separator.
std::string format_number(double v);

/// Comma-separated rows with a header, LF line endings. Fields holding
/// commas, quotes or newlines are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  CsvWriter& row(std::vector<std::string> fields);
  std::size_t rows() const noexcept { return rows_; }
  const std::string& str() const noexcept { return out_; }

 private:
  void append(const std::vector<std::string>& fields);
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string out_;
};

/// Written next to every artifact as `<artifact>.manifest.json`.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::string config_digest;  // FNV-1a of the canonical inputs
  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::uint64_t> generations;
  std::map<std::string, std::string> inputs;  // role -> digest of file content
  std::vector<std::string> outputs;
  std::map<std::string, double> timings_s;
  std::string to_json() const;
};

}  // namespace stc::io

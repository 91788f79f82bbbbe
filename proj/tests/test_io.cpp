#include <filesystem>

#include "doctest.h"
#include "fixtures.hpp"
#include "stc/errors.hpp"
#include "stc/io.hpp"

using namespace stc;
namespace fs = std::filesystem;

namespace {
const fs::path kData = STC_TEST_DATA;

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("stc_io_" + name);
  fs::remove_all(p);
  return p;
}
}  // namespace

TEST_SUITE("documents") {
  TEST_CASE("vehicle document encodes as expected") {
    const auto d = io::load_domain(kData / "vehicle.json");
    const auto& o = d.ontology(0);
    CHECK(o.code(o.id_of("Car")).to_binary().ends_with("10011"));
    CHECK(o.code(o.id_of("LandVehicle")).to_binary().ends_with("011"));
  }

  TEST_CASE("directory loads in file-name order") {
    const auto docs = io::load_ontologies(kData / "travel");
    REQUIRE(docs.size() == 4);
    CHECK(docs[0].name == "Address");
    CHECK(docs[3].name == "Vehicle");
  }

  TEST_CASE("ontology round trip") {
    const auto doc = fixture::vehicle();
    const auto back = io::parse_ontology(io::ontology_to_json(doc));
    CHECK(back.name == doc.name);
    REQUIRE(back.concepts.size() == doc.concepts.size());
    for (std::size_t i = 0; i < doc.concepts.size(); ++i) {
      CHECK(back.concepts[i].name == doc.concepts[i].name);
      CHECK(back.concepts[i].parents == doc.concepts[i].parents);
    }
  }

  TEST_CASE("malformed documents name the problem") {
    CHECK_THROWS_AS(io::parse_ontology("{"), ValidationError);
    CHECK_THROWS_WITH_AS(io::parse_ontology(R"({"concepts": []})"), doctest::Contains("name"), ValidationError);
    CHECK_THROWS_WITH_AS(io::parse_ontology(R"({"name": "X", "concepts": [{"name": 3}]})"),
                         doctest::Contains("concept[0]"), ValidationError);
    CHECK_THROWS_AS(io::parse_services(R"([{"inputs": []}])"), ValidationError);
    CHECK_THROWS_AS(io::parse_services("42"), ValidationError);
    CHECK_THROWS_AS(io::parse_relevance(R"({"q": [1]})"), ValidationError);
    CHECK_THROWS_AS(io::read_file(kData / "missing.json"), ValidationError);
  }

  TEST_CASE("services, queries and relevance round trip") {
    const auto services = io::parse_services(io::read_file(kData / "owlstc_mini/services.json"));
    REQUIRE(services.size() == 10);
    CHECK(services[0].has_preconditions);
    CHECK_FALSE(services[0].has_results);
    CHECK(services[0].domain == std::optional<std::string>("books"));
    const auto again = io::parse_services(io::services_to_json(services));
    REQUIRE(again.size() == services.size());
    for (std::size_t i = 0; i < services.size(); ++i) {
      CHECK(again[i].id == services[i].id);
      CHECK(again[i].inputs == services[i].inputs);
      CHECK(again[i].outputs == services[i].outputs);
    }
    const auto queries = io::parse_queries(io::read_file(kData / "owlstc_mini/queries.json"));
    CHECK(io::parse_queries(io::queries_to_json(queries)).size() == 3);
    const auto rel = io::parse_relevance(io::read_file(kData / "owlstc_mini/relevance.json"));
    CHECK(io::parse_relevance(io::relevance_to_json(rel)) == rel);
    CHECK(io::parse_services(R"({"id": "one", "inputs": ["a"], "outputs": ["b"]})").size() == 1);
  }

  TEST_CASE("URI-qualified names resolve against the flattened set") {
    const auto d = io::load_domain(kData / "owlstc_mini/ontologies");
    for (const auto& raw : io::parse_services(io::read_file(kData / "owlstc_mini/services.json"))) {
      CHECK_NOTHROW(make_service(raw, d));
    }
  }
}

TEST_SUITE("space file") {
  TEST_CASE("round trip keeps topology and codes") {
    const auto d = fixture::domain(fixture::travel());
    const auto services = fixture::travel_services(d);
    auto pair = converge(services);
    io::SpaceFile f;
    f.generation = d.generation();
    for (const auto& s : services) f.services.push_back(to_raw(s, d));
    f.input = pair.input;
    f.output = pair.output;
    const auto text = io::space_to_json(f);
    const auto back = io::parse_space(text);
    REQUIRE(back.input);
    REQUIRE(back.output);
    CHECK(back.output->canonical() == pair.output.canonical());
    CHECK(back.input->canonical() == pair.input.canonical());
    CHECK(back.output->check_invariants().empty());
    CHECK(back.services.size() == 3);
    CHECK(io::space_to_json(back) == text);
  }

  TEST_CASE("restored space accepts further inserts") {
    const auto d = fixture::domain(fixture::travel());
    const auto services = fixture::travel_services(d);
    ClusterSpace o(Feature::kOutput);
    o.insert(services[0]);
    o.insert(services[1]);
    io::SpaceFile f;
    f.generation = d.generation();
    f.output = o;
    auto back = io::parse_space(io::space_to_json(f));
    back.output->insert(services[2]);
    o.insert(services[2]);
    CHECK(back.output->canonical() == o.canonical());
    CHECK_FALSE(back.input.has_value());
  }

  TEST_CASE("inconsistent node lists are rejected") {
    const char* asym = R"({"generation": 1, "spaces": [{"feature": "O", "generation": 1, "nodes": [
      {"id": 0, "kind": "concrete", "services": ["a"], "gcode_hex": "1", "width": 4, "parents": [], "children": [1]},
      {"id": 1, "kind": "concrete", "services": ["b"], "gcode_hex": "3", "width": 4, "parents": [], "children": []}]}]})";
    CHECK_THROWS_AS(io::parse_space(asym), ValidationError);
    const char* bad_kind = R"({"generation": 1, "spaces": [{"feature": "O", "generation": 1, "nodes": [
      {"id": 0, "kind": "shiny", "services": ["a"], "gcode_hex": "1", "parents": [], "children": []}]}]})";
    CHECK_THROWS_WITH_AS(io::parse_space(bad_kind), doctest::Contains("nodes[0]"), ValidationError);
    CHECK_THROWS_AS(io::parse_space(R"({"generation": 1, "spaces": [{"feature": "X", "generation": 1, "nodes": []}]})"),
                    ValidationError);
  }
}

TEST_SUITE("writers") {
  TEST_CASE("dot export") {
    const auto d = fixture::domain(fixture::travel());
    const auto pair = converge(fixture::travel_services(d));
    const auto dot = io::to_dot(pair.output, "O");
    CHECK(dot.starts_with("digraph \"O\" {"));
    CHECK(dot.find("s1") != std::string::npos);
    CHECK(dot.find("->") != std::string::npos);
    CHECK(dot.ends_with("}\n"));
  }

  TEST_CASE("csv quoting and shape") {
    io::CsvWriter w({"a", "b"});
    w.row({"1", "x,y"}).row({"say \"hi\"", ""});
    CHECK(w.str() == "a,b\n1,\"x,y\"\n\"say \"\"hi\"\"\",\n");
    CHECK(w.rows() == 2);
    CHECK_THROWS_AS(w.row({"only"}), ValidationError);
  }

  TEST_CASE("number formatting is shortest round trip") {
    CHECK(io::format_number(0.5) == "0.5");
    CHECK(io::format_number(2.0 / 3.0) == "0.6666666666666666");
    CHECK(io::format_number(0.0) == "0");
    CHECK(io::format_number(-0.0) == "0");
    CHECK(io::format_number(12) == "12");
  }

  TEST_CASE("manifest fields") {
    io::RunManifest m;
    m.command = "gen";
    m.arguments = {"--seed", "3"};
    m.seeds["rng"] = 3;
    m.timings_s["total"] = 0.25;
    const auto j = m.to_json();
    CHECK(j.find("\"command\": \"gen\"") != std::string::npos);
    CHECK(j.find("\"rng\": 3") != std::string::npos);
    CHECK(j.find("\"generations\": {}") != std::string::npos);
    CHECK(j.find("\"version\"") != std::string::npos);
  }

  TEST_CASE("write then read") {
    const auto p = scratch("rw") / "nested" / "f.txt";
    io::write_file(p, "x\ny\n");
    CHECK(io::read_file(p) == "x\ny\n");
    fs::remove_all(p.parent_path().parent_path());
  }
}

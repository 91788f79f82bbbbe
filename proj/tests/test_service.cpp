#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "stc/errors.hpp"
#include "stc/service.hpp"

using namespace stc;

namespace {

DomainSpace rental() {
  return fixture::domain({fixture::vehicle(),
                          {"Rental",
                           {{"Customer", {}},
                            {"CustomerName", {"Customer"}},
                            {"CustomerID", {"Customer"}},
                            {"AutoSpecification", {}},
                            {"RentConfirmation", {}},
                            // Two concepts with identical parents.
                            {"TwinA", {"Customer"}},
                            {"TwinB", {"Customer"}}}}});
}

}  // namespace

TEST_CASE("stratification keeps the declared arrays") {
  const DomainSpace d = rental();
  RawService raw{"s1", "car rental", {"CustomerName", "CustomerID"}, {"AutoSpecification", "RentConfirmation"}, {}};
  const auto arrays = feature_stratify(raw, d);
  CHECK(arrays.inputs == std::vector{d.resolve("CustomerName"), d.resolve("CustomerID")});
  CHECK(arrays.outputs.size() == 2);
  CHECK(arrays.warnings.empty());

  raw.has_preconditions = true;
  raw.has_results = true;
  CHECK(feature_stratify(raw, d).warnings.size() == 2);

  const auto single = feature_stratify({"s2", "", {"Car"}, {"Bus"}, {}}, d);
  CHECK(single.inputs.size() == 1);
  CHECK(single.outputs.size() == 1);
}

TEST_CASE("unresolvable names are listed") {
  const DomainSpace d = rental();
  try {
    feature_stratify({"bad", "", {"Car", "Nope"}, {"owl:Thing", "Zilch"}, {}}, d);
    FAIL("accepted");
  } catch (const UnknownNameError& e) {
    CHECK(e.names() == std::vector<std::string>{"Nope", "owl:Thing", "Zilch"});
  }
}

TEST_CASE("g-codes fold member codes") {
  const DomainSpace d = rental();
  const ConceptRef car = d.resolve("Car"), land = d.resolve("LandVehicle");
  CHECK(compute_gcode(std::vector{car}, Feature::kOutput, d).code == d.code(car));
  CHECK(compute_gcode(std::vector{car, land}, Feature::kOutput, d).code == d.code(car));
  CHECK(compute_gcode(std::vector{car}, Feature::kOutput, d).generation == d.generation());
  CHECK_THROWS_AS(compute_gcode(std::vector<ConceptRef>{}, Feature::kInput, d), ValidationError);

  // Adding a member never clears a bit.
  Rng rng(2);
  std::vector<ConceptRef> arr;
  BCode prev;
  for (int i = 0; i < 15; ++i) {
    arr.push_back(d.resolve(d.ontology(0).name_of(ConceptId{static_cast<std::uint32_t>(2 + bounded(rng, 11))})));
    const BCode g = compute_gcode(arr, Feature::kInput, d).code;
    CHECK(prev.subset_of(g));
    prev = g;
  }
}

TEST_CASE("input/output distinctness") {
  const DomainSpace d = rental();
  CHECK_THROWS_AS(fixture::service(d, "x", {"CustomerID"}, {"CustomerID"}), ValidationError);
  CHECK_NOTHROW(fixture::service(d, "x", {"CustomerName"}, {"RentConfirmation"}));
  // Same parents still give distinct codes: only code equality is a violation.
  CHECK(d.code(d.resolve("TwinA")) != d.code(d.resolve("TwinB")));
  CHECK_NOTHROW(fixture::service(d, "x", {"TwinA"}, {"TwinB"}));

  ServiceDescription s;
  s.id = "manual";
  s.inputs = {d.resolve("TwinA")};
  s.outputs = {d.resolve("TwinA"), d.resolve("Car")};
  const auto report = validate_service(s, d);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].input == d.resolve("TwinA"));
  CHECK(report.describe(d).find("Rental#TwinA") != std::string::npos);

  s.inputs.clear();
  CHECK_FALSE(validate_service(s, d).ok());
}

TEST_CASE("import and export round trip") {
  const DomainSpace d = rental();
  const auto s = fixture::service(d, "r1", {"CustomerName", "CustomerID"}, {"Car", "RentConfirmation"}, "rental");
  const RawService raw = to_raw(s, d);
  const auto back = make_service(raw, d);
  CHECK(back.inputs == s.inputs);
  CHECK(back.outputs == s.outputs);
  CHECK(back.domain == s.domain);
  CHECK(back.o_code.code == s.o_code.code);
}

TEST_CASE("feature names") {
  CHECK(parse_feature("I") == Feature::kInput);
  CHECK(parse_feature("output") == Feature::kOutput);
  CHECK_THROWS_AS(parse_feature("P"), ValidationError);
  CHECK(feature_name(Feature::kOutput) == "O");
}

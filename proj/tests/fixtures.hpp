#pragma once

#include <string>
#include <vector>

#include "stc/domain_space.hpp"
#include "stc/ontology.hpp"
#include "stc/service.hpp"

namespace fixture {

// Vehicle taxonomy. Visit order: Vehicle, LandVehicle, Bicycle, Bus, Car, ...
inline stc::OntologyDocument vehicle() {
  return {"Vehicle",
          {{"Vehicle", {}},
           {"LandVehicle", {"Vehicle"}},
           {"WaterVehicle", {"Vehicle"}},
           {"Bicycle", {"LandVehicle"}},
           {"Bus", {"LandVehicle"}},
           {"Car", {"LandVehicle"}},
           {"Truck", {"LandVehicle"}},
           {"SUV", {"Car"}},
           {"Sedan", {"Car"}},
           {"Boat", {"WaterVehicle"}},
           {"Ship", {"WaterVehicle"}}}};
}

// The three small taxonomies of the selection-order scenario.
inline std::vector<stc::OntologyDocument> travel() {
  return {{"Vehicle", {{"vehicle", {}}, {"car", {"vehicle"}}, {"SUV", {"car"}}}},
          {"Location", {{"location", {}}, {"city", {"location"}}}},
          {"Address", {{"address", {}}, {"street_address", {"address"}}}},
          {"Customer", {{"customer", {}}, {"customer_name", {"customer"}}}}};
}

inline stc::DomainSpace domain(const std::vector<stc::OntologyDocument>& docs) {
  std::vector<stc::Ontology> os;
  for (const auto& d : docs) os.push_back(stc::Ontology::load(d));
  return stc::DomainSpace(std::move(os));
}

inline stc::ServiceDescription service(const stc::DomainSpace& d, std::string id, std::vector<std::string> in,
                                       std::vector<std::string> out, std::optional<std::string> domain = {}) {
  stc::RawService raw;
  raw.id = std::move(id);
  raw.inputs = std::move(in);
  raw.outputs = std::move(out);
  raw.domain = std::move(domain);
  return stc::make_service(raw, d);
}

// s1, s2, s3 of the scenario; all share the same input.
inline std::vector<stc::ServiceDescription> travel_services(const stc::DomainSpace& d) {
  return {service(d, "s1", {"customer_name"}, {"car", "location"}),
          service(d, "s2", {"customer_name"}, {"vehicle", "city", "address"}),
          service(d, "s3", {"customer_name"}, {"SUV", "street_address"})};
}

}  // namespace fixture

namespace fixture {

// Composition chain: the query supplies Ticket; Booker turns Ticket into
// Booking; Planner needs Booking and yields Itinerary. Guide also yields
// Itinerary but needs Passport, which nothing supplies.
inline std::vector<stc::OntologyDocument> chain_domain() {
  return {{"Trip",
           {{"Document", {}},
            {"Ticket", {"Document"}},
            {"Booking", {"Document"}},
            {"Passport", {"Document"}},
            {"Plan", {}},
            {"Itinerary", {"Plan"}},
            {"DayPlan", {"Itinerary"}}}}};
}

inline std::vector<stc::ServiceDescription> chain_services(const stc::DomainSpace& d) {
  return {service(d, "booker", {"Ticket"}, {"Booking"}),
          service(d, "planner", {"Booking"}, {"Itinerary"}),
          service(d, "guide", {"Passport"}, {"Itinerary"}),
          service(d, "day", {"Ticket"}, {"DayPlan"})};
}

}  // namespace fixture

#include "stc/service.hpp"

#include <algorithm>
#include <cctype>

#include "stc/errors.hpp"

namespace stc {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<ConceptRef> resolve_all(const std::vector<std::string>& names, const DomainSpace& domain,
                                    std::vector<std::string>& bad) {
  std::vector<ConceptRef> out;
  for (const auto& name : names) {
    auto ref = domain.try_resolve(name);
    if (!ref || domain.is_top(*ref) || domain.is_bottom(*ref)) {
      bad.push_back(name);
      continue;
    }
    out.push_back(*ref);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::string_view feature_name(Feature feature) { return feature == Feature::kInput ? "I" : "O"; }

Feature parse_feature(std::string_view text) {
  const std::string t = lower(text);
  if (t == "i" || t == "in" || t == "input") return Feature::kInput;
  if (t == "o" || t == "out" || t == "output") return Feature::kOutput;
  throw ValidationError("unknown feature '" + std::string(text) + "' (expected I or O)");
}

StratifiedArrays feature_stratify(const RawService& raw, const DomainSpace& domain) {
  StratifiedArrays out;
  std::vector<std::string> bad;
  out.inputs = resolve_all(raw.inputs, domain, bad);
  out.outputs = resolve_all(raw.outputs, domain, bad);
  if (!bad.empty()) {
    throw UnknownNameError("service '" + raw.id + "' references unresolvable concepts", std::move(bad));
  }
  if (raw.has_preconditions) out.warnings.push_back("service '" + raw.id + "': pre-conditions ignored");
  if (raw.has_results) out.warnings.push_back("service '" + raw.id + "': results ignored");
  return out;
}

GCode compute_gcode(std::span<const ConceptRef> g_array, Feature feature, const DomainSpace& domain) {
  if (g_array.empty()) {
    throw ValidationError("empty " + std::string(feature_name(feature)) + "-array has no g-code");
  }
  GCode g{feature, BCode(domain.width()), domain.generation()};
  for (const ConceptRef& c : g_array) g.code |= domain.code(c);
  return g;
}

std::string ValidationReport::describe(const DomainSpace& domain) const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.reason;
    if (v.input && v.output) {
      out += " (input " + domain.qualified_name(*v.input) + ", output " + domain.qualified_name(*v.output) + ")";
    }
  }
  return out;
}

ValidationReport validate_service(const ServiceDescription& service, const DomainSpace& domain) {
  ValidationReport report;
  if (service.inputs.empty()) report.violations.push_back({std::nullopt, std::nullopt, "empty input array"});
  if (service.outputs.empty()) report.violations.push_back({std::nullopt, std::nullopt, "empty output array"});
  for (const ConceptRef& in : service.inputs) {
    for (const ConceptRef& out : service.outputs) {
      if (in == out) {
        report.violations.push_back({in, out, "output identical to input"});
      } else if (domain.code(in) == domain.code(out)) {
        report.violations.push_back({in, out, "output semantically equivalent to input"});
      }
    }
  }
  return report;
}

ServiceDescription make_service(const RawService& raw, const DomainSpace& domain, std::vector<std::string>* warnings) {
  if (raw.id.empty()) throw ValidationError("service without id");
  StratifiedArrays arrays = feature_stratify(raw, domain);
  if (warnings != nullptr) warnings->insert(warnings->end(), arrays.warnings.begin(), arrays.warnings.end());
  ServiceDescription s;
  s.id = raw.id;
  s.name = raw.name.empty() ? raw.id : raw.name;
  s.inputs = std::move(arrays.inputs);
  s.outputs = std::move(arrays.outputs);
  s.domain = raw.domain;
  const ValidationReport report = validate_service(s, domain);
  if (!report.ok()) throw ValidationError("service '" + s.id + "' rejected: " + report.describe(domain));
  refresh_codes(s, domain);
  return s;
}

void refresh_codes(ServiceDescription& service, const DomainSpace& domain) {
  service.i_code = compute_gcode(service.inputs, Feature::kInput, domain);
  service.o_code = compute_gcode(service.outputs, Feature::kOutput, domain);
}

RawService to_raw(const ServiceDescription& service, const DomainSpace& domain) {
  RawService raw;
  raw.id = service.id;
  raw.name = service.name;
  for (const auto& c : service.inputs) raw.inputs.push_back(domain.qualified_name(c));
  for (const auto& c : service.outputs) raw.outputs.push_back(domain.qualified_name(c));
  raw.domain = service.domain;
  return raw;
}

}  // namespace stc

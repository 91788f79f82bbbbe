#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stc/bcode.hpp"
#include "stc/domain_space.hpp"

namespace stc {

enum class Feature { kInput, kOutput };

/// "I" or "O".
std::string_view feature_name(Feature feature);
/// Accepts I/O, in/out, input/output (any case). Throws ValidationError.
Feature parse_feature(std::string_view text);

/// OR of the b-codes of one g-array, stamped with the domain generation.
struct GCode {
  Feature feature = Feature::kOutput;
  BCode code;
  std::uint64_t generation = 0;
};

/// A service as read from a flattened service document, before name
/// resolution.
struct RawService {
  std::string id;
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::optional<std::string> domain;
  // Pre-condition / result sub-descriptions are accepted but not evaluated.
  bool has_preconditions = false;
  bool has_results = false;
};

struct StratifiedArrays {
  std::vector<ConceptRef> inputs;   // sorted, unique
  std::vector<ConceptRef> outputs;  // sorted, unique
  std::vector<std::string> warnings;
};

/// Splits a raw description into its I- and O-arrays.
/// Throws UnknownNameError listing every unresolvable name.
StratifiedArrays feature_stratify(const RawService& raw, const DomainSpace& domain);

/// Throws ValidationError on an empty array.
GCode compute_gcode(std::span<const ConceptRef> g_array, Feature feature, const DomainSpace& domain);

struct ServiceDescription {
  std::string id;
  std::string name;
  std::vector<ConceptRef> inputs;
  std::vector<ConceptRef> outputs;
  std::optional<std::string> domain;
  GCode i_code{Feature::kInput, {}, 0};
  GCode o_code{Feature::kOutput, {}, 0};

  const GCode& gcode(Feature feature) const { return feature == Feature::kInput ? i_code : o_code; }
  std::span<const ConceptRef> g_array(Feature feature) const {
    return feature == Feature::kInput ? std::span<const ConceptRef>(inputs) : std::span<const ConceptRef>(outputs);
  }
  std::uint64_t generation() const noexcept { return i_code.generation; }
};

struct Violation {
  std::optional<ConceptRef> input;
  std::optional<ConceptRef> output;
  std::string reason;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
  std::string describe(const DomainSpace& domain) const;
};

/// Checks non-empty arrays and that no output is semantically equivalent
/// (same b-code) to an input.
ValidationReport validate_service(const ServiceDescription& service, const DomainSpace& domain);

/// Stratify, encode and validate. Throws ValidationError when the service
/// violates input/output distinctness.
ServiceDescription make_service(const RawService& raw, const DomainSpace& domain,
                                std::vector<std::string>* warnings = nullptr);

/// Recompute both g-codes under the domain's current generation.
void refresh_codes(ServiceDescription& service, const DomainSpace& domain);

/// Qualified-name form, suitable for writing back to a service document.
RawService to_raw(const ServiceDescription& service, const DomainSpace& domain);

}  // namespace stc

#pragma once

#include <optional>
#include <string_view>

#include "stc/bcode.hpp"
#include "stc/service.hpp"

namespace stc {

/// Ordered match space. Only comparison is meaningful.
enum class MatchStrength : unsigned char {
  kNoMatch = 0,
  kSibling = 1,
  kSubsume = 2,
  kPlugIn = 3,
  kExact = 4,
};

std::string_view strength_name(MatchStrength strength);
inline int strength_value(MatchStrength strength) { return static_cast<int>(strength); }

struct MatchResult {
  MatchStrength strength = MatchStrength::kNoMatch;
  /// a AND b; set only for sibling matches.
  std::optional<BCode> abstract_parent_code;
};

/// Classifies a against b. PlugIn: a is subsumed by b (b ⊆ a bitwise).
/// Subsume: the reverse. No generation or feature checks.
MatchStrength classify(const BCode& a, const BCode& b);
MatchResult match_codes(const BCode& a, const BCode& b);

/// Throws ValidationError on a feature mismatch and StaleCodeError when the
/// codes come from different generations.
MatchResult g_subsumption(const GCode& a, const GCode& b);

}  // namespace stc

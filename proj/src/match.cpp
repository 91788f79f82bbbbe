#include "stc/match.hpp"

#include "stc/errors.hpp"

namespace stc {

std::string_view strength_name(MatchStrength strength) {
  switch (strength) {
    case MatchStrength::kExact: return "exact";
    case MatchStrength::kPlugIn: return "plug-in";
    case MatchStrength::kSubsume: return "subsume";
    case MatchStrength::kSibling: return "sibling";
    case MatchStrength::kNoMatch: break;
  }
  return "no-match";
}

MatchStrength classify(const BCode& a, const BCode& b) {
  const simd::Relation r = a.relate(b);
  if (r.a_in_b && r.b_in_a) return MatchStrength::kExact;
  if (r.b_in_a) return MatchStrength::kPlugIn;
  if (r.a_in_b) return MatchStrength::kSubsume;
  return r.overlap ? MatchStrength::kSibling : MatchStrength::kNoMatch;
}

MatchResult match_codes(const BCode& a, const BCode& b) {
  MatchResult out{classify(a, b), std::nullopt};
  if (out.strength == MatchStrength::kSibling) out.abstract_parent_code = a & b;
  return out;
}

MatchResult g_subsumption(const GCode& a, const GCode& b) {
  if (a.feature != b.feature) {
    throw ValidationError("cannot compare an " + std::string(feature_name(a.feature)) + "-code with an " +
                          std::string(feature_name(b.feature)) + "-code");
  }
  if (a.generation != b.generation) throw StaleCodeError(std::min(a.generation, b.generation), std::max(a.generation, b.generation));
  return match_codes(a.code, b.code);
}

}  // namespace stc

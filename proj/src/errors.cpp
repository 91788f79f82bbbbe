#include "stc/errors.hpp"

namespace stc {
namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i != 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

CycleError::CycleError(std::vector<std::string> cycle)
    : ValidationError("cycle in concept hierarchy: " + join(cycle, " -> ")), cycle_(std::move(cycle)) {}

UnknownNameError::UnknownNameError(const std::string& what, std::vector<std::string> names)
    : ValidationError(what + ": " + join(names, ", ")), names_(std::move(names)) {}

StaleCodeError::StaleCodeError(unsigned long long held, unsigned long long current)
    : ValidationError("stale code: computed under generation " + std::to_string(held) +
                      ", current generation is " + std::to_string(current)),
      held_(held),
      current_(current) {}

}  // namespace stc

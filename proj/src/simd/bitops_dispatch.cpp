#include <atomic>
#include <stdexcept>
#include <string>

#include "stc/simd/bitops.hpp"

namespace stc::simd {
namespace {

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(STC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(STC_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const Kernels* best_available() {
#if defined(STC_HAVE_AVX2)
  if (cpu_has(Isa::kAvx2)) return &detail::kAvx2Kernels;
#endif
#if defined(STC_HAVE_NEON)
  return &detail::kNeonKernels;
#endif
  return &detail::kScalarKernels;
}

std::atomic<const Kernels*> g_forced{nullptr};

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) { return kernels_for(isa) != nullptr; }

const Kernels* kernels_for(Isa isa) {
  if (!cpu_has(isa)) return nullptr;
  switch (isa) {
    case Isa::kScalar:
      return &detail::kScalarKernels;
    case Isa::kAvx2:
#if defined(STC_HAVE_AVX2)
      return &detail::kAvx2Kernels;
#else
      return nullptr;
#endif
    case Isa::kNeon:
#if defined(STC_HAVE_NEON)
      return &detail::kNeonKernels;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Isa> supported_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
    if (isa_supported(isa)) out.push_back(isa);
  }
  return out;
}

const Kernels& active() {
  static const Kernels* const automatic = best_available();
  const Kernels* forced = g_forced.load(std::memory_order_acquire);
  return forced != nullptr ? *forced : *automatic;
}

void force_isa(Isa isa) {
  const Kernels* k = kernels_for(isa);
  if (k == nullptr) {
    throw std::invalid_argument("kernel variant not supported here: " + std::string(isa_name(isa)));
  }
  g_forced.store(k, std::memory_order_release);
}

void reset_isa() { g_forced.store(nullptr, std::memory_order_release); }

}  // namespace stc::simd

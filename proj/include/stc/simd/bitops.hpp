#pragma once
// Word-level bit kernels used by every code comparison in the engine.
//
// Each kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant. The active table is
// chosen once at first use from the running CPU's capabilities and can be
// pinned with force_isa() for equivalence tests and benchmarks.
//
// All kernels take raw word ranges of equal length `n`; callers that hold
// codes of different widths compare the common prefix here and inspect the
// tail themselves (see BCode).

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace stc::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

/// Pairwise relation of two word ranges, computed in one pass.
struct Relation {
  bool a_in_b = true;   // a & ~b == 0
  bool b_in_a = true;   // b & ~a == 0
  bool overlap = false; // a & b != 0
};

struct Kernels {
  Isa isa;
  Relation (*relate)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
  // a ⊆ b
  bool (*subset)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
  bool (*overlap)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
  void (*or_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t n);
  void (*and_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t n);
  std::size_t (*popcount)(const std::uint64_t* a, std::size_t n);
};

/// Kernels currently in use.
const Kernels& active();

/// True when the variant was compiled in and the running CPU can execute it.
bool isa_supported(Isa isa);

/// Table for a specific variant, or nullptr if unsupported.
const Kernels* kernels_for(Isa isa);

/// Every variant usable on this machine, scalar first.
std::vector<Isa> supported_isas();

/// Pin the active table. Throws std::invalid_argument if unsupported.
void force_isa(Isa isa);

/// Restore automatic selection.
void reset_isa();

namespace detail {
extern const Kernels kScalarKernels;
#if defined(STC_HAVE_AVX2)
extern const Kernels kAvx2Kernels;
#endif
#if defined(STC_HAVE_NEON)
extern const Kernels kNeonKernels;
#endif
}  // namespace detail

}  // namespace stc::simd

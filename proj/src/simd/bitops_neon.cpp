// aarch64 only; NEON is part of the base ISA there.
#include "stc/simd/bitops.hpp"

#include <arm_neon.h>

#include <bit>

namespace stc::simd {
namespace {

inline bool any_set(uint64x2_t v) { return (vgetq_lane_u64(v, 0) | vgetq_lane_u64(v, 1)) != 0; }

Relation relate_neon(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  uint64x2_t a_not_b = vdupq_n_u64(0);
  uint64x2_t b_not_a = vdupq_n_u64(0);
  uint64x2_t both = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint64x2_t va = vld1q_u64(a + i);
    const uint64x2_t vb = vld1q_u64(b + i);
    a_not_b = vorrq_u64(a_not_b, vbicq_u64(va, vb));
    b_not_a = vorrq_u64(b_not_a, vbicq_u64(vb, va));
    both = vorrq_u64(both, vandq_u64(va, vb));
  }
  std::uint64_t tail_anb = 0, tail_bna = 0, tail_both = 0;
  for (; i < n; ++i) {
    tail_anb |= a[i] & ~b[i];
    tail_bna |= b[i] & ~a[i];
    tail_both |= a[i] & b[i];
  }
  return {!any_set(a_not_b) && tail_anb == 0, !any_set(b_not_a) && tail_bna == 0,
          any_set(both) || tail_both != 0};
}

bool subset_neon(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    if (any_set(vbicq_u64(vld1q_u64(a + i), vld1q_u64(b + i)))) return false;
  }
  for (; i < n; ++i) {
    if ((a[i] & ~b[i]) != 0) return false;
  }
  return true;
}

bool overlap_neon(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    if (any_set(vandq_u64(vld1q_u64(a + i), vld1q_u64(b + i)))) return true;
  }
  for (; i < n; ++i) {
    if ((a[i] & b[i]) != 0) return true;
  }
  return false;
}

void or_into_neon(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_u64(dst + i, vorrq_u64(vld1q_u64(dst + i), vld1q_u64(src + i)));
  for (; i < n; ++i) dst[i] |= src[i];
}

void and_into_neon(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_u64(dst + i, vandq_u64(vld1q_u64(dst + i), vld1q_u64(src + i)));
  for (; i < n; ++i) dst[i] &= src[i];
}

std::size_t popcount_neon(const std::uint64_t* a, std::size_t n) {
  std::size_t total = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint8x16_t bytes = vcntq_u8(vreinterpretq_u8_u64(vld1q_u64(a + i)));
    total += vaddvq_u8(bytes);
  }
  for (; i < n; ++i) total += static_cast<std::size_t>(std::popcount(a[i]));
  return total;
}

}  // namespace

namespace detail {
const Kernels kNeonKernels{Isa::kNeon,   relate_neon,   subset_neon, overlap_neon,
                           or_into_neon, and_into_neon, popcount_neon};
}  // namespace detail

}  // namespace stc::simd

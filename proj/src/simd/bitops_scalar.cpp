#include "stc/simd/bitops.hpp"

#include <bit>

namespace stc::simd {
namespace {

Relation relate_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::uint64_t a_not_b = 0;
  std::uint64_t b_not_a = 0;
  std::uint64_t both = 0;
  for (std::size_t i = 0; i < n; ++i) {
    a_not_b |= a[i] & ~b[i];
    b_not_a |= b[i] & ~a[i];
    both |= a[i] & b[i];
  }
  return {a_not_b == 0, b_not_a == 0, both != 0};
}

bool subset_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if ((a[i] & ~b[i]) != 0) return false;
  }
  return true;
}

bool overlap_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if ((a[i] & b[i]) != 0) return true;
  }
  return false;
}

void or_into_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] |= src[i];
}

void and_into_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] &= src[i];
}

std::size_t popcount_scalar(const std::uint64_t* a, std::size_t n) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += static_cast<std::size_t>(std::popcount(a[i]));
  return total;
}

}  // namespace

namespace detail {
const Kernels kScalarKernels{Isa::kScalar,   relate_scalar,   subset_scalar, overlap_scalar,
                             or_into_scalar, and_into_scalar, popcount_scalar};
}  // namespace detail

}  // namespace stc::simd

// Compiled with -mavx2; only reached after a runtime CPU check.
#include "stc/simd/bitops.hpp"

#include <immintrin.h>

#include <bit>

namespace stc::simd {
namespace {

inline __m256i load(const std::uint64_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

inline void store(std::uint64_t* p, __m256i v) {
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v);
}

Relation relate_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  __m256i a_not_b = _mm256_setzero_si256();
  __m256i b_not_a = _mm256_setzero_si256();
  __m256i both = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i va = load(a + i);
    const __m256i vb = load(b + i);
    a_not_b = _mm256_or_si256(a_not_b, _mm256_andnot_si256(vb, va));
    b_not_a = _mm256_or_si256(b_not_a, _mm256_andnot_si256(va, vb));
    both = _mm256_or_si256(both, _mm256_and_si256(va, vb));
  }
  std::uint64_t tail_anb = 0, tail_bna = 0, tail_both = 0;
  for (; i < n; ++i) {
    tail_anb |= a[i] & ~b[i];
    tail_bna |= b[i] & ~a[i];
    tail_both |= a[i] & b[i];
  }
  Relation r;
  r.a_in_b = _mm256_testz_si256(a_not_b, a_not_b) && tail_anb == 0;
  r.b_in_a = _mm256_testz_si256(b_not_a, b_not_a) && tail_bna == 0;
  r.overlap = !_mm256_testz_si256(both, both) || tail_both != 0;
  return r;
}

bool subset_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // testc(vb, va) == 1  <=>  va & ~vb == 0
    if (!_mm256_testc_si256(load(b + i), load(a + i))) return false;
  }
  for (; i < n; ++i) {
    if ((a[i] & ~b[i]) != 0) return false;
  }
  return true;
}

bool overlap_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    if (!_mm256_testz_si256(load(a + i), load(b + i))) return true;
  }
  for (; i < n; ++i) {
    if ((a[i] & b[i]) != 0) return true;
  }
  return false;
}

void or_into_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(dst + i, _mm256_or_si256(load(dst + i), load(src + i)));
  for (; i < n; ++i) dst[i] |= src[i];
}

void and_into_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(dst + i, _mm256_and_si256(load(dst + i), load(src + i)));
  for (; i < n; ++i) dst[i] &= src[i];
}

// Nibble lookup popcount (Mula): per-byte counts via pshufb, summed with sad.
std::size_t popcount_avx2(const std::uint64_t* a, std::size_t n) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,  //
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i v = load(a + i);
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    const __m256i counts = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(counts, _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::size_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) total += static_cast<std::size_t>(std::popcount(a[i]));
  return total;
}

}  // namespace

namespace detail {
const Kernels kAvx2Kernels{Isa::kAvx2,   relate_avx2,   subset_avx2, overlap_avx2,
                           or_into_avx2, and_into_avx2, popcount_avx2};
}  // namespace detail

}  // namespace stc::simd

#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "stc/bcode.hpp"
#include "stc/rng.hpp"
#include "stc/simd/bitops.hpp"

using namespace stc;

namespace {

std::vector<std::uint64_t> random_words(Rng& rng, std::size_t n, int density) {
  std::vector<std::uint64_t> w(n);
  for (auto& x : w) {
    x = 0;
    for (int i = 0; i < density; ++i) x |= 1ULL << bounded(rng, 64);
  }
  return w;
}

struct IsaGuard {
  ~IsaGuard() { simd::reset_isa(); }
};

}  // namespace

TEST_CASE("scalar kernels are always available") {
  const auto isas = simd::supported_isas();
  REQUIRE(!isas.empty());
  CHECK(isas.front() == simd::Isa::kScalar);
  CHECK(simd::kernels_for(simd::Isa::kScalar) != nullptr);
}

TEST_CASE("forcing an unsupported variant throws") {
  IsaGuard guard;
  for (auto isa : {simd::Isa::kAvx2, simd::Isa::kNeon}) {
    if (!simd::isa_supported(isa)) CHECK_THROWS_AS(simd::force_isa(isa), std::invalid_argument);
  }
}

TEST_CASE("every variant agrees with the scalar reference") {
  Rng rng(7);
  const simd::Kernels& ref = *simd::kernels_for(simd::Isa::kScalar);
  for (auto isa : simd::supported_isas()) {
    const simd::Kernels& k = *simd::kernels_for(isa);
    CAPTURE(simd::isa_name(isa));
    for (std::size_t n = 0; n <= 37; ++n) {
      for (int trial = 0; trial < 60; ++trial) {
        auto a = random_words(rng, n, 1 + trial % 6);
        auto b = random_words(rng, n, 1 + trial % 5);
        // Make subset relations common.
        if (trial % 3 == 0) {
          for (std::size_t i = 0; i < n; ++i) b[i] |= a[i];
        }
        if (trial % 7 == 0) b = a;
        const auto r0 = ref.relate(a.data(), b.data(), n);
        const auto r1 = k.relate(a.data(), b.data(), n);
        CHECK(r0.a_in_b == r1.a_in_b);
        CHECK(r0.b_in_a == r1.b_in_a);
        CHECK(r0.overlap == r1.overlap);
        CHECK(ref.subset(a.data(), b.data(), n) == k.subset(a.data(), b.data(), n));
        CHECK(ref.overlap(a.data(), b.data(), n) == k.overlap(a.data(), b.data(), n));
        CHECK(ref.popcount(a.data(), n) == k.popcount(a.data(), n));
        auto o0 = a, o1 = a, x0 = a, x1 = a;
        ref.or_into(o0.data(), b.data(), n);
        k.or_into(o1.data(), b.data(), n);
        CHECK(o0 == o1);
        ref.and_into(x0.data(), b.data(), n);
        k.and_into(x1.data(), b.data(), n);
        CHECK(x0 == x1);
      }
    }
  }
}

TEST_CASE("scalar reference matches word-by-word definitions") {
  Rng rng(11);
  const simd::Kernels& ref = *simd::kernels_for(simd::Isa::kScalar);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = bounded(rng, 9);
    auto a = random_words(rng, n, 3), b = random_words(rng, n, 3);
    bool ab = true, ba = true, ov = false;
    std::size_t pc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ab = ab && (a[i] & ~b[i]) == 0;
      ba = ba && (b[i] & ~a[i]) == 0;
      ov = ov || (a[i] & b[i]) != 0;
      for (int j = 0; j < 64; ++j) pc += (a[i] >> j) & 1U;
    }
    const auto r = ref.relate(a.data(), b.data(), n);
    CHECK(r.a_in_b == ab);
    CHECK(r.b_in_a == ba);
    CHECK(r.overlap == ov);
    CHECK(ref.popcount(a.data(), n) == pc);
  }
}

TEST_CASE("BCode operations are identical under every variant") {
  IsaGuard guard;
  Rng rng(3);
  std::vector<std::pair<BCode, BCode>> pairs;
  for (int i = 0; i < 300; ++i) {
    const std::size_t wa = 1 + bounded(rng, 700), wb = 1 + bounded(rng, 700);
    BCode a(wa), b(wb);
    for (int j = 0; j < 12; ++j) a.set(1 + bounded(rng, wa));
    for (int j = 0; j < 12; ++j) b.set(1 + bounded(rng, wb));
    if (i % 4 == 0) b |= a;
    pairs.emplace_back(a, b);
  }
  simd::force_isa(simd::Isa::kScalar);
  std::vector<std::string> expected;
  for (auto& [a, b] : pairs) {
    expected.push_back((a | b).to_hex() + (a & b).to_hex() + std::to_string(a.subset_of(b)) +
                       std::to_string(a.overlaps(b)) + std::to_string(a.count()));
  }
  for (auto isa : simd::supported_isas()) {
    simd::force_isa(isa);
    CHECK(simd::active().isa == isa);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& [a, b] = pairs[i];
      CHECK(expected[i] == (a | b).to_hex() + (a & b).to_hex() + std::to_string(a.subset_of(b)) +
                               std::to_string(a.overlaps(b)) + std::to_string(a.count()));
    }
  }
}

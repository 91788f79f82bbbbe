#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stc/simd/bitops.hpp"

namespace stc {

/// Growable bit string identifying a concept's place in a subsumption lattice.
///
/// Bit positions are 1-indexed from the least significant end: position i
/// belongs to the i-th concept visited when the ontology was encoded. Codes of
/// different widths compare as if the narrower one were zero-extended, so a
/// code assigned before an append stays valid afterwards.
///
/// Hex form: ceil(width / 4) digits, most significant digit first, lowercase.
/// Position 1 is the low bit of the last digit. `0*10011` (positions 1, 2, 5)
/// at width 8 is "13".
class BCode {
 public:
  BCode() = default;
  explicit BCode(std::size_t width);

  static BCode ones(std::size_t width);
  static BCode from_positions(std::initializer_list<std::size_t> positions, std::size_t width);
  static BCode from_positions(std::span<const std::size_t> positions, std::size_t width);
  /// Width defaults to 4 * digit count.
  static BCode from_hex(std::string_view hex, std::size_t width = 0);

  std::size_t width() const noexcept { return width_; }
  /// Zero-extend (never shrinks).
  void widen(std::size_t width);

  void set(std::size_t position);
  bool test(std::size_t position) const;

  std::size_t count() const;
  bool none() const;
  std::vector<std::size_t> positions() const;

  std::string to_hex() const;
  /// MSB first, exactly `width` characters.
  std::string to_binary() const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /// this ⊆ other (this | other == other).
  bool subset_of(const BCode& other) const;
  bool overlaps(const BCode& other) const;
  simd::Relation relate(const BCode& other) const;

  BCode& operator|=(const BCode& other);
  BCode& operator&=(const BCode& other);
  friend BCode operator|(BCode a, const BCode& b) { return a |= b; }
  friend BCode operator&(BCode a, const BCode& b) { return a &= b; }

  /// Logical equality; width is ignored.
  friend bool operator==(const BCode& a, const BCode& b);

  /// Total order on logical value (numeric comparison), width-insensitive.
  friend bool operator<(const BCode& a, const BCode& b);

  std::size_t hash() const noexcept;

 private:
  // Words past the last nonzero one; equal logical values share this prefix.
  std::size_t significant_words() const noexcept;

  std::vector<std::uint64_t> words_;
  std::size_t width_ = 0;
};

}  // namespace stc

template <>
struct std::hash<stc::BCode> {
  std::size_t operator()(const stc::BCode& c) const noexcept { return c.hash(); }
};

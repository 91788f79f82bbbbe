#include "stc/bcode.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace stc {
namespace {

constexpr std::size_t kWordBits = 64;

std::size_t words_for(std::size_t width) { return (width + kWordBits - 1) / kWordBits; }

bool all_zero(std::span<const std::uint64_t> w) {
  return std::all_of(w.begin(), w.end(), [](std::uint64_t x) { return x == 0; });
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BCode::BCode(std::size_t width) : words_(words_for(width), 0), width_(width) {}

BCode BCode::ones(std::size_t width) {
  BCode c(width);
  for (auto& w : c.words_) w = ~std::uint64_t{0};
  if (const std::size_t rem = width % kWordBits; rem != 0 && !c.words_.empty()) {
    c.words_.back() = (std::uint64_t{1} << rem) - 1;
  }
  return c;
}

BCode BCode::from_positions(std::initializer_list<std::size_t> positions, std::size_t width) {
  return from_positions(std::span<const std::size_t>(positions.begin(), positions.size()), width);
}

BCode BCode::from_positions(std::span<const std::size_t> positions, std::size_t width) {
  BCode c(width);
  for (std::size_t p : positions) c.set(p);
  return c;
}

BCode BCode::from_hex(std::string_view hex, std::size_t width) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  const std::size_t digit_width = hex.size() * 4;
  BCode c(std::max(width, digit_width));
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const int v = hex_value(hex[hex.size() - 1 - i]);
    if (v < 0) throw std::invalid_argument("invalid hex digit in code: " + std::string(hex));
    for (int b = 0; b < 4; ++b) {
      if ((v >> b) & 1) c.set(i * 4 + static_cast<std::size_t>(b) + 1);
    }
  }
  if (width != 0 && width < digit_width) {
    for (std::size_t p = width + 1; p <= digit_width; ++p) {
      if (c.test(p)) throw std::invalid_argument("hex code wider than declared width");
    }
    c.words_.resize(words_for(width));
    c.width_ = width;
  }
  return c;
}

void BCode::widen(std::size_t width) {
  if (width <= width_) return;
  words_.resize(words_for(width), 0);
  width_ = width;
}

void BCode::set(std::size_t position) {
  if (position == 0 || position > width_) {
    throw std::out_of_range("bit position " + std::to_string(position) + " outside width " +
                            std::to_string(width_));
  }
  words_[(position - 1) / kWordBits] |= std::uint64_t{1} << ((position - 1) % kWordBits);
}

bool BCode::test(std::size_t position) const {
  if (position == 0 || position > width_) return false;
  return (words_[(position - 1) / kWordBits] >> ((position - 1) % kWordBits)) & 1;
}

std::size_t BCode::count() const { return simd::active().popcount(words_.data(), words_.size()); }

bool BCode::none() const { return all_zero(words_); }

std::vector<std::size_t> BCode::positions() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits != 0) {
      const int tz = std::countr_zero(bits);
      out.push_back(w * kWordBits + static_cast<std::size_t>(tz) + 1);
      bits &= bits - 1;
    }
  }
  return out;
}

std::string BCode::to_hex() const {
  const std::size_t digits = std::max<std::size_t>(1, (width_ + 3) / 4);
  std::string out(digits, '0');
  static constexpr char kDigits[] = "0123456789abcdef";
  for (std::size_t i = 0; i < digits; ++i) {
    int v = 0;
    for (int b = 0; b < 4; ++b) {
      if (test(i * 4 + static_cast<std::size_t>(b) + 1)) v |= 1 << b;
    }
    out[digits - 1 - i] = kDigits[v];
  }
  return out;
}

std::string BCode::to_binary() const {
  std::string out(width_, '0');
  for (std::size_t p = 1; p <= width_; ++p) {
    if (test(p)) out[width_ - p] = '1';
  }
  return out;
}

simd::Relation BCode::relate(const BCode& other) const {
  const std::size_t common = std::min(words_.size(), other.words_.size());
  simd::Relation r = simd::active().relate(words_.data(), other.words_.data(), common);
  if (words_.size() > common && !all_zero(std::span(words_).subspan(common))) r.a_in_b = false;
  if (other.words_.size() > common && !all_zero(std::span(other.words_).subspan(common))) {
    r.b_in_a = false;
  }
  return r;
}

bool BCode::subset_of(const BCode& other) const {
  const std::size_t common = std::min(words_.size(), other.words_.size());
  if (!simd::active().subset(words_.data(), other.words_.data(), common)) return false;
  return words_.size() <= common || all_zero(std::span(words_).subspan(common));
}

bool BCode::overlaps(const BCode& other) const {
  const std::size_t common = std::min(words_.size(), other.words_.size());
  return simd::active().overlap(words_.data(), other.words_.data(), common);
}

BCode& BCode::operator|=(const BCode& other) {
  widen(other.width_);
  simd::active().or_into(words_.data(), other.words_.data(), other.words_.size());
  return *this;
}

BCode& BCode::operator&=(const BCode& other) {
  const std::size_t common = std::min(words_.size(), other.words_.size());
  simd::active().and_into(words_.data(), other.words_.data(), common);
  std::fill(words_.begin() + static_cast<std::ptrdiff_t>(common), words_.end(), 0);
  widen(other.width_);
  return *this;
}

std::size_t BCode::significant_words() const noexcept {
  std::size_t n = words_.size();
  while (n > 0 && words_[n - 1] == 0) --n;
  return n;
}

bool operator==(const BCode& a, const BCode& b) {
  const std::size_t n = a.significant_words();
  if (n != b.significant_words()) return false;
  return std::equal(a.words_.begin(), a.words_.begin() + static_cast<std::ptrdiff_t>(n), b.words_.begin());
}

bool operator<(const BCode& a, const BCode& b) {
  const std::size_t na = a.significant_words();
  const std::size_t nb = b.significant_words();
  if (na != nb) return na < nb;
  for (std::size_t i = na; i-- > 0;) {
    if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
  }
  return false;
}

std::size_t BCode::hash() const noexcept {
  // FNV-1a over the significant words.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::size_t n = significant_words();
  for (std::size_t i = 0; i < n; ++i) {
    h ^= words_[i];
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace stc

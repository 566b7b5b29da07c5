#pragma once

// Bit-sliced vectors over F_2 and F_3 with at most 64 coordinates.
//
// Over F_2 only `lo` is used and holds one bit per coordinate.  Over F_3 a
// digit x is stored as the pair (lo, hi) = ([x == 1], [x == 2]), so addition
// and negation are a handful of word operations.

#include <bit>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mrd {

inline constexpr int kMaxCoords = 64;

struct PackedVec {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  constexpr bool is_zero() const { return (lo | hi) == 0; }
  constexpr std::uint64_t support() const { return lo | hi; }
  constexpr int digit(int i) const {
    return static_cast<int>((lo >> i) & 1u) + 2 * static_cast<int>((hi >> i) & 1u);
  }
  constexpr void set_digit(int i, int d) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    lo &= ~bit;
    hi &= ~bit;
    if (d == 1) lo |= bit;
    if (d == 2) hi |= bit;
  }
  // Index of the lowest nonzero coordinate; 64 for the zero vector.
  constexpr int leading() const { return std::countr_zero(support()); }

  friend constexpr bool operator==(const PackedVec&, const PackedVec&) = default;
  friend constexpr auto operator<=>(const PackedVec& a, const PackedVec& b) {
    if (auto c = a.lo <=> b.lo; c != 0) return c;
    return a.hi <=> b.hi;
  }
};

struct PackedVecHash {
  std::size_t operator()(const PackedVec& v) const noexcept {
    std::uint64_t x = v.lo * 0x9E3779B97F4A7C15ull ^ (v.hi + 0x632BE59BD9B4E019ull);
    x ^= x >> 31;
    x *= 0xBF58476D1CE4E5B9ull;
    return static_cast<std::size_t>(x ^ (x >> 29));
  }
};

inline void check_prime(int p) {
  if (p != 2 && p != 3) throw std::invalid_argument("unsupported prime field F_" + std::to_string(p));
}

constexpr PackedVec add(int p, PackedVec a, PackedVec b) {
  if (p == 2) return {a.lo ^ b.lo, 0};
  const std::uint64_t t = (a.lo | b.hi) ^ (a.hi | b.lo);
  return {(a.hi | b.hi) ^ t, (a.lo | b.lo) ^ t};
}

constexpr PackedVec neg(int p, PackedVec a) {
  if (p == 2) return a;
  return {a.hi, a.lo};
}

constexpr PackedVec sub(int p, PackedVec a, PackedVec b) { return add(p, a, neg(p, b)); }

constexpr PackedVec scale(int p, PackedVec a, int c) {
  c %= p;
  if (c == 0) return {};
  if (c == 1) return a;
  return neg(p, a);  // c == 2 over F_3
}

// a + c*b
constexpr PackedVec axpy(int p, PackedVec a, int c, PackedVec b) { return add(p, a, scale(p, b, c)); }

constexpr PackedVec mask_vec(PackedVec a, std::uint64_t mask) { return {a.lo & mask, a.hi & mask}; }
constexpr PackedVec shr(PackedVec a, int s) { return {a.lo >> s, a.hi >> s}; }
constexpr PackedVec shl(PackedVec a, int s) { return {a.lo << s, a.hi << s}; }
constexpr PackedVec vor(PackedVec a, PackedVec b) { return {a.lo | b.lo, a.hi | b.hi}; }

constexpr std::uint64_t low_mask(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

// Dot product over F_p of two packed vectors.
constexpr int dot(int p, PackedVec a, PackedVec b) {
  if (p == 2) return std::popcount(a.lo & b.lo) & 1;
  // digit products: 1*1=1, 2*2=1, 1*2=2
  const int ones = std::popcount(a.lo & b.lo) + std::popcount(a.hi & b.hi);
  const int twos = std::popcount(a.lo & b.hi) + std::popcount(a.hi & b.lo);
  return (ones + 2 * twos) % 3;
}

// Scale so that the leading coordinate is 1.
constexpr PackedVec normalize_leading(int p, PackedVec a) {
  if (a.is_zero()) return a;
  return a.digit(a.leading()) == 1 ? a : neg(p, a);
}

}  // namespace mrd

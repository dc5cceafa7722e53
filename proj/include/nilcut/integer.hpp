#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <tuple>

namespace nilcut {

/// Arbitrary-precision integer with an inline 64-bit fast path.
///
/// Values that fit in int64_t never touch GMP. Overflowing operations promote
/// to an immutable, shared mpz_class, and results that fit again are demoted,
/// so equal values always have the same representation.
class Integer {
 public:
  Integer() = default;
  Integer(long long v) : small_(static_cast<int64_t>(v)) {}  // NOLINT: literals
  Integer(long v) : small_(static_cast<int64_t>(v)) {}       // NOLINT
  Integer(int v) : small_(v) {}                              // NOLINT
  explicit Integer(const mpz_class& v);

  /// Parses a base-10 integer, throws std::invalid_argument on bad input.
  static Integer parse(std::string_view text);

  bool is_small() const { return !big_; }
  bool fits_int64() const { return is_small(); }
  int64_t to_int64() const;  // throws std::overflow_error
  mpz_class to_mpz() const;
  double to_double() const;
  std::string to_string() const;

  int sign() const;
  bool is_zero() const { return !big_ && small_ == 0; }

  Integer operator-() const;
  friend Integer operator+(const Integer& a, const Integer& b);
  friend Integer operator-(const Integer& a, const Integer& b);
  friend Integer operator*(const Integer& a, const Integer& b);
  Integer& operator+=(const Integer& b) { return *this = *this + b; }
  Integer& operator-=(const Integer& b) { return *this = *this - b; }
  Integer& operator*=(const Integer& b) { return *this = *this * b; }

  friend bool operator==(const Integer& a, const Integer& b);
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b);

  std::size_t hash() const;

 private:
  int64_t small_ = 0;
  std::shared_ptr<const mpz_class> big_;
};

/// Floor division: returns (q, r) with a = q*m + r and 0 <= r < m. Requires m > 0.
std::pair<Integer, Integer> floor_divmod(const Integer& a, const Integer& m);

/// Exact division, requires m | a.
Integer exact_div(const Integer& a, const Integer& m);

Integer abs(const Integer& a);
Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

/// Extended gcd: returns (g, s, t) with g = s*a + t*b and g >= 0.
std::tuple<Integer, Integer, Integer> ext_gcd(const Integer& a, const Integer& b);

std::ostream& operator<<(std::ostream& os, const Integer& v);

}  // namespace nilcut

template <>
struct std::hash<nilcut::Integer> {
  std::size_t operator()(const nilcut::Integer& v) const { return v.hash(); }
};

#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <string_view>

#include "nilcut/integer.hpp"

namespace nilcut {

/// A point of the unit circle, e^{2 pi i angle}, with the angle kept modulo 1.
///
/// Exact phases carry a rational angle in [0, 1) and compose exactly. Floating
/// phases exist for irrational-angle demonstrations only; any operation that
/// involves a floating phase produces a floating phase.
class Phase {
 public:
  Phase() = default;  // the identity, exact

  static Phase exact(const mpq_class& angle);
  static Phase fraction(const Integer& num, const Integer& den);
  static Phase approx(double angle);
  /// Parses "p/q", "p", or a decimal (decimal input yields a floating phase).
  static Phase parse(std::string_view text);

  bool is_exact() const { return exact_; }
  bool is_one() const;
  /// Exact angle in [0,1). Throws std::logic_error for floating phases.
  const mpq_class& angle() const;
  double angle_value() const;
  /// Denominator of the exact angle; 0 for floating phases.
  Integer order() const;
  std::complex<double> value() const;

  Phase operator*(const Phase& other) const;
  Phase& operator*=(const Phase& other) { return *this = *this * other; }
  Phase inverse() const;
  Phase pow(const Integer& k) const;
  /// Scales the angle (used for homotopies); angle becomes t*angle mod 1.
  Phase scaled(const mpq_class& t) const;

  /// Exact equality for exact phases; 1e-12 on the circle otherwise.
  friend bool operator==(const Phase& a, const Phase& b);

  /// "p/q" for exact phases, a decimal otherwise.
  std::string to_string() const;

 private:
  mpq_class angle_{0};
  double float_angle_ = 0.0;
  bool exact_ = true;
};

}  // namespace nilcut

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "nilcut/integer.hpp"
#include "nilcut/phase.hpp"

namespace nilcut {

/// The field Q(zeta_n), stored in the power basis 1, zeta, ..., zeta^{phi(n)-1}.
/// Instances are interned per conductor and live for the whole program.
class CyclotomicField {
 public:
  static const CyclotomicField& get(int conductor);

  int conductor() const { return conductor_; }
  int degree() const { return degree_; }
  /// Coefficients of the n-th cyclotomic polynomial, lowest degree first, monic.
  const std::vector<Integer>& modulus() const { return modulus_; }
  /// zeta^k in the power basis, for k in [0, n).
  const std::vector<Integer>& root_power(int k) const { return root_powers_[k]; }

  CyclotomicField(const CyclotomicField&) = delete;
  CyclotomicField& operator=(const CyclotomicField&) = delete;

 private:
  explicit CyclotomicField(int conductor);

  int conductor_;
  int degree_;
  std::vector<Integer> modulus_;
  std::vector<std::vector<Integer>> root_powers_;
};

/// Exact element of a cyclotomic field: (numerators / common denominator) in the
/// power basis of Q(zeta_n). Mixed-conductor arithmetic promotes to the lcm field.
class Cyclotomic {
 public:
  Cyclotomic();  // zero
  Cyclotomic(long long v);  // NOLINT: rational integers
  static Cyclotomic rational(const Integer& num, const Integer& den);
  static Cyclotomic root_of_unity(int n, long long k);
  static Cyclotomic from_phase(const Phase& phase);  // phase must be exact

  int conductor() const { return field_->conductor(); }
  bool is_zero() const;
  bool is_rational() const;
  /// Valid only when is_rational(); returns (num, den).
  std::pair<Integer, Integer> as_rational() const;

  Cyclotomic operator-() const;
  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
  Cyclotomic& operator+=(const Cyclotomic& b) { return *this = *this + b; }
  Cyclotomic& operator-=(const Cyclotomic& b) { return *this = *this - b; }
  Cyclotomic& operator*=(const Cyclotomic& b) { return *this = *this * b; }
  friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) { return a * b.inverse(); }

  Cyclotomic inverse() const;  // throws std::domain_error on zero
  Cyclotomic conj() const;
  /// Galois automorphism zeta -> zeta^k, gcd(k, n) = 1.
  Cyclotomic galois(int k) const;
  Cyclotomic promoted(int conductor) const;  // conductor must be a multiple

  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);

  std::complex<double> to_complex() const;
  std::string to_string() const;

 private:
  Cyclotomic(const CyclotomicField* f, std::vector<Integer> num, Integer den);
  void normalize();

  const CyclotomicField* field_;
  std::vector<Integer> num_;  // size == field_->degree()
  Integer den_{1};
};

}  // namespace nilcut

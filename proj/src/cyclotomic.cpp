#include "nilcut/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nilcut {

namespace {

using Poly = std::vector<Integer>;  // lowest degree first

void trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

/// Exact division by a monic polynomial.
Poly poly_div_monic(Poly a, const Poly& m) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  if (a.size() <= dm) return {};
  Poly q(a.size() - dm);
  for (std::size_t k = a.size(); k-- > dm;) {
    Integer c = a[k];
    q[k - dm] = c;
    if (c.is_zero()) continue;
    for (std::size_t i = 0; i <= dm; ++i) a[k - dm + i] -= c * m[i];
  }
  trim(a);
  if (!a.empty()) throw std::logic_error("cyclotomic polynomial division not exact");
  return q;
}

Poly cyclotomic_poly(int n) {
  Poly p(n + 1);
  p[0] = -1;
  p[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d == 0) p = poly_div_monic(p, cyclotomic_poly(d));
  }
  return p;
}

/// Reduces a polynomial modulo the monic modulus, result has exactly deg(modulus) entries.
std::vector<Integer> reduce(Poly a, const Poly& m) {
  const std::size_t dm = m.size() - 1;
  for (std::size_t k = a.size(); k-- > dm;) {
    Integer c = a[k];
    if (c.is_zero()) continue;
    for (std::size_t i = 0; i <= dm; ++i) a[k - dm + i] -= c * m[i];
  }
  a.resize(dm);
  return a;
}

}  // namespace

CyclotomicField::CyclotomicField(int conductor) : conductor_(conductor) {
  modulus_ = cyclotomic_poly(conductor);
  degree_ = static_cast<int>(modulus_.size()) - 1;
  root_powers_.reserve(conductor);
  Poly cur(1, Integer(1));
  for (int k = 0; k < conductor; ++k) {
    root_powers_.push_back(reduce(cur, modulus_));
    cur = root_powers_.back();
    cur.insert(cur.begin(), Integer(0));  // multiply by x
  }
}

const CyclotomicField& CyclotomicField::get(int conductor) {
  if (conductor < 1) throw std::invalid_argument("cyclotomic conductor must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CyclotomicField>> fields;
  std::lock_guard lock(mu);
  auto& slot = fields[conductor];
  if (!slot) slot.reset(new CyclotomicField(conductor));
  return *slot;
}

Cyclotomic::Cyclotomic() : field_(&CyclotomicField::get(1)), num_(1) {}

Cyclotomic::Cyclotomic(long long v) : field_(&CyclotomicField::get(1)), num_{Integer(v)} {}

Cyclotomic::Cyclotomic(const CyclotomicField* f, std::vector<Integer> num, Integer den)
    : field_(f), num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

Cyclotomic Cyclotomic::rational(const Integer& num, const Integer& den) {
  if (den.is_zero()) throw std::domain_error("rational with zero denominator");
  return Cyclotomic(&CyclotomicField::get(1), {num}, den);
}

Cyclotomic Cyclotomic::root_of_unity(int n, long long k) {
  const auto& f = CyclotomicField::get(n);
  long long r = ((k % n) + n) % n;
  return Cyclotomic(&f, f.root_power(static_cast<int>(r)), Integer(1));
}

Cyclotomic Cyclotomic::from_phase(const Phase& phase) {
  const mpq_class& a = phase.angle();
  mpz_class den = a.get_den();
  if (!mpz_fits_sint_p(den.get_mpz_t())) throw std::overflow_error("phase denominator too large for a cyclotomic field");
  return root_of_unity(static_cast<int>(den.get_si()), mpz_class(a.get_num()).get_si());
}

void Cyclotomic::normalize() {
  if (den_.sign() < 0) {
    den_ = -den_;
    for (auto& c : num_) c = -c;
  }
  Integer g = den_;
  for (const auto& c : num_) {
    if (g == Integer(1)) break;
    if (!c.is_zero()) g = gcd(g, c);
  }
  bool all_zero = true;
  for (const auto& c : num_) all_zero = all_zero && c.is_zero();
  if (all_zero) {
    den_ = 1;
    return;
  }
  if (g != Integer(1)) {
    for (auto& c : num_) c = exact_div(c, g);
    den_ = exact_div(den_, g);
  }
}

bool Cyclotomic::is_zero() const {
  for (const auto& c : num_) {
    if (!c.is_zero()) return false;
  }
  return true;
}

bool Cyclotomic::is_rational() const {
  if (field_->degree() == 1) return true;
  // Q(zeta_n) elements are rational iff they are fixed by every Galois automorphism.
  for (int k = 2; k < field_->conductor(); ++k) {
    if (std::gcd(k, field_->conductor()) == 1 && !(galois(k) == *this)) return false;
  }
  return true;
}

std::pair<Integer, Integer> Cyclotomic::as_rational() const {
  if (!is_rational()) throw std::logic_error("cyclotomic number is not rational");
  if (field_->degree() == 1) {
    // conductor 1 or 2: the basis is {1}.
    return {num_[0], den_};
  }
  // A rational r is represented as r * 1, so only the constant coefficient can be non-zero.
  return {num_[0], den_};
}

Cyclotomic Cyclotomic::promoted(int conductor) const {
  const int n = field_->conductor();
  if (conductor == n) return *this;
  if (conductor % n != 0) throw std::invalid_argument("cannot promote cyclotomic to a non-multiple conductor");
  const auto& f = CyclotomicField::get(conductor);
  const int step = conductor / n;
  std::vector<Integer> out(f.degree());
  for (int i = 0; i < field_->degree(); ++i) {
    if (num_[i].is_zero()) continue;
    const auto& basis = f.root_power((i * step) % conductor);
    for (int j = 0; j < f.degree(); ++j) {
      if (!basis[j].is_zero()) out[j] += num_[i] * basis[j];
    }
  }
  return Cyclotomic(&f, std::move(out), den_);
}

Cyclotomic Cyclotomic::operator-() const {
  std::vector<Integer> out(num_.size());
  for (std::size_t i = 0; i < num_.size(); ++i) out[i] = -num_[i];
  return Cyclotomic(field_, std::move(out), den_);
}

namespace {

int common_conductor(const Cyclotomic& a, const Cyclotomic& b) { return std::lcm(a.conductor(), b.conductor()); }

}  // namespace

Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const int n = common_conductor(a, b);
  if (a.conductor() != n || b.conductor() != n) return a.promoted(n) + b.promoted(n);
  std::vector<Integer> out(a.num_.size());
  if (a.den_ == b.den_) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.num_[i] + b.num_[i];
    return Cyclotomic(a.field_, std::move(out), a.den_);
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.num_[i] * b.den_ + b.num_[i] * a.den_;
  return Cyclotomic(a.field_, std::move(out), a.den_ * b.den_);
}

Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) { return a + (-b); }

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
  if (a.is_zero() || b.is_zero()) return Cyclotomic();
  if (a.field_->degree() == 1 || b.field_->degree() == 1) {
    const Cyclotomic& r = a.field_->degree() == 1 ? a : b;
    const Cyclotomic& o = a.field_->degree() == 1 ? b : a;
    std::vector<Integer> out(o.num_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = o.num_[i] * r.num_[0];
    return Cyclotomic(o.field_, std::move(out), r.den_ * o.den_);
  }
  const int n = common_conductor(a, b);
  if (a.conductor() != n || b.conductor() != n) return a.promoted(n) * b.promoted(n);
  return Cyclotomic(a.field_, reduce(poly_mul(a.num_, b.num_), a.field_->modulus()), a.den_ * b.den_);
}

Cyclotomic Cyclotomic::galois(int k) const {
  const int n = field_->conductor();
  k = ((k % n) + n) % n;
  if (std::gcd(k, n) != 1) throw std::invalid_argument("galois exponent must be coprime to the conductor");
  std::vector<Integer> out(field_->degree());
  for (int i = 0; i < field_->degree(); ++i) {
    if (num_[i].is_zero()) continue;
    const auto& basis = field_->root_power(static_cast<int>((static_cast<long long>(i) * k) % n));
    for (int j = 0; j < field_->degree(); ++j) {
      if (!basis[j].is_zero()) out[j] += num_[i] * basis[j];
    }
  }
  return Cyclotomic(field_, std::move(out), den_);
}

Cyclotomic Cyclotomic::conj() const { return field_->conductor() <= 2 ? *this : galois(-1); }

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  const int n = field_->conductor();
  // a^{-1} = (prod of the other conjugates) / norm(a); the norm is rational.
  Cyclotomic others(1);
  for (int k = 2; k < n; ++k) {
    if (std::gcd(k, n) == 1) others *= galois(k);
  }
  Cyclotomic norm = *this * others;
  auto [p, q] = norm.as_rational();
  return others * rational(q, p);
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
  const int n = common_conductor(a, b);
  if (a.conductor() != n || b.conductor() != n) return a.promoted(n) == b.promoted(n);
  return a.den_ == b.den_ && a.num_ == b.num_;
}

std::complex<double> Cyclotomic::to_complex() const {
  std::complex<double> acc{0.0, 0.0};
  const int n = field_->conductor();
  for (int i = 0; i < field_->degree(); ++i) {
    if (num_[i].is_zero()) continue;
    double t = 2.0 * std::numbers::pi * i / n;
    acc += num_[i].to_double() * std::complex<double>(std::cos(t), std::sin(t));
  }
  return acc / den_.to_double();
}

std::string Cyclotomic::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < field_->degree(); ++i) {
    if (num_[i].is_zero()) continue;
    if (!first) os << (num_[i].sign() > 0 ? " + " : " - ");
    else if (num_[i].sign() < 0) os << "-";
    first = false;
    Integer c = abs(num_[i]);
    if (i == 0) {
      os << c;
    } else {
      if (c != Integer(1)) os << c << "*";
      os << "E(" << field_->conductor() << ")";
      if (i > 1) os << "^" << i;
    }
  }
  if (den_ != Integer(1)) return "(" + os.str() + ")/" + den_.to_string();
  return os.str();
}

}  // namespace nilcut

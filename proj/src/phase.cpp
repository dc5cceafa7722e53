#include "nilcut/phase.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace nilcut {

namespace {

mpq_class reduce_mod_one(mpq_class a) {
  a.canonicalize();
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
  a -= q;
  return a;
}

double wrap(double a) {
  double r = a - std::floor(a);
  return r >= 1.0 ? 0.0 : r;
}

}  // namespace

Phase Phase::exact(const mpq_class& angle) {
  Phase p;
  p.angle_ = reduce_mod_one(angle);
  return p;
}

Phase Phase::fraction(const Integer& num, const Integer& den) {
  if (den.is_zero()) throw std::invalid_argument("phase with zero denominator");
  return exact(mpq_class(num.to_mpz(), den.to_mpz()));
}

Phase Phase::approx(double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("non-finite phase angle");
  Phase p;
  p.exact_ = false;
  p.float_angle_ = wrap(angle);
  return p;
}

Phase Phase::parse(std::string_view text) {
  std::string s(text);
  if (s.find('.') != std::string::npos || s.find('e') != std::string::npos) {
    return approx(std::stod(s));
  }
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad phase '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("bad phase '" + s + "'");
  return exact(q);
}

bool Phase::is_one() const { return exact_ ? angle_ == 0 : (float_angle_ < 1e-12 || float_angle_ > 1 - 1e-12); }

const mpq_class& Phase::angle() const {
  if (!exact_) throw std::logic_error("floating phase has no exact angle");
  return angle_;
}

double Phase::angle_value() const { return exact_ ? angle_.get_d() : float_angle_; }

Integer Phase::order() const { return exact_ ? Integer(mpz_class(angle_.get_den())) : Integer(0); }

std::complex<double> Phase::value() const {
  if (exact_) {
    // Exact quarter turns stay exact in floating point.
    if (angle_ == 0) return {1.0, 0.0};
    if (angle_ == mpq_class(1, 2)) return {-1.0, 0.0};
    if (angle_ == mpq_class(1, 4)) return {0.0, 1.0};
    if (angle_ == mpq_class(3, 4)) return {0.0, -1.0};
  }
  double t = 2.0 * std::numbers::pi * angle_value();
  return {std::cos(t), std::sin(t)};
}

Phase Phase::operator*(const Phase& other) const {
  if (exact_ && other.exact_) return exact(angle_ + other.angle_);
  return approx(angle_value() + other.angle_value());
}

Phase Phase::inverse() const {
  if (exact_) return exact(-angle_);
  return approx(-float_angle_);
}

Phase Phase::pow(const Integer& k) const {
  if (exact_) return exact(angle_ * mpq_class(k.to_mpz()));
  return approx(float_angle_ * k.to_double());
}

Phase Phase::scaled(const mpq_class& t) const {
  if (exact_) return exact(angle_ * t);
  return approx(float_angle_ * t.get_d());
}

bool operator==(const Phase& a, const Phase& b) {
  if (a.exact_ && b.exact_) return a.angle_ == b.angle_;
  double d = wrap(a.angle_value() - b.angle_value());
  return d < 1e-12 || d > 1.0 - 1e-12;
}

std::string Phase::to_string() const {
  if (exact_) return angle_.get_str();
  std::ostringstream os;
  os.precision(17);
  os << float_angle_;
  return os.str();
}

}  // namespace nilcut

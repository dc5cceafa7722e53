#include "nilcut/integer.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

namespace nilcut {

namespace {

bool fits(const mpz_class& v) {
  return mpz_fits_slong_p(v.get_mpz_t()) != 0 && sizeof(long) == sizeof(int64_t);
}

Integer from_mpz(const mpz_class& v) { return Integer(v); }

}  // namespace

Integer::Integer(const mpz_class& v) {
  if (fits(v)) {
    small_ = v.get_si();
  } else {
    big_ = std::make_shared<const mpz_class>(v);
  }
}

Integer Integer::parse(std::string_view text) {
  mpz_class v;
  if (text.empty() || v.set_str(std::string(text), 10) != 0) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return Integer(v);
}

int64_t Integer::to_int64() const {
  if (big_) throw std::overflow_error("integer does not fit in 64 bits: " + to_string());
  return small_;
}

mpz_class Integer::to_mpz() const {
  if (big_) return *big_;
  return mpz_class(static_cast<long>(small_));
}

double Integer::to_double() const { return big_ ? big_->get_d() : static_cast<double>(small_); }

std::string Integer::to_string() const { return big_ ? big_->get_str() : std::to_string(small_); }

int Integer::sign() const {
  if (big_) return sgn(*big_);
  return (small_ > 0) - (small_ < 0);
}

Integer Integer::operator-() const {
  if (!big_ && small_ != std::numeric_limits<int64_t>::min()) return Integer(static_cast<long long>(-small_));
  return from_mpz(-to_mpz());
}

Integer operator+(const Integer& a, const Integer& b) {
  int64_t r;
  if (!a.big_ && !b.big_ && !__builtin_add_overflow(a.small_, b.small_, &r)) return Integer(static_cast<long long>(r));
  return from_mpz(a.to_mpz() + b.to_mpz());
}

Integer operator-(const Integer& a, const Integer& b) {
  int64_t r;
  if (!a.big_ && !b.big_ && !__builtin_sub_overflow(a.small_, b.small_, &r)) return Integer(static_cast<long long>(r));
  return from_mpz(a.to_mpz() - b.to_mpz());
}

Integer operator*(const Integer& a, const Integer& b) {
  int64_t r;
  if (!a.big_ && !b.big_ && !__builtin_mul_overflow(a.small_, b.small_, &r)) return Integer(static_cast<long long>(r));
  return from_mpz(a.to_mpz() * b.to_mpz());
}

bool operator==(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return a.small_ == b.small_;
  if (a.big_ && b.big_) return cmp(*a.big_, *b.big_) == 0;
  return false;  // representations are canonical
}

std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
  int c = cmp(a.to_mpz(), b.to_mpz());
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::size_t Integer::hash() const {
  if (!big_) return std::hash<int64_t>{}(small_);
  return std::hash<std::string>{}(big_->get_str(16));
}

std::pair<Integer, Integer> floor_divmod(const Integer& a, const Integer& m) {
  if (m.sign() <= 0) throw std::invalid_argument("floor_divmod: modulus must be positive");
  if (a.is_small() && m.is_small()) {
    int64_t x = a.to_int64(), y = m.to_int64();
    int64_t q = x / y, r = x % y;
    if (r < 0) {
      r += y;
      --q;
    }
    return {Integer(static_cast<long long>(q)), Integer(static_cast<long long>(r))};
  }
  mpz_class q, r;
  mpz_class am = a.to_mpz(), mm = m.to_mpz();
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), am.get_mpz_t(), mm.get_mpz_t());
  return {Integer(q), Integer(r)};
}

Integer exact_div(const Integer& a, const Integer& m) {
  if (a.is_small() && m.is_small() && m.to_int64() != -1) return Integer(static_cast<long long>(a.to_int64() / m.to_int64()));
  mpz_class q;
  mpz_class am = a.to_mpz(), mm = m.to_mpz();
  mpz_divexact(q.get_mpz_t(), am.get_mpz_t(), mm.get_mpz_t());
  return Integer(q);
}

Integer abs(const Integer& a) { return a.sign() < 0 ? -a : a; }

Integer gcd(const Integer& a, const Integer& b) {
  if (a.is_small() && b.is_small()) {
    uint64_t x = a.to_int64() < 0 ? 0 - static_cast<uint64_t>(a.to_int64()) : static_cast<uint64_t>(a.to_int64());
    uint64_t y = b.to_int64() < 0 ? 0 - static_cast<uint64_t>(b.to_int64()) : static_cast<uint64_t>(b.to_int64());
    while (y != 0) {
      uint64_t t = x % y;
      x = y;
      y = t;
    }
    if (x <= static_cast<uint64_t>(std::numeric_limits<int64_t>::max())) return Integer(static_cast<long long>(x));
  }
  mpz_class g;
  mpz_class am = a.to_mpz(), bm = b.to_mpz();
  mpz_gcd(g.get_mpz_t(), am.get_mpz_t(), bm.get_mpz_t());
  return Integer(g);
}

Integer lcm(const Integer& a, const Integer& b) {
  if (a.is_zero() || b.is_zero()) return Integer(0);
  return abs(exact_div(a, gcd(a, b)) * b);
}

std::tuple<Integer, Integer, Integer> ext_gcd(const Integer& a, const Integer& b) {
  mpz_class g, s, t;
  mpz_class am = a.to_mpz(), bm = b.to_mpz();
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), am.get_mpz_t(), bm.get_mpz_t());
  return {Integer(g), Integer(s), Integer(t)};
}

std::ostream& operator<<(std::ostream& os, const Integer& v) { return os << v.to_string(); }

}  // namespace nilcut

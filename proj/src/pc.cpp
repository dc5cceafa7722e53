#include "nilcut/pc.hpp"

#include <sstream>
#include <unordered_set>

#include "nilcut/error.hpp"
#include "nilcut/induced.hpp"

namespace nilcut {

// ---------------------------------------------------------------- GroupElement

bool GroupElement::is_identity() const {
  for (const auto& e : exps_) {
    if (!e.is_zero()) return false;
  }
  return true;
}

std::size_t GroupElement::depth() const {
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (!exps_[i].is_zero()) return i;
  }
  return exps_.size();
}

GroupElement GroupElement::operator*(const GroupElement& other) const { return pres_->multiply(*this, other); }
GroupElement GroupElement::inverse() const { return pres_->inverse(*this); }
GroupElement GroupElement::pow(const Integer& k) const { return pres_->power(*this, k); }

std::size_t GroupElement::hash() const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const auto& e : exps_) h = (h ^ e.hash()) * 0x100000001b3ULL;
  return h;
}

std::string GroupElement::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < exps_.size(); ++i) os << (i ? "," : "") << exps_[i];
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------- construction

namespace {

bool in_range(const Integer& e, const PcPresentation::RelativeOrder& r) {
  if (!r) return true;
  return e.sign() >= 0 && e < *r;
}

}  // namespace

std::shared_ptr<const PcPresentation> PcPresentation::create(Relations rel, std::uint64_t step_budget) {
  std::shared_ptr<PcPresentation> p(new PcPresentation());
  p->rel_ = std::move(rel);
  p->budget_ = step_budget;
  p->validate_and_complete();
  return p;
}

Exponents PcPresentation::unit(std::size_t j) const {
  Exponents e(size());
  e[j] = 1;
  return e;
}

void PcPresentation::validate_and_complete() {
  orders_ = rel_.relative_orders;
  const std::size_t n = orders_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (orders_[i] && *orders_[i] < Integer(2)) {
      throw Error(ErrorCode::kInvalidArgument, "relative order of generator " + std::to_string(i) + " must be >= 2 or infinite");
    }
  }
  names_ = rel_.names;
  if (!names_.empty() && names_.size() != n) throw Error(ErrorCode::kInvalidArgument, "generator names do not match generator count");
  if (names_.empty()) {
    for (std::size_t i = 0; i < n; ++i) names_.push_back("g" + std::to_string(i));
  }

  auto check_vec = [&](const Exponents& v, const std::string& what) {
    if (v.size() != n) throw Error(ErrorCode::kInvalidArgument, what + ": exponent vector has wrong length");
    for (std::size_t k = 0; k < n; ++k) {
      if (!in_range(v[k], orders_[k])) throw Error(ErrorCode::kInvalidArgument, what + ": exponent out of normal-form range");
    }
  };

  powers_.assign(n, Exponents(n));
  for (const auto& [i, v] : rel_.powers) {
    const std::string what = "power relation " + std::to_string(i);
    if (i < 0 || static_cast<std::size_t>(i) >= n) throw Error(ErrorCode::kInvalidArgument, what + ": no such generator");
    if (!orders_[i]) throw Error(ErrorCode::kInvalidArgument, what + ": generator has infinite relative order");
    check_vec(v, what);
    for (int k = 0; k <= i; ++k) {
      if (!v[k].is_zero()) throw Error(ErrorCode::kInvalidArgument, what + ": must involve only later generators");
    }
    powers_[i] = v;
  }

  auto check_conj = [&](const Exponents& v, std::size_t j, const std::string& what) {
    check_vec(v, what);
    for (std::size_t k = 0; k < j; ++k) {
      if (!v[k].is_zero()) throw Error(ErrorCode::kInvalidArgument, what + ": must involve only g_j and later generators");
    }
    const Integer& lead = v[j];
    if (orders_[j]) {
      if (gcd(lead, *orders_[j]) != Integer(1)) throw Error(ErrorCode::kInvalidArgument, what + ": leading exponent must be a unit");
    } else if (abs(lead) != Integer(1)) {
      throw Error(ErrorCode::kInvalidArgument, what + ": leading exponent must be +-1 on an infinite factor");
    }
  };

  conj_fwd_.assign(n, std::vector<Exponents>(n));
  conj_inv_.assign(n, std::vector<Exponents>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) conj_fwd_[i][j] = unit(j);
  }
  for (const auto& [ij, v] : rel_.conjugates) {
    auto [i, j] = ij;
    const std::string what = "conjugate relation (" + std::to_string(i) + "," + std::to_string(j) + ")";
    if (i < 0 || j <= i || static_cast<std::size_t>(j) >= n) throw Error(ErrorCode::kInvalidArgument, what + ": need 0 <= i < j < n");
    check_conj(v, j, what);
    conj_fwd_[i][j] = v;
  }
  for (const auto& [ij, v] : rel_.inverse_conjugates) {
    auto [i, j] = ij;
    const std::string what = "inverse conjugate relation (" + std::to_string(i) + "," + std::to_string(j) + ")";
    if (i < 0 || j <= i || static_cast<std::size_t>(j) >= n) throw Error(ErrorCode::kInvalidArgument, what + ": need 0 <= i < j < n");
    check_conj(v, j, what);
  }

  commutes_.assign(n, std::vector<char>(n, 1));
  central_in_tail_.assign(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      commutes_[i][j] = commutes_[j][i] = conj_fwd_[i][j] == unit(j);
      if (!commutes_[i][j]) central_in_tail_[i] = 0;
    }
  }

  // Inverse images, deepest generator first: conjugation by g_i only needs
  // arithmetic in G_{i+1}, whose relations are complete by then.
  Budget b{budget_};
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t j = ii + 1; j < n; ++j) {
      if (commutes_[ii][j]) {
        conj_inv_[ii][j] = unit(j);
        continue;
      }
      auto given = rel_.inverse_conjugates.find({static_cast<int>(ii), static_cast<int>(j)});
      if (given != rel_.inverse_conjugates.end()) {
        if (conj_by_gen(given->second, ii, +1, b) != unit(j)) {
          throw Error(ErrorCode::kInconsistent, "inverse conjugate relation (" + std::to_string(ii) + "," + std::to_string(j) +
                                                    ") disagrees with the conjugate relation");
        }
        conj_inv_[ii][j] = given->second;
      } else {
        conj_inv_[ii][j] = solve_preimage(ii, unit(j), b);
      }
    }
  }
}

// ---------------------------------------------------------------- collection

void PcPresentation::tick(Budget& b) const {
  if (b.left == 0) {
    throw Error(ErrorCode::kInconsistent, "collection exceeded the step budget of " + std::to_string(budget_) +
                                              " rewrites; the presentation is probably inconsistent");
  }
  --b.left;
}

Exponents PcPresentation::mul(Exponents u, const Exponents& v, Budget& b) const {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!v[j].is_zero()) mul_gen_power(u, j, v[j], b);
  }
  return u;
}

void PcPresentation::mul_gen_power(Exponents& w, std::size_t j, const Integer& e, Budget& b) const {
  if (e.is_zero()) return;
  tick(b);
  const std::size_t n = size();
  bool has_suffix = false;
  for (std::size_t k = j + 1; k < n && !has_suffix; ++k) has_suffix = !w[k].is_zero();

  // w = prefix * g_j^{w_j} * S  and  S * g_j^e = g_j^e * S^{g_j^e}.
  Exponents tail;
  if (has_suffix) {
    Exponents s(n);
    for (std::size_t k = j + 1; k < n; ++k) s[k] = w[k];
    if (!central_in_tail_[j]) s = conj_by_gen_power(s, j, e, b);
    tail = std::move(s);
  }

  Integer k = w[j] + e;
  if (orders_[j]) {
    auto [q, rem] = floor_divmod(k, *orders_[j]);
    w[j] = rem;
    if (!q.is_zero()) {
      bool trivial_power = true;
      for (const auto& x : powers_[j]) trivial_power = trivial_power && x.is_zero();
      if (!trivial_power) {
        Exponents pq = pow_exps(powers_[j], q, b);
        tail = has_suffix ? mul(std::move(pq), tail, b) : std::move(pq);
        has_suffix = true;
      }
    }
  } else {
    w[j] = k;
  }
  for (std::size_t t = j + 1; t < n; ++t) w[t] = has_suffix ? tail[t] : Integer(0);
}

Exponents PcPresentation::conj_by_gen(const Exponents& s, std::size_t j, int sign, Budget& b) const {
  const std::size_t n = size();
  Exponents result(n);
  const auto& images = sign > 0 ? conj_fwd_[j] : conj_inv_[j];
  for (std::size_t k = j + 1; k < n; ++k) {
    if (s[k].is_zero()) continue;
    if (commutes_[j][k]) {
      mul_gen_power(result, k, s[k], b);
    } else {
      result = mul(std::move(result), pow_exps(images[k], s[k], b), b);
    }
  }
  return result;
}

Exponents PcPresentation::apply_images(const std::vector<Exponents>& images, std::size_t j, const Exponents& s,
                                       Budget& b) const {
  Exponents result(size());
  for (std::size_t k = j + 1; k < size(); ++k) {
    if (!s[k].is_zero()) result = mul(std::move(result), pow_exps(images[k], s[k], b), b);
  }
  return result;
}

Exponents PcPresentation::conj_by_gen_power(Exponents s, std::size_t j, const Integer& e, Budget& b) const {
  const int sign = e.sign();
  Integer count = abs(e);
  if (count <= Integer(8)) {
    for (; count.sign() > 0; count -= Integer(1)) s = conj_by_gen(s, j, sign, b);
    return s;
  }
  // Conjugation by g_j^e as the e-th power of an automorphism of G_{j+1},
  // represented by the images of g_{j+1}, ..., g_{n-1}.
  std::vector<Exponents> base = sign > 0 ? conj_fwd_[j] : conj_inv_[j];
  std::vector<Exponents> acc(size());
  for (std::size_t k = j + 1; k < size(); ++k) acc[k] = unit(k);
  while (count.sign() > 0) {
    auto [q, r] = floor_divmod(count, Integer(2));
    if (!r.is_zero()) {
      for (std::size_t k = j + 1; k < size(); ++k) acc[k] = apply_images(base, j, acc[k], b);
    }
    count = q;
    if (count.sign() > 0) {
      std::vector<Exponents> sq(size());
      for (std::size_t k = j + 1; k < size(); ++k) sq[k] = apply_images(base, j, base[k], b);
      base = std::move(sq);
    }
  }
  return apply_images(acc, j, s, b);
}

Exponents PcPresentation::pow_exps(const Exponents& a, Integer k, Budget& b) const {
  const std::size_t n = size();
  std::size_t nonzero = 0, where = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!a[i].is_zero()) {
      ++nonzero;
      where = i;
    }
  }
  if (nonzero == 0 || k.is_zero()) return Exponents(n);
  if (nonzero == 1) {
    Exponents r(n);
    mul_gen_power(r, where, a[where] * k, b);
    return r;
  }
  Exponents base = k.sign() < 0 ? inv_exps(a, b) : a;
  k = abs(k);
  Exponents result(n);
  while (k.sign() > 0) {
    auto [q, r] = floor_divmod(k, Integer(2));
    if (!r.is_zero()) result = mul(std::move(result), base, b);
    k = q;
    if (k.sign() > 0) base = mul(base, base, b);
  }
  return result;
}

Exponents PcPresentation::inv_exps(const Exponents& a, Budget& b) const {
  Exponents r(size());
  for (std::size_t k = size(); k-- > 0;) {
    if (!a[k].is_zero()) mul_gen_power(r, k, -a[k], b);
  }
  return r;
}

Exponents PcPresentation::solve_preimage(std::size_t i, Exponents target, Budget& b) const {
  // Finds w in G_{i+1} with g_i^{-1} w g_i = target, peeling one depth at a time.
  const std::size_t n = size();
  Exponents w(n);
  for (;;) {
    std::size_t d = i + 1;
    while (d < n && target[d].is_zero()) ++d;
    if (d == n) return w;
    const Integer& lead = conj_fwd_[i][d][d];
    Integer k;
    if (orders_[d]) {
      auto [g, s, t] = ext_gcd(lead, *orders_[d]);
      (void)g;
      (void)t;
      k = floor_divmod(s * target[d], *orders_[d]).second;
    } else {
      k = lead == Integer(1) ? target[d] : -target[d];
    }
    mul_gen_power(w, d, k, b);
    Exponents img = pow_exps(conj_fwd_[i][d], k, b);
    target = mul(inv_exps(img, b), target, b);
    if (!target[d].is_zero()) throw Error(ErrorCode::kInternal, "preimage solve failed to clear a leading exponent");
  }
}

// ---------------------------------------------------------------- public API

bool PcPresentation::is_finite() const {
  for (const auto& r : orders_) {
    if (!r) return false;
  }
  return true;
}

Integer PcPresentation::finite_order_product() const {
  Integer p(1);
  for (const auto& r : orders_) {
    if (r) p *= *r;
  }
  return p;
}

GroupElement PcPresentation::identity() const { return GroupElement(this, Exponents(size())); }

GroupElement PcPresentation::generator(std::size_t i) const {
  if (i >= size()) throw Error(ErrorCode::kInvalidArgument, "no generator " + std::to_string(i));
  return GroupElement(this, unit(i));
}

GroupElement PcPresentation::element(Exponents exps) const {
  if (exps.size() != size()) throw Error(ErrorCode::kInvalidArgument, "exponent vector has wrong length");
  for (std::size_t k = 0; k < size(); ++k) {
    if (!in_range(exps[k], orders_[k])) throw Error(ErrorCode::kInvalidArgument, "exponent vector is not in normal form");
  }
  return GroupElement(this, std::move(exps));
}

GroupElement PcPresentation::collect(const Exponents& exps) const {
  if (exps.size() != size()) throw Error(ErrorCode::kInvalidArgument, "exponent vector has wrong length");
  Budget b{budget_};
  Exponents w(size());
  for (std::size_t j = 0; j < size(); ++j) mul_gen_power(w, j, exps[j], b);
  return GroupElement(this, std::move(w));
}

void PcPresentation::check_element(const GroupElement& a) const {
  if (a.presentation_ptr() != this) throw Error(ErrorCode::kInvalidArgument, "element belongs to a different presentation");
}

GroupElement PcPresentation::multiply(const GroupElement& a, const GroupElement& b) const {
  check_element(a);
  check_element(b);
  Budget budget{budget_};
  return GroupElement(this, mul(a.exponents(), b.exponents(), budget));
}

GroupElement PcPresentation::inverse(const GroupElement& a) const {
  check_element(a);
  Budget budget{budget_};
  return GroupElement(this, inv_exps(a.exponents(), budget));
}

GroupElement PcPresentation::power(const GroupElement& a, const Integer& k) const {
  check_element(a);
  Budget budget{budget_};
  return GroupElement(this, pow_exps(a.exponents(), k, budget));
}

GroupElement PcPresentation::commutator(const GroupElement& a, const GroupElement& b) const {
  return multiply(inverse(multiply(b, a)), multiply(a, b));
}

GroupElement PcPresentation::conjugate(const GroupElement& a, const GroupElement& b) const {
  return multiply(multiply(inverse(b), a), b);
}

bool PcPresentation::generators_commute(std::size_t i, std::size_t j) const { return commutes_[i][j]; }

std::vector<GroupElement> PcPresentation::ball(int radius) const {
  if (radius < 0) throw Error(ErrorCode::kInvalidArgument, "ball radius must be non-negative");
  std::vector<GroupElement> steps;
  for (std::size_t i = 0; i < size(); ++i) {
    steps.push_back(generator(i));
    GroupElement inv = inverse(generator(i));
    if (inv != steps.back()) steps.push_back(inv);
  }
  std::vector<GroupElement> out{identity()};
  std::unordered_set<GroupElement, GroupElementHash> seen{identity()};
  std::size_t layer_begin = 0;
  for (int r = 0; r < radius; ++r) {
    const std::size_t layer_end = out.size();
    for (std::size_t idx = layer_begin; idx < layer_end; ++idx) {
      for (const auto& s : steps) {
        GroupElement g = multiply(out[idx], s);
        if (seen.insert(g).second) out.push_back(std::move(g));
      }
    }
    layer_begin = layer_end;
    if (layer_begin == out.size()) break;
  }
  return out;
}

std::vector<GroupElement> PcPresentation::enumerate() const {
  if (!is_finite()) throw Error(ErrorCode::kPrecondition, "cannot enumerate an infinite group");
  std::vector<GroupElement> out;
  Exponents e(size());
  for (;;) {
    out.emplace_back(this, e);
    std::size_t k = size();
    while (k-- > 0) {
      e[k] += Integer(1);
      if (e[k] < *orders_[k]) break;
      e[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

// ---------------------------------------------------------------- consistency

ConsistencyReport PcPresentation::check_consistency() const {
  ConsistencyReport rep;
  const std::size_t n = size();
  auto g = [&](std::size_t i) { return generator(i); };
  auto gpow = [&](std::size_t i, const Integer& e) { return collect([&] {
                                                       Exponents x(n);
                                                       x[i] = e;
                                                       return x;
                                                     }()); };
  auto fail = [&](const std::string& what, const GroupElement& lhs, const GroupElement& rhs) {
    rep.consistent = false;
    rep.witness = what + ": " + lhs.to_string() + " != " + rhs.to_string();
  };
  auto pw = [&](std::size_t i) { return GroupElement(this, powers_[i]); };

  try {
    // Overlaps of the rewriting rules g_j g_i -> g_i C_ij (i < j) and g_i^{m_i} -> P_i.
    for (std::size_t i = 0; i < n && rep.consistent; ++i) {
      for (std::size_t j = i + 1; j < n && rep.consistent; ++j) {
        for (std::size_t k = j + 1; k < n && rep.consistent; ++k) {
          GroupElement lhs = multiply(multiply(g(k), g(j)), g(i));
          GroupElement rhs = multiply(g(k), multiply(g(j), g(i)));
          if (lhs != rhs) fail("overlap g" + std::to_string(k) + " g" + std::to_string(j) + " g" + std::to_string(i), lhs, rhs);
        }
      }
    }
    for (std::size_t i = 0; i < n && rep.consistent; ++i) {
      for (std::size_t j = i + 1; j < n && rep.consistent; ++j) {
        if (orders_[j]) {
          GroupElement lhs = multiply(pw(j), g(i));
          GroupElement rhs = multiply(gpow(j, *orders_[j] - Integer(1)), multiply(g(j), g(i)));
          if (lhs != rhs) fail("power overlap g" + std::to_string(j) + "^r g" + std::to_string(i), lhs, rhs);
        }
        if (rep.consistent && orders_[i]) {
          GroupElement lhs = multiply(g(j), pw(i));
          GroupElement rhs = multiply(multiply(g(j), g(i)), gpow(i, *orders_[i] - Integer(1)));
          if (lhs != rhs) fail("power overlap g" + std::to_string(j) + " g" + std::to_string(i) + "^r", lhs, rhs);
        }
        if (rep.consistent && !orders_[i]) {
          GroupElement lhs = multiply(multiply(g(j), gpow(i, -1)), g(i));
          if (lhs != g(j)) fail("inverse overlap g" + std::to_string(j) + " g" + std::to_string(i) + "^-1 g" + std::to_string(i), lhs, g(j));
        }
        if (rep.consistent && !orders_[j]) {
          GroupElement lhs = multiply(gpow(j, -1), multiply(g(j), g(i)));
          if (lhs != g(i)) fail("inverse overlap g" + std::to_string(j) + "^-1 g" + std::to_string(j) + " g" + std::to_string(i), lhs, g(i));
        }
      }
    }
    for (std::size_t i = 0; i < n && rep.consistent; ++i) {
      if (!orders_[i]) continue;
      GroupElement lhs = multiply(g(i), pw(i));
      GroupElement rhs = multiply(pw(i), g(i));
      if (lhs != rhs) fail("power overlap g" + std::to_string(i) + " g" + std::to_string(i) + "^r", lhs, rhs);
    }
  } catch (const Error& e) {
    rep.consistent = false;
    rep.witness = e.what();
  }
  if (!rep.consistent) return rep;

  // Lower central descent: gamma_{k+1} = [gamma_k, G], at most n steps.
  std::vector<GroupElement> gens;
  for (std::size_t i = 0; i < n; ++i) gens.push_back(g(i));
  InducedSequence gamma = InducedSequence::generated_by(*this, gens);
  for (int k = 1; k <= static_cast<int>(n) + 1; ++k) {
    if (gamma.is_trivial()) {
      rep.nilpotent = true;
      rep.nilpotency_class = k - 1;
      return rep;
    }
    if (k == static_cast<int>(n) + 1) break;
    std::vector<GroupElement> comms;
    for (const auto& a : gamma.generators()) {
      for (const auto& y : gens) {
        GroupElement c = commutator(a, y);
        if (!c.is_identity()) comms.push_back(c);
      }
    }
    InducedSequence next = InducedSequence::normal_closure(*this, comms);
    if (next.generators() == gamma.generators()) {
      rep.witness = "lower central series stabilises at a non-trivial subgroup generated by " +
                    gamma.generators().front().to_string() + " (gamma_" + std::to_string(k) + " = gamma_" +
                    std::to_string(k + 1) + ")";
      return rep;
    }
    gamma = std::move(next);
  }
  rep.witness = "lower central series does not reach the trivial group within " + std::to_string(n) + " steps";
  return rep;
}

}  // namespace nilcut

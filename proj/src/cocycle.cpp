#include "nilcut/cocycle.hpp"

#include <Eigen/Dense>

#include "nilcut/error.hpp"

namespace nilcut {

// ---------------------------------------------------------------- characters

namespace {

std::vector<Integer> prime_factors(Integer n) {
  std::vector<Integer> out;
  for (Integer p(2); p * p <= n; p += Integer(1)) {
    auto [q, r] = floor_divmod(n, p);
    if (!r.is_zero()) continue;
    out.push_back(p);
    while (floor_divmod(n, p).second.is_zero()) n = floor_divmod(n, p).first;
  }
  if (n > Integer(1)) out.push_back(n);
  return out;
}

std::optional<Integer> element_order(const PcPresentation& g, const GroupElement& x) {
  Integer o = g.finite_order_product();
  if (!g.power(x, o).is_identity()) return std::nullopt;
  for (const auto& p : prime_factors(o)) {
    while (floor_divmod(o, p).second.is_zero() && g.power(x, exact_div(o, p)).is_identity()) o = exact_div(o, p);
  }
  return o;
}

}  // namespace

std::vector<std::optional<Integer>> induced_generator_orders(const Subgroup& n) {
  std::vector<std::optional<Integer>> out;
  for (const auto& t : n.generators()) out.push_back(element_order(*n.ambient(), t));
  return out;
}

Character::Character(Subgroup domain, std::vector<Phase> free_angles, std::vector<Integer> torsion)
    : domain_(std::move(domain)), free_(std::move(free_angles)), torsion_(std::move(torsion)) {
  orders_ = induced_generator_orders(domain_);
  build_values();
}

Character Character::trivial(Subgroup domain) {
  auto orders = induced_generator_orders(domain);
  std::size_t nfree = 0;
  for (const auto& o : orders) nfree += !o;
  return Character(std::move(domain), std::vector<Phase>(nfree), std::vector<Integer>(orders.size() - nfree));
}

void Character::build_values() {
  std::size_t nfree = 0;
  for (const auto& o : orders_) nfree += !o;
  if (free_.size() != nfree || torsion_.size() != orders_.size() - nfree) {
    throw Error(ErrorCode::kInvalidArgument, "character needs " + std::to_string(nfree) + " free angles and " +
                                                 std::to_string(orders_.size() - nfree) + " torsion indices");
  }
  values_.clear();
  std::size_t fi = 0, ti = 0;
  for (const auto& o : orders_) {
    if (o) {
      values_.push_back(Phase::fraction(floor_divmod(torsion_[ti++], *o).second, *o));
    } else {
      values_.push_back(free_[fi++]);
    }
  }
  // The values define a homomorphism iff they respect every relation of N.
  auto h = domain_.adapted_presentation();
  auto word = [&](const Exponents& e) {
    Phase p;
    for (std::size_t j = 0; j < e.size(); ++j) p *= values_[j].pow(e[j]);
    return p;
  };
  for (std::size_t i = 0; i < h->size(); ++i) {
    if (const auto& m = h->relative_order(i)) {
      auto it = h->relations().powers.find(static_cast<int>(i));
      Phase rhs = it != h->relations().powers.end() ? word(it->second) : Phase();
      if (!(values_[i].pow(*m) == rhs)) {
        throw Error(ErrorCode::kPrecondition, "character values violate the power relation of generator " + std::to_string(i) + " of N");
      }
    }
  }
  for (const auto& [ij, c] : h->relations().conjugates) {
    if (!(values_[ij.second] == word(c))) {
      throw Error(ErrorCode::kPrecondition, "character values violate a conjugation relation of N");
    }
  }
}

bool Character::is_exact() const {
  for (const auto& v : values_) {
    if (!v.is_exact()) return false;
  }
  return true;
}

Phase Character::operator()(const GroupElement& n) const {
  if (!domain_.contains(n)) throw Error(ErrorCode::kPrecondition, "element " + n.to_string() + " is outside the character domain");
  Exponents e = domain_.coordinates(n);
  Phase out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e[i].is_zero()) out *= values_[i].pow(e[i]);
  }
  return out;
}

Character Character::scaled(const mpq_class& t) const {
  std::vector<Phase> f;
  for (const auto& p : free_) f.push_back(p.scaled(t));
  return Character(domain_, std::move(f), torsion_);
}

// ---------------------------------------------------------------- positive definite functions

std::complex<double> PositiveDefiniteFn::value(const GroupElement& g) const {
  auto v = rule_(g);
  return v ? v->value() : std::complex<double>(0.0, 0.0);
}

GramReport gram_check(const PositiveDefiniteFn& phi, const std::vector<GroupElement>& window, double tol) {
  GramReport rep;
  rep.window = window.size();
  rep.tolerance = tol;
  auto at_e = phi(phi.group()->identity());
  rep.normalized = at_e && at_e->is_one();
  const auto& g = *phi.group();
  const Eigen::Index n = static_cast<Eigen::Index>(window.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const GroupElement si = g.inverse(window[i]);
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = phi.value(g.multiply(si, window[j]));
  }
  if (n == 0) return rep;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  return rep;
}

PositiveDefiniteFn trivial_extension(const Character& omega, PresentationPtr g) {
  if (omega.domain().ambient() != g) throw Error(ErrorCode::kInvalidArgument, "character lives on a different group");
  if (!omega.domain().is_central()) {
    // A normal domain with a conjugation-invariant character is also fine.
    const Subgroup& n = omega.domain();
    bool invariant = n.is_normal();
    for (const auto& t : n.generators()) {
      for (std::size_t i = 0; i < g->size() && invariant; ++i) {
        const GroupElement gi = g->generator(i);
        invariant = omega(g->conjugate(t, gi)) == omega(t) && omega(g->conjugate(t, g->inverse(gi))) == omega(t);
      }
    }
    if (!invariant) throw Error(ErrorCode::kPrecondition, "character domain is not central and the character is not conjugation invariant");
  }
  auto w = std::make_shared<const Character>(omega);
  return PositiveDefiniteFn(
      std::move(g),
      [w](const GroupElement& x) -> std::optional<Phase> {
        if (!w->domain().contains(x)) return std::nullopt;
        return (*w)(x);
      },
      "trivial extension of a character of N");
}

// ---------------------------------------------------------------- cocycles

Cocycle2::Cocycle2(PresentationPtr base, Rule rule, std::string description)
    : base_(std::move(base)), rule_(std::move(rule)), description_(std::move(description)) {}

Cocycle2 Cocycle2::perturbed(const GroupElement& x, const GroupElement& y, const Phase& delta) const {
  Rule inner = rule_;
  Cocycle2 out(base_,
               [inner, x, y, delta](const GroupElement& a, const GroupElement& b) {
                 Phase v = inner(a, b);
                 return (a == x && b == y) ? v * delta : v;
               },
               description_ + ", perturbed at (" + x.to_string() + "," + y.to_string() + ")");
  return out;
}

std::vector<Triple> sample_triples(const PcPresentation& p, int radius, std::size_t count, std::mt19937_64& rng) {
  std::vector<GroupElement> ball;
  bounded_ball(p, radius, 200'000, ball);
  std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
  std::vector<Triple> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back({ball[pick(rng)], ball[pick(rng)], ball[pick(rng)]});
  return out;
}

CocycleReport verify_cocycle(const Cocycle2& sigma, const std::vector<Triple>& samples) {
  CocycleReport rep;
  const auto& q = *sigma.base();
  const GroupElement e = q.identity();
  for (const auto& tr : samples) {
    const auto& [x, y, z] = tr;
    Phase lhs = sigma(x, y) * sigma(q.multiply(x, y), z);
    Phase rhs = sigma(y, z) * sigma(x, q.multiply(y, z));
    rep.exact = rep.exact && lhs.is_exact() && rhs.is_exact();
    ++rep.checked;
    if (!(lhs == rhs)) rep.failures.push_back({tr, lhs, rhs});
    for (const auto& w : tr) {
      if (!sigma(e, w).is_one() || !sigma(w, e).is_one()) rep.normalized = false;
    }
  }
  return rep;
}

Cocycle2 build_cocycle(const Character& omega, const QuotientMap& q) {
  if (!omega.domain().same_as(q.kernel())) {
    throw Error(ErrorCode::kPrecondition, "quotient kernel differs from the character domain");
  }
  auto w = std::make_shared<const Character>(omega);
  auto qm = std::make_shared<const QuotientMap>(q);
  Cocycle2 sigma(
      q.quotient(),
      [w, qm](const GroupElement& x, const GroupElement& y) {
        const auto& g = *qm->ambient();
        GroupElement n = g.multiply(g.multiply(qm->section(x), qm->section(y)), g.inverse(qm->section(x * y)));
        if (!w->domain().contains(n)) {
          throw Error(ErrorCode::kVerification, "c(xN)c(yN)c(xyN)^-1 = " + n.to_string() + " is outside N; the section is broken");
        }
        return (*w)(n);
      },
      "omega(c(x)c(y)c(xy)^-1) with the " + q.section_name() + " section");
  sigma.prov_ = Cocycle2::Provenance{w, qm, std::nullopt};

  std::mt19937_64 rng(0x5eed);
  auto rep = verify_cocycle(sigma, sample_triples(*q.quotient(), 3, 40, rng));
  if (!rep.ok()) throw Error(ErrorCode::kVerification, "built cocycle fails the cocycle identity on its build sample");
  return sigma;
}

Cocycle2 homotopy_path(const Cocycle2& sigma, const mpq_class& t) {
  if (t < 0 || t > 1) throw Error(ErrorCode::kInvalidArgument, "homotopy parameter must lie in [0, 1]");
  if (!sigma.provenance()) throw Error(ErrorCode::kPrecondition, "cocycle has no (character, section) provenance");
  const auto& prov = *sigma.provenance();
  const Character& omega = *prov.omega;
  if (!omega.torsion_free_domain()) {
    throw Error(ErrorCode::kPrecondition, "N has torsion; choose a torsion-free central subgroup N of finite index instead");
  }
  auto h = omega.domain().adapted_presentation();
  for (std::size_t i = 0; i < h->size(); ++i) {
    if (h->relative_order(i)) {
      throw Error(ErrorCode::kNotAdaptable, "induced sequence of N has a finite relative order; re-present N on free generators");
    }
  }
  Cocycle2 out = build_cocycle(omega.scaled(t), *prov.quotient);
  out.prov_->t = t;
  out.description_ += ", homotopy t=" + t.get_str();
  return out;
}

}  // namespace nilcut

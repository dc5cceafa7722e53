#include "nilcut/rep.hpp"

#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "nilcut/error.hpp"

namespace nilcut {

// ---------------------------------------------------------------- weighted permutations

WeightedPermOp WeightedPermOp::after(const WeightedPermOp& other) const {
  Rule outer = rule_, inner = other.rule_;
  return WeightedPermOp([outer, inner](const GroupElement& s) {
    WeightedImage a = inner(s);
    WeightedImage b = outer(a.label);
    return WeightedImage{b.label, b.phase * a.phase};
  });
}

WeightedPermOp pi_omega(const GroupElement& y, const Character& omega, const QuotientMap& q) {
  auto w = std::make_shared<const Character>(omega);
  auto qm = std::make_shared<const QuotientMap>(q);
  const GroupElement ybar = q.project(y);
  return WeightedPermOp([w, qm, y, ybar](const GroupElement& s) {
    const auto& g = *qm->ambient();
    GroupElement ys = ybar * s;
    GroupElement n = g.multiply(g.multiply(g.inverse(qm->section(ys)), y), qm->section(s));
    if (!w->domain().contains(n)) {
      throw Error(ErrorCode::kVerification, "c(ysN)^-1 y c(sN) = " + n.to_string() + " is outside N");
    }
    return WeightedImage{ys, (*w)(n)};
  });
}

WeightedPermOp lambda_quotient(const GroupElement& y, const QuotientMap& q) {
  const GroupElement ybar = q.project(y);
  return WeightedPermOp([ybar](const GroupElement& s) { return WeightedImage{ybar * s, Phase()}; });
}

WindowReport unitary_window_check(const WeightedPermOp& op, const std::vector<GroupElement>& window) {
  WindowReport rep;
  std::unordered_map<GroupElement, GroupElement, GroupElementHash> seen;
  for (const auto& s : window) {
    WeightedImage im = op(s);
    ++rep.checked;
    rep.exact = rep.exact && im.phase.is_exact();
    if (std::abs(std::abs(im.phase.value()) - 1.0) > 1e-12) rep.failures.push_back("phase off the circle at " + s.to_string());
    auto [it, fresh] = seen.emplace(im.label, s);
    if (!fresh && !(it->second == s)) {
      rep.failures.push_back(s.to_string() + " and " + it->second.to_string() + " share the image " + im.label.to_string());
    }
  }
  return rep;
}

// ---------------------------------------------------------------- finite-dimensional representations

namespace {

template <class M>
M mat_pow(M base, Integer k, const M& id) {
  int64_t e = k.to_int64();
  M out = id;
  while (e > 0) {
    if (e & 1) out = out * base;
    base = base * base;
    e >>= 1;
  }
  return out;
}

template <class M, class Adj>
M word_matrix(const std::vector<M>& gens, const Exponents& e, const M& id, Adj adj) {
  M out = id;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i].is_zero()) continue;
    if (e[i] > Integer(0)) {
      out = out * mat_pow(gens[i], e[i], id);
    } else {
      out = out * mat_pow(adj(gens[i]), -e[i], id);
    }
  }
  return out;
}

// Calls check(lhs, rhs, what) for unitarity and every relation.
template <class M, class Adj, class Check>
void check_relations(const PcPresentation& g, const std::vector<M>& gens, const M& id, Adj adj, Check check) {
  const auto& rel = g.relations();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    check(adj(gens[i]) * gens[i], id, "generator " + g.name(i) + " is not unitary");
    if (const auto& r = g.relative_order(i)) {
      auto it = rel.powers.find(static_cast<int>(i));
      M rhs = it == rel.powers.end() ? id : word_matrix(gens, it->second, id, adj);
      check(mat_pow(gens[i], *r, id), rhs, "power relation of " + g.name(i) + " fails");
    }
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      const auto key = std::make_pair(static_cast<int>(i), static_cast<int>(j));
      Exponents c(gens.size());
      c[j] = Integer(1);
      if (auto it = rel.conjugates.find(key); it != rel.conjugates.end()) c = it->second;
      check(adj(gens[i]) * gens[j] * gens[i], word_matrix(gens, c, id, adj),
            "conjugation relation (" + g.name(i) + "," + g.name(j) + ") fails");
      if (auto it = rel.inverse_conjugates.find(key); it != rel.inverse_conjugates.end()) {
        check(gens[i] * gens[j] * adj(gens[i]), word_matrix(gens, it->second, id, adj),
              "inverse conjugation relation (" + g.name(i) + "," + g.name(j) + ") fails");
      }
    }
  }
}

void check_count(const PcPresentation& g, std::size_t n) {
  if (n != g.size()) {
    throw Error(ErrorCode::kInvalidArgument, "need " + std::to_string(g.size()) + " generator matrices, got " + std::to_string(n));
  }
}

}  // namespace

FdRep FdRep::exact(PresentationPtr group, std::vector<CycMatrix> gens) {
  check_count(*group, gens.size());
  const std::size_t d = gens.empty() ? 0 : gens[0].rows();
  for (const auto& m : gens) {
    if (m.rows() != d || m.cols() != d) throw Error(ErrorCode::kInvalidArgument, "generator matrices must be square of one size");
  }
  const CycMatrix id = CycMatrix::identity(d);
  check_relations(*group, gens, id, [](const CycMatrix& m) { return m.adjoint(); },
                  [](const CycMatrix& a, const CycMatrix& b, const std::string& what) {
                    if (!(a == b)) throw Error(ErrorCode::kVerification, what);
                  });
  FdRep r;
  r.group_ = std::move(group);
  r.dim_ = d;
  r.exact_flag_ = true;
  for (const auto& m : gens) r.numeric_.push_back(m.to_eigen());
  r.exact_ = std::move(gens);
  return r;
}

FdRep FdRep::numeric(PresentationPtr group, std::vector<Eigen::MatrixXcd> gens, double tol) {
  check_count(*group, gens.size());
  const Eigen::Index d = gens.empty() ? 0 : gens[0].rows();
  for (const auto& m : gens) {
    if (m.rows() != d || m.cols() != d) throw Error(ErrorCode::kInvalidArgument, "generator matrices must be square of one size");
  }
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  check_relations(*group, gens, id, [](const Eigen::MatrixXcd& m) -> Eigen::MatrixXcd { return m.adjoint(); },
                  [tol](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, const std::string& what) {
                    const double r = a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
                    if (r > tol) throw Error(ErrorCode::kVerification, what + " (residual " + std::to_string(r) + ")");
                  });
  FdRep r;
  r.group_ = std::move(group);
  r.dim_ = static_cast<std::size_t>(d);
  r.numeric_ = std::move(gens);
  return r;
}

CycMatrix FdRep::exact_matrix(const GroupElement& g) const {
  if (!exact_flag_) throw Error(ErrorCode::kPrecondition, "representation has no exact matrices");
  return word_matrix(exact_, g.exponents(), CycMatrix::identity(dim_), [](const CycMatrix& m) { return m.adjoint(); });
}

Eigen::MatrixXcd FdRep::matrix(const GroupElement& g) const {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim_, dim_);
  return word_matrix(numeric_, g.exponents(), id, [](const Eigen::MatrixXcd& m) -> Eigen::MatrixXcd { return m.adjoint(); });
}

FdRep clock_shift(PresentationPtr heisenberg, int q, int k) {
  if (heisenberg->size() != 3) throw Error(ErrorCode::kInvalidArgument, "clock-shift needs a presentation on x, y, z");
  if (q < 1) throw Error(ErrorCode::kInvalidArgument, "clock-shift dimension must be positive");
  const std::size_t n = static_cast<std::size_t>(q);
  CycMatrix s(n, n), c(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    s((j + 1) % n, j) = Cyclotomic(1);
    c(j, j) = Cyclotomic::root_of_unity(q, -static_cast<long long>(k) * static_cast<long long>(j));
  }
  CycMatrix z = CycMatrix::scalar(n, Cyclotomic::root_of_unity(q, k));
  return FdRep::exact(std::move(heisenberg), {s, c, z});
}

// ---------------------------------------------------------------- GNS

GnsResult gns(const PositiveDefiniteFn& phi) {
  const auto& g = *phi.group();
  const std::vector<GroupElement> elems = g.enumerate();
  const std::size_t n = elems.size();
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(elems[i], i);

  // K(s, t) = phi(s^{-1} t).
  bool exact = true;
  std::vector<std::optional<Phase>> val(n);
  for (std::size_t i = 0; i < n; ++i) {
    val[i] = phi(elems[i]);
    if (val[i] && !val[i]->is_exact()) exact = false;
  }
  std::vector<std::vector<std::size_t>> prod(n, std::vector<std::size_t>(n));
  Eigen::MatrixXcd k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const GroupElement si = g.inverse(elems[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t ij = index.at(g.multiply(si, elems[j]));
      prod[i][j] = ij;
      k(i, j) = val[ij] ? val[ij]->value() : std::complex<double>(0.0, 0.0);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k, Eigen::EigenvaluesOnly);
  if (n > 0 && es.eigenvalues().minCoeff() < -1e-9) {
    throw Error(ErrorCode::kVerification, "Gram matrix has eigenvalue " + std::to_string(es.eigenvalues().minCoeff()) +
                                              "; the function is not positive definite");
  }

  // Independent columns P and coordinates of every delta_t in the basis delta_P.
  std::vector<std::size_t> piv;
  Eigen::MatrixXcd coords;
  if (exact) {
    CycMatrix ke(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (const auto& v = val[prod[i][j]]) ke(i, j) = Cyclotomic::from_phase(*v);
      }
    }
    piv = rref(ke).pivots;
    const std::size_t r = piv.size();
    CycMatrix kp(r, r), kr(r, n);
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = 0; b < r; ++b) kp(a, b) = ke(piv[a], piv[b]);
      for (std::size_t t = 0; t < n; ++t) kr(a, t) = ke(piv[a], t);
    }
    auto c = solve(kp, kr);
    if (!c) throw Error(ErrorCode::kInternal, "Gram block on the pivot columns is singular");
    coords = c->to_eigen();
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(k);
    qr.setThreshold(1e-9);
    const auto r = static_cast<std::size_t>(qr.rank());
    for (std::size_t a = 0; a < r; ++a) piv.push_back(static_cast<std::size_t>(qr.colsPermutation().indices()(a)));
    std::sort(piv.begin(), piv.end());
    Eigen::MatrixXcd kp(r, r), kr(r, n);
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = 0; b < r; ++b) kp(a, b) = k(piv[a], piv[b]);
      for (std::size_t t = 0; t < n; ++t) kr(a, t) = k(piv[a], t);
    }
    coords = kp.fullPivLu().solve(kr);
  }
  const std::size_t r = piv.size();

  Eigen::MatrixXcd kp(r, r);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = 0; b < r; ++b) kp(a, b) = k(piv[a], piv[b]);
  }
  Eigen::LLT<Eigen::MatrixXcd> llt(kp);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::kVerification, "Gram block is not positive definite");
  const Eigen::MatrixXcd lh = llt.matrixL().adjoint();
  const Eigen::MatrixXcd lh_inv = lh.inverse();

  std::vector<Eigen::MatrixXcd> gens;
  for (std::size_t gi = 0; gi < g.size(); ++gi) {
    const GroupElement x = g.generator(gi);
    Eigen::MatrixXcd a(r, r);
    for (std::size_t b = 0; b < r; ++b) a.col(b) = coords.col(index.at(g.multiply(x, elems[piv[b]])));
    gens.push_back(lh * a * lh_inv);
  }
  GnsResult out{FdRep::numeric(phi.group(), std::move(gens), 1e-10), lh * coords.col(index.at(g.identity())), r, exact};
  return out;
}

double gns_fidelity(const GnsResult& res, const PositiveDefiniteFn& phi) {
  double worst = 0.0;
  for (const auto& x : phi.group()->enumerate()) {
    const std::complex<double> v = res.cyclic.dot(res.rep.matrix(x) * res.cyclic);
    worst = std::max(worst, std::abs(v - phi.value(x)));
  }
  return worst;
}

// ---------------------------------------------------------------- induced-representation identities

Phase coset_phase(const Character& omega, const QuotientMap& q, const GroupElement& s) {
  const auto& g = *q.ambient();
  return omega(g.multiply(g.inverse(q.section(q.project(s))), s));
}

CosetPhaseReport coset_phase_check(const Character& omega, const QuotientMap& q, const std::vector<GroupElement>& samples,
                    const std::vector<GroupElement>& window) {
  CosetPhaseReport rep;
  const auto& g = *q.ambient();
  const Subgroup& n = omega.domain();
  auto ext = [&](const GroupElement& x) -> std::optional<Phase> {
    if (!n.contains(x)) return std::nullopt;
    return omega(x);
  };
  for (const auto& s : samples) {
    const GroupElement c = q.section(q.project(s));
    const Phase lambda = coset_phase(omega, q, s);
    std::vector<GroupElement> ts = window;
    ts.push_back(s);
    ts.push_back(c);
    for (const auto& t : ts) {
      const GroupElement ti = g.inverse(t);
      auto lhs = ext(g.multiply(ti, s));
      auto rhs = ext(g.multiply(ti, c));
      ++rep.checked;
      bool ok = lhs.has_value() == rhs.has_value() && (!lhs || *lhs == lambda * *rhs);
      if (!ok) rep.failures.push_back("s=" + s.to_string() + " t=" + t.to_string());
    }
  }
  return rep;
}

BlockPermOp BlockPermOp::after(const BlockPermOp& other) const {
  Rule outer = rule_, inner = other.rule_;
  return BlockPermOp([outer, inner](const GroupElement& s) {
    BlockImage a = inner(s);
    BlockImage b = outer(a.label);
    return BlockImage{b.label, b.block * a.block};
  });
}

namespace {

void check_tau_on_n(const Character& omega, const FdRep& tau, const QuotientMap& q) {
  if (tau.group() != q.ambient()) throw Error(ErrorCode::kInvalidArgument, "tau lives on a different group");
  if (!omega.domain().same_as(q.kernel())) throw Error(ErrorCode::kPrecondition, "quotient kernel differs from the character domain");
  for (const auto& n : omega.domain().generators()) {
    bool ok;
    if (tau.is_exact()) {
      ok = tau.exact_matrix(n) == CycMatrix::scalar(tau.dimension(), Cyclotomic::from_phase(omega(n)));
    } else {
      const Eigen::MatrixXcd want = omega(n).value() * Eigen::MatrixXcd::Identity(tau.dimension(), tau.dimension());
      ok = (tau.matrix(n) - want).cwiseAbs().maxCoeff() < 1e-12;
    }
    if (!ok) throw Error(ErrorCode::kPrecondition, "tau(" + n.to_string() + ") is not omega(n) times the identity");
  }
}

}  // namespace

IntertwinerReport fell_intertwiner_check(const Character& omega, const FdRep& tau, const QuotientMap& q,
                                         const std::vector<std::pair<GroupElement, GroupElement>>& samples) {
  if (!tau.is_exact()) throw Error(ErrorCode::kPrecondition, "pointwise intertwiner check needs an exact tau");
  check_tau_on_n(omega, tau, q);
  auto qm = std::make_shared<const QuotientMap>(q);
  auto tp = std::make_shared<const FdRep>(tau);
  const std::size_t d = tau.dimension();
  BlockPermOp u([qm, tp](const GroupElement& t) { return BlockImage{t, tp->exact_matrix(qm->section(t))}; });
  BlockPermOp u_star([qm, tp](const GroupElement& t) { return BlockImage{t, tp->exact_matrix(qm->section(t)).adjoint()}; });

  IntertwinerReport rep;
  for (const auto& [y, t] : samples) {
    const GroupElement ybar = q.project(y);
    const CycMatrix ty = tau.exact_matrix(y);
    BlockPermOp lam([ybar, ty](const GroupElement& s) { return BlockImage{ybar * s, ty}; });
    BlockImage lhs = u_star.after(lam.after(u))(t);
    WeightedImage rhs = pi_omega(y, omega, q)(t);
    rep.checked += d;
    if (!(lhs.label == rhs.label) || !(lhs.block == CycMatrix::scalar(d, Cyclotomic::from_phase(rhs.phase)))) {
      rep.failures.push_back("y=" + y.to_string() + " t=" + t.to_string());
    }
  }
  return rep;
}

double fell_dense_residual(const Character& omega, const FdRep& tau, const QuotientMap& q, const std::vector<GroupElement>& ys) {
  check_tau_on_n(omega, tau, q);
  const std::vector<GroupElement> labels = q.quotient()->enumerate();
  std::unordered_map<GroupElement, Eigen::Index, GroupElementHash> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], static_cast<Eigen::Index>(i));
  const auto d = static_cast<Eigen::Index>(tau.dimension());
  const Eigen::Index dim = static_cast<Eigen::Index>(labels.size()) * d;

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto b = static_cast<Eigen::Index>(i) * d;
    u.block(b, b, d, d) = tau.matrix(q.section(labels[i]));
  }
  double worst = 0.0;
  for (const auto& y : ys) {
    const Eigen::MatrixXcd ty = tau.matrix(y);
    const WeightedPermOp p = pi_omega(y, omega, q);
    const GroupElement ybar = q.project(y);
    Eigen::MatrixXcd lam = Eigen::MatrixXcd::Zero(dim, dim), pi = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const Eigen::Index col = static_cast<Eigen::Index>(i) * d;
      lam.block(index.at(ybar * labels[i]) * d, col, d, d) = ty;
      WeightedImage im = p(labels[i]);
      pi.block(index.at(im.label) * d, col, d, d) = im.phase.value() * Eigen::MatrixXcd::Identity(d, d);
    }
    worst = std::max(worst, (u.adjoint() * lam * u - pi).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace nilcut

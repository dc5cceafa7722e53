#include "nilcut/twisted.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "nilcut/error.hpp"

namespace nilcut {

// ---------------------------------------------------------------- elements

const Cyclotomic& FdElement::at(std::size_t i) const {
  static const Cyclotomic zero;
  auto it = coeffs.find(i);
  return it == coeffs.end() ? zero : it->second;
}

void FdElement::add(std::size_t i, const Cyclotomic& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = coeffs.emplace(i, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) coeffs.erase(it);
}

FdElement operator+(const FdElement& a, const FdElement& b) {
  FdElement out = a;
  for (const auto& [i, c] : b.coeffs) out.add(i, c);
  return out;
}

FdElement operator-(const FdElement& a, const FdElement& b) {
  FdElement out = a;
  for (const auto& [i, c] : b.coeffs) out.add(i, -c);
  return out;
}

FdElement FdElement::scaled(const Cyclotomic& s) const {
  FdElement out;
  if (s.is_zero()) return out;
  for (const auto& [i, c] : coeffs) out.coeffs.emplace(i, c * s);
  return out;
}

GroupTrace trace_from(const PositiveDefiniteFn& phi) {
  auto f = std::make_shared<const PositiveDefiniteFn>(phi);
  return GroupTrace{[f](const GroupElement& g) {
                      auto v = (*f)(g);
                      if (!v) return Cyclotomic();
                      if (!v->is_exact()) throw Error(ErrorCode::kPrecondition, "trace values must be exact");
                      return Cyclotomic::from_phase(*v);
                    },
                    phi.description()};
}

// ---------------------------------------------------------------- algebra

void FdStarAlgebra::build_tables() {
  if (!group_->is_finite()) throw Error(ErrorCode::kPrecondition, "twisted algebras need a finite group");
  elems_ = group_->enumerate();
  const std::size_t n = elems_.size();
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) index_.emplace(elems_[i], i);
  inv_.resize(n);
  for (std::size_t i = 0; i < n; ++i) inv_[i] = index_.at(group_->inverse(elems_[i]));
  if (n <= 256) {
    table_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) table_[i * n + j] = static_cast<std::uint32_t>(index_.at(group_->multiply(elems_[i], elems_[j])));
    }
  }
}

FdStarAlgebra FdStarAlgebra::group_algebra(PresentationPtr f) {
  FdStarAlgebra a;
  a.group_ = std::move(f);
  a.description_ = "group algebra";
  a.build_tables();
  return a;
}

FdStarAlgebra FdStarAlgebra::twisted(PresentationPtr f, const Cocycle2& sigma) {
  if (sigma.base() != f) throw Error(ErrorCode::kInvalidArgument, "cocycle lives on a different group");
  FdStarAlgebra a;
  a.group_ = std::move(f);
  a.sigma_ = std::make_shared<const Cocycle2>(sigma);
  a.twisted_ = true;
  a.description_ = "twisted group algebra, " + sigma.description();
  a.build_tables();

  const auto& e = a.elems_;
  const std::size_t n = e.size();
  std::vector<Triple> triples;
  if (n * n * n <= 20'000) {
    for (const auto& x : e) {
      for (const auto& y : e) {
        for (const auto& z : e) triples.push_back({x, y, z});
      }
    }
  } else {
    std::mt19937_64 rng(0x7a1);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int i = 0; i < 2000; ++i) triples.push_back({e[pick(rng)], e[pick(rng)], e[pick(rng)]});
  }
  auto rep = verify_cocycle(sigma, triples);
  a.cocycle_checks_ = rep.checked;
  if (!rep.exact) throw Error(ErrorCode::kPrecondition, "twisted algebras need an exact cocycle");
  if (!rep.normalized) throw Error(ErrorCode::kVerification, "cocycle is not normalized");
  if (!rep.ok()) {
    const auto& w = rep.failures.front();
    throw Error(ErrorCode::kVerification, "cocycle identity fails at (" + w.triple[0].to_string() + "," + w.triple[1].to_string() +
                                              "," + w.triple[2].to_string() + ")");
  }
  return a;
}

std::size_t FdStarAlgebra::index(const GroupElement& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) throw Error(ErrorCode::kInvalidArgument, "element " + g.to_string() + " is not in the group");
  return it->second;
}

std::size_t FdStarAlgebra::mul_index(std::size_t g, std::size_t h) const {
  const std::size_t n = elems_.size();
  if (!table_.empty()) return table_[g * n + h];
  return index_.at(group_->multiply(elems_[g], elems_[h]));
}

Cyclotomic FdStarAlgebra::sigma(std::size_t g, std::size_t h) const {
  if (!twisted_) return Cyclotomic(1);
  const std::uint64_t key = static_cast<std::uint64_t>(g) * elems_.size() + h;
  auto it = sigma_cache_.find(key);
  if (it != sigma_cache_.end()) return it->second;
  Cyclotomic v = Cyclotomic::from_phase((*sigma_)(elems_[g], elems_[h]));
  sigma_cache_.emplace(key, v);
  return v;
}

FdElement FdStarAlgebra::basis(std::size_t g) const {
  FdElement out;
  out.coeffs.emplace(g, Cyclotomic(1));
  return out;
}

FdElement FdStarAlgebra::multiply(const FdElement& a, const FdElement& b) const {
  FdElement out;
  for (const auto& [g, x] : a.coeffs) {
    for (const auto& [h, y] : b.coeffs) {
      Cyclotomic c = x * y;
      if (twisted_) c *= sigma(g, h);
      out.add(mul_index(g, h), c);
    }
  }
  return out;
}

FdElement FdStarAlgebra::star(const FdElement& a) const {
  FdElement out;
  for (const auto& [g, x] : a.coeffs) {
    Cyclotomic c = x.conj();
    if (twisted_) c *= sigma(g, inv_[g]).conj();
    out.add(inv_[g], c);
  }
  return out;
}

Cyclotomic FdStarAlgebra::trace(const FdElement& a) const { return a.at(0); }

Cyclotomic FdStarAlgebra::apply(const GroupTrace& tau, const FdElement& x) const {
  Cyclotomic out;
  for (const auto& [g, c] : x.coeffs) out += c * tau.value(elems_[g]);
  return out;
}

CycMatrix FdStarAlgebra::regular_matrix(const FdElement& a) const {
  const std::size_t n = elems_.size();
  CycMatrix m(n, n);
  for (const auto& [g, x] : a.coeffs) {
    for (std::size_t h = 0; h < n; ++h) m(mul_index(g, h), h) += twisted_ ? x * sigma(g, h) : x;
  }
  return m;
}

Eigen::MatrixXcd FdStarAlgebra::regular_matrix_numeric(const FdElement& a) const {
  const auto n = static_cast<Eigen::Index>(elems_.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [g, x] : a.coeffs) {
    const std::complex<double> xv = x.to_complex();
    for (Eigen::Index h = 0; h < n; ++h) {
      const auto hh = static_cast<std::size_t>(h);
      m(static_cast<Eigen::Index>(mul_index(g, hh)), h) += twisted_ ? xv * sigma(g, hh).to_complex() : xv;
    }
  }
  return m;
}

double FdStarAlgebra::norm(const FdElement& a) const {
  if (a.is_zero()) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(regular_matrix_numeric(a));
  return svd.singularValues()(0);
}

const std::vector<FdElement>& FdStarAlgebra::centre_basis() const {
  if (centre_) return *centre_;
  const std::size_t n = elems_.size();
  std::vector<FdElement> gens;
  for (std::size_t i = 0; i < group_->size(); ++i) gens.push_back(basis(index(group_->generator(i))));
  std::vector<FdElement> gens_star;
  for (const auto& g : gens) gens_star.push_back(star(g));

  std::vector<char> seen(n, 0);
  std::vector<FdElement> out;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    // u_h (c u_x) u_h^* = c lambda u_x'; an invariant orbit sum needs c_x' = c_x lambda.
    FdElement sum;
    sum.coeffs.emplace(start, Cyclotomic(1));
    seen[start] = 1;
    bool regular = true;
    std::deque<std::size_t> queue{start};
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      const Cyclotomic cx = sum.at(x);
      for (std::size_t k = 0; k < gens.size(); ++k) {
        FdElement img = multiply(multiply(gens[k], basis(x)), gens_star[k]);
        const auto& [y, lambda] = *img.coeffs.begin();
        const Cyclotomic want = cx * lambda;
        auto it = sum.coeffs.find(y);
        if (it == sum.coeffs.end()) {
          sum.coeffs.emplace(y, want);
          seen[y] = 1;
          queue.push_back(y);
        } else if (!(it->second == want)) {
          regular = false;
        }
      }
    }
    if (regular) out.push_back(std::move(sum));
  }
  centre_ = std::move(out);
  return *centre_;
}

bool FdStarAlgebra::is_central(const FdElement& a) const {
  for (std::size_t i = 0; i < group_->size(); ++i) {
    const FdElement u = basis(index(group_->generator(i)));
    if (!(multiply(u, a) == multiply(a, u))) return false;
  }
  return true;
}

FdElement FdStarAlgebra::random_element(std::mt19937_64& rng, int r, std::size_t support) const {
  const std::size_t n = elems_.size();
  std::uniform_int_distribution<int> num(-r, r), den(1, r);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  FdElement out;
  if (support == 0 || support >= n) {
    for (std::size_t g = 0; g < n; ++g) out.add(g, Cyclotomic::rational(Integer(num(rng)), Integer(den(rng))));
  } else {
    for (std::size_t i = 0; i < support; ++i) out.add(pick(rng), Cyclotomic::rational(Integer(num(rng)), Integer(den(rng))));
  }
  return out;
}

// ---------------------------------------------------------------- expectations and kernels

FdElement conditional_expectation(const FdStarAlgebra& a, const Subgroup& h, const FdElement& x) {
  if (h.ambient() != a.group()) throw Error(ErrorCode::kInvalidArgument, "subgroup lives on a different group");
  FdElement out;
  for (const auto& [g, c] : x.coeffs) {
    if (h.contains(a.elements()[g])) out.coeffs.emplace(g, c);
  }
  return out;
}

Eigen::MatrixXcd represent(const FdStarAlgebra& a, const FdRep& rep, const FdElement& x) {
  if (a.twisted_cocycle()) throw Error(ErrorCode::kPrecondition, "group representations only act on untwisted algebras");
  if (rep.group() != a.group()) throw Error(ErrorCode::kInvalidArgument, "representation lives on a different group");
  const auto d = static_cast<Eigen::Index>(rep.dimension());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [g, c] : x.coeffs) out += c.to_complex() * rep.matrix(a.elements()[g]);
  return out;
}

namespace {

struct TraceTable {
  std::vector<Cyclotomic> values;
  std::vector<std::size_t> support;
};

TraceTable trace_table(const FdStarAlgebra& a, const GroupTrace& tau) {
  TraceTable t;
  for (std::size_t g = 0; g < a.dimension(); ++g) {
    t.values.push_back(tau.value(a.elements()[g]));
    if (!t.values.back().is_zero()) t.support.push_back(g);
  }
  return t;
}

// tau(u_g x) = 0 for every g. Only g = t h^{-1} with t in supp tau, h in supp x contribute.
bool in_kernel(const FdStarAlgebra& a, const TraceTable& t, const FdElement& x) {
  std::unordered_map<std::size_t, Cyclotomic> acc;
  for (const auto& [h, c] : x.coeffs) {
    const std::size_t hi = a.inv_index(h);
    for (std::size_t s : t.support) {
      const std::size_t g = a.mul_index(s, hi);
      acc[g] += c * a.sigma(g, h) * t.values[s];
    }
  }
  for (const auto& [g, v] : acc) {
    if (!v.is_zero()) return false;
  }
  return true;
}

}  // namespace

std::vector<FdElement> trace_kernel(const FdStarAlgebra& a, const GroupTrace& tau) {
  const std::size_t n = a.dimension();
  const TraceTable t = trace_table(a, tau);
  CycMatrix m(n, n);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h) {
      const Cyclotomic& v = t.values[a.mul_index(g, h)];
      if (!v.is_zero()) m(g, h) = v * a.sigma(g, h);
    }
  }
  std::vector<FdElement> out;
  for (const auto& v : null_space(m)) {
    FdElement x;
    for (std::size_t i = 0; i < n; ++i) x.add(i, v[i]);
    out.push_back(std::move(x));
  }
  return out;
}

bool in_trace_kernel(const FdStarAlgebra& a, const GroupTrace& tau, const FdElement& x) {
  return in_kernel(a, trace_table(a, tau), x);
}

RepExpectation::RepExpectation(const FdStarAlgebra& a, FdRep rep, GroupTrace tau, Subgroup h, std::mt19937_64& rng,
                               std::size_t samples)
    : alg_(&a), rep_(std::move(rep)), tau_(std::move(tau)), h_(std::move(h)) {
  if (a.twisted_cocycle()) throw Error(ErrorCode::kPrecondition, "expectations on representations need an untwisted algebra");
  const TraceTable t = trace_table(a, tau_);
  for (std::size_t g : t.support) {
    if (!h_.contains(a.elements()[g])) {
      report_.vanishes_off_h = false;
      throw Error(ErrorCode::kPrecondition, "tau does not vanish off H (tau(" + a.elements()[g].to_string() + ") != 0)");
    }
  }
  // pi_tau(x) = 0 must force pi_tau(E(x)) = 0.
  for (const auto& k : trace_kernel(a, tau_)) {
    ++report_.kernel_checked;
    const Eigen::MatrixXcd m = represent(a, rep_, conditional_expectation(a, h_, k));
    if (m.size() > 0 && m.cwiseAbs().maxCoeff() > 1e-9) report_.failures.push_back("E does not preserve the kernel of pi_tau");
  }
  for (std::size_t i = 0; i < samples; ++i) {
    const FdElement x = a.random_element(rng, 3, 12);
    const FdElement ex = conditional_expectation(a, h_, x);
    const double lhs = a.apply(tau_, a.multiply(a.star(ex), ex)).to_complex().real();
    const double rhs = a.apply(tau_, conditional_expectation(a, h_, a.multiply(a.star(x), x))).to_complex().real();
    ++report_.schwarz_checked;
    report_.worst_schwarz = std::max(report_.worst_schwarz, lhs - rhs);
    if (lhs - rhs > 1e-9) report_.failures.push_back("tau(E(x)*E(x)) > tau(E(x*x)) on sample " + std::to_string(i));
  }
}

Eigen::MatrixXcd RepExpectation::operator()(const FdElement& x) const {
  return represent(*alg_, rep_, conditional_expectation(*alg_, h_, x));
}

ContainmentReport kernel_containment(const FdStarAlgebra& a, const GroupTrace& outer, const GroupTrace& inner) {
  ContainmentReport rep;
  const TraceTable t = trace_table(a, inner);
  auto ker = trace_kernel(a, outer);
  rep.kernel_dimension = ker.size();
  for (std::size_t i = 0; i < ker.size(); ++i) {
    ++rep.checked;
    if (!in_kernel(a, t, ker[i])) rep.failures.push_back("kernel vector " + std::to_string(i) + " is not annihilated");
  }
  return rep;
}

// ---------------------------------------------------------------- blocks

namespace {

using CVec = std::vector<std::complex<double>>;

CVec numeric_product(const FdStarAlgebra& a, const CVec& x, const FdElement& y) {
  CVec out(x.size());
  for (std::size_t g = 0; g < x.size(); ++g) {
    if (x[g] == std::complex<double>()) continue;
    for (const auto& [h, c] : y.coeffs) {
      std::complex<double> v = x[g] * c.to_complex();
      if (a.twisted_cocycle()) v *= a.sigma(g, h).to_complex();
      out[a.mul_index(g, h)] += v;
    }
  }
  return out;
}

}  // namespace

BlockDecomposition block_decompose(const FdStarAlgebra& a, std::uint64_t seed) {
  const std::size_t n = a.dimension();
  const auto& zb = a.centre_basis();
  const std::size_t k = zb.size();
  BlockDecomposition out;
  out.centre_dimension = k;

  // Coordinates in the centre basis: orbit sums have disjoint supports.
  std::vector<std::size_t> rep_index(k);
  std::vector<std::complex<double>> rep_coeff(k);
  std::size_t unit_coord = k;
  for (std::size_t j = 0; j < k; ++j) {
    rep_index[j] = zb[j].coeffs.begin()->first;
    rep_coeff[j] = zb[j].coeffs.begin()->second.to_complex();
    if (rep_index[j] == 0) unit_coord = j;
  }
  if (unit_coord == k) throw Error(ErrorCode::kInternal, "centre basis misses the unit");
  Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t j = 0; j < k; ++j) {
    for (const auto& [g, c] : zb[j].coeffs) basis(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(j)) = c.to_complex();
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::VectorXcd r(static_cast<Eigen::Index>(k));
    for (Eigen::Index j = 0; j < r.size(); ++j) r(j) = coef(rng);
    const Eigen::VectorXcd zv = basis * r;
    const CVec z(zv.data(), zv.data() + zv.size());
    Eigen::MatrixXcd l(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) {
      const CVec prod = numeric_product(a, z, zb[j]);
      for (std::size_t i = 0; i < k; ++i) l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = prod[rep_index[i]] / rep_coeff[i];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(l);
    const Eigen::VectorXcd lam = es.eigenvalues();
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      for (Eigen::Index j = i + 1; j < lam.size(); ++j) gap = std::min(gap, std::abs(lam(i) - lam(j)));
    }
    if (gap < 1e-9) continue;

    const Eigen::MatrixXcd v = es.eigenvectors();
    Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(k));
    unit(static_cast<Eigen::Index>(unit_coord)) = 1.0 / rep_coeff[unit_coord];
    const Eigen::VectorXcd mu = v.fullPivLu().solve(unit);

    double residual = 0.0;
    Eigen::VectorXcd total = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < k; ++i) {
      Block b;
      b.numeric = basis * (v.col(static_cast<Eigen::Index>(i)) * mu(static_cast<Eigen::Index>(i)));
      total += b.numeric;
      const double dsq = static_cast<double>(n) * b.numeric(0).real();
      const auto rounded = static_cast<long long>(std::llround(dsq));
      const auto d = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(std::max(rounded, 0LL)))));
      residual = std::max({residual, std::abs(dsq - static_cast<double>(rounded)), std::abs(static_cast<double>(n) * b.numeric(0).imag())});
      if (d * d != rounded || d == 0) {
        throw Error(ErrorCode::kVerification, "block " + std::to_string(i) + " has non-square dimension " + std::to_string(dsq));
      }
      b.dim = static_cast<std::size_t>(d);
      out.blocks.push_back(std::move(b));
    }
    Eigen::VectorXcd one = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    one(0) = 1.0;
    residual = std::max(residual, (total - one).cwiseAbs().maxCoeff());
    if (n <= 256) {
      for (const auto& b : out.blocks) {
        const CVec bv(b.numeric.data(), b.numeric.data() + b.numeric.size());
        // b^2 = b, via the product against each centre basis component.
        CVec sq(n);
        for (std::size_t j = 0; j < k; ++j) {
          const std::complex<double> w = b.numeric(static_cast<Eigen::Index>(rep_index[j])) / rep_coeff[j];
          if (std::abs(w) < 1e-15) continue;
          const CVec part = numeric_product(a, bv, zb[j]);
          for (std::size_t g = 0; g < n; ++g) sq[g] += w * part[g];
        }
        for (std::size_t g = 0; g < n; ++g) residual = std::max(residual, std::abs(sq[g] - bv[g]));
      }
    }
    out.residual = residual;
    if (residual > 1e-9) throw Error(ErrorCode::kVerification, "block projections have residual " + std::to_string(residual));
    std::size_t total_dim = 0;
    for (const auto& b : out.blocks) total_dim += b.dim * b.dim;
    if (total_dim != n) throw Error(ErrorCode::kVerification, "block dimensions do not add up to the algebra dimension");
    std::stable_sort(out.blocks.begin(), out.blocks.end(), [](const Block& x, const Block& y) { return x.dim < y.dim; });
    return out;
  }
  throw Error(ErrorCode::kVerification, "centre eigenvalues failed to separate after 8 random draws");
}

// ---------------------------------------------------------------- cutdown

std::string Cutdown::trace_of_p() const { return kept_dimension.to_string() + "/" + algebra_dimension.to_string(); }

Cutdown cutdown_for_trace(const FdStarAlgebra& a, const GroupTrace& tau, const CutdownOptions& opt) {
  const std::size_t n = a.dimension();
  const TraceTable t = trace_table(a, tau);
  if (t.values[0].is_zero()) throw Error(ErrorCode::kPrecondition, "tau vanishes at the identity");
  auto tau_of = [&](const FdElement& x) {
    Cyclotomic v;
    for (const auto& [g, c] : x.coeffs) {
      if (!t.values[g].is_zero()) v += c * t.values[g];
    }
    return v;
  };

  // tau(u_h u_g u_h^*) = tau(u_g) on generators h.
  for (std::size_t i = 0; i < a.group()->size(); ++i) {
    const FdElement u = a.basis(a.group()->generator(i));
    const FdElement us = a.star(u);
    for (std::size_t g = 0; g < n; ++g) {
      const FdElement c = a.multiply(a.multiply(u, a.basis(g)), us);
      if (!(tau_of(c) == t.values[g])) throw Error(ErrorCode::kPrecondition, "tau is not a trace");
    }
  }

  // tau(x) = tr(f x) gives f_g = tau(u_{g^{-1}}) / sigma(g, g^{-1}).
  FdElement f;
  for (std::size_t h : t.support) {
    const std::size_t g = a.inv_index(h);
    f.add(g, t.values[h] * a.sigma(g, h).conj());
  }
  if (!a.is_central(f)) throw Error(ErrorCode::kPrecondition, "tau is not a trace: its density is not central");

  // Minimal polynomial of f by Krylov iteration; p = 1 - q(f)/q(0) where mu(x) = x q(x).
  std::vector<FdElement> powers{a.one(), f};
  std::vector<Cyclotomic> c;
  for (;;) {
    if (powers.size() > 66) throw Error(ErrorCode::kInternal, "minimal polynomial of the trace density has degree above 64");
    const std::size_t m = powers.size() - 1;
    std::vector<std::size_t> rows;
    for (const auto& v : powers) {
      for (const auto& [g, x] : v.coeffs) rows.push_back(g);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    CycMatrix lhs(rows.size(), m), rhs(rows.size(), 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t i = 0; i < m; ++i) lhs(r, i) = powers[i].at(rows[r]);
      rhs(r, 0) = powers[m].at(rows[r]);
    }
    if (auto sol = solve(lhs, rhs)) {
      for (std::size_t i = 0; i < m; ++i) c.push_back((*sol)(i, 0));
      break;
    }
    powers.push_back(a.multiply(powers.back(), f));
  }
  const std::size_t m = c.size();
  Cutdown out;
  if (!c[0].is_zero()) {
    out.p = a.one();
  } else {
    if (m < 2 || c[1].is_zero()) throw Error(ErrorCode::kVerification, "trace density is not semisimple");
    // q(x) = x^{m-1} - sum_{i>=1} c_i x^{i-1}; q(0) = -c_1.
    FdElement q = powers[m - 1];
    for (std::size_t i = 1; i < m; ++i) q = q - powers[i - 1].scaled(c[i]);
    out.p = a.one() + q.scaled(c[1].inverse());
  }

  const auto [num, den] = a.trace(out.p).as_rational();
  out.algebra_dimension = Integer(static_cast<long long>(n));
  const auto [kept, rem] = floor_divmod(out.algebra_dimension * num, den);
  if (!rem.is_zero()) throw Error(ErrorCode::kVerification, "dimension of pA is not an integer");
  out.kept_dimension = kept;

  auto& cert = out.certificate;
  cert.central = a.is_central(out.p);
  cert.idempotent = a.multiply(out.p, out.p) == out.p && a.star(out.p) == out.p;
  cert.trace_preserved = true;
  for (std::size_t g = 0; g < n && cert.trace_preserved; ++g) {
    cert.trace_preserved = tau_of(a.multiply(a.basis(g), out.p)) == t.values[g];
  }
  if (!cert.central) cert.failures.push_back("p is not central");
  if (!cert.idempotent) cert.failures.push_back("p is not a self-adjoint idempotent");
  if (!cert.trace_preserved) cert.failures.push_back("tau(u_g p) != tau(u_g) for some g");

  cert.simple = true;
  const std::size_t anchor = out.p.coeffs.begin()->first;
  const Cyclotomic anchor_inv = out.p.coeffs.begin()->second.inverse();
  for (const auto& b : a.centre_basis()) {
    const FdElement bp = a.multiply(b, out.p);
    if (!(bp == out.p.scaled(bp.at(anchor) * anchor_inv))) {
      cert.simple = false;
      break;
    }
  }
  if (cert.simple) {
    const auto d = static_cast<long long>(std::llround(std::sqrt(out.kept_dimension.to_double())));
    if (Integer(d * d) == out.kept_dimension) out.block_size = static_cast<std::size_t>(d);
  }

  // x p = 0 <=> pi_tau(x) = 0; half of the samples are pushed into the kernel.
  std::mt19937_64 rng(opt.seed);
  for (std::size_t i = 0; i < opt.kernel_samples; ++i) {
    FdElement x = a.random_element(rng, 3, std::min<std::size_t>(n, 12));
    if (i % 2 == 1) x = x - a.multiply(x, out.p);
    const bool lhs = a.multiply(x, out.p).is_zero();
    const bool rhs = in_kernel(a, t, x);
    ++cert.kernel_samples;
    if (lhs != rhs) ++cert.kernel_mismatches;
  }
  if (cert.kernel_mismatches) cert.failures.push_back(std::to_string(cert.kernel_mismatches) + " kernel-equivalence mismatches");

  if (opt.rep) {
    const FdRep& rep = *opt.rep;
    const auto d = static_cast<Eigen::Index>(rep.dimension());
    cert.rep_residual = (represent(a, rep, out.p) - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (*cert.rep_residual > 1e-9) cert.failures.push_back("pi_tau(p) is not the identity");
    if (n <= opt.max_decompose) {
      Eigen::MatrixXcd span(d * d, static_cast<Eigen::Index>(n));
      for (std::size_t g = 0; g < n; ++g) {
        const Eigen::MatrixXcd m = rep.matrix(a.elements()[g]);
        span.col(static_cast<Eigen::Index>(g)) = Eigen::Map<const Eigen::VectorXcd>(m.data(), d * d);
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(span);
      qr.setThreshold(1e-9);
      cert.rep_span_dimension = static_cast<std::size_t>(qr.rank());
      if (Integer(static_cast<long long>(*cert.rep_span_dimension)) != out.kept_dimension) {
        cert.failures.push_back("span of pi_tau(G) has dimension " + std::to_string(*cert.rep_span_dimension) + ", pA has " +
                                out.kept_dimension.to_string());
      }
    }
  }

  if (n <= opt.max_decompose) {
    out.blocks = block_decompose(a, opt.seed);
    double kept_weight = 0.0;
    for (const auto& b : out.blocks->blocks) {
      std::complex<double> w;
      for (std::size_t g : t.support) w += b.numeric(static_cast<Eigen::Index>(g)) * t.values[g].to_complex();
      const bool keep = std::abs(w) > 1e-9;
      out.kept.push_back(keep);
      if (keep) kept_weight += static_cast<double>(b.dim * b.dim);
    }
    if (std::abs(kept_weight - out.kept_dimension.to_double()) > 1e-9) {
      cert.failures.push_back("kept blocks disagree with tr(p)");
    }
  }
  return out;
}

}  // namespace nilcut

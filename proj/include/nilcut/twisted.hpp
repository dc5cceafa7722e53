#pragma once

// Twisted group algebras C(F, sigma) of finite groups: exact sparse arithmetic,
// the sigma-regular matrix model, conditional expectations, block data and the
// central support projection of a trace.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "nilcut/cocycle.hpp"
#include "nilcut/cyclotomic.hpp"
#include "nilcut/rep.hpp"

namespace nilcut {

/// Sparse coefficient vector over the basis u_g, keyed by element index.
struct FdElement {
  std::map<std::size_t, Cyclotomic> coeffs;

  bool is_zero() const { return coeffs.empty(); }
  const Cyclotomic& at(std::size_t i) const;
  void add(std::size_t i, const Cyclotomic& c);
  friend FdElement operator+(const FdElement& a, const FdElement& b);
  friend FdElement operator-(const FdElement& a, const FdElement& b);
  FdElement scaled(const Cyclotomic& s) const;
  friend bool operator==(const FdElement& a, const FdElement& b) { return a.coeffs == b.coeffs; }
};

/// Exact class-function-like data on a finite group: the value of a trace on
/// each basis element.
struct GroupTrace {
  std::function<Cyclotomic(const GroupElement&)> value;
  std::string description;
};

/// tau(g) = phi(g) for a positive definite function with exact values.
GroupTrace trace_from(const PositiveDefiniteFn& phi);

class FdStarAlgebra {
 public:
  /// Throws Error(kPrecondition) for an infinite group or an inexact cocycle,
  /// Error(kVerification) when sigma fails the cocycle identity.
  static FdStarAlgebra twisted(PresentationPtr f, const Cocycle2& sigma);
  static FdStarAlgebra group_algebra(PresentationPtr f);

  const PresentationPtr& group() const { return group_; }
  std::size_t dimension() const { return elems_.size(); }
  bool twisted_cocycle() const { return twisted_; }
  const std::vector<GroupElement>& elements() const { return elems_; }
  std::size_t index(const GroupElement& g) const;
  const std::string& description() const { return description_; }
  /// Cocycle checks made at construction.
  std::size_t cocycle_checks() const { return cocycle_checks_; }

  Cyclotomic sigma(std::size_t g, std::size_t h) const;
  std::size_t mul_index(std::size_t g, std::size_t h) const;
  std::size_t inv_index(std::size_t g) const { return inv_[g]; }

  FdElement basis(std::size_t g) const;
  FdElement basis(const GroupElement& g) const { return basis(index(g)); }
  FdElement one() const { return basis(std::size_t{0}); }
  FdElement multiply(const FdElement& a, const FdElement& b) const;
  /// u_g^* = sigma(g, g^{-1})^{-1} u_{g^{-1}}.
  FdElement star(const FdElement& a) const;
  /// Canonical trace: coefficient of u_e.
  Cyclotomic trace(const FdElement& a) const;
  /// tau(x) = sum x_g tau(u_g).
  Cyclotomic apply(const GroupTrace& tau, const FdElement& x) const;

  /// sigma-regular representation: u_g delta_h = sigma(g, h) delta_{gh}.
  CycMatrix regular_matrix(const FdElement& a) const;
  Eigen::MatrixXcd regular_matrix_numeric(const FdElement& a) const;
  double norm(const FdElement& a) const;

  /// Basis of the centre: sigma-twisted orbit sums over conjugacy classes whose
  /// elements are sigma-regular.
  const std::vector<FdElement>& centre_basis() const;
  bool is_central(const FdElement& a) const;

  /// Element with random rational coefficients (numerators in [-r, r], denominator 1..r).
  FdElement random_element(std::mt19937_64& rng, int r = 3, std::size_t support = 0) const;

 private:
  FdStarAlgebra() = default;
  void build_tables();

  PresentationPtr group_;
  std::shared_ptr<const Cocycle2> sigma_;
  bool twisted_ = false;
  std::string description_;
  std::size_t cocycle_checks_ = 0;
  std::vector<GroupElement> elems_;
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> index_;
  std::vector<std::size_t> inv_;
  std::vector<std::uint32_t> table_;  // dense product table for small groups
  mutable std::unordered_map<std::uint64_t, Cyclotomic> sigma_cache_;
  mutable std::optional<std::vector<FdElement>> centre_;
};

/// E(u_s) = u_s for s in H, 0 otherwise.
FdElement conditional_expectation(const FdStarAlgebra& a, const Subgroup& h, const FdElement& x);

/// pi(x) = sum x_g pi(g) for a representation of the group of an untwisted algebra.
Eigen::MatrixXcd represent(const FdStarAlgebra& a, const FdRep& rep, const FdElement& x);

/// Elements spanning the kernel of the GNS map of tau: the null space of
/// [tau(u_g u_h)]. Exact.
std::vector<FdElement> trace_kernel(const FdStarAlgebra& a, const GroupTrace& tau);

/// pi_tau(x) = 0, decided exactly as tau(u_g x) = 0 for every g.
bool in_trace_kernel(const FdStarAlgebra& a, const GroupTrace& tau, const FdElement& x);

struct RepExpectationReport {
  bool vanishes_off_h = true;
  std::size_t kernel_checked = 0;
  std::size_t schwarz_checked = 0;
  double worst_schwarz = 0.0;  // max of tau(E(x)*E(x)) - tau(E(x*x)), should be <= 0
  std::vector<std::string> failures;
  bool ok() const { return vanishes_off_h && failures.empty(); }
};

/// E_tau(pi_tau(x)) = pi_tau(E(x)) on the image of an untwisted algebra.
class RepExpectation {
 public:
  /// Throws Error(kPrecondition) if tau does not vanish off H.
  RepExpectation(const FdStarAlgebra& a, FdRep rep, GroupTrace tau, Subgroup h, std::mt19937_64& rng, std::size_t samples = 20);

  Eigen::MatrixXcd operator()(const FdElement& x) const;
  const RepExpectationReport& report() const { return report_; }

 private:
  const FdStarAlgebra* alg_;
  FdRep rep_;
  GroupTrace tau_;
  Subgroup h_;
  RepExpectationReport report_;
};

struct Block {
  FdElement projection;          // exact when `exact`, else rounded from numerics
  Eigen::VectorXcd numeric;      // coefficients over all basis elements
  std::size_t dim = 0;           // block is M_dim
  bool exact = false;
};

struct BlockDecomposition {
  std::vector<Block> blocks;
  double residual = 0.0;  // worst idempotent/orthogonality/sum residual
  std::size_t centre_dimension = 0;
};

/// Minimal central projections by diagonalising a random central element on
/// the centre. Throws Error(kVerification) if eigenvalues fail to separate.
BlockDecomposition block_decompose(const FdStarAlgebra& a, std::uint64_t seed = 1);

struct CutdownCertificate {
  bool central = false;              // p u_g = u_g p for every generator, exact
  bool idempotent = false;           // p^2 = p = p^*, exact
  bool trace_preserved = false;      // tau(x p) = tau(x) on every basis x, exact
  bool simple = false;               // b p in C p for every centre basis b
  std::size_t kernel_samples = 0;    // x p = 0 <=> pi_tau(x) = 0 checked on these
  std::size_t kernel_mismatches = 0;
  std::optional<double> rep_residual;  // |pi_tau(p) - 1| for a supplied representation
  std::optional<std::size_t> rep_span_dimension;
  std::vector<std::string> failures;
  bool ok() const { return central && idempotent && trace_preserved && kernel_mismatches == 0 && failures.empty(); }
};

struct Cutdown {
  FdElement p;
  Integer kept_dimension;       // dim pA = |F| tr(p)
  Integer algebra_dimension;    // |F|
  std::optional<std::size_t> block_size;  // d with pA = M_d when pA is simple
  std::optional<BlockDecomposition> blocks;
  std::vector<bool> kept;       // per block, when blocks are present
  CutdownCertificate certificate;
  /// "kept/|F|", not reduced.
  std::string trace_of_p() const;
};

struct CutdownOptions {
  std::size_t kernel_samples = 100;
  std::uint64_t seed = 1;
  std::size_t max_decompose = 1024;  // skip the numeric block list above this dimension
  const FdRep* rep = nullptr;        // pi_tau, checked against p when present
};

/// Smallest central projection p with tau(p x) = tau(x). p is computed exactly
/// as the support of the central element f with tau(x) = tr(f x), through the
/// minimal polynomial of f.
Cutdown cutdown_for_trace(const FdStarAlgebra& a, const GroupTrace& tau, const CutdownOptions& opt = {});

struct ContainmentReport {
  std::size_t kernel_dimension = 0;
  std::size_t checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// ker pi_outer is contained in ker pi_inner, both traces on an untwisted algebra.
ContainmentReport kernel_containment(const FdStarAlgebra& a, const GroupTrace& outer, const GroupTrace& inner);

}  // namespace nilcut

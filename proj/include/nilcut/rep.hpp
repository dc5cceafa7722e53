#pragma once

// Weighted permutation operators on l^2(G/N), finite-dimensional unitary
// representations, GNS for positive definite functions on finite groups, and
// pointwise checks of the induced-representation identities.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nilcut/cocycle.hpp"
#include "nilcut/linalg.hpp"

namespace nilcut {

/// Image of one basis vector: target label times a phase.
struct WeightedImage {
  GroupElement label;
  Phase phase;
};

/// Operator sending each basis vector delta_s of l^2 over some labels to a
/// single scaled basis vector. Only evaluated, never materialised.
class WeightedPermOp {
 public:
  using Rule = std::function<WeightedImage(const GroupElement&)>;
  explicit WeightedPermOp(Rule rule) : rule_(std::move(rule)) {}

  WeightedImage operator()(const GroupElement& s) const { return rule_(s); }
  /// (this o other)(s) = this(other(s)).
  WeightedPermOp after(const WeightedPermOp& other) const;

 private:
  Rule rule_;
};

/// delta_{sN} -> omega(c(ysN)^{-1} y c(sN)) delta_{ysN}; labels are quotient elements.
WeightedPermOp pi_omega(const GroupElement& y, const Character& omega, const QuotientMap& q);
/// delta_{sN} -> delta_{ysN}.
WeightedPermOp lambda_quotient(const GroupElement& y, const QuotientMap& q);

struct WindowReport {
  std::size_t checked = 0;
  bool exact = true;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Unit-modulus phases and distinct target labels over the window.
WindowReport unitary_window_check(const WeightedPermOp& op, const std::vector<GroupElement>& window);

/// Finite-dimensional unitary representation given on the pc generators.
/// Exact representations carry cyclotomic matrices; numeric ones carry
/// complex doubles only.
class FdRep {
 public:
  /// Verifies unitarity and every relation of the presentation exactly.
  static FdRep exact(PresentationPtr group, std::vector<CycMatrix> gens);
  /// Verifies unitarity and relations to `tol`.
  static FdRep numeric(PresentationPtr group, std::vector<Eigen::MatrixXcd> gens, double tol = 1e-12);

  const PresentationPtr& group() const { return group_; }
  std::size_t dimension() const { return dim_; }
  bool is_exact() const { return exact_flag_; }
  const std::vector<Eigen::MatrixXcd>& numeric_generators() const { return numeric_; }
  const std::vector<CycMatrix>& exact_generators() const { return exact_; }

  CycMatrix exact_matrix(const GroupElement& g) const;
  Eigen::MatrixXcd matrix(const GroupElement& g) const;

 private:
  FdRep() = default;

  PresentationPtr group_;
  std::size_t dim_ = 0;
  bool exact_flag_ = false;
  std::vector<CycMatrix> exact_;
  std::vector<Eigen::MatrixXcd> numeric_;
};

/// Clock-and-shift representation of a Heisenberg presentation (x, y, z with
/// [x, y] = z central): x -> shift, y -> diag(zeta^{-k j}), z -> zeta^k, with
/// zeta = e^{2 pi i / q}. Dimension q.
FdRep clock_shift(PresentationPtr heisenberg, int q, int k);

struct GnsResult {
  FdRep rep;
  Eigen::VectorXcd cyclic;  // image of delta_e in orthonormal coordinates
  std::size_t rank = 0;
  bool exact_rank = false;  // rank decided by exact elimination
};

/// GNS representation of phi on a finite group. Throws Error(kVerification)
/// when the Gram matrix has an eigenvalue below -1e-9.
GnsResult gns(const PositiveDefiniteFn& phi);

/// Largest |<pi(g) xi, xi> - phi(g)| over the whole finite group.
double gns_fidelity(const GnsResult& g, const PositiveDefiniteFn& phi);

struct CosetPhaseReport {
  std::size_t checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// The phase omega(c(sN)^{-1} s).
Phase coset_phase(const Character& omega, const QuotientMap& q, const GroupElement& s);

/// For each sample s and window element t: <s, t> = phase(s) <c(sN), t> in
/// the Gram form of the trivial extension of omega, and s^{-1} t outside N
/// gives inner product 0.
CosetPhaseReport coset_phase_check(const Character& omega, const QuotientMap& q, const std::vector<GroupElement>& samples,
                    const std::vector<GroupElement>& window);

/// Operator on l^2(labels) (x) C^d sending delta_s (x) v to delta_{s'} (x) M v.
struct BlockImage {
  GroupElement label;
  CycMatrix block;
};
class BlockPermOp {
 public:
  using Rule = std::function<BlockImage(const GroupElement&)>;
  explicit BlockPermOp(Rule rule) : rule_(std::move(rule)) {}
  BlockImage operator()(const GroupElement& s) const { return rule_(s); }
  BlockPermOp after(const BlockPermOp& other) const;

 private:
  Rule rule_;
};

struct IntertwinerReport {
  std::size_t checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Checks U*(lambda(y) (x) pi_tau(y)) U (delta_t (x) e_j) = (pi_omega(y) (x) 1)(delta_t (x) e_j)
/// with U(delta_t (x) xi) = delta_t (x) pi_tau(c(t)) xi, for the sampled pairs
/// (y, t) and every basis vector e_j. Throws Error(kPrecondition) unless
/// pi_tau(n) = omega(n) for every generator n of N.
IntertwinerReport fell_intertwiner_check(const Character& omega, const FdRep& tau, const QuotientMap& q,
                                         const std::vector<std::pair<GroupElement, GroupElement>>& samples);

/// Dense version for finite quotients: builds U, lambda (x) pi_tau and
/// pi_omega (x) 1 as |G/N| d square matrices and returns the largest entry of
/// the difference over all y in `ys`.
double fell_dense_residual(const Character& omega, const FdRep& tau, const QuotientMap& q, const std::vector<GroupElement>& ys);

}  // namespace nilcut

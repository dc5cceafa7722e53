#pragma once

// Polycyclic presentations and exponent-vector arithmetic.
//
// A presentation has generators g_0, ..., g_{n-1} with relative orders r_i
// (finite or infinite). Every element has a unique normal form
// g_0^{e_0} g_1^{e_1} ... g_{n-1}^{e_{n-1}} with 0 <= e_i < r_i when r_i is
// finite. Relations:
//
//   g_i^{r_i}          = P_i     (P_i involves only g_{i+1}, ...)
//   g_i^{-1} g_j g_i   = C_ij    (i < j, C_ij involves only g_j, g_{j+1}, ...)
//   g_i g_j g_i^{-1}   = D_ij    (derived from C_ij when not given)
//
// Commutators follow the convention [a, b] = a^{-1} b^{-1} a b.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nilcut/integer.hpp"

namespace nilcut {

using Exponents = std::vector<Integer>;

class PcPresentation;

/// An element in normal form. Holds a non-owning pointer to its presentation,
/// which must outlive it.
class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(const PcPresentation* pres, Exponents exps) : pres_(pres), exps_(std::move(exps)) {}

  const PcPresentation& presentation() const { return *pres_; }
  const PcPresentation* presentation_ptr() const { return pres_; }
  const Exponents& exponents() const { return exps_; }
  const Integer& operator[](std::size_t i) const { return exps_[i]; }
  std::size_t size() const { return exps_.size(); }

  bool is_identity() const;
  /// Index of the first non-zero exponent, or size() for the identity.
  std::size_t depth() const;

  GroupElement operator*(const GroupElement& other) const;
  GroupElement inverse() const;
  GroupElement pow(const Integer& k) const;

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.pres_ == b.pres_ && a.exps_ == b.exps_;
  }
  friend bool operator<(const GroupElement& a, const GroupElement& b) { return a.exps_ < b.exps_; }

  std::size_t hash() const;
  std::string to_string() const;  // "[e0,e1,...]"

 private:
  const PcPresentation* pres_ = nullptr;
  Exponents exps_;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const { return g.hash(); }
};

/// Outcome of check_consistency: overlap conditions plus nilpotency.
struct ConsistencyReport {
  bool consistent = true;
  bool nilpotent = false;
  int nilpotency_class = -1;  // valid when nilpotent
  std::string witness;        // first failure, empty on success
  bool ok() const { return consistent && nilpotent; }
};

class PcPresentation : public std::enable_shared_from_this<PcPresentation> {
 public:
  using RelativeOrder = std::optional<Integer>;  // nullopt = infinite

  struct Relations {
    std::vector<RelativeOrder> relative_orders;
    std::map<int, Exponents> powers;                             // i -> P_i
    std::map<std::pair<int, int>, Exponents> conjugates;         // (i,j) -> C_ij
    std::map<std::pair<int, int>, Exponents> inverse_conjugates;  // (i,j) -> D_ij
    std::vector<std::string> names;                               // optional
  };

  static constexpr std::uint64_t kDefaultStepBudget = 1'000'000;

  /// Validates relation shapes and derives missing inverse conjugates.
  /// Throws Error(kInvalidArgument) for malformed relations, Error(kInconsistent)
  /// when derivation runs out of budget or a supplied D_ij disagrees with C_ij.
  static std::shared_ptr<const PcPresentation> create(Relations rel,
                                                      std::uint64_t step_budget = kDefaultStepBudget);

  std::size_t size() const { return orders_.size(); }
  const RelativeOrder& relative_order(std::size_t i) const { return orders_[i]; }
  bool is_finite() const;
  /// Product of the finite relative orders; an upper bound (and multiple) of |T(G)|.
  Integer finite_order_product() const;
  const std::string& name(std::size_t i) const { return names_[i]; }
  const Relations& relations() const { return rel_; }
  std::uint64_t step_budget() const { return budget_; }

  GroupElement identity() const;
  GroupElement generator(std::size_t i) const;
  /// Element from an exponent vector already in normal form (validated).
  GroupElement element(Exponents exps) const;
  /// Collects the word g_0^{e_0} ... g_{n-1}^{e_{n-1}} with arbitrary exponents.
  GroupElement collect(const Exponents& exps) const;

  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;
  GroupElement power(const GroupElement& a, const Integer& k) const;
  /// a^{-1} b^{-1} a b
  GroupElement commutator(const GroupElement& a, const GroupElement& b) const;
  /// b^{-1} a b
  GroupElement conjugate(const GroupElement& a, const GroupElement& b) const;

  /// All products of at most `radius` generators and inverses, deduplicated,
  /// in breadth-first discovery order.
  std::vector<GroupElement> ball(int radius) const;
  /// Every element of a finite group in lexicographic exponent order.
  std::vector<GroupElement> enumerate() const;

  ConsistencyReport check_consistency() const;

  /// Whether g_i^{-1} g_j g_i = g_j.
  bool generators_commute(std::size_t i, std::size_t j) const;

 private:
  struct Budget {
    std::uint64_t left;
  };

  PcPresentation() = default;
  void validate_and_complete();

  void check_element(const GroupElement& a) const;
  void tick(Budget& b) const;
  Exponents mul(Exponents u, const Exponents& v, Budget& b) const;
  void mul_gen_power(Exponents& w, std::size_t j, const Integer& e, Budget& b) const;
  Exponents conj_by_gen(const Exponents& s, std::size_t j, int sign, Budget& b) const;
  Exponents conj_by_gen_power(Exponents s, std::size_t j, const Integer& e, Budget& b) const;
  Exponents apply_images(const std::vector<Exponents>& images, std::size_t j, const Exponents& s, Budget& b) const;
  Exponents pow_exps(const Exponents& a, Integer k, Budget& b) const;
  Exponents inv_exps(const Exponents& a, Budget& b) const;
  Exponents solve_preimage(std::size_t i, Exponents target, Budget& b) const;
  Exponents unit(std::size_t j) const;

  Relations rel_;
  std::vector<RelativeOrder> orders_;
  std::vector<std::string> names_;
  std::vector<Exponents> powers_;
  // images_[i][j] for j > i: conjugation by g_i (sign +1) and by g_i^{-1}.
  std::vector<std::vector<Exponents>> conj_fwd_;
  std::vector<std::vector<Exponents>> conj_inv_;
  std::vector<std::vector<char>> commutes_;
  std::vector<char> central_in_tail_;  // g_i commutes with every later generator
  std::uint64_t budget_ = kDefaultStepBudget;
};

}  // namespace nilcut

template <>
struct std::hash<nilcut::GroupElement> {
  std::size_t operator()(const nilcut::GroupElement& g) const { return g.hash(); }
};

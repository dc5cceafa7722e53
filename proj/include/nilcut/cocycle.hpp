#pragma once

// Characters of central subgroups, positive definite functions, and the
// 2-cocycle on G/N obtained from a character and a section.

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nilcut/phase.hpp"
#include "nilcut/subgroups.hpp"

namespace nilcut {

/// A character of a subgroup N, given by its values on the induced sequence
/// of N. Generators of infinite order take free angles; a generator
/// of finite order o takes the phase k/o for its torsion index k.
class Character {
 public:
  /// Throws Error(kInvalidArgument) on a wrong number of values and
  /// Error(kPrecondition) if the values violate a relation of N.
  Character(Subgroup domain, std::vector<Phase> free_angles, std::vector<Integer> torsion);
  static Character trivial(Subgroup domain);

  const Subgroup& domain() const { return domain_; }
  const std::vector<Phase>& free_angles() const { return free_; }
  const std::vector<Integer>& torsion_indices() const { return torsion_; }
  /// Value on each generator of the induced sequence of N.
  const std::vector<Phase>& generator_values() const { return values_; }
  /// Orders of the induced generators; nullopt for infinite order.
  const std::vector<std::optional<Integer>>& generator_orders() const { return orders_; }
  bool torsion_free_domain() const { return free_.size() == values_.size(); }
  bool is_exact() const;

  /// Throws Error(kPrecondition) when n is outside N.
  Phase operator()(const GroupElement& n) const;

  /// The character with every free angle multiplied by t (torsion kept).
  Character scaled(const mpq_class& t) const;

 private:
  void build_values();

  Subgroup domain_;
  std::vector<Phase> free_;
  std::vector<Integer> torsion_;
  std::vector<std::optional<Integer>> orders_;
  std::vector<Phase> values_;
};

/// Element orders of the induced generators of a subgroup.
std::vector<std::optional<Integer>> induced_generator_orders(const Subgroup& n);

/// A function G -> T ∪ {0}; nullopt stands for the value 0.
class PositiveDefiniteFn {
 public:
  using Rule = std::function<std::optional<Phase>(const GroupElement&)>;
  PositiveDefiniteFn(PresentationPtr group, Rule rule, std::string description)
      : group_(std::move(group)), rule_(std::move(rule)), description_(std::move(description)) {}

  const PresentationPtr& group() const { return group_; }
  const std::string& description() const { return description_; }
  std::optional<Phase> operator()(const GroupElement& g) const { return rule_(g); }
  std::complex<double> value(const GroupElement& g) const;

 private:
  PresentationPtr group_;
  Rule rule_;
  std::string description_;
};

struct GramReport {
  std::size_t window = 0;
  double min_eigenvalue = 0.0;
  double tolerance = 1e-9;
  bool normalized = false;  // value at e is 1
  bool ok() const { return normalized && min_eigenvalue >= -tolerance; }
};

/// Eigenvalue check of [phi(s^{-1} t)] over the window.
GramReport gram_check(const PositiveDefiniteFn& phi, const std::vector<GroupElement>& window, double tol = 1e-9);

/// Character on N, zero off N. N must be central, or normal with a character
/// invariant under conjugation; throws Error(kPrecondition) otherwise.
PositiveDefiniteFn trivial_extension(const Character& omega, PresentationPtr g);

class Cocycle2 {
 public:
  using Rule = std::function<Phase(const GroupElement&, const GroupElement&)>;

  struct Provenance {
    std::shared_ptr<const Character> omega;
    std::shared_ptr<const QuotientMap> quotient;
    std::optional<mpq_class> t;  // set on a homotopy path
  };

  /// Cocycle given by an explicit rule on the quotient presentation.
  Cocycle2(PresentationPtr base, Rule rule, std::string description);

  const PresentationPtr& base() const { return base_; }
  const std::optional<Provenance>& provenance() const { return prov_; }
  const std::string& description() const { return description_; }
  Phase operator()(const GroupElement& x, const GroupElement& y) const { return rule_(x, y); }

  /// The same cocycle with its value at (x, y) multiplied by `delta`.
  Cocycle2 perturbed(const GroupElement& x, const GroupElement& y, const Phase& delta) const;

 private:
  friend Cocycle2 build_cocycle(const Character&, const QuotientMap&);
  friend Cocycle2 homotopy_path(const Cocycle2&, const mpq_class&);

  PresentationPtr base_;
  Rule rule_;
  std::string description_;
  std::optional<Provenance> prov_;
};

using Triple = std::array<GroupElement, 3>;

/// Random triples from ball(radius) of a presentation.
std::vector<Triple> sample_triples(const PcPresentation& p, int radius, std::size_t count, std::mt19937_64& rng);

struct CocycleFailure {
  Triple triple;
  Phase lhs, rhs;
};

struct CocycleReport {
  std::size_t checked = 0;
  bool exact = true;
  bool normalized = true;
  std::vector<CocycleFailure> failures;
  bool ok() const { return normalized && failures.empty(); }
};

/// Checks sigma(x,y) sigma(xy,z) = sigma(y,z) sigma(x,yz) on every triple, and
/// sigma(e, x) = sigma(x, e) = 1 on the triple entries.
CocycleReport verify_cocycle(const Cocycle2& sigma, const std::vector<Triple>& samples);

/// sigma(xN, yN) = omega(c(xN) c(yN) c(xyN)^{-1}). The kernel of q must be the
/// domain of omega. Verifies the cocycle identity on a sample before returning.
Cocycle2 build_cocycle(const Character& omega, const QuotientMap& q);

/// The cocycle built from omega_t, where omega_t scales every free angle by t.
/// Needs a torsion-free domain whose induced sequence has only infinite
/// relative orders.
Cocycle2 homotopy_path(const Cocycle2& sigma, const mpq_class& t);

}  // namespace nilcut

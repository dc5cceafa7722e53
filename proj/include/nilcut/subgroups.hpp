#pragma once

// Subgroups of a pc group with verification certificates: centre, torsion
// subgroup, FC-centre, quotients with a section, and the splitting of G over
// its FC-centre.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nilcut/induced.hpp"
#include "nilcut/pc.hpp"

namespace nilcut {

using PresentationPtr = std::shared_ptr<const PcPresentation>;

/// What was checked about a computed subgroup, and at which radius.
struct Certificate {
  int radius = 0;
  bool complete = true;             // every contract held within its window
  std::vector<std::string> passed;  // contract descriptions
  std::vector<std::string> flags;   // e.g. "uncertified-maximal", "orbit-cap"

  void pass(std::string what) { passed.push_back(std::move(what)); }
  void flag(std::string what) {
    complete = false;
    flags.push_back(std::move(what));
  }
};

class Subgroup {
 public:
  Subgroup(PresentationPtr ambient, InducedSequence seq, Certificate cert = {});
  static Subgroup generated_by(PresentationPtr ambient, const std::vector<GroupElement>& gens, Certificate cert = {});
  static Subgroup whole(PresentationPtr ambient);
  static Subgroup trivial(PresentationPtr ambient);

  const PresentationPtr& ambient() const { return ambient_; }
  const InducedSequence& sequence() const { return seq_; }
  const Certificate& certificate() const { return cert_; }
  Certificate& certificate() { return cert_; }

  std::vector<GroupElement> generators() const { return seq_.generators(); }
  bool contains(const GroupElement& g) const { return seq_.contains(g); }
  std::optional<Integer> order() const { return seq_.order(); }
  std::optional<Integer> index() const { return seq_.index(); }
  bool is_normal() const { return seq_.is_normal(); }
  bool is_central() const { return seq_.is_central(); }
  bool is_trivial() const { return seq_.is_trivial(); }
  /// Same elements (mutual containment of generators).
  bool same_as(const Subgroup& other) const;

  /// Exponents of g with respect to the induced sequence, so that
  /// g = t_0^{e_0} t_1^{e_1} ...; throws if g is not a member.
  Exponents coordinates(const GroupElement& g) const;
  /// Pc presentation of the subgroup on its induced sequence.
  PresentationPtr adapted_presentation() const;
  /// Every element, for finite subgroups (throws otherwise).
  std::vector<GroupElement> elements() const;

 private:
  PresentationPtr ambient_;
  InducedSequence seq_;
  Certificate cert_;
  mutable PresentationPtr adapted_;
};

struct SearchOptions {
  int radius = 6;
  std::size_t max_ball = 200'000;   // ball elements scanned before giving up
  std::size_t orbit_cap = 10'000;   // conjugation orbit elements per BFS
};

/// Ball of the largest radius <= wanted whose size stays within max_ball.
/// Returns the radius actually used.
int bounded_ball(const PcPresentation& g, int wanted, std::size_t max_ball, std::vector<GroupElement>& out);

Subgroup center(PresentationPtr g, const SearchOptions& opt = {});
Subgroup torsion_subgroup(PresentationPtr g, const SearchOptions& opt = {});
/// Multiplication table of a finite subgroup over elements() indices.
std::vector<std::vector<std::size_t>> multiplication_table(const Subgroup& h);
Subgroup fc_centre(PresentationPtr g, const SearchOptions& opt = {});

/// Outcome of a conjugation-orbit closure.
struct OrbitResult {
  bool finite = false;  // closure completed below the cap
  std::size_t size = 0;
};
OrbitResult conjugacy_orbit(const PcPresentation& g, const GroupElement& x, std::size_t cap);

/// G -> G/N with a section c: G/N -> G, c(eN) = e.
class QuotientMap {
 public:
  /// Optional correction of the normal-form section: c(q) = c0(q) * adjust(q),
  /// where adjust(q) must lie in N and adjust(e) = e.
  using SectionAdjustment = std::function<GroupElement(const GroupElement& q)>;

  QuotientMap(PresentationPtr ambient, Subgroup kernel);

  const PresentationPtr& ambient() const { return ambient_; }
  const Subgroup& kernel() const { return kernel_; }
  const PresentationPtr& quotient() const { return quotient_; }
  /// Depths of the ambient pc sequence that survive in the quotient.
  const std::vector<std::size_t>& kept_depths() const { return kept_; }
  std::optional<Integer> index() const { return kernel_.index(); }

  GroupElement project(const GroupElement& g) const;
  GroupElement section(const GroupElement& q) const;

  void set_section_adjustment(SectionAdjustment adj, std::string name);
  const std::string& section_name() const { return section_name_; }

 private:
  PresentationPtr ambient_;
  Subgroup kernel_;
  PresentationPtr quotient_;
  std::vector<std::size_t> kept_;
  SectionAdjustment adjust_;
  std::string section_name_ = "normal-form";
};

/// Throws Error(kPrecondition) when N is not normal.
QuotientMap index_and_transversal(PresentationPtr g, const Subgroup& n);

/// For Heisenberg-type presentations (x, y, z with [x,y] = z central):
/// c(a, b) = x^a y^b z^{-ab}, the section matching the unitriangular matrix
/// coordinates. Requires the kernel to contain z.
void use_matrix_model_section(QuotientMap& q);

struct SemidirectSplit {
  Subgroup fc;                    // G_f
  QuotientMap quotient;           // G -> G/G_f
  std::vector<GroupElement> lifts;  // t_1, ..., t_k
  bool provisional = false;       // fc_centre was not certified
  bool free_tower = true;         // every quotient factor infinite cyclic
  Certificate certificate;

  /// s = f * t_1^{a_1} ... t_k^{a_k}; returns (f, a).
  std::pair<GroupElement, Exponents> factor(const GroupElement& s) const;
};

SemidirectSplit semidirect_split(PresentationPtr g, const SearchOptions& opt = {});

}  // namespace nilcut

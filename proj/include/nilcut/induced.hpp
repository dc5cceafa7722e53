#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nilcut/pc.hpp"

namespace nilcut {

/// Induced polycyclic sequence of a subgroup: at most one element per depth,
/// each with a positive leading exponent that divides the relative order when
/// that is finite. Gives exact membership, order and index.
class InducedSequence {
 public:
  explicit InducedSequence(const PcPresentation& pres);

  static InducedSequence generated_by(const PcPresentation& pres, std::span<const GroupElement> gens);
  /// Smallest normal subgroup containing gens.
  static InducedSequence normal_closure(const PcPresentation& pres, std::span<const GroupElement> gens);

  const PcPresentation& presentation() const { return *pres_; }

  /// Adds an element and restores closure. Returns whether the subgroup grew.
  bool add(const GroupElement& g);

  bool contains(const GroupElement& g) const;
  /// Residue of g after sifting; identity iff g is a member.
  GroupElement sift(GroupElement g) const;
  /// Canonical representative of the left coset gH: exponents at depths
  /// holding a sequence element are reduced into [0, leading exponent).
  GroupElement coset_representative(GroupElement g) const;

  /// Sequence elements in depth order.
  std::vector<GroupElement> generators() const;
  /// Depths that carry a sequence element.
  std::vector<std::size_t> depths() const;
  const std::optional<GroupElement>& at_depth(std::size_t d) const { return table_[d]; }
  /// Leading exponent at depth d, or nullopt if no element sits there.
  std::optional<Integer> leading(std::size_t d) const;

  bool is_trivial() const;
  /// nullopt when infinite.
  std::optional<Integer> order() const;
  /// Index in the whole group; nullopt when infinite.
  std::optional<Integer> index() const;
  /// Whether every sequence element is normalised by every pc generator.
  bool is_normal() const;
  /// Whether every sequence element commutes with every pc generator.
  bool is_central() const;

  friend bool operator==(const InducedSequence& a, const InducedSequence& b) {
    return a.pres_ == b.pres_ && a.table_ == b.table_;
  }

 private:
  void insert_queue(std::vector<GroupElement> queue);
  GroupElement normalize_lead(GroupElement g) const;

  const PcPresentation* pres_;
  std::vector<std::optional<GroupElement>> table_;
};

}  // namespace nilcut

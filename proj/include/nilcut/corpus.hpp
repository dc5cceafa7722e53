#pragma once

// Ready-made nilpotent presentations used by the test corpus and the CLI.

#include <memory>
#include <string>
#include <vector>

#include "nilcut/pc.hpp"

namespace nilcut::corpus {

using PresentationPtr = std::shared_ptr<const PcPresentation>;

/// Integer Heisenberg group, generators x, y, z with [x, y] = z central.
/// Normal form x^a y^b z^c is the matrix [[1,a,ab+c],[0,1,b],[0,0,1]].
PresentationPtr heisenberg();
/// Heisenberg group over Z/m (UT(3, Z/m)); same relations, all relative orders m.
PresentationPtr heisenberg_mod(int m);
/// Integer Heisenberg group with the extra relation z^m = e.
PresentationPtr heisenberg_central_quotient(int m);
PresentationPtr free_abelian(int rank);
PresentationPtr cyclic(int m);
/// Z/q x Z/q.
PresentationPtr cyclic_square(int q);
/// Z x Z/m, generators t (infinite) and a (order m).
PresentationPtr z_times_cyclic(int m);
/// Quaternion group: i, j, m with i^2 = j^2 = m, j^i = j m.
PresentationPtr quaternion();
/// Z x D_4: t, s, r, r2 with r^2 = r2, r^s = r r2.
PresentationPtr z_times_dihedral();
/// Heisenberg group extended by w with w^x = w b, b of order 2 central.
/// The FC-centre <w, z, b> is strictly between Z(G) and G and [w, x] = b is torsion.
PresentationPtr heisenberg_with_torsion_commutator();
/// Z acting on Z/3 by inversion: solvable, not nilpotent ([x, y] = x).
PresentationPtr non_nilpotent_example();
PresentationPtr trivial_group();

/// Looks up a presentation by name ("H3", "H3mod3", "Z2", "ZxZ6", "Q8", "ZxD4",
/// "UT3Z4", ...). Throws Error(kInvalidArgument) for unknown names.
PresentationPtr by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace nilcut::corpus

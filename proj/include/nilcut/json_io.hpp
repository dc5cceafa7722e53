#pragma once

// JSON forms of presentations, elements, subgroups, characters and
// representations.
//
// Presentation:
//   {"relative_orders": [3, null, ...],
//    "powers": {"i": [exponents]},            g_i^{m_i} = P_i
//    "conjugations": {"i,j": [exponents]},    g_i^{-1} g_j g_i = C_ij, i < j
//    "inverse_conjugations": {"i,j": [...]},  optional, g_i g_j g_i^{-1}
//    "names": ["x", "y", ...]}                optional
// Exponents are JSON integers or decimal strings for large values.

#include <json.hpp>

#include "nilcut/cocycle.hpp"
#include "nilcut/rep.hpp"
#include "nilcut/subgroups.hpp"
#include "nilcut/twisted.hpp"

namespace nilcut::json_io {

using Json = nlohmann::ordered_json;

/// Throws Error(kParse) on schema problems, Error(kInconsistent) from
/// presentation validation.
PresentationPtr presentation_from_json(const Json& j);
Json presentation_to_json(const PcPresentation& g);

Json integer_to_json(const Integer& v);
Integer integer_from_json(const Json& j);
Exponents exponents_from_json(const Json& j, std::size_t n);
Json exponents_to_json(const Exponents& e);
GroupElement element_from_json(const PcPresentation& g, const Json& j);

/// "x^2*z", "e" for the identity.
std::string word(const GroupElement& g);
/// "trivial", "whole group", or generator words in angle brackets.
std::string subgroup_label(const Subgroup& h);
Json certificate_to_json(const Certificate& c);
/// {"label", "generators": [exponents], "order", "index", "certificate"}.
Json subgroup_to_json(const Subgroup& h);

/// {"free_angles": ["p/q", ...], "torsion": [k, ...]}.
Json character_to_json(const Character& w);
Json fdrep_to_json(const FdRep& r);
/// Sparse coefficients [{"element": [...], "coeff": "..."}].
Json fd_element_to_json(const FdStarAlgebra& a, const FdElement& x);
Json cutdown_to_json(const Cutdown& c);

}  // namespace nilcut::json_io

#include "nilcut/corpus.hpp"

#include <functional>
#include <map>
#include <regex>

#include "nilcut/error.hpp"

namespace nilcut::corpus {

namespace {

using Rel = PcPresentation::Relations;

Exponents vec(std::initializer_list<long long> v) {
  Exponents e;
  for (long long x : v) e.emplace_back(x);
  return e;
}

}  // namespace

PresentationPtr heisenberg() {
  Rel r;
  r.relative_orders = {std::nullopt, std::nullopt, std::nullopt};
  r.conjugates[{0, 1}] = vec({0, 1, -1});  // x^{-1} y x = y z^{-1}
  r.names = {"x", "y", "z"};
  return PcPresentation::create(std::move(r));
}

PresentationPtr heisenberg_mod(int m) {
  Rel r;
  r.relative_orders = {Integer(m), Integer(m), Integer(m)};
  r.conjugates[{0, 1}] = vec({0, 1, m - 1});
  r.names = {"x", "y", "z"};
  return PcPresentation::create(std::move(r));
}

PresentationPtr heisenberg_central_quotient(int m) {
  Rel r;
  r.relative_orders = {std::nullopt, std::nullopt, Integer(m)};
  r.conjugates[{0, 1}] = vec({0, 1, m - 1});
  r.names = {"x", "y", "z"};
  return PcPresentation::create(std::move(r));
}

PresentationPtr free_abelian(int rank) {
  Rel r;
  r.relative_orders.assign(rank, std::nullopt);
  return PcPresentation::create(std::move(r));
}

PresentationPtr cyclic(int m) {
  Rel r;
  r.relative_orders = {Integer(m)};
  r.names = {"a"};
  return PcPresentation::create(std::move(r));
}

PresentationPtr cyclic_square(int q) {
  Rel r;
  r.relative_orders = {Integer(q), Integer(q)};
  r.names = {"a", "b"};
  return PcPresentation::create(std::move(r));
}

PresentationPtr z_times_cyclic(int m) {
  Rel r;
  r.relative_orders = {std::nullopt, Integer(m)};
  r.names = {"t", "a"};
  return PcPresentation::create(std::move(r));
}

PresentationPtr quaternion() {
  Rel r;
  r.relative_orders = {Integer(2), Integer(2), Integer(2)};
  r.powers[0] = vec({0, 0, 1});
  r.powers[1] = vec({0, 0, 1});
  r.conjugates[{0, 1}] = vec({0, 1, 1});
  r.names = {"i", "j", "m"};
  return PcPresentation::create(std::move(r));
}

PresentationPtr z_times_dihedral() {
  Rel r;
  r.relative_orders = {std::nullopt, Integer(2), Integer(2), Integer(2)};
  r.powers[2] = vec({0, 0, 0, 1});
  r.conjugates[{1, 2}] = vec({0, 0, 1, 1});
  r.names = {"t", "s", "r", "r2"};
  return PcPresentation::create(std::move(r));
}

PresentationPtr heisenberg_with_torsion_commutator() {
  Rel r;
  r.relative_orders = {std::nullopt, std::nullopt, std::nullopt, std::nullopt, Integer(2)};
  r.conjugates[{0, 1}] = vec({0, 1, 0, -1, 0});
  r.conjugates[{0, 2}] = vec({0, 0, 1, 0, 1});
  r.names = {"x", "y", "w", "z", "b"};
  return PcPresentation::create(std::move(r));
}

PresentationPtr non_nilpotent_example() {
  Rel r;
  r.relative_orders = {std::nullopt, Integer(3)};
  r.conjugates[{0, 1}] = vec({0, 2});
  r.names = {"y", "x"};
  return PcPresentation::create(std::move(r));
}

PresentationPtr trivial_group() { return PcPresentation::create(Rel{}); }

PresentationPtr by_name(const std::string& name) {
  static const std::map<std::string, std::function<PresentationPtr()>> fixed = {
      {"H3", heisenberg},
      {"Z2", [] { return free_abelian(2); }},
      {"ZxZ6", [] { return z_times_cyclic(6); }},
      {"Q8", quaternion},
      {"ZxD4", z_times_dihedral},
      {"UT3Z4", [] { return heisenberg_mod(4); }},
      {"H3tors", heisenberg_with_torsion_commutator},
      {"nonnilpotent", non_nilpotent_example},
      {"trivial", trivial_group},
  };
  if (auto it = fixed.find(name); it != fixed.end()) return it->second();
  std::smatch m;
  static const std::regex parametric(R"((H3mod|H3z|Zrank|C|CxC)(\d+))");
  if (std::regex_match(name, m, parametric)) {
    const int k = std::stoi(m[2]);
    if (k < 1 || k > 1000) throw Error(ErrorCode::kInvalidArgument, "parameter out of range in '" + name + "'");
    if (m[1] == "H3mod" && k >= 2) return heisenberg_mod(k);
    if (m[1] == "H3z" && k >= 2) return heisenberg_central_quotient(k);
    if (m[1] == "Zrank") return free_abelian(k);
    if (m[1] == "C" && k >= 2) return cyclic(k);
    if (m[1] == "CxC" && k >= 2) return cyclic_square(k);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown group name '" + name + "'");
}

std::vector<std::string> names() {
  return {"H3", "H3mod<m>", "H3z<m>", "Z2", "Zrank<k>", "ZxZ6", "Q8", "ZxD4", "UT3Z4", "C<m>", "CxC<q>", "H3tors",
          "nonnilpotent", "trivial"};
}

}  // namespace nilcut::corpus

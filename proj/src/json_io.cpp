#include "nilcut/json_io.hpp"

#include <sstream>

#include "nilcut/error.hpp"

namespace nilcut::json_io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kParse, what); }

std::size_t parse_index(const std::string& s, std::size_t n, const std::string& where) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &pos);
  } catch (const std::exception&) {
    bad("bad generator index '" + s + "' in " + where);
  }
  if (pos != s.size() || v >= n) bad("generator index '" + s + "' out of range in " + where);
  return v;
}

std::pair<int, int> parse_pair(const std::string& key, std::size_t n, const std::string& where) {
  auto comma = key.find(',');
  if (comma == std::string::npos) bad("expected key \"i,j\" in " + where + ", got '" + key + "'");
  auto i = parse_index(key.substr(0, comma), n, where);
  auto j = parse_index(key.substr(comma + 1), n, where);
  return {static_cast<int>(i), static_cast<int>(j)};
}

}  // namespace

Json integer_to_json(const Integer& v) {
  if (v.fits_int64()) return Json(v.to_int64());
  return Json(v.to_string());
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(static_cast<long long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    try {
      return Integer::parse(j.get<std::string>());
    } catch (const std::exception&) {
      bad("bad integer '" + j.get<std::string>() + "'");
    }
  }
  bad("expected an integer, got " + j.dump());
}

Exponents exponents_from_json(const Json& j, std::size_t n) {
  if (!j.is_array()) bad("expected an exponent array, got " + j.dump());
  if (j.size() != n) bad("exponent vector " + j.dump() + " needs " + std::to_string(n) + " entries");
  Exponents e;
  e.reserve(n);
  for (const auto& x : j) e.push_back(integer_from_json(x));
  return e;
}

Json exponents_to_json(const Exponents& e) {
  Json a = Json::array();
  for (const auto& x : e) a.push_back(integer_to_json(x));
  return a;
}

GroupElement element_from_json(const PcPresentation& g, const Json& j) {
  return g.collect(exponents_from_json(j, g.size()));
}

PresentationPtr presentation_from_json(const Json& j) {
  if (!j.is_object()) bad("presentation must be an object");
  if (!j.contains("relative_orders") || !j["relative_orders"].is_array()) bad("presentation needs \"relative_orders\"");
  PcPresentation::Relations r;
  for (const auto& o : j["relative_orders"]) {
    if (o.is_null()) {
      r.relative_orders.emplace_back(std::nullopt);
    } else {
      r.relative_orders.emplace_back(integer_from_json(o));
    }
  }
  const std::size_t n = r.relative_orders.size();
  for (const auto& key : {"powers", "conjugations", "inverse_conjugations", "names"}) {
    if (j.contains(key) && !(j[key].is_object() || (std::string(key) == "names" && j[key].is_array()))) {
      bad(std::string("\"") + key + "\" has the wrong type");
    }
  }
  const Json powers = j.value("powers", Json::object());
  for (const auto& [k, v] : powers.items()) {
    r.powers[static_cast<int>(parse_index(k, n, "powers"))] = exponents_from_json(v, n);
  }
  const Json conj = j.value("conjugations", Json::object());
  for (const auto& [k, v] : conj.items()) {
    r.conjugates[parse_pair(k, n, "conjugations")] = exponents_from_json(v, n);
  }
  const Json inv = j.value("inverse_conjugations", Json::object());
  for (const auto& [k, v] : inv.items()) {
    r.inverse_conjugates[parse_pair(k, n, "inverse_conjugations")] = exponents_from_json(v, n);
  }
  if (j.contains("names")) {
    for (const auto& s : j["names"]) {
      if (!s.is_string()) bad("names must be strings");
      r.names.push_back(s.get<std::string>());
    }
    if (r.names.size() != n) bad("names needs one entry per generator");
  }
  for (const auto& [k, v] : j.items()) {
    if (k != "relative_orders" && k != "powers" && k != "conjugations" && k != "inverse_conjugations" && k != "names") {
      bad("unknown presentation key \"" + k + "\"");
    }
  }
  return PcPresentation::create(std::move(r));
}

Json presentation_to_json(const PcPresentation& g) {
  const auto& r = g.relations();
  Json j;
  Json orders = Json::array();
  for (const auto& o : r.relative_orders) orders.push_back(o ? integer_to_json(*o) : Json(nullptr));
  j["relative_orders"] = orders;
  Json powers = Json::object();
  for (const auto& [i, e] : r.powers) powers[std::to_string(i)] = exponents_to_json(e);
  j["powers"] = powers;
  Json conj = Json::object();
  for (const auto& [ij, e] : r.conjugates) conj[std::to_string(ij.first) + "," + std::to_string(ij.second)] = exponents_to_json(e);
  j["conjugations"] = conj;
  if (!r.inverse_conjugates.empty()) {
    Json inv = Json::object();
    for (const auto& [ij, e] : r.inverse_conjugates) {
      inv[std::to_string(ij.first) + "," + std::to_string(ij.second)] = exponents_to_json(e);
    }
    j["inverse_conjugations"] = inv;
  }
  Json names = Json::array();
  for (std::size_t i = 0; i < g.size(); ++i) names.push_back(g.name(i));
  j["names"] = names;
  return j;
}

std::string word(const GroupElement& g) {
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].is_zero()) continue;
    if (!out.empty()) out += "*";
    out += g.presentation().name(i);
    if (!(g[i] == Integer(1))) out += "^" + g[i].to_string();
  }
  return out.empty() ? "e" : out;
}

std::string subgroup_label(const Subgroup& h) {
  if (h.is_trivial()) return "trivial";
  if (h.same_as(Subgroup::whole(h.ambient()))) return "whole group";
  std::string out = "⟨";
  bool first = true;
  for (const auto& g : h.generators()) {
    if (!first) out += ", ";
    out += word(g);
    first = false;
  }
  return out + "⟩";
}

Json certificate_to_json(const Certificate& c) {
  return Json{{"radius", c.radius}, {"complete", c.complete}, {"passed", c.passed}, {"flags", c.flags}};
}

Json subgroup_to_json(const Subgroup& h) {
  Json gens = Json::array();
  for (const auto& g : h.generators()) gens.push_back(exponents_to_json(g.exponents()));
  auto ord = h.order();
  auto idx = h.index();
  return Json{{"label", subgroup_label(h)},
              {"generators", gens},
              {"order", ord ? integer_to_json(*ord) : Json("infinite")},
              {"index", idx ? integer_to_json(*idx) : Json("infinite")},
              {"certificate", certificate_to_json(h.certificate())}};
}

Json character_to_json(const Character& w) {
  Json free = Json::array(), tors = Json::array();
  for (const auto& p : w.free_angles()) free.push_back(p.to_string());
  for (const auto& k : w.torsion_indices()) tors.push_back(integer_to_json(k));
  return Json{{"free_angles", free}, {"torsion", tors}};
}

Json fdrep_to_json(const FdRep& r) {
  Json mats = Json::array();
  if (r.is_exact()) {
    for (const auto& m : r.exact_generators()) {
      Json rows = Json::array();
      for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).to_string());
        rows.push_back(row);
      }
      mats.push_back(rows);
    }
  } else {
    for (const auto& m : r.numeric_generators()) {
      Json rows = Json::array();
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
        rows.push_back(row);
      }
      mats.push_back(rows);
    }
  }
  return Json{{"dimension", r.dimension()}, {"exact", r.is_exact()}, {"generators", mats}};
}

Json fd_element_to_json(const FdStarAlgebra& a, const FdElement& x) {
  Json terms = Json::array();
  for (const auto& [i, c] : x.coeffs) {
    terms.push_back(Json{{"element", exponents_to_json(a.elements()[i].exponents())}, {"coeff", c.to_string()}});
  }
  return terms;
}

Json cutdown_to_json(const Cutdown& c) {
  Json blocks = Json::array();
  if (c.blocks) {
    for (std::size_t i = 0; i < c.blocks->blocks.size(); ++i) {
      blocks.push_back(Json{{"dim", c.blocks->blocks[i].dim}, {"kept", static_cast<bool>(c.kept[i])}});
    }
  }
  Json j{{"blocks", blocks}, {"trace_of_p", c.trace_of_p()}};
  j["kept_dimension"] = integer_to_json(c.kept_dimension);
  j["algebra_dimension"] = integer_to_json(c.algebra_dimension);
  j["block_size"] = c.block_size ? Json(*c.block_size) : Json(nullptr);
  if (c.blocks) {
    j["centre_dimension"] = c.blocks->centre_dimension;
    j["block_residual"] = c.blocks->residual;
  }
  return j;
}

}  // namespace nilcut::json_io

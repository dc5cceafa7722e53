#include "nilcut/subgroups.hpp"

#include <unordered_map>
#include <unordered_set>

#include "nilcut/error.hpp"

namespace nilcut {

// ---------------------------------------------------------------- Subgroup

Subgroup::Subgroup(PresentationPtr ambient, InducedSequence seq, Certificate cert)
    : ambient_(std::move(ambient)), seq_(std::move(seq)), cert_(std::move(cert)) {
  if (&seq_.presentation() != ambient_.get()) {
    throw Error(ErrorCode::kInvalidArgument, "induced sequence belongs to a different presentation");
  }
}

Subgroup Subgroup::generated_by(PresentationPtr ambient, const std::vector<GroupElement>& gens, Certificate cert) {
  for (const auto& g : gens) {
    if (g.presentation_ptr() != ambient.get()) throw Error(ErrorCode::kInvalidArgument, "generator belongs to a different presentation");
  }
  auto seq = InducedSequence::generated_by(*ambient, gens);
  return Subgroup(std::move(ambient), std::move(seq), std::move(cert));
}

Subgroup Subgroup::whole(PresentationPtr ambient) {
  std::vector<GroupElement> gens;
  for (std::size_t i = 0; i < ambient->size(); ++i) gens.push_back(ambient->generator(i));
  return generated_by(std::move(ambient), gens);
}

Subgroup Subgroup::trivial(PresentationPtr ambient) { return generated_by(std::move(ambient), {}); }

bool Subgroup::same_as(const Subgroup& other) const {
  if (ambient_ != other.ambient_) return false;
  for (const auto& g : generators()) {
    if (!other.contains(g)) return false;
  }
  for (const auto& g : other.generators()) {
    if (!contains(g)) return false;
  }
  return true;
}

Exponents Subgroup::coordinates(const GroupElement& g) const {
  const auto depths = seq_.depths();
  Exponents out(depths.size());
  GroupElement h = g;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const std::size_t d = depths[i];
    if (h.depth() < d) break;
    const GroupElement& t = *seq_.at_depth(d);
    auto [q, rem] = floor_divmod(h[d], t[d]);
    if (!rem.is_zero()) break;
    out[i] = q;
    if (!q.is_zero()) h = ambient_->multiply(ambient_->power(t, -q), h);
  }
  if (!h.is_identity()) throw Error(ErrorCode::kInvalidArgument, "element " + g.to_string() + " is not in the subgroup");
  return out;
}

PresentationPtr Subgroup::adapted_presentation() const {
  if (adapted_) return adapted_;
  const auto depths = seq_.depths();
  const auto gens = seq_.generators();
  PcPresentation::Relations rel;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const auto& r = ambient_->relative_order(depths[i]);
    if (r) {
      Integer m = exact_div(*r, gens[i][depths[i]]);
      rel.relative_orders.emplace_back(m);
      Exponents p = coordinates(ambient_->power(gens[i], m));
      bool trivial = true;
      for (const auto& e : p) trivial = trivial && e.is_zero();
      if (!trivial) rel.powers[static_cast<int>(i)] = p;
    } else {
      rel.relative_orders.emplace_back(std::nullopt);
    }
    rel.names.push_back("t" + std::to_string(i));
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      Exponents c = coordinates(ambient_->conjugate(gens[j], gens[i]));
      Exponents unit(gens.size());
      unit[j] = 1;
      if (c != unit) rel.conjugates[{static_cast<int>(i), static_cast<int>(j)}] = c;
    }
  }
  adapted_ = PcPresentation::create(std::move(rel), ambient_->step_budget());
  return adapted_;
}

std::vector<GroupElement> Subgroup::elements() const {
  auto n = order();
  if (!n) throw Error(ErrorCode::kPrecondition, "subgroup is infinite");
  auto h = adapted_presentation();
  const auto gens = seq_.generators();
  std::vector<GroupElement> out;
  for (const auto& e : h->enumerate()) {
    GroupElement g = ambient_->identity();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (!e[i].is_zero()) g = ambient_->multiply(g, ambient_->power(gens[i], e[i]));
    }
    out.push_back(std::move(g));
  }
  return out;
}

// ---------------------------------------------------------------- searches

int bounded_ball(const PcPresentation& g, int wanted, std::size_t max_ball, std::vector<GroupElement>& out) {
  out.assign(1, g.identity());
  std::unordered_set<GroupElement, GroupElementHash> seen(out.begin(), out.end());
  std::vector<GroupElement> steps;
  for (std::size_t i = 0; i < g.size(); ++i) {
    steps.push_back(g.generator(i));
    steps.push_back(g.inverse(g.generator(i)));
  }
  std::size_t layer_begin = 0;
  for (int r = 1; r <= wanted; ++r) {
    const std::size_t layer_end = out.size();
    std::vector<GroupElement> next;
    for (std::size_t k = layer_begin; k < layer_end; ++k) {
      for (const auto& s : steps) {
        GroupElement h = g.multiply(out[k], s);
        if (seen.insert(h).second) next.push_back(std::move(h));
      }
      if (out.size() + next.size() > max_ball) {
        for (const auto& h : next) seen.erase(h);
        return r - 1;
      }
    }
    layer_begin = layer_end;
    for (auto& h : next) out.push_back(std::move(h));
    if (layer_begin == out.size()) return wanted;  // finite group exhausted
  }
  return wanted;
}

namespace {

bool commutes_with_generators(const PcPresentation& g, const GroupElement& x) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.commutator(x, g.generator(i)).is_identity()) return false;
  }
  return true;
}

std::string radius_note(const std::string& what, int r) { return what + " on ball(" + std::to_string(r) + ")"; }

}  // namespace

Subgroup center(PresentationPtr g, const SearchOptions& opt) {
  std::vector<GroupElement> ball;
  const int r = bounded_ball(*g, opt.radius, opt.max_ball, ball);
  std::vector<GroupElement> cands;
  for (const auto& x : ball) {
    if (!x.is_identity() && commutes_with_generators(*g, x)) cands.push_back(x);
  }
  Subgroup z = Subgroup::generated_by(g, cands);
  Certificate& c = z.certificate();
  c.radius = r;
  if (!z.is_central()) throw Error(ErrorCode::kInternal, "centre candidate is not central");
  c.pass("generators commute with every pc generator (exact)");
  c.pass(radius_note("contains every element commuting with all pc generators", r));
  if (r < opt.radius) c.flag("uncertified-maximal: ball budget reached at radius " + std::to_string(r));
  return z;
}

Subgroup torsion_subgroup(PresentationPtr g, const SearchOptions& opt) {
  const std::size_t n = g->size();
  // A block of infinite generators followed by a block of finite ones: the
  // tail is a finite normal subgroup with a poly-Z quotient, so it is T(G).
  std::size_t k = 0;
  while (k < n && !g->relative_order(k)) ++k;
  bool tail = true;
  for (std::size_t i = k; i < n; ++i) tail = tail && g->relative_order(i).has_value();

  if (tail) {
    std::vector<GroupElement> gens;
    for (std::size_t i = k; i < n; ++i) gens.push_back(g->generator(i));
    Subgroup t = Subgroup::generated_by(g, gens);
    t.certificate().pass("finite generators form a trailing block; quotient by it is poly-infinite-cyclic (exact)");
    return t;
  }

  const Integer m = g->finite_order_product();
  std::vector<GroupElement> cands;
  auto consider = [&](const GroupElement& x) {
    if (!x.is_identity() && g->power(x, m).is_identity()) cands.push_back(x);
  };
  // Box of elements supported on the finite coordinates.
  if (m <= Integer(100'000)) {
    std::vector<std::size_t> fin;
    for (std::size_t i = 0; i < n; ++i) {
      if (g->relative_order(i)) fin.push_back(i);
    }
    Exponents e(n);
    for (;;) {
      consider(g->element(e));
      std::size_t idx = 0;
      for (; idx < fin.size(); ++idx) {
        e[fin[idx]] += Integer(1);
        if (e[fin[idx]] < *g->relative_order(fin[idx])) break;
        e[fin[idx]] = 0;
      }
      if (idx == fin.size()) break;
    }
  }
  std::vector<GroupElement> ball;
  const int r = bounded_ball(*g, opt.radius, opt.max_ball, ball);
  for (const auto& x : ball) consider(x);

  Subgroup t = Subgroup::generated_by(g, cands);
  if (!t.order()) throw Error(ErrorCode::kPrecondition, "torsion elements generate an infinite subgroup; group is not nilpotent");
  for (const auto& x : t.generators()) {
    if (!g->power(x, m).is_identity()) throw Error(ErrorCode::kInternal, "torsion generator of infinite order");
  }
  Certificate& c = t.certificate();
  c.radius = r;
  c.pass("generated subgroup is finite (exact)");
  c.pass(radius_note("ball-certified: contains every element of finite order", r));
  if (r < opt.radius) c.flag("uncertified-maximal: ball budget reached at radius " + std::to_string(r));
  return t;
}

std::vector<std::vector<std::size_t>> multiplication_table(const Subgroup& h) {
  auto elems = h.elements();
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);
  std::vector<std::vector<std::size_t>> table(elems.size(), std::vector<std::size_t>(elems.size()));
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) {
      auto it = index.find(elems[i] * elems[j]);
      if (it == index.end()) throw Error(ErrorCode::kInternal, "subgroup not closed under multiplication");
      table[i][j] = it->second;
    }
  }
  return table;
}

OrbitResult conjugacy_orbit(const PcPresentation& g, const GroupElement& x, std::size_t cap) {
  // Closure under conjugation by the pc generators alone: a finite orbit is
  // permuted by each generator, so it is also closed under the inverses.
  std::unordered_set<GroupElement, GroupElementHash> seen{x};
  std::vector<GroupElement> frontier{x};
  while (!frontier.empty()) {
    std::vector<GroupElement> next;
    for (const auto& y : frontier) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        GroupElement c = g.conjugate(y, g.generator(i));
        if (seen.insert(c).second) {
          if (seen.size() > cap) return {false, seen.size()};
          next.push_back(std::move(c));
        }
      }
    }
    frontier = std::move(next);
  }
  return {true, seen.size()};
}

namespace {

/// Orbit closure that also records the verdict for every element of `window`
/// met along the way.
class OrbitMemo {
 public:
  OrbitMemo(const PcPresentation& g, const std::vector<GroupElement>& window, std::size_t cap) : g_(g), cap_(cap) {
    for (const auto& x : window) verdict_.emplace(x, -1);
  }

  bool finite(const GroupElement& x) {
    auto it = verdict_.find(x);
    if (it != verdict_.end() && it->second >= 0) return it->second;
    if (drifts(x)) {
      if (it != verdict_.end()) it->second = 0;
      return false;
    }
    std::unordered_set<GroupElement, GroupElementHash> seen{x};
    std::vector<GroupElement> frontier{x};
    bool complete = true;
    while (!frontier.empty() && complete) {
      std::vector<GroupElement> next;
      for (const auto& y : frontier) {
        for (std::size_t i = 0; i < g_.size() && complete; ++i) {
          GroupElement c = g_.conjugate(y, g_.generator(i));
          if (seen.insert(c).second) {
            if (seen.size() > cap_) complete = false;
            next.push_back(std::move(c));
          }
        }
      }
      frontier = std::move(next);
    }
    for (const auto& y : seen) {
      auto w = verdict_.find(y);
      if (w != verdict_.end()) w->second = complete ? 1 : 0;
    }
    return complete;
  }

  std::size_t witnessed() const { return witnessed_; }

 private:
  // x^g = x c with c commuting with x and g and of infinite order gives the
  // pairwise distinct conjugates x^{g^k} = x c^k.
  bool drifts(const GroupElement& x) {
    const Integer m = g_.finite_order_product();
    for (std::size_t i = 0; i < g_.size(); ++i) {
      const GroupElement gi = g_.generator(i);
      const GroupElement c = g_.commutator(x, gi);
      if (c.is_identity()) continue;
      if (g_.commutator(c, x).is_identity() && g_.commutator(c, gi).is_identity() && !g_.power(c, m).is_identity()) {
        ++witnessed_;
        return true;
      }
    }
    return false;
  }

  const PcPresentation& g_;
  std::size_t cap_;
  std::size_t witnessed_ = 0;
  std::unordered_map<GroupElement, int, GroupElementHash> verdict_;
};

}  // namespace

Subgroup fc_centre(PresentationPtr g, const SearchOptions& opt) {
  Subgroup t = torsion_subgroup(g, opt);
  auto central_mod_t = [&](const GroupElement& x) {
    for (std::size_t i = 0; i < g->size(); ++i) {
      if (!t.contains(g->commutator(x, g->generator(i)))) return false;
    }
    return true;
  };

  std::vector<GroupElement> ball;
  const int r = bounded_ball(*g, opt.radius, opt.max_ball, ball);
  std::vector<GroupElement> cands = t.generators();
  for (const auto& x : ball) {
    if (!x.is_identity() && central_mod_t(x)) cands.push_back(x);
  }
  Subgroup f = Subgroup::generated_by(g, cands);
  Certificate& c = f.certificate();
  c.radius = r;
  for (const auto& x : f.generators()) {
    if (!central_mod_t(x)) throw Error(ErrorCode::kInternal, "FC-centre candidate is not central modulo torsion");
  }
  c.pass("generators are central modulo the torsion subgroup (exact)");
  if (!t.certificate().complete) c.flag("torsion subgroup uncertified");
  if (r < opt.radius) c.flag("uncertified-maximal: ball budget reached at radius " + std::to_string(r));

  OrbitMemo memo(*g, ball, opt.orbit_cap);
  bool gens_ok = true;
  for (const auto& x : f.generators()) {
    if (!memo.finite(x)) {
      gens_ok = false;
      c.flag("orbit-cap: generator " + x.to_string() + " exceeded " + std::to_string(opt.orbit_cap) + " conjugates");
    }
  }
  if (gens_ok) c.pass("every generator has a finite conjugacy class (orbit closure)");
  bool window_ok = true;
  for (const auto& x : ball) {
    const bool in = f.contains(x);
    const bool fin = memo.finite(x);
    if (fin && !in) {
      window_ok = false;
      c.flag("missed element " + x.to_string() + " with finite conjugacy class");
    } else if (in && !fin) {
      window_ok = false;
      c.flag("orbit-cap: member " + x.to_string() + " exceeded " + std::to_string(opt.orbit_cap) + " conjugates");
    }
  }
  if (window_ok) c.pass(radius_note("membership matches finiteness of the conjugacy class", r));
  if (memo.witnessed() > 0) {
    c.pass(std::to_string(memo.witnessed()) + " infinite classes shown by a witness x^g = x c, c of infinite order commuting with x and g");
  }
  return f;
}

// ---------------------------------------------------------------- quotients

QuotientMap::QuotientMap(PresentationPtr ambient, Subgroup kernel) : ambient_(std::move(ambient)), kernel_(std::move(kernel)) {
  if (kernel_.ambient() != ambient_) throw Error(ErrorCode::kInvalidArgument, "kernel lives in a different presentation");
  if (!kernel_.is_normal()) throw Error(ErrorCode::kPrecondition, "subgroup is not normal");
  const auto& seq = kernel_.sequence();
  PcPresentation::Relations rel;
  for (std::size_t d = 0; d < ambient_->size(); ++d) {
    auto lead = seq.leading(d);
    if (lead && *lead == Integer(1)) continue;
    kept_.push_back(d);
    rel.relative_orders.push_back(lead ? PcPresentation::RelativeOrder(*lead) : ambient_->relative_order(d));
    rel.names.push_back(ambient_->name(d));
  }
  auto coords = [&](const GroupElement& g) {
    GroupElement c = seq.coset_representative(g);
    Exponents e;
    for (std::size_t d : kept_) e.push_back(c[d]);
    return e;
  };
  for (std::size_t i = 0; i < kept_.size(); ++i) {
    const GroupElement gi = ambient_->generator(kept_[i]);
    if (const auto& m = rel.relative_orders[i]) {
      Exponents p = coords(ambient_->power(gi, *m));
      if (p != Exponents(kept_.size())) rel.powers[static_cast<int>(i)] = p;
    }
    for (std::size_t j = i + 1; j < kept_.size(); ++j) {
      Exponents cj = coords(ambient_->conjugate(ambient_->generator(kept_[j]), gi));
      Exponents unit(kept_.size());
      unit[j] = 1;
      if (cj != unit) rel.conjugates[{static_cast<int>(i), static_cast<int>(j)}] = cj;
    }
  }
  quotient_ = PcPresentation::create(std::move(rel), ambient_->step_budget());
}

GroupElement QuotientMap::project(const GroupElement& g) const {
  if (g.presentation_ptr() != ambient_.get()) throw Error(ErrorCode::kInvalidArgument, "element belongs to a different presentation");
  GroupElement c = kernel_.sequence().coset_representative(g);
  Exponents e;
  for (std::size_t d : kept_) e.push_back(c[d]);
  return quotient_->element(std::move(e));
}

GroupElement QuotientMap::section(const GroupElement& q) const {
  if (q.presentation_ptr() != quotient_.get()) throw Error(ErrorCode::kInvalidArgument, "element is not in the quotient");
  Exponents e(ambient_->size());
  for (std::size_t i = 0; i < kept_.size(); ++i) e[kept_[i]] = q[i];
  GroupElement s = ambient_->element(std::move(e));
  if (adjust_) {
    GroupElement a = adjust_(q);
    if (!kernel_.contains(a)) throw Error(ErrorCode::kInternal, "section adjustment left the kernel at " + q.to_string());
    s = ambient_->multiply(s, a);
  }
  return s;
}

void QuotientMap::set_section_adjustment(SectionAdjustment adj, std::string name) {
  if (adj && !adj(quotient_->identity()).is_identity()) {
    throw Error(ErrorCode::kInvalidArgument, "section adjustment must fix the identity coset");
  }
  adjust_ = std::move(adj);
  section_name_ = adjust_ ? std::move(name) : "normal-form";
}

QuotientMap index_and_transversal(PresentationPtr g, const Subgroup& n) {
  if (n.ambient() != g) throw Error(ErrorCode::kInvalidArgument, "subgroup lives in a different presentation");
  return QuotientMap(std::move(g), n);
}

void use_matrix_model_section(QuotientMap& q) {
  const auto& g = q.ambient();
  if (g->size() != 3 || q.kept_depths() != std::vector<std::size_t>{0, 1}) {
    throw Error(ErrorCode::kPrecondition, "matrix-model section needs a Heisenberg presentation modulo a subgroup of <z>");
  }
  const GroupElement z = g->generator(2);
  if (g->commutator(g->generator(0), g->generator(1)) != z) {
    throw Error(ErrorCode::kPrecondition, "matrix-model section needs [x, y] = z");
  }
  q.set_section_adjustment([g, z](const GroupElement& qe) { return g->power(z, Integer(0) - qe[0] * qe[1]); },
                           "matrix-model");
}

// ---------------------------------------------------------------- splitting

std::pair<GroupElement, Exponents> SemidirectSplit::factor(const GroupElement& s) const {
  GroupElement q = quotient.project(s);
  GroupElement tower = quotient.section(q);
  GroupElement f = quotient.ambient()->multiply(s, quotient.ambient()->inverse(tower));
  return {f, q.exponents()};
}

SemidirectSplit semidirect_split(PresentationPtr g, const SearchOptions& opt) {
  Subgroup fc = fc_centre(g, opt);
  QuotientMap quotient(g, fc);
  SemidirectSplit split{fc, quotient, {}, !fc.certificate().complete, true, {}};
  for (std::size_t i = 0; i < quotient.kept_depths().size(); ++i) {
    split.lifts.push_back(g->generator(quotient.kept_depths()[i]));
    if (quotient.quotient()->relative_order(i)) split.free_tower = false;
  }
  Certificate& c = split.certificate;
  if (split.provisional) c.flag("provisional: FC-centre not certified");
  if (!split.free_tower) c.flag("quotient by the FC-centre has a finite pc factor");

  std::vector<GroupElement> ball;
  const int r = bounded_ball(*g, std::min(opt.radius, 4), opt.max_ball, ball);
  c.radius = r;
  bool ok = true;
  for (const auto& s : ball) {
    auto [f, a] = split.factor(s);
    GroupElement tower = g->identity();
    for (std::size_t i = 0; i < a.size(); ++i) tower = g->multiply(tower, g->power(split.lifts[i], a[i]));
    if (!fc.contains(f) || g->multiply(f, tower) != s || quotient.project(tower).exponents() != a) {
      ok = false;
      c.flag("factorisation failed for " + s.to_string());
      break;
    }
  }
  if (ok) c.pass(radius_note("unique factorisation f * t^a with f in the FC-centre", r));
  return split;
}

}  // namespace nilcut

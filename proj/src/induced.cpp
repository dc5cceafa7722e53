#include "nilcut/induced.hpp"

#include "nilcut/error.hpp"

namespace nilcut {

InducedSequence::InducedSequence(const PcPresentation& pres) : pres_(&pres), table_(pres.size()) {}

InducedSequence InducedSequence::generated_by(const PcPresentation& pres, std::span<const GroupElement> gens) {
  InducedSequence s(pres);
  s.insert_queue(std::vector<GroupElement>(gens.begin(), gens.end()));
  return s;
}

InducedSequence InducedSequence::normal_closure(const PcPresentation& pres, std::span<const GroupElement> gens) {
  InducedSequence s = generated_by(pres, gens);
  std::vector<GroupElement> conjugators;
  for (std::size_t i = 0; i < pres.size(); ++i) {
    conjugators.push_back(pres.generator(i));
    if (!pres.relative_order(i)) conjugators.push_back(pres.inverse(pres.generator(i)));
  }
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<GroupElement> missing;
    for (const auto& t : s.generators()) {
      for (const auto& c : conjugators) {
        GroupElement x = pres.conjugate(t, c);
        if (!s.contains(x)) missing.push_back(std::move(x));
      }
    }
    if (!missing.empty()) {
      s.insert_queue(std::move(missing));
      grew = true;
    }
  }
  return s;
}

bool InducedSequence::add(const GroupElement& g) {
  if (contains(g)) return false;
  insert_queue({g});
  return true;
}

GroupElement InducedSequence::normalize_lead(GroupElement g) const {
  const std::size_t d = g.depth();
  const auto& r = pres_->relative_order(d);
  if (r) {
    auto [gg, s, t] = ext_gcd(g[d], *r);
    (void)t;
    if (gg != g[d]) g = pres_->power(g, s);
  } else if (g[d].sign() < 0) {
    g = pres_->inverse(g);
  }
  return g;
}

void InducedSequence::insert_queue(std::vector<GroupElement> queue) {
  const PcPresentation& P = *pres_;
  auto push_obligations = [&](const GroupElement& t) {
    const std::size_t d = t.depth();
    if (const auto& r = P.relative_order(d)) queue.push_back(P.power(t, exact_div(*r, t[d])));
    for (const auto& other : table_) {
      if (other && *other != t) queue.push_back(P.commutator(t, *other));
    }
  };

  for (;;) {
    while (!queue.empty()) {
      GroupElement h = std::move(queue.back());
      queue.pop_back();
      for (;;) {
        if (h.is_identity()) break;
        const std::size_t d = h.depth();
        if (!table_[d]) {
          GroupElement t = normalize_lead(h);
          if (t != h) queue.push_back(h);
          table_[d] = t;
          push_obligations(t);
          break;
        }
        const GroupElement& t = *table_[d];
        auto [q, rem] = floor_divmod(h[d], t[d]);
        if (rem.is_zero()) {
          h = P.multiply(h, P.power(t, -q));
          continue;
        }
        auto [gg, s, c] = ext_gcd(t[d], h[d]);
        (void)gg;
        GroupElement combined = normalize_lead(P.multiply(P.power(t, s), P.power(h, c)));
        queue.push_back(t);
        queue.push_back(h);
        table_[d] = combined;
        push_obligations(combined);
        break;
      }
    }
    // Closure pass: powers and commutators (both conjugation directions for infinite factors).
    const auto gens = generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const std::size_t d = gens[i].depth();
      if (const auto& r = P.relative_order(d)) {
        GroupElement p = P.power(gens[i], exact_div(*r, gens[i][d]));
        if (!contains(p)) queue.push_back(std::move(p));
      }
      for (std::size_t j = i + 1; j < gens.size(); ++j) {
        GroupElement c = P.commutator(gens[j], gens[i]);
        if (!contains(c)) queue.push_back(std::move(c));
        if (!P.relative_order(d)) {
          GroupElement c2 = P.commutator(gens[j], P.inverse(gens[i]));
          if (!contains(c2)) queue.push_back(std::move(c2));
        }
      }
    }
    if (queue.empty()) return;
  }
}

GroupElement InducedSequence::sift(GroupElement g) const {
  if (g.presentation_ptr() != pres_) throw Error(ErrorCode::kInvalidArgument, "element belongs to a different presentation");
  for (;;) {
    const std::size_t d = g.depth();
    if (d == g.size() || !table_[d]) return g;
    const GroupElement& t = *table_[d];
    auto [q, rem] = floor_divmod(g[d], t[d]);
    if (!rem.is_zero()) return g;
    g = pres_->multiply(g, pres_->power(t, -q));
  }
}

bool InducedSequence::contains(const GroupElement& g) const { return sift(g).is_identity(); }

GroupElement InducedSequence::coset_representative(GroupElement g) const {
  for (std::size_t d = 0; d < table_.size(); ++d) {
    if (!table_[d]) continue;
    const GroupElement& t = *table_[d];
    auto [q, rem] = floor_divmod(g[d], t[d]);
    (void)rem;
    if (!q.is_zero()) g = pres_->multiply(g, pres_->power(t, -q));
  }
  return g;
}

std::vector<GroupElement> InducedSequence::generators() const {
  std::vector<GroupElement> out;
  for (const auto& t : table_) {
    if (t) out.push_back(*t);
  }
  return out;
}

std::vector<std::size_t> InducedSequence::depths() const {
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d < table_.size(); ++d) {
    if (table_[d]) out.push_back(d);
  }
  return out;
}

std::optional<Integer> InducedSequence::leading(std::size_t d) const {
  if (!table_[d]) return std::nullopt;
  return (*table_[d])[d];
}

bool InducedSequence::is_trivial() const {
  for (const auto& t : table_) {
    if (t) return false;
  }
  return true;
}

std::optional<Integer> InducedSequence::order() const {
  Integer o(1);
  for (std::size_t d = 0; d < table_.size(); ++d) {
    if (!table_[d]) continue;
    const auto& r = pres_->relative_order(d);
    if (!r) return std::nullopt;
    o *= exact_div(*r, (*table_[d])[d]);
  }
  return o;
}

std::optional<Integer> InducedSequence::index() const {
  Integer idx(1);
  for (std::size_t d = 0; d < table_.size(); ++d) {
    const auto& r = pres_->relative_order(d);
    if (table_[d]) {
      idx *= (*table_[d])[d];  // the factor at depth d has index equal to the leading exponent
    } else {
      if (!r) return std::nullopt;
      idx *= *r;
    }
  }
  return idx;
}

bool InducedSequence::is_normal() const {
  for (const auto& t : generators()) {
    for (std::size_t i = 0; i < pres_->size(); ++i) {
      GroupElement g = pres_->generator(i);
      if (!contains(pres_->conjugate(t, g)) || !contains(pres_->conjugate(t, pres_->inverse(g)))) return false;
    }
  }
  return true;
}

bool InducedSequence::is_central() const {
  for (const auto& t : generators()) {
    for (std::size_t i = 0; i < pres_->size(); ++i) {
      if (!pres_->commutator(t, pres_->generator(i)).is_identity()) return false;
    }
  }
  return true;
}

}  // namespace nilcut

#include "nilcut/jobs.hpp"

#include <random>
#include <sstream>

#include "nilcut/corpus.hpp"
#include "nilcut/error.hpp"

namespace nilcut::jobs {

namespace {

using json_io::exponents_to_json;
using json_io::integer_to_json;
using json_io::word;

constexpr std::size_t kFailuresShown = 10;

struct Options {
  int radius = 3;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  bool exact = true;

  Json to_json() const {
    return Json{{"radius", radius}, {"samples", samples}, {"seed", seed}, {"mode", exact ? "exact" : "float"}};
  }
};

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kParse, what); }

Options resolve(const Json& job, int radius, std::size_t samples) {
  Options o;
  o.radius = radius;
  o.samples = samples;
  if (!job.contains("options")) return o;
  const Json& j = job["options"];
  if (!j.is_object()) bad("\"options\" must be an object");
  for (const auto& [k, v] : j.items()) {
    if (k == "radius") {
      if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() > 12) bad("radius must be an integer in [0, 12]");
      o.radius = v.get<int>();
    } else if (k == "samples") {
      if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 1'000'000) bad("samples must be in [0, 1000000]");
      o.samples = v.get<std::size_t>();
    } else if (k == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        bad("seed must be a non-negative integer");
      }
      o.seed = v.get<std::uint64_t>();
    } else if (k == "mode") {
      if (v != "exact" && v != "float") bad("mode must be \"exact\" or \"float\"");
      o.exact = v == "exact";
    } else {
      bad("unknown option \"" + k + "\"");
    }
  }
  return o;
}

class Checks {
 public:
  void add(const std::string& name, const std::string& contract, std::size_t checked,
           const std::vector<std::string>& failures, Json extra = Json::object()) {
    Json shown = Json::array();
    for (std::size_t i = 0; i < failures.size() && i < kFailuresShown; ++i) shown.push_back(failures[i]);
    Json c{{"name", name},        {"contract", contract},           {"checked", checked},
           {"failures", shown},   {"failure_count", failures.size()}, {"passed", failures.empty()}};
    for (auto& [k, v] : extra.items()) c[k] = v;
    arr_.push_back(std::move(c));
    checked_ += checked;
    failures_ += failures.size();
  }
  void merge(const Checks& other) {
    for (const auto& c : other.arr_) arr_.push_back(c);
    checked_ += other.checked_;
    failures_ += other.failures_;
  }
  const Json& json() const { return arr_; }
  std::size_t checked() const { return checked_; }
  std::size_t failures() const { return failures_; }

 private:
  Json arr_ = Json::array();
  std::size_t checked_ = 0;
  std::size_t failures_ = 0;
};

std::string ball_note(int r) { return "ball(" + std::to_string(r) + ")"; }

template <class V>
const auto& pick(const V& v, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
  return v[d(rng)];
}

std::vector<GroupElement> window(const PcPresentation& g, int radius) {
  std::vector<GroupElement> out;
  bounded_ball(g, radius, 50'000, out);
  return out;
}

PresentationPtr group_of(const Json& job, Json& info) {
  if (!job.contains("group")) bad("job needs \"group\"");
  const Json& j = job["group"];
  PresentationPtr g;
  if (j.is_string()) {
    g = corpus::by_name(j.get<std::string>());
    info["name"] = j;
  } else {
    g = json_io::presentation_from_json(j);
    info["name"] = nullptr;
  }
  info["presentation"] = json_io::presentation_to_json(*g);
  info["order"] = g->is_finite() ? integer_to_json(g->finite_order_product()) : Json("infinite");
  return g;
}

void require_nilpotent(const PresentationPtr& g, Checks& ch) {
  auto rep = g->check_consistency();
  std::vector<std::string> f;
  if (!rep.consistent) f.push_back(rep.witness);
  else if (!rep.nilpotent) f.push_back("not certified nilpotent");
  ch.add("presentation", "overlap consistency and lower central descent", 1, f,
         Json{{"nilpotency_class", rep.nilpotent ? Json(rep.nilpotency_class) : Json(nullptr)}});
  if (!rep.consistent) throw Error(ErrorCode::kInconsistent, rep.witness);
  if (!rep.nilpotent) throw Error(ErrorCode::kPrecondition, "presentation is not certified nilpotent");
}

// ---- characters ----

struct CharacterData {
  Subgroup n;
  std::shared_ptr<QuotientMap> q;
  std::shared_ptr<Character> w;
};

Subgroup domain_of(const PresentationPtr& g, const Json& chr, const Options& o) {
  const Json sub = chr.value("subgroup", Json("center"));
  if (sub.is_string()) {
    const auto s = sub.get<std::string>();
    if (s == "center") return center(g, SearchOptions{o.radius, 200'000, 10'000});
    if (s == "trivial") return Subgroup::trivial(g);
    bad("unknown subgroup \"" + s + "\"");
  }
  if (!sub.is_array()) bad("\"subgroup\" must be a name or a list of exponent vectors");
  std::vector<GroupElement> gens;
  for (const auto& e : sub) gens.push_back(json_io::element_from_json(*g, e));
  return Subgroup::generated_by(g, gens);
}

CharacterData character_of(const PresentationPtr& g, const Json& job, const Options& o) {
  const Json chr = job.value("character", Json::object());
  if (!chr.is_object()) bad("\"character\" must be an object");
  Subgroup n = domain_of(g, chr, o);
  if (!n.is_central()) throw Error(ErrorCode::kPrecondition, "character domain " + json_io::subgroup_label(n) + " is not central");
  auto q = std::make_shared<QuotientMap>(index_and_transversal(g, n));
  const std::string section = chr.value("section", "normal-form");
  if (section == "matrix-model") {
    use_matrix_model_section(*q);
  } else if (section != "normal-form") {
    bad("unknown section \"" + section + "\"");
  }
  std::shared_ptr<Character> w;
  if (!chr.contains("free_angles") && !chr.contains("torsion")) {
    w = std::make_shared<Character>(Character::trivial(n));
  } else {
    std::vector<Phase> free;
    std::vector<Integer> tors;
    for (const auto& a : chr.value("free_angles", Json::array())) {
      if (!a.is_string()) bad("free angles are strings such as \"1/5\"");
      try {
        free.push_back(Phase::parse(a.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        bad(e.what());
      }
    }
    for (const auto& k : chr.value("torsion", Json::array())) tors.push_back(json_io::integer_from_json(k));
    w = std::make_shared<Character>(n, free, tors);
  }
  if (o.exact && !w->is_exact()) throw Error(ErrorCode::kPrecondition, "floating angles need mode \"float\"");
  return {std::move(n), std::move(q), std::move(w)};
}

Json character_json(const CharacterData& c) {
  Json j = json_io::character_to_json(*c.w);
  j["domain"] = json_io::subgroup_to_json(c.n);
  j["section"] = c.q->section_name();
  return j;
}

Json sigma_json(const Cocycle2& s, const CharacterData& c) {
  return Json{{"description", s.description()},
              {"provenance", Json{{"character", json_io::character_to_json(*c.w)},
                                  {"kernel", json_io::subgroup_label(c.n)},
                                  {"section", c.q->section_name()}}}};
}

std::string triple_text(const Triple& t) {
  return "(" + t[0].to_string() + ", " + t[1].to_string() + ", " + t[2].to_string() + ")";
}

std::vector<std::string> cocycle_failures(const CocycleReport& r) {
  std::vector<std::string> f;
  if (!r.normalized) f.push_back("not normalized at the identity");
  for (const auto& x : r.failures) {
    f.push_back("identity fails at " + triple_text(x.triple) + ": " + x.lhs.to_string() + " vs " + x.rhs.to_string());
  }
  return f;
}

// sigma_0 = 1 and sigma_1 = sigma on the first two entries of each triple;
// sigma_t satisfies the identity for t in {1/4, 1/2, 3/4}.
Json homotopy_checks(const Cocycle2& sigma, const CharacterData& c, const std::vector<Triple>& triples, Checks& ch) {
  if (!c.w->torsion_free_domain()) {
    return Json{{"applicable", false}, {"reason", "character domain has torsion; angle scaling is undefined"}};
  }
  Cocycle2 s0 = homotopy_path(sigma, mpq_class(0));
  Cocycle2 s1 = homotopy_path(sigma, mpq_class(1));
  std::vector<std::string> f0, f1;
  for (const auto& t : triples) {
    if (!s0(t[0], t[1]).is_one()) f0.push_back("sigma_0" + triple_text(t) + " != 1");
    if (!(s1(t[0], t[1]) == sigma(t[0], t[1]))) f1.push_back("sigma_1 differs at " + triple_text(t));
  }
  ch.add("homotopy start", "sigma_0 = 1 on sampled pairs", triples.size(), f0);
  ch.add("homotopy end", "sigma_1 = sigma on sampled pairs", triples.size(), f1);
  Json ts = Json::array();
  for (const char* t : {"1/4", "1/2", "3/4"}) {
    Cocycle2 st = homotopy_path(sigma, mpq_class(t));
    auto rep = verify_cocycle(st, triples);
    ch.add(std::string("homotopy sigma_") + t, "cocycle identity on sampled triples", rep.checked, cocycle_failures(rep));
    ts.push_back(t);
  }
  return Json{{"applicable", true}, {"t", ts}};
}

// ---- representation evidence ----

void pi_omega_checks(const PresentationPtr& g, const CharacterData& c, const Options& o, std::mt19937_64& rng, Checks& ch) {
  const auto gball = window(*g, o.radius);
  const auto qball = window(*c.q->quotient(), o.radius);
  const std::string where = "y in " + ball_note(o.radius) + " of G, labels in " + ball_note(o.radius) + " of G/N";
  std::vector<std::string> f;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const auto &a = pick(gball, rng), &b = pick(gball, rng);
    const auto& t = pick(qball, rng);
    auto l = pi_omega(a * b, *c.w, *c.q)(t);
    auto r = pi_omega(a, *c.w, *c.q).after(pi_omega(b, *c.w, *c.q))(t);
    if (!(l.label == r.label) || !(l.phase == r.phase)) {
      f.push_back("pi(ab) != pi(a)pi(b) for a=" + word(a) + ", b=" + word(b) + " at " + word(t));
    }
  }
  ch.add("pi_omega multiplicative", "pi(ab) delta_t = pi(a) pi(b) delta_t, " + where, o.samples, f);

  f.clear();
  std::size_t checked = 0;
  bool exact = true;
  for (std::size_t i = 0; i < o.samples; ++i) {
    auto rep = unitary_window_check(pi_omega(pick(gball, rng), *c.w, *c.q), qball);
    checked += rep.checked;
    exact = exact && rep.exact;
    f.insert(f.end(), rep.failures.begin(), rep.failures.end());
  }
  ch.add("pi_omega unitary on window", "unit phases and injective labels, " + where, checked, f, Json{{"exact", exact}});

  f.clear();
  checked = 0;
  const auto ngens = c.n.generators();
  const std::size_t nsamples = ngens.empty() ? 0 : std::min<std::size_t>(o.samples, 50);
  std::uniform_int_distribution<int> e(-5, 5);
  for (std::size_t i = 0; i < nsamples; ++i) {
    GroupElement n = g->identity();
    for (const auto& x : ngens) n = n * x.pow(Integer(e(rng)));
    auto op = pi_omega(n, *c.w, *c.q);
    for (int k = 0; k < 5; ++k) {
      const auto& t = pick(qball, rng);
      auto im = op(t);
      ++checked;
      if (!(im.label == t) || !(im.phase == (*c.w)(n))) f.push_back("pi(n) != omega(n) for n=" + word(n) + " at " + word(t));
    }
  }
  ch.add("pi_omega on N", "pi(n) delta_t = omega(n) delta_t for central n", checked, f);

  const std::size_t esamples = std::min<std::size_t>(o.samples, 40);
  std::vector<GroupElement> ss;
  for (std::size_t i = 0; i < esamples; ++i) ss.push_back(pick(gball, rng));
  auto cp = coset_phase_check(*c.w, *c.q, ss, window(*g, std::min(o.radius, 2)));
  ch.add("coset phase", "<s, t> = omega(c(sN)^{-1} s) <c(sN), t>, t in " + ball_note(std::min(o.radius, 2)), cp.checked,
         cp.failures);
}

std::optional<FdRep> tau_of(const PresentationPtr& g, const Json& job) {
  if (!job.contains("tau")) return std::nullopt;
  const Json& t = job["tau"];
  if (!t.is_object() || !t.contains("clock_shift")) bad("\"tau\" supports {\"clock_shift\": {\"q\", \"k\"}}");
  const Json& cs = t["clock_shift"];
  if (!cs.contains("q") || !cs.contains("k") || !cs["q"].is_number_integer() || !cs["k"].is_number_integer()) {
    bad("clock_shift needs integers q and k");
  }
  const int q = cs["q"].get<int>();
  if (q < 1 || q > 256) bad("clock_shift q must be in [1, 256]");
  return clock_shift(g, q, cs["k"].get<int>());
}

void intertwiner_checks(const PresentationPtr& g, const CharacterData& c, const FdRep& tau, const Options& o,
                        std::mt19937_64& rng, Checks& ch) {
  const auto gball = window(*g, o.radius);
  const auto qball = window(*c.q->quotient(), o.radius);
  std::vector<std::pair<GroupElement, GroupElement>> samples;
  for (std::size_t i = 0; i < o.samples; ++i) samples.emplace_back(pick(gball, rng), pick(qball, rng));
  auto rep = fell_intertwiner_check(*c.w, tau, *c.q, samples);
  ch.add("intertwiner", "U*(lambda(y) (x) pi_tau(y)) U = pi_omega(y) (x) 1 on delta_t (x) e_j, y in " +
                            ball_note(o.radius) + ", t in " + ball_note(o.radius) + " of G/N",
         rep.checked, rep.failures, Json{{"tau_dimension", tau.dimension()}});
}

// ---- finite cutdown ----

Cyclotomic value_of(const Phase& p) { return Cyclotomic::from_phase(p); }

// Cutdown of C[G] for the trivial extension of omega, and the map
// u_g -> omega(c(gN)^{-1} g) u_{gN} onto C(G/N, sigma).
Json finite_cutdown(const PresentationPtr& g, const CharacterData& c, const Options& o, const FdRep* rep, Checks& ch) {
  Json out;
  FdStarAlgebra alg = FdStarAlgebra::group_algebra(g);
  GroupTrace tau = trace_from(trivial_extension(*c.w, g));
  CutdownOptions co;
  co.kernel_samples = o.samples;
  co.seed = o.seed;
  co.rep = rep;
  Cutdown cut = cutdown_for_trace(alg, tau, co);
  const auto& cert = cut.certificate;
  const std::size_t n = alg.dimension();
  auto one_if = [](bool ok, const std::string& what) {
    return ok ? std::vector<std::string>{} : std::vector<std::string>{what};
  };
  ch.add("p central", "p u_g = u_g p for every pc generator, exact", g->size(), one_if(cert.central, "p is not central"));
  ch.add("p projection", "p^2 = p = p^*, exact", 1, one_if(cert.idempotent, "p is not a projection"));
  ch.add("trace preserved", "tau(u_g p) = tau(u_g) for every g, exact", n,
         one_if(cert.trace_preserved, "tau(u_g p) != tau(u_g)"));
  std::vector<std::string> kf;
  if (cert.kernel_mismatches) kf.push_back(std::to_string(cert.kernel_mismatches) + " samples disagree");
  kf.insert(kf.end(), cert.failures.begin(), cert.failures.end());
  ch.add("kernel equivalence", "x p = 0 iff pi_tau(x) = 0 on random x, exact", cert.kernel_samples, kf);
  if (cert.rep_residual) {
    ch.add("p acts as identity", "|pi_tau(p) - 1| <= 1e-9 for the supplied pi_tau", 1,
           one_if(*cert.rep_residual <= 1e-9, "residual " + std::to_string(*cert.rep_residual)),
           Json{{"residual", *cert.rep_residual}});
  }
  out["cutdown"] = json_io::cutdown_to_json(cut);
  out["cutdown"]["simple"] = cert.simple;
  if (cut.p.coeffs.size() <= 256) out["cutdown"]["p"] = json_io::fd_element_to_json(alg, cut.p);

  const auto& qg = c.q->quotient();
  if (!qg->is_finite()) return out;
  Cocycle2 sigma = build_cocycle(*c.w, *c.q);
  out["sigma"] = sigma_json(sigma, c);
  FdStarAlgebra tw = FdStarAlgebra::twisted(qg, sigma);
  ch.add("sigma cocycle", "cocycle identity on G/N", tw.cocycle_checks(), {});

  std::vector<FdElement> phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const GroupElement& x = alg.elements()[i];
    GroupElement qx = c.q->project(x);
    GroupElement nx = c.q->section(qx).inverse() * x;
    phi[i] = tw.basis(qx).scaled(value_of((*c.w)(nx)));
  }
  auto image = [&](const FdElement& x) {
    FdElement y;
    for (const auto& [i, v] : x.coeffs) y = y + phi[i].scaled(v);
    return y;
  };
  std::mt19937_64 rng(o.seed ^ 0x51a7ULL);
  std::uniform_int_distribution<std::size_t> d(0, n - 1);
  std::vector<std::string> f;
  for (std::size_t k = 0; k < o.samples; ++k) {
    std::size_t i = d(rng), j = d(rng);
    if (!(tw.multiply(phi[i], phi[j]) == phi[alg.mul_index(i, j)])) {
      f.push_back("Phi(u_g u_h) != Phi(u_g) Phi(u_h) at g=" + word(alg.elements()[i]) + ", h=" + word(alg.elements()[j]));
    }
  }
  ch.add("Phi multiplicative", "Phi(u_g) Phi(u_h) = Phi(u_gh) on random pairs, exact", o.samples, f);
  f.clear();
  for (std::size_t gi = 0; gi < g->size(); ++gi) {
    std::size_t i = alg.index(g->generator(gi));
    if (!(tw.star(phi[i]) == phi[alg.inv_index(i)])) f.push_back("Phi(u_g)^* != Phi(u_g^*) at " + g->name(gi));
  }
  ch.add("Phi star", "Phi(u_g)^* = Phi(u_g^{-1}) on pc generators, exact", g->size(), f);
  f.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(tau.value(alg.elements()[i]) == tw.trace(phi[i]))) f.push_back("tau != tr o Phi at " + word(alg.elements()[i]));
  }
  ch.add("trace factors", "tau(u_g) = tr(Phi(u_g)) for every g, exact", n, f);
  ch.add("Phi(p) = 1", "image of p is the unit of C(G/N, sigma), exact", 1,
         one_if(image(cut.p) == tw.one(), "Phi(p) != 1"));
  ch.add("dimension match", "dim pC[G] = |G/N|", 1,
         one_if(cut.kept_dimension == Integer(static_cast<long long>(tw.dimension())),
                "dim pC[G] = " + cut.kept_dimension.to_string() + ", |G/N| = " + std::to_string(tw.dimension())));
  Json tb = Json::array();
  if (tw.dimension() <= 1024) {
    auto bd = block_decompose(tw, o.seed);
    for (const auto& b : bd.blocks) tb.push_back(b.dim);
    out["twisted_blocks"] = tb;
    out["twisted_centre_dimension"] = bd.centre_dimension;
  }
  out["isomorphism"] = cut.block_size ? "pC[G] = C(G/N, sigma) = M_" + std::to_string(*cut.block_size)
                                       : std::string("pC[G] = C(G/N, sigma)");
  return out;
}

// ---- tasks ----

Json analyze(const PresentationPtr& g, const Options& o, Checks& ch, std::string& stage) {
  stage = "presentation";
  require_nilpotent(g, ch);
  SearchOptions so{o.radius, 200'000, 10'000};

  stage = "center";
  Subgroup z = center(g, so);
  std::vector<std::string> f;
  for (const auto& x : z.generators()) {
    for (std::size_t i = 0; i < g->size(); ++i) {
      if (!g->commutator(x, g->generator(i)).is_identity()) f.push_back(word(x) + " does not commute with " + g->name(i));
    }
  }
  ch.add("center generators central", "commute with every pc generator, exact", z.generators().size() * g->size(), f);

  stage = "torsion";
  Subgroup t = torsion_subgroup(g, so);
  f.clear();
  if (!t.order()) {
    f.push_back("torsion subgroup is not finite");
  } else {
    for (const auto& x : t.generators()) {
      if (!x.pow(*t.order()).is_identity()) f.push_back(word(x) + " has no finite order dividing |T|");
    }
  }
  ch.add("torsion generators", "x^|T| = e for each generator", t.generators().size(), f);

  stage = "fc-centre";
  Subgroup fc = fc_centre(g, so);
  f.clear();
  for (const auto& x : fc.generators()) {
    if (!conjugacy_orbit(*g, x, so.orbit_cap).finite) f.push_back(word(x) + " has an orbit above the cap");
  }
  ch.add("fc generators", "conjugation orbit closes below " + std::to_string(so.orbit_cap), fc.generators().size(), f);
  f.clear();
  for (const auto& x : z.generators()) {
    if (!fc.contains(x)) f.push_back(word(x) + " is central but not in G_f");
  }
  ch.add("center in fc", "Z(G) <= G_f", z.generators().size(), f);

  stage = "index";
  QuotientMap fz(g, z);
  std::vector<GroupElement> img;
  for (const auto& x : fc.generators()) img.push_back(fz.project(x));
  auto fc_over_z = Subgroup::generated_by(fz.quotient(), img).order();
  ch.add("index finite", "[G_f : Z(G)] finite", 1, fc_over_z ? std::vector<std::string>{}
                                                               : std::vector<std::string>{"[G_f : Z(G)] is infinite"});

  stage = "quotient";
  QuotientMap gf(g, fc);
  std::vector<GroupElement> qball;
  const int qr = bounded_ball(*gf.quotient(), o.radius, 50'000, qball);
  const Integer m = gf.quotient()->finite_order_product() * Integer(720);
  f.clear();
  for (const auto& x : qball) {
    if (!x.is_identity() && gf.quotient()->power(x, m).is_identity()) f.push_back(word(x) + " has finite order in G/G_f");
  }
  ch.add("G/G_f torsion free", "x^m != e for x != e in " + ball_note(qr) + ", m = 720 * finite relative orders",
         qball.size(), f, Json{{"radius", qr}});
  f.clear();
  if (t.is_trivial() && !fc.same_as(z)) f.push_back("T(G) trivial but G_f != Z(G)");
  ch.add("torsion-free case", "T(G) trivial implies G_f = Z(G)", 1, f);

  stage = "split";
  SemidirectSplit split = semidirect_split(g, so);
  f.clear();
  if (!split.certificate.complete) f.insert(f.end(), split.certificate.flags.begin(), split.certificate.flags.end());
  ch.add("tower", "unique factorisation f * t_1^a_1 ... t_k^a_k", 1, f);

  Json lifts = Json::array();
  for (const auto& x : split.lifts) lifts.push_back(word(x));
  Json out;
  out["lattice"] = Json{{"center", json_io::subgroup_label(z)},
                        {"fc", json_io::subgroup_label(fc)},
                        {"torsion", json_io::subgroup_label(t)},
                        {"tower", split.lifts.size()},
                        {"index_fc_over_center", fc_over_z ? integer_to_json(*fc_over_z) : Json("infinite")}};
  out["center"] = json_io::subgroup_to_json(z);
  out["torsion"] = json_io::subgroup_to_json(t);
  out["fc"] = json_io::subgroup_to_json(fc);
  out["tower"] = Json{{"lifts", lifts},
                      {"free", split.free_tower},
                      {"provisional", split.provisional},
                      {"certificate", json_io::certificate_to_json(split.certificate)}};
  return out;
}

Json cocycle(const PresentationPtr& g, const Json& job, const Options& o, Checks& ch, std::string& stage) {
  stage = "presentation";
  require_nilpotent(g, ch);
  stage = "character";
  CharacterData c = character_of(g, job, o);
  stage = "cocycle";
  Cocycle2 sigma = build_cocycle(*c.w, *c.q);
  std::mt19937_64 rng(o.seed);
  const auto& qg = *c.q->quotient();
  std::vector<Triple> triples = sample_triples(qg, o.radius, o.samples, rng);
  Cocycle2 tested = sigma;
  Json out;
  if (job.contains("inject")) {
    const Json& inj = job["inject"];
    if (!inj.is_object() || !inj.contains("x") || !inj.contains("y") || !inj.contains("delta")) {
      bad("\"inject\" needs x, y and delta");
    }
    GroupElement x = json_io::element_from_json(qg, inj["x"]);
    GroupElement y = json_io::element_from_json(qg, inj["y"]);
    tested = sigma.perturbed(x, y, Phase::parse(inj["delta"].get<std::string>()));
    for (std::size_t i = 0; i < qg.size(); ++i) {
      triples.push_back({x, y, qg.generator(i)});
      triples.push_back({qg.generator(i), x, y});
    }
    out["injected"] = Json{{"x", word(x)}, {"y", word(y)}, {"delta", inj["delta"]}};
  }
  out["character"] = character_json(c);
  out["sigma"] = sigma_json(sigma, c);
  auto rep = verify_cocycle(tested, triples);
  ch.add("cocycle identity", "sigma(x,y) sigma(xy,z) = sigma(y,z) sigma(x,yz) on triples from " + ball_note(o.radius) +
                                 " of G/N, plus normalisation",
         rep.checked, cocycle_failures(rep), Json{{"exact", rep.exact}});
  stage = "homotopy";
  out["homotopy"] = homotopy_checks(sigma, c, triples, ch);
  return out;
}

Json represent(const PresentationPtr& g, const Json& job, const Options& o, Checks& ch, std::string& stage) {
  stage = "presentation";
  require_nilpotent(g, ch);
  stage = "character";
  CharacterData c = character_of(g, job, o);
  Json out;
  out["character"] = character_json(c);
  std::mt19937_64 rng(o.seed);
  stage = "pi_omega";
  pi_omega_checks(g, c, o, rng, ch);
  stage = "tau";
  if (auto tau = tau_of(g, job)) {
    out["tau"] = json_io::fdrep_to_json(*tau);
    stage = "intertwiner";
    intertwiner_checks(g, c, *tau, o, rng, ch);
  }
  if (g->is_finite() && g->finite_order_product() <= Integer(256) && c.w->is_exact()) {
    stage = "gns";
    auto phi = trivial_extension(*c.w, g);
    auto res = gns(phi);
    const double fid = gns_fidelity(res, phi);
    ch.add("gns", "<pi(g) xi, xi> = phi(g) on all of G within 1e-10", static_cast<std::size_t>(g->finite_order_product().to_int64()),
           fid <= 1e-10 ? std::vector<std::string>{} : std::vector<std::string>{"fidelity " + std::to_string(fid)});
    out["gns"] = Json{{"rank", res.rank}, {"exact_rank", res.exact_rank}, {"rep", json_io::fdrep_to_json(res.rep)}};
  }
  return out;
}

Json cutdown(const PresentationPtr& g, const Json& job, const Options& o, Checks& ch, std::string& stage) {
  stage = "presentation";
  require_nilpotent(g, ch);
  stage = "character";
  CharacterData c = character_of(g, job, o);
  if (!c.w->is_exact()) throw Error(ErrorCode::kPrecondition, "cutdown needs exact angles");
  Json out;
  out["character"] = character_json(c);
  Json certs = Json::array();

  if (g->is_finite()) {
    stage = "homotopy";
    Cocycle2 sigma = build_cocycle(*c.w, *c.q);
    std::mt19937_64 rng(o.seed);
    auto triples = sample_triples(*c.q->quotient(), o.radius, std::min<std::size_t>(o.samples, 200), rng);
    Checks hc;
    Json hom = homotopy_checks(sigma, c, triples, hc);
    stage = "cutdown";
    Checks fc;
    Json cert = finite_cutdown(g, c, o, nullptr, fc);
    cert["homotopy"] = hom;
    fc.merge(hc);
    Json head{{"name", "finite-cutdown"}, {"scope", "all of G"}};
    head.update(cert);
    cert = head;
    cert["checks"] = fc.json();
    cert["passed"] = fc.failures() == 0;
    certs.push_back(cert);
    ch.merge(fc);
    out["certificates"] = certs;
    return out;
  }

  // Windowed evidence for the infinite group.
  stage = "tau";
  std::optional<FdRep> tau = tau_of(g, job);
  const auto& angles = c.w->free_angles();
  std::optional<std::pair<int, int>> qk;
  if (angles.size() == 1 && c.w->torsion_indices().empty() && !angles[0].is_one()) {
    const mpq_class& a = angles[0].angle();
    if (a.get_den() <= 256) qk = {static_cast<int>(a.get_den().get_si()), static_cast<int>(a.get_num().get_si())};
  }
  if (!tau && qk) {
    try {
      tau = clock_shift(g, qk->first, qk->second);
    } catch (const Error&) {
      tau.reset();
    }
  }
  {
    Checks wc;
    std::mt19937_64 rng(o.seed);
    stage = "pi_omega";
    pi_omega_checks(g, c, o, rng, wc);
    stage = "homotopy";
    Cocycle2 sigma = build_cocycle(*c.w, *c.q);
    auto triples = sample_triples(*c.q->quotient(), o.radius, std::min<std::size_t>(o.samples, 200), rng);
    auto rep = verify_cocycle(sigma, triples);
    wc.add("cocycle identity", "on triples from " + ball_note(o.radius) + " of G/N", rep.checked, cocycle_failures(rep));
    Json hom = homotopy_checks(sigma, c, triples, wc);
    Json cert{{"name", "windowed-evidence"},
              {"scope", "G = " + json_io::subgroup_label(Subgroup::whole(g)) + ", samples from " + ball_note(o.radius)},
              {"sigma", sigma_json(sigma, c)},
              {"homotopy", hom}};
    if (tau) {
      stage = "intertwiner";
      cert["tau"] = Json{{"dimension", tau->dimension()}, {"exact", tau->is_exact()}};
      intertwiner_checks(g, c, *tau, o, rng, wc);
    }
    cert["checks"] = wc.json();
    cert["passed"] = wc.failures() == 0;
    certs.push_back(cert);
    ch.merge(wc);
  }

  // Finite quotient carrying the clock-and-shift data.
  stage = "finite-quotient";
  if (tau && qk && qk->first >= 2) {
    auto fg = corpus::heisenberg_mod(qk->first);
    Subgroup fz = Subgroup::generated_by(fg, {fg->generator(2)});
    CharacterData fcd{fz, std::make_shared<QuotientMap>(index_and_transversal(fg, fz)), nullptr};
    fcd.w = std::make_shared<Character>(fz, std::vector<Phase>{}, std::vector<Integer>{Integer(qk->second)});
    FdRep frep = clock_shift(fg, qk->first, qk->second);
    Checks fc;
    stage = "finite-quotient cutdown";
    Json cert = finite_cutdown(fg, fcd, o, &frep, fc);
    Json head{{"name", "finite-quotient-cutdown"},
              {"scope", "H3(Z/" + std::to_string(qk->first) + ") with omega(z) = " + angles[0].to_string() +
                            ", the group through which the clock-and-shift pi_tau factors"},
              {"character", character_json(fcd)}};
    head.update(cert);
    cert = head;
    cert["checks"] = fc.json();
    cert["passed"] = fc.failures() == 0;
    certs.push_back(cert);
    ch.merge(fc);
  } else {
    certs.push_back(Json{{"name", "finite-quotient-cutdown"},
                         {"available", false},
                         {"reason", "no clock-and-shift pi_tau for this group and character"}});
  }
  out["certificates"] = certs;
  return out;
}

Json merge_options(const Json& parent, const Json& child) {
  Json c = child;
  if (!parent.contains("options")) return c;
  Json opts = parent["options"];
  if (c.contains("options") && c["options"].is_object()) opts.update(c["options"]);
  c["options"] = opts;
  return c;
}

Json verify_all(const Json& job) {
  Json list = job.contains("jobs") ? job["jobs"] : corpus_jobs();
  if (!list.is_array()) bad("\"jobs\" must be an array");
  Json reports = Json::array();
  std::size_t checked = 0, failures = 0, failed_jobs = 0;
  for (const auto& child : list) {
    if (child.is_object() && child.value("task", "") == "verify-all") bad("verify-all jobs cannot nest");
    Json r = run(merge_options(job, child));
    checked += r["summary"]["checked"].get<std::size_t>();
    failures += r["summary"]["failures"].get<std::size_t>();
    if (!passed(r)) ++failed_jobs;
    reports.push_back(std::move(r));
  }
  Json out;
  out["task"] = "verify-all";
  out["status"] = failed_jobs == 0 ? "pass" : "fail";
  out["summary"] = Json{{"jobs", reports.size()}, {"failed_jobs", failed_jobs}, {"checked", checked}, {"failures", failures}};
  out["note"] = "each job states the finite contracts it checked, with radius and sample counts";
  out["jobs"] = reports;
  return out;
}

}  // namespace

Json run(const Json& job) {
  if (!job.is_object()) throw Error(ErrorCode::kParse, "job must be a JSON object");
  const std::string task = job.contains("task") && job["task"].is_string() ? job["task"].get<std::string>() : "";
  Json report;
  report["task"] = task;
  std::string stage = "job";
  Checks ch;
  try {
    if (task == "verify-all") return verify_all(job);
    int radius = 3;
    std::size_t samples = 100;
    if (task == "analyze") radius = 6;
    else if (task == "cocycle") radius = 4, samples = 200;
    else if (task != "represent" && task != "cutdown") bad("unknown task \"" + task + "\"");
    Options o = resolve(job, radius, samples);
    report["options"] = o.to_json();
    Json info;
    stage = "group";
    PresentationPtr g = group_of(job, info);
    report["group"] = info;
    Json body;
    if (task == "analyze") body = analyze(g, o, ch, stage);
    else if (task == "cocycle") body = cocycle(g, job, o, ch, stage);
    else if (task == "represent") body = represent(g, job, o, ch, stage);
    else body = cutdown(g, job, o, ch, stage);
    report["status"] = ch.failures() == 0 ? "pass" : "fail";
    for (auto& [k, v] : body.items()) report[k] = v;
  } catch (const Error& e) {
    report["status"] = "error";
    report["error"] = Json{{"code", to_string(e.code())}, {"stage", stage}, {"message", e.what()}};
  } catch (const std::exception& e) {
    report["status"] = "error";
    report["error"] = Json{{"code", "internal"}, {"stage", stage}, {"message", e.what()}};
  }
  report["checks"] = ch.json();
  report["summary"] = Json{{"checks", ch.json().size()}, {"checked", ch.checked()}, {"failures", ch.failures()}};
  return report;
}

bool passed(const Json& report) { return report.value("status", "") == "pass"; }

Json corpus_jobs() {
  Json jobs = Json::array();
  for (const char* name : {"H3", "H3mod2", "H3mod3", "H3mod5", "Z2", "ZxZ6", "Q8", "ZxD4", "UT3Z4", "trivial"}) {
    jobs.push_back(Json{{"task", "analyze"}, {"group", name}});
  }
  for (const char* theta : {"1/2", "1/3", "2/7"}) {
    jobs.push_back(Json{{"task", "cocycle"}, {"group", "H3"}, {"character", Json{{"free_angles", Json::array({theta})}}}});
  }
  jobs.push_back(Json{{"task", "represent"},
                      {"group", "H3"},
                      {"character", Json{{"free_angles", Json::array({"1/5"})}}},
                      {"tau", Json{{"clock_shift", Json{{"q", 5}, {"k", 1}}}}}});
  jobs.push_back(Json{{"task", "represent"}, {"group", "H3mod3"}, {"character", Json{{"torsion", Json::array({1})}}}});
  for (const char* name : {"H3mod3", "H3mod5"}) {
    jobs.push_back(Json{{"task", "cutdown"}, {"group", name}, {"character", Json{{"torsion", Json::array({1})}}}});
  }
  jobs.push_back(Json{{"task", "cutdown"}, {"group", "H3mod3"}, {"character", Json{{"subgroup", "trivial"}}}});
  jobs.push_back(Json{{"task", "cutdown"}, {"group", "H3"}, {"character", Json{{"free_angles", Json::array({"1/5"})}}}});
  return jobs;
}

std::string dump(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace nilcut::jobs

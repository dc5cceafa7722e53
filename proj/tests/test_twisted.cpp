#include <gtest/gtest.h>

#include <random>

#include "nilcut/corpus.hpp"
#include "nilcut/error.hpp"
#include "nilcut/twisted.hpp"

using namespace nilcut;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

// sigma((a,b),(a',b')) = e^{2 pi i k a b' / q} on Z/q x Z/q.
Cocycle2 bicharacter(const PresentationPtr& f, int q, int k) {
  return Cocycle2(
      f,
      [q, k](const GroupElement& x, const GroupElement& y) { return Phase::fraction(Integer(k) * x[0] * y[1], Integer(q)); },
      "bicharacter");
}

Cyclotomic matrix_trace(const CycMatrix& m) {
  Cyclotomic t;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

GroupTrace centre_character_trace(const PresentationPtr& h, int k) {
  Subgroup z = Subgroup::generated_by(h, {h->generator(2)});
  return trace_from(trivial_extension(Character(z, {}, {Integer(k)}), h));
}

}  // namespace

TEST(TwistedAlgebra, CyclicTwoIsCommutativeSum) {
  auto c2 = corpus::cyclic(2);
  auto a = FdStarAlgebra::group_algebra(c2);
  EXPECT_EQ(a.dimension(), 2u);
  EXPECT_EQ(a.centre_basis().size(), 2u);
  auto bd = block_decompose(a);
  ASSERT_EQ(bd.blocks.size(), 2u);
  std::vector<std::complex<double>> seen;
  for (const auto& b : bd.blocks) {
    EXPECT_EQ(b.dim, 1u);
    EXPECT_NEAR(b.numeric(0).real(), 0.5, 1e-12);
    seen.push_back(b.numeric(1));
  }
  // (u_e + u_s)/2 and (u_e - u_s)/2.
  EXPECT_NEAR(std::abs(seen[0] + seen[1]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(std::abs(seen[0]) - 0.5), 0.0, 1e-12);
}

TEST(TwistedAlgebra, BicharacterGivesSingleMatrixBlock) {
  for (int q : {2, 3, 5}) {
    auto f = corpus::cyclic_square(q);
    auto a = FdStarAlgebra::twisted(f, bicharacter(f, q, 1));
    EXPECT_EQ(a.centre_basis().size(), 1u) << q;
    auto bd = block_decompose(a);
    ASSERT_EQ(bd.blocks.size(), 1u);
    EXPECT_EQ(bd.blocks[0].dim, static_cast<std::size_t>(q));
    EXPECT_LE(bd.residual, 1e-9);

    // Clock-and-shift oracle: u_(a,b) -> X^b Z^a realises the same relations and spans M_q.
    const std::size_t n = static_cast<std::size_t>(q);
    CycMatrix x(n, n), z(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      x((j + 1) % n, j) = Cyclotomic(1);
      z(j, j) = Cyclotomic::root_of_unity(q, static_cast<long long>(j));
    }
    auto pw = [&](const CycMatrix& m, long long e) {
      CycMatrix out = CycMatrix::identity(n);
      for (long long i = 0; i < e; ++i) out = out * m;
      return out;
    };
    auto model = [&](const GroupElement& g) { return pw(x, g[1].to_int64()) * pw(z, g[0].to_int64()); };
    CycMatrix span(n * n, a.dimension());
    for (std::size_t gi = 0; gi < a.dimension(); ++gi) {
      const auto& g = a.elements()[gi];
      CycMatrix m = model(g);
      for (std::size_t r = 0; r < n * n; ++r) span(r, gi) = m(r / n, r % n);
      for (std::size_t hi = 0; hi < a.dimension(); ++hi) {
        const auto& h = a.elements()[hi];
        EXPECT_EQ(m * model(h), model(g * h).scaled(a.sigma(gi, hi)));
      }
    }
    EXPECT_EQ(rank(span), n * n);
  }
}

TEST(TwistedAlgebra, PauliCaseIsSimple) {
  auto f = corpus::cyclic_square(2);
  auto a = FdStarAlgebra::twisted(f, bicharacter(f, 2, 1));
  EXPECT_EQ(a.cocycle_checks(), 64u);
  auto cut = cutdown_for_trace(a, GroupTrace{[](const GroupElement& g) { return Cyclotomic(g.is_identity() ? 1 : 0); }, "canonical"});
  EXPECT_EQ(cut.p, a.one());
  EXPECT_EQ(cut.block_size, std::optional<std::size_t>(2));
}

TEST(TwistedAlgebra, HeisenbergMod3BlockVector) {
  auto h = corpus::heisenberg_mod(3);
  auto a = FdStarAlgebra::group_algebra(h);
  EXPECT_EQ(a.centre_basis().size(), 11u);
  auto bd = block_decompose(a);
  std::vector<std::size_t> dims;
  for (const auto& b : bd.blocks) dims.push_back(b.dim);
  std::vector<std::size_t> want(9, 1);
  want.push_back(3);
  want.push_back(3);
  EXPECT_EQ(dims, want);
  EXPECT_LE(bd.residual, 1e-9);
}

TEST(TwistedAlgebra, CentreBasisMatchesNullSpace) {
  auto f = corpus::cyclic_square(3);
  for (bool tw : {false, true}) {
    auto a = tw ? FdStarAlgebra::twisted(f, bicharacter(f, 3, 2)) : FdStarAlgebra::group_algebra(f);
    const std::size_t n = a.dimension();
    // Commutator maps x -> u_g x - x u_g stacked over generators.
    CycMatrix m(2 * n, n);
    for (std::size_t gi = 0; gi < 2; ++gi) {
      auto u = a.basis(f->generator(gi));
      for (std::size_t j = 0; j < n; ++j) {
        auto c = a.multiply(u, a.basis(j)) - a.multiply(a.basis(j), u);
        for (const auto& [r, v] : c.coeffs) m(gi * n + r, j) = v;
      }
    }
    EXPECT_EQ(null_space(m).size(), a.centre_basis().size());
    for (const auto& b : a.centre_basis()) EXPECT_TRUE(a.is_central(b));
  }
}

TEST(TwistedAlgebra, StarTraceAndMatrixModel) {
  std::mt19937_64 rng(99);
  auto f = corpus::cyclic_square(3);
  auto tw = FdStarAlgebra::twisted(f, bicharacter(f, 3, 1));
  auto h = FdStarAlgebra::group_algebra(corpus::heisenberg_mod(3));
  for (const FdStarAlgebra* a : {&tw, &h}) {
    for (int i = 0; i < 500; ++i) {
      auto x = a->random_element(rng, 3, 6), y = a->random_element(rng, 3, 6);
      EXPECT_EQ(a->trace(a->multiply(x, y)), a->trace(a->multiply(y, x)));
      if (i < 100) {
        EXPECT_EQ(a->star(a->multiply(x, y)), a->multiply(a->star(y), a->star(x)));
        auto z = a->random_element(rng, 3, 4);
        EXPECT_EQ(a->multiply(a->multiply(x, y), z), a->multiply(x, a->multiply(y, z)));
      }
      if (i < 10) {
        EXPECT_EQ(a->regular_matrix(a->multiply(x, y)), a->regular_matrix(x) * a->regular_matrix(y));
        EXPECT_EQ(a->regular_matrix(a->star(x)), a->regular_matrix(x).adjoint());
        // Faithful trace: tr(x* x) > 0.
        EXPECT_GT(a->trace(a->multiply(a->star(x), x)).to_complex().real(), 0.0);
      }
    }
  }
}

TEST(TwistedAlgebra, RejectsBadCocycles) {
  auto f = corpus::cyclic_square(2);
  Cocycle2 broken = bicharacter(f, 2, 1).perturbed(f->generator(0), f->generator(1), Phase::parse("1/2"));
  EXPECT_EQ(code_of([&] { FdStarAlgebra::twisted(f, broken); }), ErrorCode::kVerification);
  Cocycle2 floating(f, [](const GroupElement& x, const GroupElement& y) { return Phase::approx(0.1 * x[0].to_double() * y[1].to_double()); }, "float");
  EXPECT_EQ(code_of([&] { FdStarAlgebra::twisted(f, floating); }), ErrorCode::kPrecondition);
  EXPECT_EQ(code_of([&] { FdStarAlgebra::group_algebra(corpus::heisenberg()); }), ErrorCode::kPrecondition);
}

TEST(Expectation, RestrictionProperties) {
  std::mt19937_64 rng(2024);
  auto h = corpus::heisenberg_mod(3);
  auto a = FdStarAlgebra::group_algebra(h);
  Subgroup z = Subgroup::generated_by(h, {h->generator(2)});
  auto sub = [&](std::mt19937_64& r) {
    FdElement x;
    std::uniform_int_distribution<int> c(-3, 3);
    for (const auto& n : z.elements()) x.add(a.index(n), Cyclotomic(c(r)));
    return x;
  };
  // E(u_s) = 0 off H; E(x) = x on H.
  EXPECT_TRUE(conditional_expectation(a, z, a.basis(h->generator(0))).is_zero());
  auto xz = sub(rng);
  EXPECT_EQ(conditional_expectation(a, z, xz), xz);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    auto x = a.random_element(rng, 3, 10);
    auto ex = conditional_expectation(a, z, x);
    EXPECT_EQ(conditional_expectation(a, z, ex), ex);
    EXPECT_EQ(a.trace(ex), a.trace(x));
    worst = std::max(worst, a.norm(ex) - a.norm(x));
    if (i < 50) {
      auto l = sub(rng), r = sub(rng);
      EXPECT_EQ(conditional_expectation(a, z, a.multiply(a.multiply(l, x), r)), a.multiply(a.multiply(l, ex), r));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.regular_matrix_numeric(conditional_expectation(a, z, a.multiply(a.star(x), x))));
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
    }
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(Expectation, OnRepresentationImage) {
  std::mt19937_64 rng(11);
  auto h = corpus::heisenberg_mod(3);
  auto a = FdStarAlgebra::group_algebra(h);
  Subgroup z = Subgroup::generated_by(h, {h->generator(2)});
  auto tau = centre_character_trace(h, 1);
  auto rep = clock_shift(h, 3, 1);
  RepExpectation e(a, rep, tau, z, rng);
  EXPECT_TRUE(e.report().ok());
  EXPECT_EQ(e.report().kernel_checked, 18u);
  EXPECT_LE(e.report().worst_schwarz, 1e-9);
  for (int i = 0; i < 100; ++i) {
    auto x = a.random_element(rng, 3, 8);
    const Eigen::MatrixXcd px = represent(a, rep, x);
    const Eigen::MatrixXcd ex = e(x);
    // Average over conjugation: the normalised trace times the identity.
    const Eigen::MatrixXcd avg = (px.trace() / 3.0) * Eigen::MatrixXcd::Identity(3, 3);
    EXPECT_LT((ex - avg).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(a.apply(tau, conditional_expectation(a, z, x)), a.apply(tau, x));
    auto ex_elem = conditional_expectation(a, z, x);
    EXPECT_EQ(conditional_expectation(a, z, ex_elem), ex_elem);
  }
  RepExpectation whole(a, rep, tau, Subgroup::whole(h), rng, 5);
  auto x = a.random_element(rng, 3, 8);
  EXPECT_LT((whole(x) - represent(a, rep, x)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(code_of([&] { RepExpectation(a, rep, tau, Subgroup::trivial(h), rng); }), ErrorCode::kPrecondition);
}

TEST(Cutdown, CanonicalTraceKeepsEverything) {
  auto a = FdStarAlgebra::group_algebra(corpus::heisenberg_mod(3));
  GroupTrace canon{[](const GroupElement& g) { return Cyclotomic(g.is_identity() ? 1 : 0); }, "canonical"};
  auto cut = cutdown_for_trace(a, canon);
  EXPECT_EQ(cut.p, a.one());
  EXPECT_EQ(cut.trace_of_p(), "27/27");
  EXPECT_TRUE(cut.certificate.ok());
  EXPECT_FALSE(cut.block_size.has_value());
}

TEST(Cutdown, FaithfulCharacterMatchesClassicalIdempotent) {
  for (int p : {3, 5}) {
    auto h = corpus::heisenberg_mod(p);
    auto a = FdStarAlgebra::group_algebra(h);
    auto rep = clock_shift(h, p, 1);
    CutdownOptions opt;
    opt.rep = &rep;
    auto cut = cutdown_for_trace(a, centre_character_trace(h, 1), opt);

    // p = (chi(e)/|G|) sum chi(g^{-1}) u_g with chi the clock-and-shift character.
    FdElement oracle;
    const Cyclotomic scale = Cyclotomic::rational(Integer(p), Integer(static_cast<long long>(a.dimension())));
    for (std::size_t g = 0; g < a.dimension(); ++g) {
      oracle.add(g, scale * matrix_trace(rep.exact_matrix(h->inverse(a.elements()[g]))));
    }
    EXPECT_EQ(cut.p, oracle) << p;
    EXPECT_EQ(cut.trace_of_p(), std::to_string(p * p) + "/" + std::to_string(p * p * p));
    EXPECT_EQ(cut.block_size, std::optional<std::size_t>(p));
    const auto& c = cut.certificate;
    EXPECT_TRUE(c.ok());
    EXPECT_TRUE(c.simple);
    EXPECT_EQ(c.kernel_samples, 100u);
    EXPECT_EQ(c.kernel_mismatches, 0u);
    EXPECT_LE(*c.rep_residual, 1e-9);
    EXPECT_EQ(c.rep_span_dimension, std::optional<std::size_t>(p * p));
    ASSERT_TRUE(cut.blocks.has_value());
    std::size_t kept = 0;
    for (std::size_t i = 0; i < cut.kept.size(); ++i) {
      if (!cut.kept[i]) continue;
      ++kept;
      EXPECT_EQ(cut.blocks->blocks[i].dim, static_cast<std::size_t>(p));
    }
    EXPECT_EQ(kept, 1u);
    // Central elements act by scalars in the irreducible representation.
    const Eigen::MatrixXcd mz = rep.matrix(h->generator(2));
    EXPECT_LT((mz - mz(0, 0) * Eigen::MatrixXcd::Identity(p, p)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Cutdown, SeveralKeptBlocks) {
  auto h = corpus::heisenberg_mod(3);
  auto a = FdStarAlgebra::group_algebra(h);
  auto cut = cutdown_for_trace(a, centre_character_trace(h, 0));
  EXPECT_EQ(cut.trace_of_p(), "9/27");
  EXPECT_FALSE(cut.certificate.simple);
  EXPECT_FALSE(cut.block_size.has_value());
  EXPECT_TRUE(cut.certificate.ok());
  std::size_t kept = 0;
  for (bool k : cut.kept) kept += k;
  EXPECT_EQ(kept, 9u);
}

TEST(Cutdown, RejectsNonTrace) {
  auto h = corpus::heisenberg_mod(3);
  auto a = FdStarAlgebra::group_algebra(h);
  GroupTrace at_x{[](const GroupElement& g) { return Cyclotomic(g.is_identity() || g[0] == Integer(1) && g[1].is_zero() && g[2].is_zero() ? 1 : 0); },
                  "indicator of {e, x}"};
  EXPECT_EQ(code_of([&] { cutdown_for_trace(a, at_x); }), ErrorCode::kPrecondition);
}

TEST(Containment, InducedKernelAnnihilatesMatchingTraces) {
  auto h = corpus::heisenberg_mod(3);
  auto a = FdStarAlgebra::group_algebra(h);
  auto omega = centre_character_trace(h, 1);
  auto ok = kernel_containment(a, omega, omega);
  EXPECT_TRUE(ok.ok());
  EXPECT_EQ(ok.kernel_dimension, 18u);
  GroupTrace one{[](const GroupElement&) { return Cyclotomic(1); }, "trivial"};
  EXPECT_FALSE(kernel_containment(a, omega, one).ok());
  GroupTrace canon{[](const GroupElement& g) { return Cyclotomic(g.is_identity() ? 1 : 0); }, "canonical"};
  auto reg = kernel_containment(a, canon, one);
  EXPECT_TRUE(reg.ok());
  EXPECT_EQ(reg.kernel_dimension, 0u);
}

TEST(Cutdown, HeisenbergMod25) {
  auto h = corpus::heisenberg_mod(25);
  auto a = FdStarAlgebra::group_algebra(h);
  EXPECT_EQ(a.dimension(), 15625u);
  auto cut = cutdown_for_trace(a, centre_character_trace(h, 1));
  EXPECT_EQ(cut.trace_of_p(), "625/15625");
  EXPECT_EQ(cut.block_size, std::optional<std::size_t>(25));
  EXPECT_TRUE(cut.certificate.ok());
  EXPECT_FALSE(cut.blocks.has_value());
}

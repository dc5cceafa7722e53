#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "nilcut/corpus.hpp"
#include "nilcut/error.hpp"
#include "nilcut/pc.hpp"
#include "oracles.hpp"

using namespace nilcut;
using oracle::Unitriangular;

namespace {

GroupElement from_matrix(const PcPresentation& p, long long a, long long b, long long c, long long m = 0) {
  return p.element(oracle::from_matrix(Unitriangular{a, b, c, m}));
}

}  // namespace

TEST(Multiply, HeisenbergMatchesMatrixProduct) {
  auto h = corpus::heisenberg();
  auto x = h->generator(0), y = h->generator(1);
  auto xy = x * y;
  EXPECT_EQ(oracle::to_matrix(xy), (Unitriangular{1, 1, 1}));
  EXPECT_EQ(xy.to_string(), "[1,1,0]");
  EXPECT_EQ(oracle::to_matrix(y * x), (Unitriangular{1, 1, 0}));

  std::mt19937_64 rng(1);
  for (int i = 0; i < 300; ++i) {
    auto a = oracle::random_word(*h, rng, 12), b = oracle::random_word(*h, rng, 12);
    EXPECT_EQ(oracle::to_matrix(a * b), oracle::to_matrix(a) * oracle::to_matrix(b));
  }
}

TEST(Multiply, IdentityIsNeutral) {
  auto h = corpus::heisenberg();
  auto ball = h->ball(5);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
  for (int i = 0; i < 100; ++i) {
    const auto& g = ball[pick(rng)];
    EXPECT_EQ(h->identity() * g, g);
    EXPECT_EQ(g * h->identity(), g);
  }
}

TEST(Multiply, HeisenbergMod3ExhaustiveTable) {
  auto h = corpus::heisenberg_mod(3);
  auto all = h->enumerate();
  ASSERT_EQ(all.size(), 27u);
  for (const auto& a : all) {
    for (const auto& b : all) {
      ASSERT_EQ(oracle::to_matrix(a * b, 3), oracle::to_matrix(a, 3) * oracle::to_matrix(b, 3))
          << a.to_string() << " * " << b.to_string();
    }
  }
  auto p = from_matrix(*h, 2, 2, 1, 3) * from_matrix(*h, 2, 2, 2, 3);
  EXPECT_EQ(oracle::to_matrix(p, 3), (Unitriangular{1, 1, 1, 3}));
}

TEST(Multiply, LargeExponentsPromoteExactly) {
  auto h = corpus::heisenberg();
  Integer n = Integer::parse("100000000000000000000");
  auto yx = h->element({0, n, 0}) * h->element({n, 0, 0});
  EXPECT_EQ(yx[0], n);
  EXPECT_EQ(yx[1], n);
  EXPECT_EQ(yx[2], Integer(0) - n * n);
  EXPECT_EQ(h->power(h->generator(0) * h->generator(1), n)[2], Integer(0) - exact_div(n * (n - Integer(1)), Integer(2)));
}

TEST(Inverse, MatchesMatrixInverse) {
  auto h = corpus::heisenberg();
  EXPECT_EQ(h->identity().inverse(), h->identity());
  auto g = from_matrix(*h, 1, 1, 1);
  EXPECT_EQ(oracle::to_matrix(g.inverse()), (Unitriangular{1, 1, 1}).inverse());
  std::mt19937_64 rng(3);
  for (const auto& name : {"H3", "Q8", "ZxD4", "H3tors", "UT3Z4", "ZxZ6"}) {
    auto p = corpus::by_name(name);
    for (int i = 0; i < 100; ++i) {
      auto a = oracle::random_word(*p, rng, 10);
      EXPECT_EQ(a.inverse().inverse(), a);
      EXPECT_TRUE((a * a.inverse()).is_identity());
      EXPECT_TRUE((a.inverse() * a).is_identity());
    }
  }
}

TEST(Commutator, HeisenbergGeneratorsGiveCentre) {
  auto h = corpus::heisenberg();
  auto x = h->generator(0), y = h->generator(1), z = h->generator(2);
  EXPECT_EQ(h->commutator(x, y), z);
  EXPECT_EQ(h->commutator(y, x), z.inverse());
  for (const auto& g : h->ball(3)) EXPECT_TRUE(h->commutator(g, g).is_identity());
  EXPECT_EQ(h->conjugate(y, x), y * z.inverse());
}

// [z^{n+1}, y] = z^{-1} [z^n, y] z [z, y] holds in any group with this
// commutator convention. When [z, y] commutes with z it collapses to a product.
TEST(Commutator, PowerIdentityInZxD4) {
  auto g = corpus::z_times_dihedral();
  auto t = g->generator(0), s = g->generator(1), r = g->generator(2);
  for (const auto& [z, y] : std::vector<std::pair<GroupElement, GroupElement>>{{r, s}, {t * r, s}, {r, s * r}}) {
    auto zy = g->commutator(z, y);
    EXPECT_FALSE(zy.is_identity());
    EXPECT_TRUE(zy.pow(Integer(2)).is_identity());
    for (int n = 1; n <= 5; ++n) {
      auto lhs = g->commutator(z.pow(Integer(n + 1)), y);
      EXPECT_EQ(lhs, zy * g->commutator(z.pow(Integer(n)), y)) << n;
      EXPECT_EQ(lhs, g->conjugate(g->commutator(z.pow(Integer(n)), y), z) * zy) << n;
    }
  }
}

TEST(Commutator, PowerIdentityWithTorsionCommutator) {
  auto g = corpus::heisenberg_with_torsion_commutator();
  auto x = g->generator(0), w = g->generator(2), b = g->generator(4);
  EXPECT_EQ(g->commutator(w, x), b);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    auto z = oracle::random_word(*g, rng, 6), y = oracle::random_word(*g, rng, 6);
    for (int n = 1; n <= 5; ++n) {
      auto lhs = g->commutator(z.pow(Integer(n + 1)), y);
      EXPECT_EQ(lhs, g->conjugate(g->commutator(z.pow(Integer(n)), y), z) * g->commutator(z, y));
    }
  }
}

TEST(Ball, SmallRadii) {
  auto h = corpus::heisenberg();
  auto b0 = h->ball(0);
  ASSERT_EQ(b0.size(), 1u);
  EXPECT_TRUE(b0[0].is_identity());
  auto b1 = h->ball(1);
  EXPECT_EQ(b1.size(), 7u);
  std::set<GroupElement> prev;
  for (int r = 0; r <= 4; ++r) {
    auto br = h->ball(r);
    std::set<GroupElement> cur(br.begin(), br.end());
    EXPECT_EQ(cur.size(), br.size());
    for (const auto& g : prev) EXPECT_TRUE(cur.count(g));
    prev = std::move(cur);
  }
  EXPECT_EQ(corpus::trivial_group()->ball(3).size(), 1u);
  EXPECT_EQ(corpus::quaternion()->ball(10).size(), 8u);
}

TEST(Consistency, CorpusPresentations) {
  auto h = corpus::heisenberg()->check_consistency();
  EXPECT_TRUE(h.ok()) << h.witness;
  EXPECT_EQ(h.nilpotency_class, 2);
  auto t = corpus::trivial_group()->check_consistency();
  EXPECT_TRUE(t.ok());
  EXPECT_EQ(t.nilpotency_class, 0);
  for (const auto& name : {"Z2", "ZxZ6", "Q8", "ZxD4", "UT3Z4", "H3tors", "H3mod5", "H3z5", "CxC3"}) {
    auto r = corpus::by_name(name)->check_consistency();
    EXPECT_TRUE(r.ok()) << name << ": " << r.witness;
  }
  EXPECT_EQ(corpus::by_name("Z2")->check_consistency().nilpotency_class, 1);
  EXPECT_EQ(corpus::by_name("H3tors")->check_consistency().nilpotency_class, 2);
}

TEST(Consistency, NonNilpotentFailsWithWitness) {
  auto r = corpus::non_nilpotent_example()->check_consistency();
  EXPECT_TRUE(r.consistent);
  EXPECT_FALSE(r.nilpotent);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.witness.empty());
}

TEST(Consistency, DetectsOverlapFailure) {
  // a^2 = b makes a commute with b, contradicting b^a = b^2.
  PcPresentation::Relations rel;
  rel.relative_orders = {Integer(2), Integer(3)};
  rel.powers[0] = {0, 1};
  rel.conjugates[{0, 1}] = {0, 2};
  auto r = PcPresentation::create(rel)->check_consistency();
  EXPECT_FALSE(r.consistent);
  EXPECT_FALSE(r.witness.empty());
}

TEST(Consistency, DetectsAutomorphismOfWrongOrder) {
  // y -> y^2 has order 2 on Z/3, so it cannot be conjugation by an element of order 3.
  PcPresentation::Relations rel;
  rel.relative_orders = {Integer(3), Integer(3)};
  rel.conjugates[{0, 1}] = {0, 2};
  auto r = PcPresentation::create(rel)->check_consistency();
  EXPECT_FALSE(r.consistent);
  EXPECT_NE(r.witness.find("power overlap"), std::string::npos);
}

TEST(Presentation, RejectsMalformedRelations) {
  PcPresentation::Relations rel;
  rel.relative_orders = {std::nullopt, std::nullopt};
  rel.conjugates[{0, 1}] = {1, 1};
  EXPECT_THROW(PcPresentation::create(rel), Error);
  rel.conjugates[{0, 1}] = {0, 2};
  EXPECT_THROW(PcPresentation::create(rel), Error);
  rel.conjugates.clear();
  rel.powers[0] = {0, 1};
  EXPECT_THROW(PcPresentation::create(rel), Error);
  auto h = corpus::heisenberg_mod(3);
  EXPECT_THROW(h->element({0, 3, 0}), Error);
  EXPECT_THROW(h->element({0, 0}), Error);
}

TEST(Properties, AssociativityOnRandomTriples) {
  std::mt19937_64 rng(5);
  for (const auto& name : {"H3", "ZxD4", "H3tors", "Q8", "UT3Z4"}) {
    auto p = corpus::by_name(name);
    auto ball = p->ball(4);
    std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
    for (int i = 0; i < 1000; ++i) {
      const auto &a = ball[pick(rng)], &b = ball[pick(rng)], &c = ball[pick(rng)];
      ASSERT_EQ((a * b) * c, a * (b * c)) << name;
    }
  }
}

TEST(Properties, PowersInvert) {
  std::mt19937_64 rng(6);
  for (const auto& name : {"H3", "ZxD4", "H3tors", "Q8"}) {
    auto p = corpus::by_name(name);
    for (int i = 0; i < 20; ++i) {
      auto a = oracle::random_word(*p, rng, 8);
      GroupElement acc = p->identity();
      for (int k = -8; k <= 8; ++k) {
        EXPECT_TRUE((a.pow(Integer(k)) * a.pow(Integer(-k))).is_identity());
      }
      for (int k = 0; k <= 8; ++k) {
        EXPECT_EQ(a.pow(Integer(k)), acc);
        acc = acc * a;
      }
    }
  }
}

TEST(Properties, CollectAgreesWithWordProduct) {
  auto h = corpus::heisenberg();
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> d(-20, 20);
  for (int i = 0; i < 100; ++i) {
    Exponents e = {d(rng), d(rng), d(rng)};
    auto expected = h->generator(0).pow(e[0]) * h->generator(1).pow(e[1]) * h->generator(2).pow(e[2]);
    EXPECT_EQ(h->collect(e), expected);
  }
  auto q = corpus::quaternion();
  EXPECT_EQ(q->collect({Integer(4), Integer(0), Integer(0)}), q->identity());
  EXPECT_EQ(q->collect({Integer(2), Integer(0), Integer(0)}), q->generator(2));
}

#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "nilcut/cyclotomic.hpp"
#include "nilcut/integer.hpp"
#include "nilcut/phase.hpp"

using namespace nilcut;

TEST(Integer, PromotesOnOverflowAndDemotesBack) {
  Integer big = Integer(std::numeric_limits<long long>::max()) + Integer(1);
  EXPECT_FALSE(big.is_small());
  EXPECT_EQ(big.to_string(), "9223372036854775808");
  Integer back = big - Integer(1);
  EXPECT_TRUE(back.is_small());
  EXPECT_EQ(back, Integer(std::numeric_limits<long long>::max()));
  Integer sq = big * big;
  EXPECT_EQ(exact_div(sq, big), big);
}

TEST(Integer, FloorDivmodMatchesDefinition) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long long> d(-1000, 1000), m(1, 50);
  for (int i = 0; i < 1000; ++i) {
    Integer a = d(rng), mod = m(rng);
    auto [q, r] = floor_divmod(a, mod);
    EXPECT_EQ(q * mod + r, a);
    EXPECT_GE(r.sign(), 0);
    EXPECT_LT(r, mod);
  }
}

TEST(Integer, ExtendedGcd) {
  auto [g, s, t] = ext_gcd(Integer(12), Integer(18));
  EXPECT_EQ(g, Integer(6));
  EXPECT_EQ(s * Integer(12) + t * Integer(18), g);
}

TEST(Phase, ComposesExactlyModuloOne) {
  Phase a = Phase::parse("2/3"), b = Phase::parse("1/2");
  EXPECT_EQ((a * b).to_string(), "1/6");
  EXPECT_TRUE((a * a.inverse()).is_one());
  EXPECT_EQ(a.pow(Integer(3)), Phase());
  EXPECT_EQ(Phase::parse("1/3").scaled(mpq_class(1, 2)).to_string(), "1/6");
  EXPECT_NEAR(std::abs(Phase::parse("2/7").value()), 1.0, 1e-15);
}

TEST(Cyclotomic, RootsOfUnitySumToZero) {
  Cyclotomic sum;
  for (int k = 0; k < 5; ++k) sum += Cyclotomic::root_of_unity(5, k);
  EXPECT_TRUE(sum.is_zero());
}

TEST(Cyclotomic, PromotionIdentifiesEqualNumbers) {
  EXPECT_EQ(Cyclotomic::root_of_unity(3, 1), Cyclotomic::root_of_unity(6, 2));
  EXPECT_EQ(Cyclotomic::root_of_unity(2, 1), Cyclotomic(-1));
  EXPECT_EQ(Cyclotomic::root_of_unity(4, 1) * Cyclotomic::root_of_unity(4, 1), Cyclotomic(-1));
  EXPECT_EQ(Cyclotomic::root_of_unity(15, 5), Cyclotomic::root_of_unity(3, 1));
}

TEST(Cyclotomic, FieldOperations) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> c(-4, 4), k(0, 14);
  for (int trial = 0; trial < 50; ++trial) {
    Cyclotomic x = Cyclotomic::rational(c(rng), 3) + Cyclotomic(c(rng)) * Cyclotomic::root_of_unity(15, k(rng)) +
                   Cyclotomic::root_of_unity(5, k(rng));
    if (x.is_zero()) continue;
    EXPECT_EQ(x * x.inverse(), Cyclotomic(1));
    EXPECT_EQ(x.conj().conj(), x);
    auto z = x.to_complex(), zc = x.conj().to_complex();
    EXPECT_NEAR(z.real(), zc.real(), 1e-12);
    EXPECT_NEAR(z.imag(), -zc.imag(), 1e-12);
    EXPECT_TRUE((x * x.conj()).to_complex().imag() < 1e-12);
  }
  EXPECT_TRUE((Cyclotomic::root_of_unity(5, 1) + Cyclotomic::root_of_unity(5, 4)).is_rational() == false);
  EXPECT_TRUE(Cyclotomic::rational(3, 7).is_rational());
}

TEST(Cyclotomic, FromPhase) {
  EXPECT_EQ(Cyclotomic::from_phase(Phase::parse("1/2")), Cyclotomic(-1));
  EXPECT_EQ(Cyclotomic::from_phase(Phase()), Cyclotomic(1));
  auto z = Cyclotomic::from_phase(Phase::parse("2/7")).to_complex();
  EXPECT_NEAR(z.real(), Phase::parse("2/7").value().real(), 1e-14);
}

#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "muldecide/arith.hpp"

using namespace muldecide;

TEST(Factor, CanonicalExamples) {
  const FactoredRational r = factor(24, 45);
  EXPECT_EQ(r.sign(), 1);
  EXPECT_EQ(r.factors(), (std::map<Int, Int>{{2, 3}, {3, -1}, {5, -1}}));
  EXPECT_EQ(r.to_string(), "+ 2^3 3^-1 5^-1");

  const FactoredRational one = factor(1, 1);
  EXPECT_FALSE(one.is_zero());
  EXPECT_TRUE(one.factors().empty());

  EXPECT_TRUE(factor(0, 7).is_zero());
  EXPECT_EQ(factor(0, 7).sign(), 1);
  EXPECT_EQ(factor(-3, 6).to_string(), "- 2^-1");
  EXPECT_THROW(factor(1, 0), ArgumentError);
}

TEST(Factor, RejectsOutOfRange) {
  EXPECT_THROW(factor(std::numeric_limits<Int>::min(), 1), ArgumentError);
}

TEST(Factor, RoundTripRandom) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Int> num(-1000000, 1000000), den(1, 1000000);
  for (int i = 0; i < 1000; ++i) {
    Int a = num(rng), b = den(rng);
    if (a == 0) a = 1;
    const Int g = std::gcd(a, b);
    const auto [n, d] = factor(a, b).to_fraction();
    EXPECT_EQ(n, a / g);
    EXPECT_EQ(d, b / g);
  }
}

TEST(Factor, MultiplicationMatchesRationalProduct) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<Int> num(-10000, 10000), den(1, 10000);
  for (int i = 0; i < 1000; ++i) {
    Int a = num(rng), b = den(rng), c = num(rng), d = den(rng);
    if (a == 0) a = 7;
    if (c == 0) c = -5;
    EXPECT_EQ(factor(a, b) * factor(c, d), factor(a * c, b * d));
  }
}

TEST(FactoredRational, GroupOperations) {
  EXPECT_EQ(factor(4, 9) * factor(3, 2), factor(2, 3));
  EXPECT_TRUE(FactoredRational::zero().inverse().is_zero());
  // (2/3)^-2 as a plain fraction is 3*3 / (2*2)
  EXPECT_EQ(factor(2, 3).pow(-2), factor(3 * 3, 2 * 2));
  EXPECT_EQ(factor(-2, 3).pow(3), factor(-8, 27));
  EXPECT_EQ(factor(5).pow(0), FactoredRational::one());
  EXPECT_TRUE(FactoredRational::zero().pow(3).is_zero());
  EXPECT_THROW(FactoredRational::zero().pow(0), DomainError);
  EXPECT_THROW(FactoredRational::zero().pow(-1), DomainError);
  EXPECT_TRUE((factor(3) * FactoredRational::zero()).is_zero());
}

TEST(FactoredRational, Invariants) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<Int> num(-5000, 5000), den(1, 5000);
  for (int i = 0; i < 300; ++i) {
    const FactoredRational r = factor(num(rng), den(rng)) * factor(num(rng), den(rng));
    if (r.is_zero()) {
      EXPECT_TRUE(r.factors().empty());
      EXPECT_EQ(r.sign(), 1);
      continue;
    }
    for (const auto& [p, e] : r.factors()) {
      EXPECT_TRUE(is_prime(p));
      EXPECT_NE(e, 0);
    }
  }
}

TEST(NthPower, Examples) {
  EXPECT_TRUE(is_nth_power(factor(4, 9), 2, PowerDomain::PositiveRationals));
  EXPECT_FALSE(is_nth_power(factor(2), 2, PowerDomain::PositiveRationals));
  EXPECT_TRUE(is_nth_power(factor(-8), 3, PowerDomain::Rationals));
  EXPECT_FALSE(is_nth_power(factor(-4), 2, PowerDomain::Rationals));
  EXPECT_TRUE(is_nth_power(FactoredRational::zero(), 2, PowerDomain::Rationals));
  EXPECT_THROW(is_nth_power(factor(4), 1, PowerDomain::Rationals), ArgumentError);
  EXPECT_THROW(is_nth_power(factor(-4), 2, PowerDomain::PositiveRationals), ArgumentError);
  EXPECT_THROW(is_nth_power(FactoredRational::zero(), 2, PowerDomain::PositiveRationals), ArgumentError);
}

TEST(NthPower, ExhaustiveAgainstExplicitPowers) {
  // Oracle: the set of b^n for all b with exponents in [-6, 6] over {2, 3, 5},
  // built by scaling exponent vectors.
  auto make = [&](Int a, Int b, Int c) { return FactoredRational::from_factors(1, {{2, a}, {3, b}, {5, c}}); };
  for (Int n = 2; n <= 6; ++n) {
    std::set<FactoredRational> powers;
    for (Int a = -6; a <= 6; ++a)
      for (Int b = -6; b <= 6; ++b)
        for (Int c = -6; c <= 6; ++c) powers.insert(make(a * n, b * n, c * n));
    for (Int a = -6; a <= 6; ++a)
      for (Int b = -6; b <= 6; ++b)
        for (Int c = -6; c <= 6; ++c) {
          const FactoredRational x = make(a, b, c);
          ASSERT_EQ(is_nth_power(x, n, PowerDomain::PositiveRationals), powers.contains(x))
              << x.to_string() << " n=" << n;
        }
  }
}

TEST(Bezout, Examples) {
  const auto a = bezout_multi({3, 2});
  EXPECT_EQ(a.coefficients, (std::vector<Int>{1, -1}));
  EXPECT_EQ(a.gcd, 1);
  const auto b = bezout_multi({6});
  EXPECT_EQ(b.coefficients, (std::vector<Int>{1}));
  EXPECT_EQ(b.gcd, 6);
  const auto c = bezout_multi({4, 6});
  EXPECT_EQ(c.coefficients, (std::vector<Int>{-1, 1}));
  EXPECT_EQ(c.gcd, 2);
  EXPECT_THROW(bezout_multi(std::vector<Int>{}), ArgumentError);
}

TEST(Bezout, RandomIdentity) {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<Int> val(-10000, 10000), len(1, 6);
  for (int i = 0; i < 1000; ++i) {
    std::vector<Int> in(static_cast<std::size_t>(len(rng)));
    for (auto& x : in) {
      do x = val(rng);
      while (x == 0);
    }
    const auto cert = bezout_multi(in);
    Int sum = 0, g = 0;
    for (std::size_t k = 0; k < in.size(); ++k) {
      sum += cert.coefficients[k] * in[k];
      g = std::gcd(g, in[k]);
    }
    ASSERT_EQ(sum, g);
    ASSERT_EQ(cert.gcd, g);
    ASSERT_TRUE(cert.verify());
  }
}

TEST(FreshPrime, SmallestMissing) {
  EXPECT_EQ(fresh_prime({2, 3, 5}), 7);
  EXPECT_EQ(fresh_prime({}), 2);
  EXPECT_EQ(fresh_prime({2, 5, 7}), 3);
}

TEST(RootOfUnity, Examples) {
  const auto w4 = RootOfUnity::primitive(4);
  EXPECT_EQ((w4 * w4).exponent(), Rational(1, 2));
  EXPECT_TRUE(RootOfUnity::primitive(3).pow(3).is_one());
  EXPECT_EQ((RootOfUnity::primitive(3) * w4).exponent(), Rational(7, 12));
  EXPECT_EQ(w4.pow(-1).exponent(), Rational(3, 4));
}

TEST(RootOfUnity, OrderDivides) {
  for (Int n = 1; n <= 24; ++n) {
    const auto w = RootOfUnity::primitive(n);
    EXPECT_EQ(w.order(), n);
    for (Int k = -100; k <= 100; ++k) ASSERT_EQ(w.pow(k).is_one(), k % n == 0) << n << " " << k;
  }
}

TEST(Scalar, Rendering) {
  EXPECT_EQ(Scalar::from_fraction(2, 3).to_string(), "2/3");
  EXPECT_EQ(Scalar::from_fraction(-2, 3).to_string(), "-2/3");
  EXPECT_EQ(Scalar::zero().to_string(), "0");
  EXPECT_EQ(Scalar::omega(4).pow(3).to_string(), "w4^3");
  EXPECT_EQ((Scalar::omega(3) * Scalar::from_fraction(2, 1)).to_string(), "w3*2");
  EXPECT_TRUE(Scalar::zero().inverse().is_zero());
  EXPECT_TRUE(Scalar::zero().pow(0).is_one());
}

TEST(CheckedArithmetic, Overflow) {
  EXPECT_THROW(checked::mul(std::numeric_limits<Int>::max(), 2), OverflowError);
  EXPECT_THROW(checked::pow(2, 64), OverflowError);
  EXPECT_EQ(floor_mod(-7, 3), 2);
  EXPECT_EQ(lcm(4, 6), 12);
}

#include <random>

#include <gtest/gtest.h>

#include "muldecide/rsystem.hpp"

using namespace muldecide;

namespace {

FactoredRational fr(Int n, Int d = 1) { return factor(n, d); }

struct Generator {
  std::mt19937_64 rng;
  std::vector<Int> primes;
  Int max_modulus;
  Int max_exp;

  Int uniform(Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng); }

  FactoredRational value() {
    std::map<Int, Int> f;
    for (Int p : primes) f[p] = uniform(-max_exp, max_exp);
    return FactoredRational::from_factors(1, f, true);
  }

  RSystem system(Int max_pos, Int max_neg) {
    RSystem s;
    for (Int i = uniform(0, max_pos); i > 0; --i) s.positives.push_back({uniform(2, max_modulus), value()});
    for (Int i = uniform(0, max_neg); i > 0; --i) s.negatives.push_back({uniform(2, max_modulus), value()});
    return s;
  }
};

/// Exponent vector over the primes {2, 3, 5}; 5 plays the fresh prime.
using Vec = std::array<Int, 3>;

Vec vec(const FactoredRational& r) { return {r.exponent(2), r.exponent(3), r.exponent(5)}; }

bool divisible(const Vec& a, const Vec& b, Int n) {
  for (std::size_t i = 0; i < 3; ++i)
    if ((a[i] + b[i]) % n != 0) return false;
  return true;
}

/// Bounded brute force: any x = 2^a 3^b 5^c with a, b in [-12, 12], c in [0, 12].
bool brute_satisfiable(const RSystem& s) {
  std::vector<std::pair<Int, Vec>> pos, neg;
  for (const auto& c : s.positives) pos.emplace_back(c.n, vec(c.u));
  for (const auto& c : s.negatives) neg.emplace_back(c.n, vec(c.u));
  for (Int a = -12; a <= 12; ++a)
    for (Int b = -12; b <= 12; ++b)
      for (Int c = 0; c <= 12; ++c) {
        const Vec x{a, b, c};
        bool ok = true;
        for (const auto& [n, u] : pos) ok = ok && divisible(u, x, n);
        for (const auto& [n, u] : neg) ok = ok && !divisible(u, x, n);
        if (ok) return true;
      }
  return false;
}

}  // namespace

TEST(RnSolve, Examples) {
  const auto a = std::get<RSolution>(rn_solve({{2, fr(2)}, {3, fr(1)}}));
  EXPECT_EQ(a.n, 6);
  EXPECT_EQ(a.bezout.coefficients, (std::vector<Int>{1, -1}));
  EXPECT_EQ(a.x0, fr(1, 8));
  // 2 * 1/8 = (1/2)^2 and 1/8 = (1/2)^3
  EXPECT_EQ(fr(2) * a.x0, fr(1, 2).pow(2));
  EXPECT_EQ(a.x0, fr(1, 2).pow(3));

  const auto b = std::get<RSolution>(rn_solve({{2, fr(1)}}));
  EXPECT_EQ(b.n, 2);
  EXPECT_EQ(b.x0, fr(1));

  const auto c = std::get<RConflict>(rn_solve({{2, fr(2)}, {2, fr(3)}}));
  EXPECT_EQ(c.kind, RConflict::Kind::Pairwise);
  EXPECT_EQ(c.i, 1u);
  EXPECT_EQ(c.j, 2u);
  EXPECT_EQ(c.gcd, 2);

  EXPECT_THROW(rn_solve({}), ArgumentError);
  EXPECT_THROW(rn_solve({{1, fr(2)}}), ArgumentError);
  EXPECT_THROW(rn_solve({{2, fr(-2)}}), ArgumentError);
}

TEST(RmSolve, Examples) {
  const auto a = std::get<RSolution>(rm_solve({{{2, fr(1)}}, {{2, fr(2)}}}));
  EXPECT_EQ(a.n, 2);
  EXPECT_EQ(a.x0, fr(1));
  EXPECT_EQ(a.fresh_prime, 3);
  EXPECT_EQ(a.j, 1);
  EXPECT_EQ(a.witness, fr(9));

  const auto b = std::get<RConflict>(rm_solve({{{2, fr(1)}}, {{2, fr(1)}}}));
  EXPECT_EQ(b.kind, RConflict::Kind::Negative);
  EXPECT_EQ(b.k, 1u);

  const auto c = std::get<RSolution>(rm_solve({{}, {{2, fr(1)}}}));
  EXPECT_EQ(c.n, 1);
  EXPECT_EQ(c.x0, fr(1));
  EXPECT_EQ(c.witness, fr(2));
}

TEST(RmSolve, FreshPrimeAvoidsAvoidList) {
  const RSystem s{{{2, fr(1)}}, {{2, fr(2)}}};
  const auto a = std::get<RSolution>(rm_solve(s, {fr(9)}));
  EXPECT_EQ(a.fresh_prime, 5);
  EXPECT_EQ(a.witness, fr(25));
  const auto b = std::get<RSolution>(rm_solve(s, {fr(3, 7)}));
  EXPECT_EQ(b.fresh_prime, 5);
  EXPECT_EQ(b.j, 1);
}

TEST(RmSolve, WitnessesOnRandomSatisfiableSystems) {
  Generator g{std::mt19937_64(31), {2, 3, 5, 7, 11, 13}, 8, 4};
  int sat = 0;
  while (sat < 500) {
    const RSystem s = g.system(3, 2);
    const auto r = rm_solve(s);
    if (const auto* c = std::get_if<RConflict>(&r)) {
      ASSERT_TRUE(conflict_holds(s, *c));
      continue;
    }
    ++sat;
    const auto& sol = std::get<RSolution>(r);
    for (const auto& c : s.positives) ASSERT_TRUE(is_nth_power(c.u * sol.witness, c.n, PowerDomain::PositiveRationals));
    for (const auto& c : s.negatives) ASSERT_FALSE(is_nth_power(c.u * sol.witness, c.n, PowerDomain::PositiveRationals));
    ASSERT_TRUE(sol.fresh_prime.has_value());
    ASSERT_EQ(sol.j, 1);
    ASSERT_EQ(sol.witness,
              FactoredRational::from_factors(1, {{*sol.fresh_prime, sol.n * sol.j}}) * sol.x0);
    // every w^n x0 solves the positive part
    for (int k = 0; k < 20; ++k) {
      const FactoredRational w = g.value();
      for (const auto& c : s.positives) {
        ASSERT_TRUE(is_nth_power(c.u * w.pow(sol.n) * sol.x0, c.n, PowerDomain::PositiveRationals));
      }
    }
  }
}

TEST(RmSolve, AgreesWithBoundedSearch) {
  Generator g{std::mt19937_64(32), {2, 3}, 4, 3};
  for (int i = 0; i < 300; ++i) {
    const RSystem s = g.system(3, 2);
    const auto r = rm_solve(s);
    if (const auto* sol = std::get_if<RSolution>(&r)) {
      ASSERT_TRUE(satisfies(s, sol->witness));
    } else {
      ASSERT_FALSE(brute_satisfiable(s)) << "claimed unsat, system " << i;
    }
  }
}

TEST(RmSolve, NegativeVerdictIgnoresBezoutChoice) {
  // x0 is determined up to an n-th power; multiplying by one never changes
  // whether v * x0 is an m-th power when m divides n.
  Generator g{std::mt19937_64(33), {2, 3, 5}, 6, 4};
  for (int i = 0; i < 300; ++i) {
    const RSystem s = g.system(3, 0);
    if (s.positives.empty()) continue;
    const auto r = rn_solve(s.positives);
    if (!std::holds_alternative<RSolution>(r)) continue;
    const auto& sol = std::get<RSolution>(r);
    const FactoredRational v = g.value();
    const FactoredRational shifted = sol.x0 * g.value().pow(sol.n);
    for (Int m = 2; m <= sol.n; ++m) {
      if (sol.n % m != 0) continue;
      ASSERT_EQ(is_nth_power(v * sol.x0, m, PowerDomain::PositiveRationals),
                is_nth_power(v * shifted, m, PowerDomain::PositiveRationals));
    }
  }
}

TEST(RmSolve, MatchesRnSolveWithoutNegatives) {
  Generator g{std::mt19937_64(34), {2, 3, 5}, 6, 3};
  for (int i = 0; i < 300; ++i) {
    RSystem s = g.system(3, 0);
    if (s.positives.empty()) continue;
    const auto a = rn_solve(s.positives);
    const auto b = rm_solve(s);
    ASSERT_EQ(a.index(), b.index());
    if (const auto* sa = std::get_if<RSolution>(&a)) {
      const auto& sb = std::get<RSolution>(b);
      ASSERT_EQ(sa->n, sb.n);
      ASSERT_EQ(sa->x0, sb.x0);
    }
  }
}

#include <numeric>
#include <optional>

#include <gtest/gtest.h>

#include "muldecide/crt.hpp"

using namespace muldecide;

namespace {

CrtSystem sys(std::initializer_list<std::pair<Int, Int>> e) {
  CrtSystem s;
  for (auto [n, u] : e) s.entries.push_back({n, u});
  return s;
}

/// All solutions in [0, bound).
std::vector<Int> brute(const CrtSystem& s, Int bound) {
  std::vector<Int> out;
  for (Int x = 0; x < bound; ++x)
    if (satisfies(s, x)) out.push_back(x);
  return out;
}

}  // namespace

TEST(Crt, Examples) {
  const auto a = std::get<CrtSolution>(crt_solve(sys({{2, 0}, {3, 0}})));
  EXPECT_EQ(a.x0, 0);
  EXPECT_EQ(a.modulus, 6);

  // brute force over 0..11 gives the unique solution 10
  const auto b = std::get<CrtSolution>(crt_solve(sys({{4, 2}, {6, 4}})));
  EXPECT_EQ(b.x0, 10);
  EXPECT_EQ(b.modulus, 12);

  const auto c = std::get<CrtConflict>(crt_solve(sys({{2, 1}, {4, 2}})));
  EXPECT_EQ(c.i, 1u);
  EXPECT_EQ(c.j, 2u);
  EXPECT_EQ(c.gcd, 2);
  EXPECT_TRUE(brute(sys({{2, 1}, {4, 2}}), 4).empty());
}

TEST(Crt, EmptySystem) {
  const auto s = std::get<CrtSolution>(crt_solve({}));
  EXPECT_EQ(s.x0, 0);
  EXPECT_EQ(s.modulus, 1);
}

TEST(Crt, RejectsNonPositiveModulus) { EXPECT_THROW(crt_solve(sys({{0, 1}})), ArgumentError); }

TEST(Crt, FirstConflictInIndexOrder) {
  const auto c = std::get<CrtConflict>(crt_solve(sys({{3, 1}, {5, 0}, {6, 2}, {10, 1}})));
  EXPECT_EQ(c.i, 1u);
  EXPECT_EQ(c.j, 3u);
  EXPECT_EQ(c.gcd, 3);
  EXPECT_EQ(to_string(CrtResult(c)), "conflict i=1 j=3 gcd=3");
}

TEST(Crt, NegativeResiduesReduce) {
  const auto s = std::get<CrtSolution>(crt_solve(sys({{5, -1}, {7, -10}})));
  EXPECT_EQ(s.x0, 4);
  EXPECT_EQ(to_string(CrtResult(s)), "x0=4 mod 35");
}

TEST(Crt, ExhaustiveUpToThreeModuli) {
  // Every system with <= 3 moduli in [1, 12] and residues in [0, n): the
  // verdict and x0 agree with enumeration over [0, lcm).
  std::vector<Int> ms;
  for (Int m = 1; m <= 12; ++m) ms.push_back(m);
  std::function<void(CrtSystem&, std::size_t)> rec = [&](CrtSystem& s, std::size_t depth) {
    Int l = 1;
    for (const auto& c : s.entries) l = std::lcm(l, c.modulus);
    const auto found = brute(s, l);
    const auto r = crt_solve(s);
    if (found.empty()) {
      ASSERT_TRUE(std::holds_alternative<CrtConflict>(r));
      const auto& c = std::get<CrtConflict>(r);
      const auto& ei = s.entries[c.i - 1];
      const auto& ej = s.entries[c.j - 1];
      ASSERT_NE(floor_mod(ei.residue - ej.residue, std::gcd(ei.modulus, ej.modulus)), 0);
    } else {
      ASSERT_EQ(found.size(), 1u);
      const auto& sol = std::get<CrtSolution>(r);
      ASSERT_EQ(sol.modulus, l);
      ASSERT_EQ(sol.x0, found.front());
    }
    if (depth == 3) return;
    const Int start = s.entries.empty() ? 1 : s.entries.back().modulus;
    for (Int m = start; m <= 12; ++m) {
      for (Int u = 0; u < m; ++u) {
        s.entries.push_back({m, u});
        rec(s, depth + 1);
        s.entries.pop_back();
      }
    }
  };
  CrtSystem s;
  rec(s, 0);
}

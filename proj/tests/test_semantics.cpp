#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace muldecide;
using testing_support::F;
using testing_support::q;

namespace {

/// Plain reduced fraction used as an independent evaluator for QPOS atoms.
struct Frac {
  __int128 n = 1, d = 1;

  static Frac make(__int128 n, __int128 d) {
    if (d < 0) n = -n, d = -d;
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) a %= b, std::swap(a, b);
    return {n / a, d / a};
  }
  Frac operator*(const Frac& o) const { return make(n * o.n, d * o.d); }
  Frac pow(Int k) const {
    Frac r;
    const Frac base = k < 0 ? make(d, n) : *this;
    for (Int i = 0; i < (k < 0 ? -k : k); ++i) r = r * base;
    return r;
  }
  bool operator==(const Frac&) const = default;
};

bool is_integer_power(__int128 v, Int n) {
  for (__int128 r = 1;; ++r) {
    __int128 p = 1;
    for (Int i = 0; i < n; ++i) p *= r;
    if (p == v) return true;
    if (p > v) return false;
  }
}

bool frac_is_power(const Frac& f, Int n) { return is_integer_power(f.n, n) && is_integer_power(f.d, n); }

}  // namespace

TEST(EvalGround, Examples) {
  EXPECT_TRUE(eval_ground(F("R3(8/27)"), {}, StructureId::QPOS));
  EXPECT_FALSE(eval_ground(F("R2(2)"), {}, StructureId::QPOS));
  EXPECT_TRUE(eval_ground(F("P(-1*-1)"), {}, StructureId::R));
  EXPECT_TRUE(eval_ground(F("w4*w4 = -1"), {}, StructureId::C));
  EXPECT_TRUE(eval_ground(F("x^2 = y & !P(x)"), {{"x", q(-3)}, {"y", q(9)}}, StructureId::Q));
  EXPECT_TRUE(eval_ground(F("x*x^-1 = 0"), {{"x", Element::zero_element()}}, StructureId::QNN));
  EXPECT_THROW(eval_ground(F("x = 1"), {}, StructureId::QPOS), ArgumentError);
  EXPECT_THROW(eval_ground(F("E x. x = 1"), {}, StructureId::QPOS), ArgumentError);
}

TEST(EvalGround, QposAgreesWithFractionArithmetic) {
  std::mt19937_64 rng(41);
  auto uni = [&](Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng); };
  for (int i = 0; i < 1000; ++i) {
    const Int xn = uni(1, 6), xd = uni(1, 6), yn = uni(1, 6), yd = uni(1, 6);
    const Int cn = uni(1, 12), cd = uni(1, 12);
    const Int a = uni(-3, 3), b = uni(-3, 3);
    const Frac x = Frac::make(xn, xd), y = Frac::make(yn, yd), c = Frac::make(cn, cd);
    const Frac lhs = c * x.pow(a) * y.pow(b);
    const Assignment asg{{"x", q(xn, xd)}, {"y", q(yn, yd)}};
    const std::string mono = std::to_string(cn) + "/" + std::to_string(cd) + "*x^" + std::to_string(a) + "*y^" +
                             std::to_string(b);
    if (i % 2 == 0) {
      const Int k = uni(-2, 2);
      const Frac rhs = x.pow(k);
      const Formula f = F(mono + " = x^" + std::to_string(k));
      ASSERT_EQ(eval_ground(f, asg), lhs == rhs) << to_string(f);
    } else {
      const Int n = uni(2, 4);
      const Formula f = F("R" + std::to_string(n) + "(" + mono + ")");
      ASSERT_EQ(eval_ground(f, asg), frac_is_power(lhs, n)) << to_string(f);
    }
  }
}

TEST(Element, ZeroConventions) {
  const Element z = Element::zero_element();
  EXPECT_EQ(z.inverse(), z);
  EXPECT_EQ(z.pow(0), Element::one());
  EXPECT_EQ(z.pow(-2), z);
  EXPECT_EQ((q(2) * z), z);
  EXPECT_EQ(q(-2, 3).to_string(), "-2/3");
  Element r;
  r.exps[2] = Rational(1, 2);
  EXPECT_EQ(r.pow(2), q(2));
  EXPECT_FALSE(r.to_rational().has_value());
}

TEST(Oracle, Examples) {
  const OracleBounds b4{4, std::nullopt};
  EXPECT_FALSE(oracle_search(F("E x. x^2 = 2"), StructureId::QPOS, b4).sat);

  const auto r = oracle_search(F("E x. R2(2*x)"), StructureId::QPOS, b4);
  ASSERT_TRUE(r.sat);
  EXPECT_EQ(to_string(r.witness), "x=2");
  EXPECT_TRUE(eval_ground(F("R2(2*x)"), r.witness));

  for (const auto& s : kStructures) {
    const auto t = oracle_search(F("E x. x = x"), s.id, {1, std::nullopt});
    ASSERT_TRUE(t.sat);
    EXPECT_EQ(to_string(t.witness), "x=1");
    EXPECT_EQ(t.tried, 1u);
  }
  EXPECT_THROW(oracle_search(F("E x. A y. x = y"), StructureId::QPOS, b4), ShapeError);
}

TEST(Oracle, StandInSolvesRootsOutsideTheRationals) {
  const auto r = oracle_search(F("E x. x^2 = 2"), StructureId::RPOS, {2, std::nullopt});
  ASSERT_TRUE(r.sat);
  EXPECT_EQ(to_string(r.witness), "x=2^(1/2)");
  const auto c = oracle_search(F("E x. x^2 = -1"), StructureId::C, {4, 1});
  ASSERT_TRUE(c.sat);
  EXPECT_TRUE(eval_ground(F("x^2 = -1"), c.witness, StructureId::C));
}

TEST(Oracle, CandidateOrder) {
  const auto qnn = candidates(std::vector<Int>{2}, StructureId::QNN, {1, std::nullopt});
  ASSERT_GE(qnn.size(), 3u);
  EXPECT_EQ(qnn[0], Element::one());
  EXPECT_EQ(qnn[1], Element::zero_element());
  // exponent vectors over {2} in [-1, 1] plus zero: 1, 0, 2, 1/2
  EXPECT_EQ(qnn.size(), 4u);
  const auto qpos = candidates(std::vector<Int>{2, 3}, StructureId::QPOS, {2, std::nullopt});
  EXPECT_EQ(qpos.size(), 25u);
}

TEST(Oracle, BoundedTruthIsThreeValued) {
  const OracleBounds b{2, std::nullopt};
  EXPECT_EQ(bounded_truth(F("E x. R2(2*x)"), StructureId::QPOS, b), Truth3::True);
  EXPECT_EQ(bounded_truth(F("E x. x^2 = 2"), StructureId::QPOS, b), Truth3::Unknown);
  EXPECT_EQ(bounded_truth(F("A x. R2(x)"), StructureId::QPOS, b), Truth3::False);
  EXPECT_EQ(bounded_truth(F("A x. x = x"), StructureId::QPOS, b), Truth3::Unknown);
  EXPECT_EQ(bounded_truth(F("R2(4)"), StructureId::QPOS, b), Truth3::True);
  EXPECT_EQ(to_string(Truth3::Unknown), "unknown");
}

TEST(Oracle, WitnessesReverify) {
  for (const auto& s : kStructures) {
    for (const auto& f : generate_sentences(s.id, 6, 60)) {
      const Formula typed = check_language(f, s.id);
      Formula body = typed;
      while (body.kind() == FormulaKind::Exists) body = body.body();
      if (typed.kind() != FormulaKind::Exists || !is_quantifier_free(body)) continue;
      const auto r = oracle_search(typed, s.id, corpus_bounds(s.id));
      if (r.sat) {
        ASSERT_TRUE(eval_ground(body, r.witness, s.id)) << to_string(f);
      }
    }
  }
}

TEST(Axioms, RposPassesEverything) {
  const AxiomReport rep = axiom_check(StructureId::RPOS, 10, 100);
  EXPECT_TRUE(rep.as_expected());
  for (const auto& r : rep.results) EXPECT_TRUE(r.passed) << r.name;
}

TEST(Axioms, QposIsNotDivisible) {
  const AxiomReport rep = axiom_check(StructureId::QPOS, 10, 100);
  EXPECT_TRUE(rep.as_expected());
  ASSERT_NE(rep.find("torsion-freeness"), nullptr);
  EXPECT_TRUE(rep.find("torsion-freeness")->passed);
  const AxiomResult* div = rep.find("divisibility");
  ASSERT_NE(div, nullptr);
  EXPECT_FALSE(div->passed);
  EXPECT_FALSE(div->expected);
  EXPECT_EQ(div->counterexample, "x=2 n=2");
}

TEST(Axioms, ComplexRootsOfUnity) {
  const AxiomReport rep = axiom_check(StructureId::C, 6, 100);
  EXPECT_TRUE(rep.as_expected());
  ASSERT_NE(rep.find("roots of unity"), nullptr);
  EXPECT_TRUE(rep.find("roots of unity")->passed);
  EXPECT_EQ(rep.find("torsion-freeness"), nullptr);

  // x^4 = 1 over the stand-in phases with denominators <= 4: 1, i, -1, -i
  int solutions = 0;
  for (Int d = 1; d <= 4; ++d) {
    for (Int k = 0; k < d; ++k) {
      if (std::gcd(k, d) != 1 && !(k == 0 && d == 1)) continue;
      const Element e = Element::from_scalar(Scalar(RootOfUnity(Rational(k, d)), FactoredRational::one()));
      if (e.pow(4) == Element::one()) ++solutions;
    }
  }
  EXPECT_EQ(solutions, 4);
}

TEST(Axioms, EveryStructureMatchesExpectations) {
  for (const auto& s : kStructures) EXPECT_TRUE(axiom_check(s.id, 6, 200, 7).as_expected()) << s.name;
  EXPECT_THROW(axiom_check(StructureId::R, 1, 10), ArgumentError);
}

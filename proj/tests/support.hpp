#pragma once

// Helpers shared by the test suites.

#include <random>
#include <string>
#include <vector>

#include "muldecide/muldecide.hpp"

namespace testing_support {

using namespace muldecide;

inline Element q(Int num, Int den = 1) { return Element::from_rational(factor(num, den)); }

inline Formula F(const std::string& s) { return parse_formula(s); }

/// Truth of f when every quantifier ranges over the finite set `domain`.
/// Propositional laws, quantifier duality and distribution of E over | hold in
/// every such model, so rewrites that only use those laws must preserve it.
inline bool eval_finite(const Formula& f, Assignment a, const std::vector<Element>& domain) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return eval_atom(f.atom(), a);
    case FormulaKind::Not:
      return !eval_finite(f.body(), a, domain);
    case FormulaKind::And:
      for (const auto& g : f.args())
        if (!eval_finite(g, a, domain)) return false;
      return true;
    case FormulaKind::Or:
      for (const auto& g : f.args())
        if (eval_finite(g, a, domain)) return true;
      return false;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      const bool ex = f.kind() == FormulaKind::Exists;
      for (const auto& d : domain) {
        a[f.var()] = d;
        if (eval_finite(f.body(), a, domain) == ex) return ex;
      }
      return !ex;
    }
  }
  return false;
}

/// Random nonzero rational supported on {2, 3, 5}, optionally signed.
inline Element random_unit(std::mt19937_64& rng, bool signed_values) {
  std::uniform_int_distribution<Int> e(-3, 3);
  Element x = Element::from_rational(FactoredRational::from_factors(1, {{2, e(rng)}, {3, e(rng)}, {5, e(rng)}}));
  if (signed_values && rng() % 2) x = x * Element::from_scalar(Scalar::minus_one());
  return x;
}

}  // namespace testing_support

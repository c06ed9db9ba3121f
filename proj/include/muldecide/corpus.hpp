#pragma once

// Seeded random formulas and the decide-versus-oracle agreement run.

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "muldecide/formula.hpp"
#include "muldecide/qe.hpp"
#include "muldecide/semantics.hpp"

namespace muldecide {

namespace detail {

class FormulaGen {
 public:
  FormulaGen(std::uint64_t seed, StructureId sid) : rng_(seed), sid_(sid), s_(describe(sid)) {}

  Int uniform(Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng_); }
  bool chance(Int num, Int den) { return uniform(1, den) <= num; }

  Scalar coefficient() {
    if (s_.has_zero && chance(1, 12)) return Scalar::zero();
    Scalar c = Scalar::one();
    if (chance(1, 2)) {
      std::map<Int, Int> f{{2, uniform(-2, 2)}, {3, uniform(-2, 2)}};
      c = Scalar::from_rational(FactoredRational::from_factors(1, f, true));
    }
    if (s_.has_sign && chance(1, 4)) c = c * Scalar::minus_one();
    if (s_.has_omega && chance(1, 3)) {
      static const Scalar phases[] = {Scalar::minus_one(), Scalar::omega(3), Scalar::omega(4), Scalar::omega(4).pow(3),
                                      Scalar::omega(3).pow(2)};
      c = c * phases[uniform(0, 4)];
    }
    return c;
  }

  /// A monomial over `vars`; `focus` (if nonempty) occurs with high probability.
  Monomial monomial(const std::vector<std::string>& vars, const std::string& focus) {
    Monomial m = Monomial::constant(coefficient());
    if (m.is_zero()) return m;
    for (const auto& v : vars) {
      const bool include = v == focus ? chance(4, 5) : chance(2, 5);
      if (!include) continue;
      Int k = uniform(-4, 4);
      if (k == 0) k = 1;
      m = m * Monomial::variable(v, k);
    }
    return m;
  }

  Formula atom(const std::vector<std::string>& vars, const std::string& focus) {
    const Int kinds = 1 + (s_.has_rn ? 1 : 0) + (s_.has_sign ? 1 : 0);
    const Int pick = chance(3, 5) ? 0 : uniform(0, kinds - 1);
    if (pick == 1 && s_.has_rn) return Formula(Atom::power(uniform(2, 4), monomial(vars, focus)));
    if (pick >= 1 && s_.has_sign) return Formula(Atom::positive(monomial(vars, focus)));
    Monomial lhs = monomial(vars, focus);
    Monomial rhs = chance(1, 2) ? Monomial::constant(coefficient()) : monomial(vars, "");
    if (!s_.has_zero) {
      lhs = lhs.group_form();
      rhs = rhs.group_form();
    }
    return Formula(Atom::eq(std::move(lhs), std::move(rhs)));
  }

  Formula literal(const std::vector<std::string>& vars, const std::string& focus) {
    Formula a = atom(vars, focus);
    return chance(1, 3) ? Formula::negation(a) : a;
  }

  /// Random and/or combination of `n` literals.
  Formula matrix(const std::vector<std::string>& vars, const std::string& focus, Int n) {
    if (n <= 1) return literal(vars, focus);
    const Int left = uniform(1, n - 1);
    Formula a = matrix(vars, focus, left);
    Formula b = matrix(vars, focus, n - left);
    Formula c = chance(1, 2) ? Formula::conjunction({a, b}) : Formula::disjunction({a, b});
    return chance(1, 6) ? Formula::negation(c) : c;
  }

  Formula quantify(const std::string& v, Formula body) {
    return chance(1, 2) ? Formula::exists(v, std::move(body)) : Formula::forall(v, std::move(body));
  }

  /// Quantifier depth <= 2, at most 4 atoms, over the free variables `outer`.
  Formula formula(const std::vector<std::string>& outer) {
    std::vector<std::string> v1 = outer;
    v1.push_back("x");
    if (chance(1, 3)) return quantify("x", matrix(v1, "x", uniform(1, 3)));
    std::vector<std::string> v2 = v1;
    v2.push_back("y");
    if (chance(3, 5)) return quantify("x", quantify("y", matrix(v2, "y", uniform(1, 3))));
    Formula side = literal(v1, "x");
    Formula inner = quantify("y", matrix(v2, "y", uniform(1, 3)));
    return quantify("x", chance(1, 2) ? Formula::conjunction({side, inner}) : Formula::disjunction({side, inner}));
  }

 private:
  std::mt19937_64 rng_;
  StructureId sid_;
  const StructureDescriptor& s_;
};

}  // namespace detail

/// `count` random sentences over the structure.
inline std::vector<Formula> generate_sentences(StructureId sid, std::uint64_t seed, std::size_t count) {
  detail::FormulaGen g(seed * 7919 + static_cast<std::uint64_t>(sid), sid);
  std::vector<Formula> out;
  while (out.size() < count) out.push_back(g.formula({}));
  return out;
}

/// `count` random QPOS formulas with free variables among a, b.
inline std::vector<Formula> generate_open_qpos(std::uint64_t seed, std::size_t count) {
  detail::FormulaGen g(seed * 104729 + 17, StructureId::QPOS);
  std::vector<Formula> out;
  while (out.size() < count) {
    std::vector<std::string> outer{"a"};
    if (g.chance(1, 2)) outer.push_back("b");
    Formula f = g.formula(outer);
    if (!free_vars(f).empty()) out.push_back(f);
  }
  return out;
}

/// Oracle bounds used by the corpus run, sized for a desk machine.
inline OracleBounds corpus_bounds(StructureId sid) {
  switch (sid) {
    case StructureId::C:
      return {4, 1};
    default:
      return {2, std::nullopt};
  }
}

struct CorpusMismatch {
  std::string formula;
  bool decided = false;
  Truth3 oracle = Truth3::Unknown;
};

struct CorpusRow {
  StructureId structure = StructureId::QPOS;
  std::size_t formulas = 0;
  std::size_t conclusive = 0;
  std::size_t agreements = 0;
  std::size_t budget_exceeded = 0;
  std::size_t witnesses_needed = 0;    // purely existential QPOS sentences decided true
  std::size_t witnesses_verified = 0;
  double seconds = 0;
  std::vector<CorpusMismatch> mismatches;
  std::vector<std::string> witness_failures;

  bool ok() const {
    return budget_exceeded == 0 && agreements == conclusive && witnesses_verified == witnesses_needed;
  }
};

struct CorpusOptions {
  std::uint64_t seed = 1;
  std::size_t count = 200;
  std::size_t budget = kDefaultBudget;
};

namespace detail {

/// The quantifier-free matrix under a leading existential block, if f has
/// that shape.
inline std::optional<Formula> existential_matrix(const Formula& f) {
  Formula g = f;
  if (g.kind() != FormulaKind::Exists) return std::nullopt;
  while (g.kind() == FormulaKind::Exists) g = g.body();
  if (!is_quantifier_free(g)) return std::nullopt;
  return g;
}

}  // namespace detail

inline CorpusRow run_corpus(StructureId sid, const CorpusOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  CorpusRow row;
  row.structure = sid;
  const OracleBounds bounds = corpus_bounds(sid);
  for (const auto& f : generate_sentences(sid, opt.seed, opt.count)) {
    ++row.formulas;
    bool verdict = false;
    try {
      verdict = decide(f, sid, opt.budget);
    } catch (const BudgetExceeded&) {
      ++row.budget_exceeded;
      continue;
    }
    const Truth3 o = bounded_truth(f, sid, bounds);
    if (o != Truth3::Unknown) {
      ++row.conclusive;
      if ((o == Truth3::True) == verdict) {
        ++row.agreements;
      } else {
        row.mismatches.push_back({to_string(f), verdict, o});
      }
    }
    if (sid == StructureId::QPOS && verdict) {
      const Formula typed = simplify(check_language(f, sid));
      if (auto matrix = detail::existential_matrix(typed)) {
        ++row.witnesses_needed;
        auto w = qpos_witness(typed, opt.budget);
        if (w && eval_ground(*matrix, *w, sid)) {
          ++row.witnesses_verified;
        } else {
          row.witness_failures.push_back(to_string(f));
        }
      }
    }
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace muldecide

#pragma once

// Quantifier elimination, innermost existential first.
//
// QPOS and RPOS are groups: a conjunction of literals in x is collected into
// an ExistentialBlock, its powers of x are unified to a single x^p, and the
// block is solved by substitution (when an equality pins x down) or by the
// power-residue criterion (QPOS) / infinitude of the group (RPOS).
//
// QNN, Q, RNN, R and C contain 0. There every variable of the clause is split
// into zero / positive / negative (zero / nonzero without a sign, and over C),
// each literal is decided or reduced to a literal between absolute values, and
// the group engine runs on the nonzero part. Negative variables are put back
// as (-1)*v afterwards.
//
// Over C the group engine reduces all equalities to a single x^g = u and
// splits each disequality x^b != t into u^b != t^g or x^b = t * w_g^i.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "muldecide/formula.hpp"
#include "muldecide/rsystem.hpp"
#include "muldecide/semantics.hpp"

namespace muldecide {

inline constexpr std::size_t kDefaultBudget = 100000;

/// x^exp = rhs (or !=).
struct PowerEquation {
  Int exp = 1;
  Monomial rhs;
  friend bool operator==(const PowerEquation&, const PowerEquation&) = default;
};

/// R_n(u * x^exp).
struct ResidueAtom {
  Int n = 2;
  Int exp = 1;
  Monomial u;
  friend bool operator==(const ResidueAtom&, const ResidueAtom&) = default;
};

struct ExistentialBlock {
  std::string var;
  std::vector<PowerEquation> equalities;
  std::vector<PowerEquation> disequalities;
  std::vector<ResidueAtom> residues;
  std::vector<ResidueAtom> non_residues;
  std::vector<Literal> rest;  // literals not mentioning var
  Int unified_power = 1;      // p after unify_powers: the block's variable stands for x^p
};

/// Collect a conjunction of literals over a group (every variable nonzero).
inline ExistentialBlock make_block(const std::string& x, const Clause& clause) {
  ExistentialBlock b;
  b.var = x;
  for (const auto& lit : clause) {
    const Atom a = lit.atom.map_monomials([](const Monomial& m) { return m.group_form(); });
    if (!a.mentions(x)) {
      b.rest.push_back({a, lit.negated});
      continue;
    }
    switch (a.kind) {
      case AtomKind::Eq: {
        Int k = checked::sub(a.lhs.exponent(x), a.rhs.exponent(x));
        const Monomial l = a.lhs.without(x);
        const Monomial r = a.rhs.without(x);
        if (k == 0) {
          b.rest.push_back({Atom::eq(l, r), lit.negated});
          break;
        }
        Monomial s = r * l.inverse();
        if (k < 0) {
          k = checked::neg(k);
          s = s.inverse();
        }
        (lit.negated ? b.disequalities : b.equalities).push_back({k, s.group_form()});
        break;
      }
      case AtomKind::Power: {
        Int g = a.lhs.exponent(x);
        Monomial u = a.lhs.without(x);
        if (g < 0) {
          g = checked::neg(g);
          u = u.inverse();
        }
        (lit.negated ? b.non_residues : b.residues).push_back({a.n, g, u});
        break;
      }
      default:
        throw ContextError("sign atoms on the bound variable must be case-split first");
    }
  }
  return b;
}

/// Rewrite the block so that x only occurs as x^1, where the new x stands for
/// x^p with p the lcm of all exponents. With `add_residue` (QPOS) the conjunct
/// R_p(x) records that the new variable ranges over p-th powers; without it
/// (RPOS) divisibility makes every element a p-th power.
inline ExistentialBlock unify_powers(const ExistentialBlock& b, bool add_residue) {
  Int p = 1;
  for (const auto& e : b.equalities) p = lcm(p, e.exp);
  for (const auto& e : b.disequalities) p = lcm(p, e.exp);
  for (const auto& r : b.residues) p = lcm(p, r.exp);
  for (const auto& r : b.non_residues) p = lcm(p, r.exp);

  ExistentialBlock out;
  out.var = b.var;
  out.rest = b.rest;
  out.unified_power = checked::mul(b.unified_power, p);
  for (const auto& e : b.equalities) out.equalities.push_back({1, e.rhs.pow(p / e.exp)});
  for (const auto& e : b.disequalities) out.disequalities.push_back({1, e.rhs.pow(p / e.exp)});
  for (const auto& r : b.residues) out.residues.push_back({checked::mul(r.n, p / r.exp), 1, r.u.pow(p / r.exp)});
  for (const auto& r : b.non_residues) out.non_residues.push_back({checked::mul(r.n, p / r.exp), 1, r.u.pow(p / r.exp)});
  if (add_residue && p >= 2) out.residues.push_back({p, 1, Monomial::one()});
  return out;
}

inline Formula block_formula(const ExistentialBlock& b) {
  std::vector<Formula> parts;
  const Monomial x = Monomial::variable(b.var);
  for (const auto& e : b.equalities) parts.emplace_back(Atom::eq(x.pow(e.exp), e.rhs));
  for (const auto& e : b.disequalities) parts.push_back(Formula::negation(Formula(Atom::eq(x.pow(e.exp), e.rhs))));
  for (const auto& r : b.residues) parts.emplace_back(Atom::power(r.n, r.u * x.pow(r.exp)));
  for (const auto& r : b.non_residues) parts.push_back(Formula::negation(Formula(Atom::power(r.n, r.u * x.pow(r.exp)))));
  for (const auto& l : b.rest) parts.push_back(l.to_formula());
  return Formula::exists(b.var, Formula::conjunction(std::move(parts)));
}

namespace detail {

inline void require_unified(const ExistentialBlock& b) {
  auto one = [](const auto& v) { return std::all_of(v.begin(), v.end(), [](const auto& e) { return e.exp == 1; }); };
  if (!one(b.equalities) || !one(b.disequalities) || !one(b.residues) || !one(b.non_residues)) {
    throw ArgumentError("block must be power-unified first");
  }
}

inline std::vector<Formula> rest_formulas(const ExistentialBlock& b) {
  std::vector<Formula> out;
  for (const auto& l : b.rest) out.push_back(l.to_formula());
  return out;
}

/// Conjunction of the block's literals with x replaced by s0.
inline std::vector<Formula> substituted(const ExistentialBlock& b, const Monomial& s0, bool with_residues) {
  std::vector<Formula> out = rest_formulas(b);
  for (std::size_t h = 1; h < b.equalities.size(); ++h) out.emplace_back(Atom::eq(s0, b.equalities[h].rhs));
  for (const auto& t : b.disequalities) out.push_back(Formula::negation(Formula(Atom::eq(s0, t.rhs))));
  if (with_residues) {
    for (const auto& r : b.residues) out.emplace_back(Atom::power(r.n, r.u * s0));
    for (const auto& r : b.non_residues) out.push_back(Formula::negation(Formula(Atom::power(r.n, r.u * s0))));
  }
  return out;
}

}  // namespace detail

/// The power-residue criterion for a unified QPOS block.
inline Formula eliminate_one_qpos(const ExistentialBlock& b) {
  detail::require_unified(b);
  if (!b.equalities.empty()) {
    return simplify(Formula::conjunction(detail::substituted(b, b.equalities.front().rhs, true)));
  }
  std::vector<Formula> out = detail::rest_formulas(b);
  const auto& pos = b.residues;
  if (!pos.empty()) {
    for (std::size_t i = 0; i < pos.size(); ++i) {
      for (std::size_t j = i + 1; j < pos.size(); ++j) {
        const Int g = gcd(pos[i].n, pos[j].n);
        if (g >= 2) out.emplace_back(Atom::power(g, pos[i].u * pos[j].u.inverse()));
      }
    }
    Int n = 1;
    for (const auto& r : pos) n = lcm(n, r.n);
    std::vector<Int> cof;
    for (const auto& r : pos) cof.push_back(n / r.n);
    const BezoutCertificate c = bezout_multi(cof);
    Monomial x0 = Monomial::one();
    for (std::size_t i = 0; i < pos.size(); ++i) x0 = x0 * pos[i].u.pow(checked::neg(checked::mul(c.coefficients[i], cof[i])));
    x0 = x0.group_form();
    for (const auto& v : b.non_residues) {
      if (n % v.n == 0) out.push_back(Formula::negation(Formula(Atom::power(v.n, v.u * x0))));
    }
  }
  return simplify(Formula::conjunction(std::move(out)));
}

/// Unified RPOS block: substitution, or true when no equality constrains x.
inline Formula eliminate_one_rpos(const ExistentialBlock& b) {
  detail::require_unified(b);
  if (!b.equalities.empty()) {
    return simplify(Formula::conjunction(detail::substituted(b, b.equalities.front().rhs, false)));
  }
  return simplify(Formula::conjunction(detail::rest_formulas(b)));
}

// ---------------------------------------------------------------------------
// Roots of unity

/// x^m != s  <->  x^(m*n) != s^n  or  OR_{0<i<n} x^m = s * w_n^i.
/// Only valid for s != 0: every variable of s must be listed in `nonzero`.
inline Formula rou_split_disequality(const std::string& x, Int m, const Monomial& s, Int n,
                                     const std::set<std::string>& nonzero) {
  if (n < 1) throw ArgumentError("root-of-unity order must be positive");
  if (s.is_zero()) throw ContextError("root-of-unity split of a disequality with right-hand side 0");
  for (const auto& v : s.support()) {
    if (!nonzero.contains(v)) throw ContextError("root-of-unity split needs '" + v + "' known to be nonzero");
  }
  const Monomial xm = Monomial::variable(x, m);
  std::vector<Formula> out{Formula::negation(Formula(Atom::eq(xm.pow(n), s.pow(n))))};
  for (Int i = 1; i < n; ++i) {
    out.emplace_back(Atom::eq(xm, s * Monomial::constant(Scalar::omega(n).pow(i))));
  }
  return Formula::disjunction(std::move(out));
}

struct ReducedEqualities {
  Int exp = 1;  // g
  Monomial rhs;  // u, with x^g = u
  std::vector<Formula> side_conditions;
};

/// Euclid on the exponents of x^e_i = r_i (all r_i nonzero): the system is
/// equivalent to x^g = u plus x-free side conditions.
inline ReducedEqualities reduce_equal_exponents(std::vector<PowerEquation> eqs) {
  if (eqs.empty()) throw ArgumentError("reduce_equal_exponents needs at least one equality");
  ReducedEqualities out;
  while (eqs.size() > 1) {
    std::size_t lo = 0;
    for (std::size_t i = 1; i < eqs.size(); ++i) {
      if (eqs[i].exp < eqs[lo].exp) lo = i;
    }
    const PowerEquation base = eqs[lo];
    std::vector<PowerEquation> next{base};
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      if (i == lo) continue;
      const Int q = eqs[i].exp / base.exp;
      const Int rem = eqs[i].exp % base.exp;
      if (rem == 0) {
        out.side_conditions.emplace_back(Atom::eq(eqs[i].rhs, base.rhs.pow(q)));
      } else {
        next.push_back({rem, (eqs[i].rhs * base.rhs.pow(checked::neg(q))).group_form()});
      }
    }
    eqs = std::move(next);
  }
  out.exp = eqs.front().exp;
  out.rhs = eqs.front().rhs;
  return out;
}

/// Block form of the reduction: one equality left, side conditions as rest.
inline ExistentialBlock reduce_equal_exponents(const ExistentialBlock& b) {
  ReducedEqualities r = reduce_equal_exponents(b.equalities);
  ExistentialBlock out = b;
  out.equalities = {{r.exp, r.rhs}};
  for (const auto& f : r.side_conditions) out.rest.push_back({f.atom(), false});
  return out;
}

// ---------------------------------------------------------------------------
// Driver

class Eliminator {
 public:
  Eliminator(StructureId sid, std::size_t budget) : sid_(sid), budget_(budget) {}

  /// Quantifier-free equivalent of a formula already typed for the structure.
  Formula run(const Formula& f) { return simplify(elim(f)); }

  /// Quantifier-free equivalent of exists x. (conjunction of `clause`).
  Formula eliminate_clause(const std::string& x, const Clause& clause) {
    Clause with_x;
    std::vector<Formula> out;
    for (const auto& l : clause) {
      if (l.atom.mentions(x)) {
        with_x.push_back(l);
      } else {
        out.push_back(l.to_formula());
      }
    }
    if (!with_x.empty()) out.push_back(describe(sid_).has_zero ? split(x, with_x) : group_engine(x, with_x));
    return simplify(Formula::conjunction(std::move(out)));
  }

  std::size_t used() const { return used_; }

 private:
  enum class Sign { Zero, Pos, Neg };

  void charge(std::size_t n) {
    used_ += n;
    if (used_ > budget_) throw BudgetExceeded("case budget of " + std::to_string(budget_) + " branches exhausted");
  }

  BudgetCharge charger() {
    return [this](std::size_t n) { charge(n); };
  }

  Formula elim(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Atom:
        return f;
      case FormulaKind::Not:
        return Formula::negation(elim(f.body()));
      case FormulaKind::And:
      case FormulaKind::Or: {
        std::vector<Formula> args;
        for (const auto& a : f.args()) args.push_back(elim(a));
        return f.kind() == FormulaKind::And ? Formula::conjunction(std::move(args)) : Formula::disjunction(std::move(args));
      }
      case FormulaKind::Exists:
        return elim_exists(f.var(), elim(f.body()));
      case FormulaKind::Forall:
        return Formula::negation(elim_exists(f.var(), Formula::negation(elim(f.body()))));
    }
    return f;
  }

  Formula elim_exists(const std::string& x, const Formula& body) {
    const Formula qf = simplify(body);
    if (!free_vars(qf).contains(x)) return qf;
    std::vector<Formula> out;
    for (const auto& clause : to_dnf(qf, charger())) {
      charge(1);
      out.push_back(eliminate_clause(x, clause));
    }
    return simplify(Formula::disjunction(std::move(out)));
  }

  Formula group_engine(const std::string& x, const Clause& clause) {
    ExistentialBlock b = make_block(x, clause);
    if (describe(sid_).rational_family()) return eliminate_one_qpos(unify_powers(b, true));
    if (sid_ == StructureId::C) return complex_block(b);
    return eliminate_one_rpos(unify_powers(b, false));
  }

  Formula complex_block(const ExistentialBlock& b) {
    std::vector<Formula> out = detail::rest_formulas(b);
    if (!b.equalities.empty()) out.push_back(complex_split(b.var, b.equalities, b.disequalities, 0));
    return simplify(Formula::conjunction(std::move(out)));
  }

  Formula complex_split(const std::string& x, const std::vector<PowerEquation>& eqs,
                        const std::vector<PowerEquation>& diseqs, std::size_t next) {
    charge(1);
    const ReducedEqualities r = reduce_equal_exponents(eqs);
    if (next == diseqs.size()) return simplify(Formula::conjunction(r.side_conditions));
    const PowerEquation& d = diseqs[next];
    std::vector<Formula> out;
    out.push_back(Formula::conjunction(
        {Formula::negation(Formula(Atom::eq(r.rhs.pow(d.exp), d.rhs.pow(r.exp)))), complex_split(x, eqs, diseqs, next + 1)}));
    for (Int i = 1; i < r.exp; ++i) {
      auto more = eqs;
      more.push_back({d.exp, d.rhs * Monomial::constant(Scalar::omega(r.exp).pow(i))});
      out.push_back(complex_split(x, more, diseqs, next + 1));
    }
    return simplify(Formula::disjunction(std::move(out)));
  }

  struct Classified {
    bool zero = false;
    RootOfUnity phase;  // sign over the real structures
    Monomial abs;       // |m| over the real structures; m itself over C
  };

  Classified classify(const Monomial& m, const std::map<std::string, Sign>& pi) const {
    Classified c;
    if (m.is_zero()) {
      c.zero = true;
      return c;
    }
    for (const auto& v : m.support()) {
      if (pi.at(v) == Sign::Zero) {
        c.zero = true;
        return c;
      }
    }
    c.abs = m.group_form();
    if (sid_ == StructureId::C) return c;
    c.phase = m.coeff.phase();
    for (const auto& [v, k] : m.exps) {
      if (pi.at(v) == Sign::Neg) c.phase = c.phase * RootOfUnity::minus_one().pow(k);
    }
    c.abs.coeff = Scalar(RootOfUnity(), m.coeff.magnitude());
    return c;
  }

  /// The literal under a sign assignment: a truth value or a literal over
  /// absolute values.
  std::variant<bool, Literal> classify(const Literal& l, const std::map<std::string, Sign>& pi) const {
    auto lit = [&](Atom a) -> std::variant<bool, Literal> { return Literal{std::move(a), l.negated}; };
    auto val = [&](bool v) -> std::variant<bool, Literal> { return v != l.negated; };
    const Atom& a = l.atom;
    switch (a.kind) {
      case AtomKind::True:
        return val(true);
      case AtomKind::False:
        return val(false);
      case AtomKind::Eq: {
        const Classified x = classify(a.lhs, pi), y = classify(a.rhs, pi);
        if (x.zero || y.zero) return val(x.zero && y.zero);
        if (x.phase != y.phase) return val(false);
        return lit(Atom::eq(x.abs, y.abs));
      }
      case AtomKind::Power: {
        const Classified x = classify(a.lhs, pi);
        if (x.zero) return val(true);
        if (!x.phase.is_one() && a.n % 2 == 0) return val(false);
        return lit(Atom::power(a.n, x.abs));
      }
      case AtomKind::Positive: {
        const Classified x = classify(a.lhs, pi);
        return val(!x.zero && x.phase.is_one());
      }
    }
    return val(false);
  }

  Formula split(const std::string& x, const Clause& clause) {
    std::set<std::string> vs{x};
    for (const auto& l : clause) {
      l.atom.for_each_monomial([&](const Monomial& m) {
        auto s = m.support();
        vs.insert(s.begin(), s.end());
      });
    }
    const std::vector<std::string> vars(vs.begin(), vs.end());
    std::vector<Sign> signs{Sign::Zero, Sign::Pos};
    if (describe(sid_).has_sign) signs.push_back(Sign::Neg);

    std::vector<Formula> out;
    std::vector<std::size_t> idx(vars.size(), 0);
    while (true) {
      charge(1);
      std::map<std::string, Sign> pi;
      for (std::size_t i = 0; i < vars.size(); ++i) pi[vars[i]] = signs[idx[i]];
      if (auto f = branch(x, clause, pi)) out.push_back(*f);
      std::size_t i = vars.size();
      while (i > 0 && ++idx[i - 1] == signs.size()) idx[--i] = 0;
      if (i == 0) break;
    }
    return simplify(Formula::disjunction(std::move(out)));
  }

  std::optional<Formula> branch(const std::string& x, const Clause& clause, const std::map<std::string, Sign>& pi) {
    Clause reduced;
    for (const auto& l : clause) {
      auto c = classify(l, pi);
      if (const bool* v = std::get_if<bool>(&c)) {
        if (!*v) return std::nullopt;
        continue;
      }
      reduced.push_back(std::get<Literal>(c));
    }
    Formula body = pi.at(x) == Sign::Zero ? clause_formula(reduced) : group_engine(x, reduced);
    std::vector<Formula> parts;
    for (const auto& [v, s] : pi) {
      if (v == x) continue;
      const Monomial mv = Monomial::variable(v);
      const bool has_sign = describe(sid_).has_sign;
      if (s == Sign::Zero) {
        parts.emplace_back(Atom::eq(mv, Monomial::zero()));
      } else if (!has_sign) {
        parts.push_back(Formula::negation(Formula(Atom::eq(mv, Monomial::zero()))));
      } else {
        const Monomial signed_v = s == Sign::Pos ? mv : Monomial::constant(Scalar::minus_one()) * mv;
        parts.emplace_back(Atom::positive(signed_v));
        if (s == Sign::Neg) body = substitute(body, v, signed_v);
      }
    }
    parts.push_back(body);
    return simplify(Formula::conjunction(std::move(parts)));
  }

  StructureId sid_;
  std::size_t budget_;
  std::size_t used_ = 0;
};

/// Quantifier-free formula equivalent to f over the structure, with free
/// variables among those of f.
inline Formula eliminate(const Formula& f, StructureId sid, std::size_t budget = kDefaultBudget) {
  Eliminator e(sid, budget);
  return e.run(check_language(f, sid));
}

/// Case split for one block of a structure with zero: f must be
/// exists x. (conjunction of literals).
inline Formula sign_split(const Formula& f, StructureId sid, std::size_t budget = kDefaultBudget) {
  if (f.kind() != FormulaKind::Exists || !is_quantifier_free(f.body())) {
    throw ShapeError("sign_split expects exists x. (conjunction of literals)");
  }
  const Formula typed = check_language(f, sid);
  const auto clauses = to_dnf(typed.body());
  if (clauses.size() > 1) throw ShapeError("sign_split expects a single conjunction");
  Eliminator e(sid, budget);
  return clauses.empty() ? Formula::truth(false) : e.eliminate_clause(typed.var(), clauses.front());
}

/// Truth value of a sentence.
inline bool decide(const Formula& sentence, StructureId sid, std::size_t budget = kDefaultBudget) {
  if (!is_closed(sentence)) throw ArgumentError("decide needs a sentence; free variables remain");
  return eval_ground(eliminate(sentence, sid, budget), {}, sid);
}

// ---------------------------------------------------------------------------
// Witnesses over QPOS

/// For a true sentence exists x1 ... exists xk. phi over QPOS (phi
/// quantifier-free), values for x1..xk built from the elimination: each x_i is
/// read off a satisfiable clause by substitution or by the power-residue
/// solver, with the clause's disequalities avoided. Returns nullopt for other
/// shapes or false sentences.
inline std::optional<Assignment> qpos_witness(const Formula& sentence, std::size_t budget = kDefaultBudget) {
  Formula cur = simplify(check_language(sentence, StructureId::QPOS));
  if (!is_closed(cur)) throw ArgumentError("qpos_witness needs a sentence");
  Assignment out;
  // variables whose quantifier becomes vacuous along the way get the value 1
  for (Formula g = cur; g.kind() == FormulaKind::Exists; g = g.body()) out[g.var()] = Element::one();
  while (cur.kind() == FormulaKind::Exists) {
    const std::string x = cur.var();
    const Formula body = cur.body();
    const Formula inner = eliminate(body, StructureId::QPOS, budget);
    std::optional<FactoredRational> value;
    for (const auto& clause : to_dnf(inner)) {
      const ExistentialBlock b = unify_powers(make_block(x, clause), true);
      const Formula crit = eliminate_one_qpos(b);
      if (!eval_ground(crit, {})) continue;
      FactoredRational y;
      if (!b.equalities.empty()) {
        y = b.equalities.front().rhs.coeff.to_rational();
      } else {
        RSystem sys;
        for (const auto& r : b.residues) sys.positives.push_back({r.n, r.u.coeff.to_rational()});
        for (const auto& r : b.non_residues) sys.negatives.push_back({r.n, r.u.coeff.to_rational()});
        std::vector<FactoredRational> avoid;
        for (const auto& d : b.disequalities) avoid.push_back(d.rhs.coeff.to_rational());
        const RResult res = rm_solve(sys, avoid);
        if (!std::holds_alternative<RSolution>(res)) continue;
        y = std::get<RSolution>(res).witness;
      }
      try {
        value = y.root(b.unified_power);
      } catch (const DomainError&) {
        continue;
      }
      break;
    }
    if (!value) return std::nullopt;
    out[x] = Element::from_rational(*value);
    cur = simplify(substitute(body, x, Monomial::constant(Scalar::from_rational(*value))));
  }
  if (!is_quantifier_free(cur) || !eval_ground(cur, {})) return std::nullopt;
  return out;
}

}  // namespace muldecide

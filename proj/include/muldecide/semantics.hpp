#pragma once

// Computable stand-in models and ground evaluation.
//
// Every structure is modelled by elements of the form
//   0   or   phase * prod g^e     (g a generator index, e rational)
// Over QPOS/QNN/Q the generators are primes and exponents are integers, so the
// stand-in is the structure itself. Over RPOS/RNN/R the exponents range over Q:
// the positive part is a nontrivial torsion-free divisible group, which has a
// complete theory, and rational constants embed through their prime exponents.
// Over C the phase ranges over Q/Z, giving the torsion part of C*.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "muldecide/arith.hpp"
#include "muldecide/formula.hpp"

namespace muldecide {

struct Element {
  bool zero = false;
  RootOfUnity phase;
  std::map<Int, Rational> exps;  // no zero entries

  static Element one() { return {}; }
  static Element zero_element() {
    Element e;
    e.zero = true;
    return e;
  }

  static Element from_scalar(const Scalar& s) {
    if (s.is_zero()) return zero_element();
    Element e;
    e.phase = s.phase();
    for (const auto& [p, k] : s.magnitude().factors()) e.exps[p] = Rational(k);
    return e;
  }

  static Element from_rational(const FactoredRational& r) { return from_scalar(Scalar::from_rational(r)); }

  bool is_one() const { return !zero && phase.is_one() && exps.empty(); }
  bool is_positive() const { return !zero && phase.is_one(); }
  bool is_real() const { return zero || phase.order() <= 2; }

  bool integral() const {
    return std::all_of(exps.begin(), exps.end(), [](const auto& pe) { return pe.second.is_integer(); });
  }

  /// The element as a rational, when it is real with integer exponents.
  std::optional<FactoredRational> to_rational() const {
    if (zero) return FactoredRational::zero();
    if (!is_real() || !integral()) return std::nullopt;
    std::map<Int, Int> f;
    for (const auto& [p, e] : exps) f[p] = e.num();
    return FactoredRational::from_factors(phase.is_one() ? 1 : -1, std::move(f), true);
  }

  friend Element operator*(const Element& a, const Element& b) {
    if (a.zero || b.zero) return zero_element();
    Element r = a;
    r.phase = a.phase * b.phase;
    for (const auto& [g, e] : b.exps) {
      Rational s = r.exps.contains(g) ? r.exps[g] + e : e;
      if (s.is_zero()) {
        r.exps.erase(g);
      } else {
        r.exps[g] = s;
      }
    }
    return r;
  }

  /// Inverse with 0^-1 = 0.
  Element inverse() const {
    if (zero) return *this;
    Element r = *this;
    r.phase = phase.inverse();
    for (auto& [g, e] : r.exps) e = -e;
    return r;
  }

  /// x^0 = 1 for every x; 0^k = 0 otherwise.
  Element pow(Int k) const {
    if (k == 0) return one();
    if (zero) return *this;
    Element r;
    r.phase = phase.pow(k);
    for (const auto& [g, e] : exps) r.exps[g] = e * Rational(k);
    return r;
  }

  std::string to_string() const {
    if (zero) return "0";
    if (auto q = to_rational()) {
      try {
        return q->to_fraction_string();
      } catch (const OverflowError&) {
      }
    }
    std::vector<std::string> parts;
    if (phase == RootOfUnity::minus_one()) {
      parts.push_back("-1");
    } else if (!phase.is_one()) {
      const Int k = phase.exponent().num();
      parts.push_back("w" + std::to_string(phase.order()) + (k == 1 ? "" : "^" + std::to_string(k)));
    }
    for (const auto& [g, e] : exps) {
      parts.push_back(std::to_string(g) + "^" + (e.is_integer() ? e.to_string() : "(" + e.to_string() + ")"));
    }
    if (parts.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
    return out;
  }

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

using Assignment = std::map<std::string, Element>;

inline std::string to_string(const Assignment& a) {
  std::string out;
  for (const auto& [v, e] : a) out += (out.empty() ? "" : " ") + v + "=" + e.to_string();
  return out;
}

namespace detail {

inline const Element& lookup(const Assignment& a, const std::string& v) {
  auto it = a.find(v);
  if (it == a.end()) throw ArgumentError("no value assigned to variable '" + v + "'");
  return it->second;
}

}  // namespace detail

inline Element eval_term(const Term& t, const Assignment& a) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return detail::lookup(a, t.name());
    case Term::Kind::Const:
      return Element::from_scalar(t.value());
    case Term::Kind::Mul:
      return eval_term(t.child(0), a) * eval_term(t.child(1), a);
    case Term::Kind::Inv:
      return eval_term(t.child(0), a).inverse();
    case Term::Kind::Pow:
      return eval_term(t.child(0), a).pow(t.exponent());
  }
  return Element::one();
}

inline Element eval_monomial(const Monomial& m, const Assignment& a) {
  Element r = Element::from_scalar(m.coeff);
  for (const auto& g : m.guards) {
    if (detail::lookup(a, g).zero) return Element::zero_element();
  }
  for (const auto& [v, k] : m.exps) r = r * detail::lookup(a, v).pow(k);
  return r;
}

inline bool eval_atom(const Atom& at, const Assignment& a) {
  switch (at.kind) {
    case AtomKind::True:
      return true;
    case AtomKind::False:
      return false;
    case AtomKind::Eq:
      return eval_monomial(at.lhs, a) == eval_monomial(at.rhs, a);
    case AtomKind::Power: {
      const auto q = eval_monomial(at.lhs, a).to_rational();
      if (!q) throw TypeError("R_n evaluated outside the rationals");
      return is_nth_power(*q, at.n, PowerDomain::Rationals);
    }
    case AtomKind::Positive:
      return eval_monomial(at.lhs, a).is_positive();
  }
  return false;
}

/// Truth of a quantifier-free formula under an assignment of its variables.
inline bool eval_ground(const Formula& f, const Assignment& a, StructureId = StructureId::QPOS) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return eval_atom(f.atom(), a);
    case FormulaKind::Not:
      return !eval_ground(f.body(), a);
    case FormulaKind::And:
      return std::all_of(f.args().begin(), f.args().end(), [&](const Formula& g) { return eval_ground(g, a); });
    case FormulaKind::Or:
      return std::any_of(f.args().begin(), f.args().end(), [&](const Formula& g) { return eval_ground(g, a); });
    default:
      throw ArgumentError("eval_ground expects a quantifier-free formula");
  }
}

// ---------------------------------------------------------------------------
// Bounded candidate sets

struct OracleBounds {
  Int bound = 2;                  // exponent bound; torsion denominators over C
  std::optional<Int> free_bound;  // exponent bound for RPOS/RNN/R/C, defaults to `bound`
};

namespace detail {

/// Coordinate values ordered 0, 1, -1, 2, -2, 1/2, -1/2, ...
inline std::vector<Rational> coordinate_values(Int bound, bool rational) {
  std::vector<Rational> out;
  if (!rational) {
    out.push_back(Rational(0));
    for (Int a = 1; a <= bound; ++a) {
      out.push_back(Rational(a));
      out.push_back(Rational(-a));
    }
    return out;
  }
  std::set<Rational> seen;
  struct Key {
    Int height, den, abs_num;
    bool negative;
    Rational value;
  };
  std::vector<Key> keys;
  for (Int b = 1; b <= bound; ++b) {
    for (Int a = -bound; a <= bound; ++a) {
      Rational q(a, b);
      if (!seen.insert(q).second) continue;
      keys.push_back({std::max(checked::abs(q.num()), q.den()), q.den(), checked::abs(q.num()), q.num() < 0, q});
    }
  }
  std::sort(keys.begin(), keys.end(), [](const Key& x, const Key& y) {
    return std::tie(x.height, x.den, x.abs_num, x.negative) < std::tie(y.height, y.den, y.abs_num, y.negative);
  });
  for (const auto& k : keys) out.push_back(k.value);
  return out;
}

/// All vectors of coordinate ranks, ordered by largest rank, then lexicographically.
inline std::vector<std::vector<std::size_t>> rank_vectors(std::size_t dims, std::size_t values) {
  std::vector<std::vector<std::size_t>> out{{}};
  for (std::size_t d = 0; d < dims; ++d) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& v : out) {
      for (std::size_t r = 0; r < values; ++r) {
        auto w = v;
        w.push_back(r);
        next.push_back(std::move(w));
      }
    }
    out = std::move(next);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    const auto mx = x.empty() ? 0 : *std::max_element(x.begin(), x.end());
    const auto my = y.empty() ? 0 : *std::max_element(y.begin(), y.end());
    return mx < my;
  });
  return out;
}

}  // namespace detail

/// Primes of the constants of f plus the smallest prime not among them.
inline std::vector<Int> generators(const Formula& f) {
  std::set<Int> ps = constant_primes(f);
  const Int extra = fresh_prime(ps);
  ps.insert(extra);
  return {ps.begin(), ps.end()};
}

/// The bounded candidate set for f over s in canonical order: 1 first, then 0
/// (if present), then increasing shells.
inline std::vector<Element> candidates(const std::vector<Int>& gens, StructureId sid, const OracleBounds& b) {
  const StructureDescriptor& s = describe(sid);
  const bool rational = !s.rational_family();
  const Int fb = b.free_bound.value_or(b.bound);
  const auto values = detail::coordinate_values(rational ? fb : b.bound, rational);

  std::vector<RootOfUnity> phases{RootOfUnity()};
  if (s.has_sign) phases.push_back(RootOfUnity::minus_one());
  if (s.has_omega) {
    for (Int d = 2; d <= std::max<Int>(b.bound, 2); ++d) {
      for (Int k = 1; k < d; ++k) {
        if (gcd(k, d) == 1) phases.push_back(RootOfUnity(Rational(k, d)));
      }
    }
  }

  std::vector<Element> out{Element::one()};
  if (s.has_zero) out.push_back(Element::zero_element());
  for (const auto& ranks : detail::rank_vectors(gens.size(), values.size())) {
    Element base;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (!values[ranks[i]].is_zero()) base.exps[gens[i]] = values[ranks[i]];
    }
    for (const auto& ph : phases) {
      Element e = base;
      e.phase = ph;
      if (e.is_one()) continue;
      out.push_back(std::move(e));
    }
  }
  return out;
}

inline std::vector<Element> candidates(const Formula& f, StructureId sid, const OracleBounds& b) {
  return candidates(generators(f), sid, b);
}

// ---------------------------------------------------------------------------
// Bounded search

enum class Truth3 { False, True, Unknown };

inline std::string to_string(Truth3 t) {
  switch (t) {
    case Truth3::False:
      return "false";
    case Truth3::True:
      return "true";
    case Truth3::Unknown:
      return "unknown";
  }
  return {};
}

namespace detail {

/// Whether bounded evaluation of f can ever produce `t` (True or False): an
/// existential is never conclusively false, a universal never conclusively true.
inline bool can_conclude(const Formula& f, Truth3 t) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return true;
    case FormulaKind::Not:
      return can_conclude(f.body(), t == Truth3::True ? Truth3::False : Truth3::True);
    case FormulaKind::And:
    case FormulaKind::Or: {
      const Truth3 absorbing = f.kind() == FormulaKind::And ? Truth3::False : Truth3::True;
      auto can = [&](const Formula& g) { return can_conclude(g, t); };
      return t == absorbing ? std::any_of(f.args().begin(), f.args().end(), can)
                            : std::all_of(f.args().begin(), f.args().end(), can);
    }
    case FormulaKind::Exists:
      return t == Truth3::True && can_conclude(f.body(), Truth3::True);
    case FormulaKind::Forall:
      return t == Truth3::False && can_conclude(f.body(), Truth3::False);
  }
  return false;
}

inline Truth3 bounded(const Formula& f, const std::vector<Element>& cands, Assignment& a) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return eval_atom(f.atom(), a) ? Truth3::True : Truth3::False;
    case FormulaKind::Not: {
      const Truth3 t = bounded(f.body(), cands, a);
      return t == Truth3::Unknown ? t : (t == Truth3::True ? Truth3::False : Truth3::True);
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      const Truth3 absorbing = f.kind() == FormulaKind::And ? Truth3::False : Truth3::True;
      bool unknown = false;
      for (const auto& g : f.args()) {
        const Truth3 t = bounded(g, cands, a);
        if (t == absorbing) return t;
        unknown = unknown || t == Truth3::Unknown;
      }
      if (unknown) return Truth3::Unknown;
      return absorbing == Truth3::False ? Truth3::True : Truth3::False;
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      const Truth3 decisive = f.kind() == FormulaKind::Exists ? Truth3::True : Truth3::False;
      if (!can_conclude(f.body(), decisive)) return Truth3::Unknown;
      std::optional<Element> saved;
      if (auto it = a.find(f.var()); it != a.end()) saved = it->second;
      Truth3 result = Truth3::Unknown;
      for (const auto& c : cands) {
        a[f.var()] = c;
        if (bounded(f.body(), cands, a) == decisive) {
          result = decisive;
          break;
        }
      }
      if (saved) {
        a[f.var()] = *saved;
      } else {
        a.erase(f.var());
      }
      return result;
    }
  }
  return Truth3::Unknown;
}

}  // namespace detail

/// Three-valued bounded truth: an existential is true once a witness is found
/// in the candidate set and unknown otherwise; dually for universals.
inline Truth3 bounded_truth(const Formula& f, StructureId sid, const OracleBounds& b, Assignment a = {}) {
  const Formula typed = check_language(f, sid);
  const auto cands = candidates(typed, sid, b);
  return detail::bounded(typed, cands, a);
}

struct OracleResult {
  bool sat = false;
  Assignment witness;  // the searched variables only
  std::size_t tried = 0;
};

/// Search the bounded candidate set for values of a leading existential block
/// making the quantifier-free matrix true. The first witness in canonical
/// order (outermost variable varying slowest) is returned.
inline OracleResult oracle_search(const Formula& f, StructureId sid, const OracleBounds& b, const Assignment& fixed = {}) {
  const Formula typed = check_language(f, sid);
  std::vector<std::string> vars;
  Formula body = typed;
  while (body.kind() == FormulaKind::Exists) {
    vars.push_back(body.var());
    body = body.body();
  }
  if (!is_quantifier_free(body)) {
    throw ShapeError("bounded search needs an existential prefix over a quantifier-free matrix");
  }
  const auto cands = candidates(typed, sid, b);
  OracleResult res;
  Assignment a = fixed;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = cands[idx[i]];
    ++res.tried;
    if (eval_ground(body, a, sid)) {
      res.sat = true;
      for (const auto& v : vars) res.witness[v] = a[v];
      return res;
    }
    std::size_t i = vars.size();
    while (i > 0 && ++idx[i - 1] == cands.size()) idx[--i] = 0;
    if (i == 0) return res;
  }
}

// ---------------------------------------------------------------------------
// Axiom checks

struct AxiomResult {
  std::string name;
  bool expected = true;  // whether the structure should satisfy the axiom
  bool passed = true;
  std::string counterexample;
};

struct AxiomReport {
  StructureId structure = StructureId::QPOS;
  std::vector<AxiomResult> results;

  bool as_expected() const {
    return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.passed == r.expected; });
  }
  const AxiomResult* find(const std::string& name) const {
    for (const auto& r : results) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }
};

namespace detail {

/// An exact n-th root of x in the stand-in for s, if one exists.
inline std::optional<Element> stand_in_root(const Element& x, Int n, StructureId sid) {
  const StructureDescriptor& s = describe(sid);
  if (x.zero) return x;
  Element r;
  if (s.has_omega) {
    r.phase = RootOfUnity(x.phase.exponent() / Rational(n));
  } else if (!x.phase.is_one()) {
    if (n % 2 == 0) return std::nullopt;
    r.phase = x.phase;
  }
  for (const auto& [g, e] : x.exps) {
    const Rational q = e / Rational(n);
    if (s.rational_family() && !q.is_integer()) return std::nullopt;
    r.exps[g] = q;
  }
  return r;
}

inline Element random_element(std::mt19937_64& rng, StructureId sid, Int max_exp) {
  const StructureDescriptor& s = describe(sid);
  auto uniform = [&](Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng); };
  if (s.has_zero && uniform(0, 19) == 0) return Element::zero_element();
  Element e;
  for (Int p : {2, 3, 5, 7}) {
    if (uniform(0, 1) == 0) continue;
    Rational q = s.rational_family() ? Rational(uniform(-max_exp, max_exp)) : Rational(uniform(-max_exp, max_exp), uniform(1, max_exp));
    if (!q.is_zero()) e.exps[p] = q;
  }
  if (s.has_sign && uniform(0, 1) == 0) e.phase = RootOfUnity::minus_one();
  if (s.has_omega) {
    const Int d = uniform(1, std::max<Int>(max_exp, 1));
    e.phase = RootOfUnity(Rational(uniform(0, d - 1), d));
  }
  return e;
}

}  // namespace detail

/// Checks the group axioms, divisibility for 2 <= n <= max_n, torsion
/// freeness (over C: that x^n = 1 has exactly n solutions) and nontriviality
/// on fixed small elements plus `samples` random ones.
inline AxiomReport axiom_check(StructureId sid, Int max_n, std::size_t samples, std::uint64_t seed = 1) {
  if (max_n < 2) throw ArgumentError("max-n must be at least 2");
  const StructureDescriptor& s = describe(sid);
  std::mt19937_64 rng(seed);

  std::vector<Element> xs{Element::one(), Element::from_rational(factor(2)), Element::from_rational(factor(3))};
  if (s.has_sign) xs.push_back(Element::from_rational(factor(-1)));
  if (s.has_zero) xs.push_back(Element::zero_element());
  if (s.has_omega) xs.push_back(Element::from_scalar(Scalar::omega(4)));
  while (xs.size() < samples) xs.push_back(detail::random_element(rng, sid, max_n));

  AxiomReport rep;
  rep.structure = sid;
  auto check = [&](const std::string& name, bool expected, auto&& body) {
    AxiomResult r{name, expected, true, {}};
    body(r);
    rep.results.push_back(std::move(r));
  };
  auto fail = [](AxiomResult& r, std::string why) {
    if (r.passed) r.counterexample = std::move(why);
    r.passed = false;
  };
  const std::size_t m = xs.size();

  check("associativity", true, [&](AxiomResult& r) {
    for (std::size_t i = 0; i < m && r.passed; ++i) {
      const Element &x = xs[i], &y = xs[(i + 1) % m], &z = xs[(i + 2) % m];
      if ((x * y) * z != x * (y * z)) fail(r, "x=" + x.to_string() + " y=" + y.to_string() + " z=" + z.to_string());
    }
  });
  check("commutativity", true, [&](AxiomResult& r) {
    for (std::size_t i = 0; i < m && r.passed; ++i) {
      const Element &x = xs[i], &y = xs[(i + 1) % m];
      if (x * y != y * x) fail(r, "x=" + x.to_string() + " y=" + y.to_string());
    }
  });
  check("identity", true, [&](AxiomResult& r) {
    for (const auto& x : xs) {
      if (x * Element::one() != x) fail(r, "x=" + x.to_string());
    }
  });
  check("inverse", true, [&](AxiomResult& r) {
    for (const auto& x : xs) {
      const Element expect = x.zero ? Element::zero_element() : Element::one();
      if (x * x.inverse() != expect) fail(r, "x=" + x.to_string());
    }
  });
  const bool divisible = sid == StructureId::RPOS || sid == StructureId::RNN || sid == StructureId::C;
  check("divisibility", divisible, [&](AxiomResult& r) {
    for (const auto& x : xs) {
      for (Int n = 2; n <= max_n && r.passed; ++n) {
        auto root = detail::stand_in_root(x, n, sid);
        if (!root || root->pow(n) != x) fail(r, "x=" + x.to_string() + " n=" + std::to_string(n));
      }
    }
  });
  if (s.has_omega) {
    check("roots of unity", true, [&](AxiomResult& r) {
      std::vector<Element> torsion;
      for (Int d = 1; d <= max_n; ++d) {
        for (Int k = 0; k < d; ++k) {
          if (gcd(k, d) != 1) continue;
          Element e;
          e.phase = RootOfUnity(Rational(k, d));
          torsion.push_back(e);
        }
      }
      for (Int n = 1; n <= max_n && r.passed; ++n) {
        const auto count = std::count_if(torsion.begin(), torsion.end(), [&](const Element& e) { return e.pow(n).is_one(); });
        if (count != n) fail(r, "x^" + std::to_string(n) + "=1 has " + std::to_string(count) + " solutions");
        for (const auto& x : xs) {
          if (!x.zero && !x.exps.empty() && x.pow(n).is_one()) fail(r, "x=" + x.to_string() + " n=" + std::to_string(n));
        }
      }
    });
  } else {
    const bool torsion_free = !s.has_sign;
    check("torsion-freeness", torsion_free, [&](AxiomResult& r) {
      for (const auto& x : xs) {
        if (x.is_one()) continue;
        for (Int n = 2; n <= max_n && r.passed; ++n) {
          if (x.pow(n).is_one()) fail(r, "x=" + x.to_string() + " n=" + std::to_string(n));
        }
      }
    });
  }
  check("non-triviality", true, [&](AxiomResult& r) {
    if (std::none_of(xs.begin(), xs.end(), [](const Element& x) { return !x.is_one(); })) fail(r, "all samples are 1");
  });
  return rep;
}

}  // namespace muldecide

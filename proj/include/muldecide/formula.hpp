#pragma once

// First-order formulas over the multiplicative languages
//   {0, 1, -1, w_n, *, ^-1, =, R_n, P}
// together with term normalization to monomials and the negation / DNF
// normal form consumed by quantifier elimination.

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "muldecide/arith.hpp"
#include "muldecide/errors.hpp"

namespace muldecide {

// ---------------------------------------------------------------------------
// Structures

enum class StructureId { QPOS, QNN, Q, RPOS, RNN, R, C };

struct StructureDescriptor {
  StructureId id;
  std::string_view name;
  bool has_zero;
  bool has_sign;   // -1 and P
  bool has_rn;     // R_2, R_3, ...
  bool has_omega;  // w_3, w_4, ...

  bool rational_family() const { return id == StructureId::QPOS || id == StructureId::QNN || id == StructureId::Q; }
};

inline constexpr std::array<StructureDescriptor, 7> kStructures{{
    {StructureId::QPOS, "qpos", false, false, true, false},
    {StructureId::QNN, "qnn", true, false, true, false},
    {StructureId::Q, "q", true, true, true, false},
    {StructureId::RPOS, "rpos", false, false, false, false},
    {StructureId::RNN, "rnn", true, false, false, false},
    {StructureId::R, "r", true, true, false, false},
    {StructureId::C, "c", true, false, false, true},
}};

inline const StructureDescriptor& describe(StructureId id) { return kStructures[static_cast<std::size_t>(id)]; }

inline StructureId parse_structure(std::string_view name) {
  for (const auto& s : kStructures) {
    if (s.name == name) return s.id;
  }
  throw ArgumentError("unknown structure '" + std::string(name) + "' (expected qpos|qnn|q|rpos|rnn|r|c)");
}

// ---------------------------------------------------------------------------
// Terms

class Term {
 public:
  enum class Kind { Var, Const, Mul, Inv, Pow };

  static Term var(std::string name) { return Term(Node{Kind::Var, std::move(name), {}, {}, 0}); }
  static Term constant(Scalar value) { return Term(Node{Kind::Const, {}, std::move(value), {}, 0}); }
  static Term mul(Term a, Term b) { return Term(Node{Kind::Mul, {}, {}, {std::move(a), std::move(b)}, 0}); }
  static Term inv(Term a) { return Term(Node{Kind::Inv, {}, {}, {std::move(a)}, 0}); }
  static Term pow(Term a, Int k) { return Term(Node{Kind::Pow, {}, {}, {std::move(a)}, k}); }

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const Scalar& value() const { return node_->value; }
  const Term& child(std::size_t i) const { return node_->children.at(i); }
  Int exponent() const { return node_->exponent; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    return x.kind == y.kind && x.name == y.name && x.value == y.value && x.exponent == y.exponent &&
           x.children == y.children;
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    Scalar value;
    std::vector<Term> children;
    Int exponent;
  };
  explicit Term(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Monomials

/// coeff * prod x^k. `guards` records variables whose exponent cancelled to 0
/// (as in x * x^-1): they no longer contribute a factor, but under the
/// convention 0^-1 = 0 the term is still 0 whenever such a variable is 0.
struct Monomial {
  Scalar coeff;
  std::map<std::string, Int> exps;
  std::set<std::string> guards;

  static Monomial constant(Scalar c) {
    Monomial m;
    m.coeff = std::move(c);
    return m;
  }
  static Monomial one() { return {}; }
  static Monomial zero() { return constant(Scalar::zero()); }
  static Monomial variable(const std::string& name, Int k = 1) {
    Monomial m;
    if (k != 0) m.exps[name] = k;
    return m;
  }

  bool is_zero() const { return coeff.is_zero(); }
  bool is_ground() const { return exps.empty() && guards.empty(); }

  Int exponent(const std::string& v) const {
    auto it = exps.find(v);
    return it == exps.end() ? 0 : it->second;
  }

  /// Variables whose value 0 makes the monomial 0.
  std::set<std::string> support() const {
    std::set<std::string> out = guards;
    for (const auto& [v, k] : exps) out.insert(v);
    return out;
  }

  bool mentions(const std::string& v) const { return exps.contains(v) || guards.contains(v); }

  Monomial without(const std::string& v) const {
    Monomial m = *this;
    m.exps.erase(v);
    m.guards.erase(v);
    return m;
  }

  /// The same monomial read in a group (all variables nonzero).
  Monomial group_form() const {
    Monomial m = *this;
    m.guards.clear();
    return m;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    Monomial m = a;
    m.coeff = a.coeff * b.coeff;
    for (const auto& [v, k] : b.exps) {
      const Int s = checked::add(m.exponent(v), k);
      if (s == 0) {
        m.exps.erase(v);
        m.guards.insert(v);
      } else {
        m.exps[v] = s;
      }
    }
    m.guards.insert(b.guards.begin(), b.guards.end());
    for (const auto& [v, k] : m.exps) m.guards.erase(v);
    return m;
  }

  Monomial inverse() const {
    Monomial m = *this;
    m.coeff = coeff.inverse();
    for (auto& [v, k] : m.exps) k = checked::neg(k);
    return m;
  }

  /// t^k with t^0 = 1 for every t.
  Monomial pow(Int k) const {
    if (k == 0) return one();
    if (is_zero()) return zero();
    Monomial m = *this;
    m.coeff = coeff.pow(k);
    for (auto& [v, e] : m.exps) e = checked::mul(e, k);
    return m;
  }

  /// Replace variable v by the monomial r.
  Monomial substitute(const std::string& v, const Monomial& r) const {
    if (!mentions(v)) return *this;
    const Int k = exponent(v);
    Monomial rest = without(v);
    if (k != 0) return rest * r.pow(k);
    if (r.is_zero()) return zero();
    Monomial g = one();
    g.guards = r.support();
    return rest * g;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::vector<std::string> parts;
    if (!coeff.is_one() || (exps.empty() && guards.empty())) parts.push_back(coeff.to_string());
    for (const auto& [v, k] : exps) parts.push_back(k == 1 ? v : v + "^" + std::to_string(k));
    for (const auto& g : guards) parts.push_back(g + "*" + g + "^-1");
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
    return out;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

enum class TermContext { Group, MonoidWithZero };

/// Fold a term tree into a monomial. In Group context every variable is
/// assumed nonzero, so cancelled variables vanish and a literal 0 is an
/// error. In MonoidWithZero context cancelled variables are kept as guards.
inline Monomial normalize_term(const Term& t, TermContext ctx) {
  std::function<Monomial(const Term&)> go = [&](const Term& u) -> Monomial {
    switch (u.kind()) {
      case Term::Kind::Var:
        return Monomial::variable(u.name());
      case Term::Kind::Const:
        if (ctx == TermContext::Group && u.value().is_zero()) {
          throw ContextError("literal 0 in a group context");
        }
        return Monomial::constant(u.value());
      case Term::Kind::Mul:
        return go(u.child(0)) * go(u.child(1));
      case Term::Kind::Inv:
        return go(u.child(0)).inverse();
      case Term::Kind::Pow:
        return go(u.child(0)).pow(u.exponent());
    }
    return Monomial::one();
  };
  Monomial m = go(t);
  if (ctx == TermContext::Group) m.guards.clear();
  return m;
}

// ---------------------------------------------------------------------------
// Atoms and formulas

enum class AtomKind { Eq, Power, Positive, True, False };

struct Atom {
  AtomKind kind = AtomKind::True;
  Monomial lhs;  // Eq left side; argument of Power / Positive
  Monomial rhs;  // Eq right side
  Int n = 0;     // Power index

  static Atom eq(Monomial a, Monomial b) { return {AtomKind::Eq, std::move(a), std::move(b), 0}; }
  static Atom power(Int n, Monomial a) {
    if (n < 2) throw ArgumentError("R_n needs n >= 2");
    return {AtomKind::Power, std::move(a), {}, n};
  }
  static Atom positive(Monomial a) { return {AtomKind::Positive, std::move(a), {}, 0}; }
  static Atom truth(bool v) { return {v ? AtomKind::True : AtomKind::False, {}, {}, 0}; }

  bool is_constant() const { return kind == AtomKind::True || kind == AtomKind::False; }

  template <class F>
  void for_each_monomial(F&& f) const {
    if (kind == AtomKind::Eq) {
      f(lhs);
      f(rhs);
    } else if (kind == AtomKind::Power || kind == AtomKind::Positive) {
      f(lhs);
    }
  }

  template <class F>
  Atom map_monomials(F&& f) const {
    Atom a = *this;
    if (kind == AtomKind::Eq) {
      a.lhs = f(lhs);
      a.rhs = f(rhs);
    } else if (kind == AtomKind::Power || kind == AtomKind::Positive) {
      a.lhs = f(lhs);
    }
    return a;
  }

  bool mentions(const std::string& v) const {
    bool hit = false;
    for_each_monomial([&](const Monomial& m) { hit = hit || m.mentions(v); });
    return hit;
  }

  std::string to_string() const {
    switch (kind) {
      case AtomKind::Eq:
        return lhs.to_string() + " = " + rhs.to_string();
      case AtomKind::Power:
        return "R" + std::to_string(n) + "(" + lhs.to_string() + ")";
      case AtomKind::Positive:
        return "P(" + lhs.to_string() + ")";
      case AtomKind::True:
        return "true";
      case AtomKind::False:
        return "false";
    }
    return {};
  }

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

enum class FormulaKind { Atom, Not, And, Or, Exists, Forall };

class Formula {
 public:
  Formula() : Formula(Atom::truth(true)) {}
  Formula(Atom a) : node_(std::make_shared<const Node>(Node{FormulaKind::Atom, std::move(a), {}, {}})) {}  // NOLINT

  static Formula truth(bool v) { return Formula(Atom::truth(v)); }
  static Formula negation(Formula f) { return Formula(Node{FormulaKind::Not, {}, {std::move(f)}, {}}); }
  /// n-ary conjunction; empty gives true and a single argument is returned as is.
  static Formula conjunction(std::vector<Formula> args) {
    if (args.empty()) return truth(true);
    if (args.size() == 1) return args.front();
    return Formula(Node{FormulaKind::And, {}, std::move(args), {}});
  }
  static Formula disjunction(std::vector<Formula> args) {
    if (args.empty()) return truth(false);
    if (args.size() == 1) return args.front();
    return Formula(Node{FormulaKind::Or, {}, std::move(args), {}});
  }
  static Formula exists(std::string var, Formula body) {
    return Formula(Node{FormulaKind::Exists, {}, {std::move(body)}, std::move(var)});
  }
  static Formula forall(std::string var, Formula body) {
    return Formula(Node{FormulaKind::Forall, {}, {std::move(body)}, std::move(var)});
  }

  FormulaKind kind() const { return node_->kind; }
  const Atom& atom() const { return node_->atom; }
  const std::vector<Formula>& args() const { return node_->args; }
  const Formula& body() const { return node_->args.front(); }
  const std::string& var() const { return node_->var; }

  bool is_atom(AtomKind k) const { return kind() == FormulaKind::Atom && atom().kind == k; }
  bool is_quantifier() const { return kind() == FormulaKind::Exists || kind() == FormulaKind::Forall; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    return a.node_->kind == b.node_->kind && a.node_->atom == b.node_->atom && a.node_->var == b.node_->var &&
           a.node_->args == b.node_->args;
  }

 private:
  struct Node {
    FormulaKind kind;
    Atom atom;
    std::vector<Formula> args;
    std::string var;
  };
  explicit Formula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
};

inline Formula operator!(const Formula& f) { return Formula::negation(f); }
inline Formula operator&&(const Formula& a, const Formula& b) { return Formula::conjunction({a, b}); }
inline Formula operator||(const Formula& a, const Formula& b) { return Formula::disjunction({a, b}); }

// ---------------------------------------------------------------------------
// Printing

namespace detail {

enum class PrintCtx { Top, OrArg, AndArg };

inline std::string print(const Formula& f, PrintCtx ctx) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return f.atom().to_string();
    case FormulaKind::Not: {
      const Formula& g = f.body();
      if (g.is_atom(AtomKind::Eq)) return g.atom().lhs.to_string() + " != " + g.atom().rhs.to_string();
      if (g.kind() == FormulaKind::Atom) return "!" + g.atom().to_string();
      return "!(" + print(g, PrintCtx::Top) + ")";
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      const bool is_and = f.kind() == FormulaKind::And;
      std::string out;
      for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i) out += is_and ? " & " : " | ";
        out += print(f.args()[i], is_and ? PrintCtx::AndArg : PrintCtx::OrArg);
      }
      const bool wrap = ctx == PrintCtx::AndArg || (!is_and && ctx == PrintCtx::OrArg);
      return wrap ? "(" + out + ")" : out;
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      std::string out = std::string(f.kind() == FormulaKind::Exists ? "E " : "A ") + f.var() + ". " +
                        print(f.body(), PrintCtx::Top);
      return ctx == PrintCtx::Top ? out : "(" + out + ")";
    }
  }
  return {};
}

}  // namespace detail

inline std::string to_string(const Formula& f) { return detail::print(f, detail::PrintCtx::Top); }

// ---------------------------------------------------------------------------
// Variables and substitution

inline void collect_free_vars(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      f.atom().for_each_monomial([&](const Monomial& m) {
        for (const auto& v : m.support()) {
          if (!bound.contains(v)) out.insert(v);
        }
      });
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      const bool fresh = bound.insert(f.var()).second;
      collect_free_vars(f.body(), bound, out);
      if (fresh) bound.erase(f.var());
      return;
    }
    default:
      for (const auto& a : f.args()) collect_free_vars(a, bound, out);
  }
}

inline std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free_vars(f, bound, out);
  return out;
}

/// Every variable name occurring in f, free or bound.
inline std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (g.kind() == FormulaKind::Atom) {
      g.atom().for_each_monomial([&](const Monomial& m) {
        auto s = m.support();
        out.insert(s.begin(), s.end());
      });
      return;
    }
    if (g.is_quantifier()) out.insert(g.var());
    for (const auto& a : g.args()) go(a);
  };
  go(f);
  return out;
}

inline std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  for (int i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!taken.contains(cand)) return cand;
  }
}

inline bool is_closed(const Formula& f) { return free_vars(f).empty(); }

/// Capture-avoiding substitution of a monomial for a free variable.
inline Formula substitute(const Formula& f, const std::string& v, const Monomial& r) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      if (!f.atom().mentions(v)) return f;
      return Formula(f.atom().map_monomials([&](const Monomial& m) { return m.substitute(v, r); }));
    case FormulaKind::Not:
      return Formula::negation(substitute(f.body(), v, r));
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> args;
      for (const auto& a : f.args()) args.push_back(substitute(a, v, r));
      return f.kind() == FormulaKind::And ? Formula::conjunction(std::move(args))
                                          : Formula::disjunction(std::move(args));
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      if (f.var() == v) return f;
      const auto body_free = free_vars(f.body());
      if (!body_free.contains(v)) return f;
      std::string bv = f.var();
      Formula body = f.body();
      if (r.mentions(bv)) {
        std::set<std::string> taken = all_vars(f.body());
        auto rs = r.support();
        taken.insert(rs.begin(), rs.end());
        taken.insert(v);
        const std::string nv = fresh_name(bv, taken);
        body = substitute(body, bv, Monomial::variable(nv));
        bv = nv;
      }
      body = substitute(body, v, r);
      return f.kind() == FormulaKind::Exists ? Formula::exists(bv, body) : Formula::forall(bv, body);
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Ground evaluation of atoms and propositional simplification

/// Truth value of an atom without variables; nullopt if it has variables.
inline std::optional<bool> ground_value(const Atom& a) {
  switch (a.kind) {
    case AtomKind::True:
      return true;
    case AtomKind::False:
      return false;
    case AtomKind::Eq:
      if (a.lhs == a.rhs) return true;
      if (!a.lhs.is_ground() || !a.rhs.is_ground()) return std::nullopt;
      return a.lhs.coeff == a.rhs.coeff;
    case AtomKind::Power:
      if (!a.lhs.is_ground()) return std::nullopt;
      if (!a.lhs.coeff.is_real()) throw TypeError("R_n applied to a non-real constant");
      return is_nth_power(a.lhs.coeff.to_rational(), a.n, PowerDomain::Rationals);
    case AtomKind::Positive:
      if (!a.lhs.is_ground()) return std::nullopt;
      return a.lhs.coeff.is_positive_real();
  }
  return std::nullopt;
}

/// Constant folding and propositional pruning: flattens nested and/or,
/// removes duplicate arguments, folds ground atoms, drops vacuous quantifiers.
inline Formula simplify(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      auto v = ground_value(f.atom());
      return v ? Formula::truth(*v) : f;
    }
    case FormulaKind::Not: {
      Formula g = simplify(f.body());
      if (g.is_atom(AtomKind::True)) return Formula::truth(false);
      if (g.is_atom(AtomKind::False)) return Formula::truth(true);
      if (g.kind() == FormulaKind::Not) return g.body();
      return Formula::negation(g);
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      const bool is_and = f.kind() == FormulaKind::And;
      const AtomKind unit = is_and ? AtomKind::True : AtomKind::False;
      const AtomKind absorbing = is_and ? AtomKind::False : AtomKind::True;
      std::vector<Formula> out;
      std::function<void(const Formula&)> add = [&](const Formula& g) {
        if (g.kind() == f.kind()) {
          for (const auto& a : g.args()) add(a);
          return;
        }
        if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
      };
      for (const auto& a : f.args()) {
        Formula g = simplify(a);
        if (g.is_atom(absorbing)) return g;
        if (g.is_atom(unit)) continue;
        add(g);
      }
      for (const auto& g : out) {
        if (g.kind() == FormulaKind::Not && std::find(out.begin(), out.end(), g.body()) != out.end()) {
          return Formula::truth(!is_and);
        }
      }
      return is_and ? Formula::conjunction(std::move(out)) : Formula::disjunction(std::move(out));
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      Formula body = simplify(f.body());
      if (!free_vars(body).contains(f.var())) return body;
      return f.kind() == FormulaKind::Exists ? Formula::exists(f.var(), body) : Formula::forall(f.var(), body);
    }
  }
  return f;
}

inline bool is_quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  return std::all_of(f.args().begin(), f.args().end(), [](const Formula& a) { return is_quantifier_free(a); });
}

// ---------------------------------------------------------------------------
// Negation normal form, DNF

/// A possibly negated atom.
struct Literal {
  Atom atom;
  bool negated = false;

  Formula to_formula() const { return negated ? Formula::negation(Formula(atom)) : Formula(atom); }
  Literal complement() const { return {atom, !negated}; }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

/// Called with the number of clauses about to be materialized; may throw
/// BudgetExceeded.
using BudgetCharge = std::function<void(std::size_t)>;

/// Disjunctive normal form of a formula in negation normal form, treating
/// every node that is not And/Or as an opaque leaf.
inline std::vector<std::vector<Formula>> dnf_leaves(const Formula& f, const BudgetCharge& charge = {}) {
  if (f.kind() == FormulaKind::Or) {
    std::vector<std::vector<Formula>> out;
    for (const auto& a : f.args()) {
      auto sub = dnf_leaves(a, charge);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  if (f.kind() == FormulaKind::And) {
    std::vector<std::vector<Formula>> acc{{}};
    for (const auto& a : f.args()) {
      auto sub = dnf_leaves(a, charge);
      if (charge) charge(acc.size() * sub.size());
      std::vector<std::vector<Formula>> next;
      next.reserve(acc.size() * sub.size());
      for (const auto& c1 : acc) {
        for (const auto& c2 : sub) {
          auto c = c1;
          c.insert(c.end(), c2.begin(), c2.end());
          next.push_back(std::move(c));
        }
      }
      acc = std::move(next);
    }
    return acc;
  }
  return {{f}};
}

/// Push negations down to atoms; quantifier-free input only.
inline Formula to_nnf(const Formula& f, bool negate = false) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      if (f.atom().is_constant()) return Formula::truth(f.is_atom(AtomKind::True) != negate);
      return negate ? Formula::negation(f) : f;
    case FormulaKind::Not:
      return to_nnf(f.body(), !negate);
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> args;
      for (const auto& a : f.args()) args.push_back(to_nnf(a, negate));
      const bool conj = (f.kind() == FormulaKind::And) != negate;
      return conj ? Formula::conjunction(std::move(args)) : Formula::disjunction(std::move(args));
    }
    default:
      throw ArgumentError("to_nnf expects a quantifier-free formula");
  }
}

/// DNF of a quantifier-free formula as clauses of literals. Clauses containing
/// false or a complementary pair are dropped; true literals are removed.
inline std::vector<Clause> to_dnf(const Formula& qf, const BudgetCharge& charge = {}) {
  std::vector<Clause> out;
  for (const auto& leaves : dnf_leaves(to_nnf(qf), charge)) {
    Clause c;
    bool dead = false;
    for (const auto& leaf : leaves) {
      Literal lit = leaf.kind() == FormulaKind::Not ? Literal{leaf.body().atom(), true} : Literal{leaf.atom(), false};
      if (auto v = ground_value(lit.atom)) {
        if (*v == lit.negated) dead = true;
        continue;
      }
      if (std::find(c.begin(), c.end(), lit.complement()) != c.end()) dead = true;
      if (std::find(c.begin(), c.end(), lit) == c.end()) c.push_back(std::move(lit));
    }
    if (!dead && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  }
  return out;
}

inline Formula clause_formula(const Clause& c) {
  std::vector<Formula> args;
  for (const auto& l : c) args.push_back(l.to_formula());
  return Formula::conjunction(std::move(args));
}

namespace detail {

struct NormalFormBuilder {
  std::set<std::string> used;
  BudgetCharge charge;

  Formula build_exists(const std::string& var, const Formula& body) {
    std::string v = var;
    Formula b = body;
    if (used.contains(v)) {
      std::set<std::string> taken = used;
      auto av = all_vars(body);
      taken.insert(av.begin(), av.end());
      v = fresh_name(var, taken);
      b = substitute(body, var, Monomial::variable(v));
    }
    used.insert(v);
    Formula nb = norm(b, false);
    std::vector<Formula> disjuncts;
    for (auto& leaves : dnf_leaves(nb, charge)) {
      disjuncts.push_back(Formula::exists(v, Formula::conjunction(std::move(leaves))));
    }
    return Formula::disjunction(std::move(disjuncts));
  }

  /// Negation of a disjunction of existentials, as a conjunction.
  static Formula negate_disjunction(const Formula& e) {
    if (e.kind() != FormulaKind::Or) return Formula::negation(e);
    std::vector<Formula> args;
    for (const auto& a : e.args()) args.push_back(Formula::negation(a));
    return Formula::conjunction(std::move(args));
  }

  Formula norm(const Formula& f, bool negate) {
    switch (f.kind()) {
      case FormulaKind::Atom:
        if (f.atom().is_constant()) return Formula::truth(f.is_atom(AtomKind::True) != negate);
        return negate ? Formula::negation(f) : f;
      case FormulaKind::Not:
        return norm(f.body(), !negate);
      case FormulaKind::And:
      case FormulaKind::Or: {
        std::vector<Formula> args;
        for (const auto& a : f.args()) args.push_back(norm(a, negate));
        const bool conj = (f.kind() == FormulaKind::And) != negate;
        return conj ? Formula::conjunction(std::move(args)) : Formula::disjunction(std::move(args));
      }
      case FormulaKind::Forall: {
        Formula e = build_exists(f.var(), Formula::negation(f.body()));
        return negate ? e : negate_disjunction(e);
      }
      case FormulaKind::Exists: {
        Formula e = build_exists(f.var(), f.body());
        return negate ? negate_disjunction(e) : e;
      }
    }
    return f;
  }
};

}  // namespace detail

/// Negation normal form with universal quantifiers rewritten as not-exists-not,
/// existentials distributed over the disjuncts of their (DNF) bodies, and
/// clashing bound variables renamed apart. Negation survives only on atoms and
/// on existentials.
inline Formula to_nnf_prenex_dnf(const Formula& f, const BudgetCharge& charge = {}) {
  detail::NormalFormBuilder b;
  b.used = free_vars(f);
  b.charge = charge;
  return b.norm(f, false);
}

// ---------------------------------------------------------------------------
// Typing against a structure

/// Checks that every symbol of f belongs to the language of s; throws
/// TypeError otherwise. Over the group structures (no 0) guards are dropped.
inline Formula check_language(const Formula& f, StructureId sid) {
  const StructureDescriptor& s = describe(sid);
  auto check_monomial = [&](const Monomial& m) {
    if (m.is_zero()) {
      if (!s.has_zero) throw TypeError("constant 0 is not in the language of " + std::string(s.name));
      return;
    }
    const RootOfUnity& ph = m.coeff.phase();
    if (ph.order() == 2 && !s.has_sign && !s.has_omega) {
      throw TypeError("negative constants are not in the language of " + std::string(s.name));
    }
    if (ph.order() > 2 && !s.has_omega) {
      throw TypeError("roots of unity are not in the language of " + std::string(s.name));
    }
  };
  switch (f.kind()) {
    case FormulaKind::Atom: {
      const Atom& a = f.atom();
      if (a.kind == AtomKind::Power && !s.has_rn) {
        throw TypeError("R_n is not in the language of " + std::string(s.name));
      }
      if (a.kind == AtomKind::Positive && !s.has_sign) {
        throw TypeError("P is not in the language of " + std::string(s.name));
      }
      a.for_each_monomial(check_monomial);
      if (!s.has_zero) return Formula(a.map_monomials([](const Monomial& m) { return m.group_form(); }));
      return f;
    }
    case FormulaKind::Not:
      return Formula::negation(check_language(f.body(), sid));
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> args;
      for (const auto& a : f.args()) args.push_back(check_language(a, sid));
      return f.kind() == FormulaKind::And ? Formula::conjunction(std::move(args))
                                          : Formula::disjunction(std::move(args));
    }
    case FormulaKind::Exists:
      return Formula::exists(f.var(), check_language(f.body(), sid));
    case FormulaKind::Forall:
      return Formula::forall(f.var(), check_language(f.body(), sid));
  }
  return f;
}

/// Primes occurring in the constants of f.
inline std::set<Int> constant_primes(const Formula& f) {
  std::set<Int> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (g.kind() == FormulaKind::Atom) {
      g.atom().for_each_monomial([&](const Monomial& m) {
        auto p = m.coeff.primes();
        out.insert(p.begin(), p.end());
      });
      return;
    }
    for (const auto& a : g.args()) go(a);
  };
  go(f);
  return out;
}

/// Orders of the roots of unity occurring in the constants of f.
inline std::set<Int> constant_phase_orders(const Formula& f) {
  std::set<Int> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (g.kind() == FormulaKind::Atom) {
      g.atom().for_each_monomial([&](const Monomial& m) {
        if (!m.is_zero() && m.coeff.phase().order() > 1) out.insert(m.coeff.phase().order());
      });
      return;
    }
    for (const auto& a : g.args()) go(a);
  };
  go(f);
  return out;
}

}  // namespace muldecide

#pragma once

// JSON form of formulas. Every node is an object tagged by "type":
//   exists/forall {var, body}, not {arg}, and/or {args}, eq {lhs, rhs},
//   rn {n, arg}, pos {arg}, true, false.
// Monomials are {coeff, vars, guards?}; a coefficient is {"zero": true} or
// {"phase": "a/b", "factors": {"p": e, ...}}.

#include <string>

#include <json.hpp>

#include "muldecide/formula.hpp"

namespace muldecide {

inline constexpr const char* kJsonSchema = "muldecide/1";

inline nlohmann::json scalar_to_json(const Scalar& s) {
  if (s.is_zero()) return {{"zero", true}};
  nlohmann::json factors = nlohmann::json::object();
  for (const auto& [p, e] : s.magnitude().factors()) factors[std::to_string(p)] = e;
  return {{"phase", s.phase().exponent().to_string()}, {"factors", factors}};
}

inline Scalar scalar_from_json(const nlohmann::json& j) {
  if (j.value("zero", false)) return Scalar::zero();
  Rational phase{0};
  const std::string ph = j.value("phase", std::string("0"));
  const auto slash = ph.find('/');
  try {
    phase = slash == std::string::npos ? Rational(std::stoll(ph))
                                       : Rational(std::stoll(ph.substr(0, slash)), std::stoll(ph.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw ArgumentError("bad phase '" + ph + "'");
  }
  std::map<Int, Int> factors;
  if (j.contains("factors")) {
    for (const auto& [p, e] : j.at("factors").items()) factors[std::stoll(p)] = e.get<Int>();
  }
  return Scalar(RootOfUnity(phase), FactoredRational::from_factors(1, std::move(factors)));
}

inline nlohmann::json monomial_to_json(const Monomial& m) {
  nlohmann::json vars = nlohmann::json::object();
  for (const auto& [v, k] : m.exps) vars[v] = k;
  nlohmann::json j = {{"coeff", scalar_to_json(m.coeff)}, {"vars", vars}};
  if (!m.guards.empty()) j["guards"] = m.guards;
  return j;
}

inline Monomial monomial_from_json(const nlohmann::json& j) {
  Monomial m;
  m.coeff = scalar_from_json(j.at("coeff"));
  if (m.coeff.is_zero()) return Monomial::zero();
  if (j.contains("vars")) {
    for (const auto& [v, k] : j.at("vars").items()) {
      if (k.get<Int>() != 0) m.exps[v] = k.get<Int>();
    }
  }
  if (j.contains("guards")) {
    for (const auto& g : j.at("guards")) {
      if (!m.exps.contains(g.get<std::string>())) m.guards.insert(g.get<std::string>());
    }
  }
  return m;
}

inline nlohmann::json formula_to_json(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      const Atom& a = f.atom();
      switch (a.kind) {
        case AtomKind::Eq:
          return {{"type", "eq"}, {"lhs", monomial_to_json(a.lhs)}, {"rhs", monomial_to_json(a.rhs)}};
        case AtomKind::Power:
          return {{"type", "rn"}, {"n", a.n}, {"arg", monomial_to_json(a.lhs)}};
        case AtomKind::Positive:
          return {{"type", "pos"}, {"arg", monomial_to_json(a.lhs)}};
        case AtomKind::True:
          return {{"type", "true"}};
        case AtomKind::False:
          return {{"type", "false"}};
      }
      break;
    }
    case FormulaKind::Not:
      return {{"type", "not"}, {"arg", formula_to_json(f.body())}};
    case FormulaKind::And:
    case FormulaKind::Or: {
      nlohmann::json args = nlohmann::json::array();
      for (const auto& a : f.args()) args.push_back(formula_to_json(a));
      return {{"type", f.kind() == FormulaKind::And ? "and" : "or"}, {"args", args}};
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return {{"type", f.kind() == FormulaKind::Exists ? "exists" : "forall"},
              {"var", f.var()},
              {"body", formula_to_json(f.body())}};
  }
  return {};
}

inline Formula formula_from_json(const nlohmann::json& j) {
  try {
    const std::string t = j.at("type").get<std::string>();
    if (t == "true") return Formula::truth(true);
    if (t == "false") return Formula::truth(false);
    if (t == "eq") return Formula(Atom::eq(monomial_from_json(j.at("lhs")), monomial_from_json(j.at("rhs"))));
    if (t == "rn") return Formula(Atom::power(j.at("n").get<Int>(), monomial_from_json(j.at("arg"))));
    if (t == "pos") return Formula(Atom::positive(monomial_from_json(j.at("arg"))));
    if (t == "not") return Formula::negation(formula_from_json(j.at("arg")));
    if (t == "and" || t == "or") {
      std::vector<Formula> args;
      for (const auto& a : j.at("args")) args.push_back(formula_from_json(a));
      if (args.size() < 2) throw ArgumentError("'" + t + "' node needs at least two arguments");
      return t == "and" ? Formula::conjunction(std::move(args)) : Formula::disjunction(std::move(args));
    }
    if (t == "exists") return Formula::exists(j.at("var").get<std::string>(), formula_from_json(j.at("body")));
    if (t == "forall") return Formula::forall(j.at("var").get<std::string>(), formula_from_json(j.at("body")));
    throw ArgumentError("unknown node type '" + t + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed formula JSON: ") + e.what());
  }
}

/// Top-level document {"schema": "muldecide/1", "formula": ...}.
inline nlohmann::json formula_document(const Formula& f) {
  return {{"schema", kJsonSchema}, {"formula", formula_to_json(f)}};
}

inline Formula formula_from_document(const nlohmann::json& doc) {
  if (doc.value("schema", std::string()) != kJsonSchema) throw ArgumentError("unsupported or missing schema tag");
  return formula_from_json(doc.at("formula"));
}

}  // namespace muldecide

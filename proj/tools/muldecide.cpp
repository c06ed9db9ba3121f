// Command-line front end.
//
// Exit codes: 0 true / solvable / success, 1 false / conflict / no witness,
// 2 parse, type or usage error, 3 case budget exhausted.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "muldecide/muldecide.hpp"

namespace {

using namespace muldecide;
using nlohmann::json;

struct Input {
  std::optional<std::string> text;
  std::string file;
};

std::string read_input(const Input& in) {
  if (in.text) return *in.text;
  std::ostringstream ss;
  if (!in.file.empty()) {
    std::ifstream f(in.file);
    if (!f) throw ArgumentError("cannot open '" + in.file + "'");
    ss << f.rdbuf();
  } else {
    ss << std::cin.rdbuf();
  }
  return ss.str();
}

/// Formula from text syntax, or from a JSON document when the input is one.
Formula load_formula(const Input& in) {
  const std::string src = read_input(in);
  const auto first = src.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && src[first] == '{') {
    json doc;
    try {
      doc = json::parse(src);
    } catch (const json::parse_error& e) {
      throw ArgumentError(std::string("invalid JSON input: ") + e.what());
    }
    return formula_from_document(doc);
  }
  return parse_formula(src);
}

/// "a" or "a/b".
FactoredRational parse_fraction(const std::string& s) {
  try {
    std::size_t pos = 0;
    const Int num = std::stoll(s, &pos);
    if (pos == s.size()) return factor(num, 1);
    if (s[pos] != '/') throw ArgumentError("");
    std::size_t pos2 = 0;
    const Int den = std::stoll(s.substr(pos + 1), &pos2);
    if (pos + 1 + pos2 != s.size()) throw ArgumentError("");
    return factor(num, den);
  } catch (const std::logic_error&) {
    throw ArgumentError("expected a rational a/b, got '" + s + "'");
  }
}

/// "N:V" with integer N.
std::pair<Int, std::string> split_pair(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ArgumentError("expected N:V, got '" + s + "'");
  try {
    std::size_t pos = 0;
    const std::string head = s.substr(0, colon);
    const Int n = std::stoll(head, &pos);
    if (pos != head.size()) throw ArgumentError("");
    return {n, s.substr(colon + 1)};
  } catch (const std::logic_error&) {
    throw ArgumentError("expected N:V, got '" + s + "'");
  }
}

std::string lower_name(StructureId sid) { return std::string(describe(sid).name); }

json header(StructureId sid) { return {{"schema", kJsonSchema}, {"structure", lower_name(sid)}}; }

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedures for theories of multiplication"};
  app.require_subcommand(1);

  Input input;
  std::string structure_name;
  bool as_json = false;
  std::size_t budget = kDefaultBudget;

  auto add_formula_input = [&](CLI::App* sub) {
    sub->add_option("formula", input.text, "Formula text (default: read --file or stdin)");
    sub->add_option("--file", input.file, "Read the formula from a file");
    sub->add_flag("--json", as_json, "JSON output");
  };
  auto add_structure = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--structure", structure_name, "qpos, qnn, q, rpos, rnn, r or c");
    if (required) opt->required();
  };

  auto* parse_cmd = app.add_subcommand("parse", "Parse a formula and print its JSON AST");
  add_formula_input(parse_cmd);

  auto* normalize_cmd = app.add_subcommand("normalize", "Prenex/DNF normal form (universals as not-exists-not)");
  add_formula_input(normalize_cmd);
  add_structure(normalize_cmd, true);

  auto* eliminate_cmd = app.add_subcommand("eliminate", "Quantifier-free equivalent");
  add_formula_input(eliminate_cmd);
  add_structure(eliminate_cmd, true);
  eliminate_cmd->add_option("--budget", budget, "Case-split budget");

  auto* decide_cmd = app.add_subcommand("decide", "Truth value of a sentence");
  add_formula_input(decide_cmd);
  add_structure(decide_cmd, true);
  decide_cmd->add_option("--budget", budget, "Case-split budget");

  std::vector<std::string> mods;
  auto* crt_cmd = app.add_subcommand("crt", "Solve x = u_i (mod n_i)");
  crt_cmd->add_option("--mod", mods, "Congruence N:U (repeatable)");
  crt_cmd->add_flag("--json", as_json, "JSON output");

  std::vector<std::string> pos, neg, avoid;
  auto* rsystem_cmd = app.add_subcommand("rsystem", "Solve R_n(u*x) / not R_m(v*x) over the positive rationals");
  rsystem_cmd->add_option("--pos", pos, "Constraint R_N(U*x), as N:U (repeatable)");
  rsystem_cmd->add_option("--neg", neg, "Constraint not R_M(V*x), as M:V (repeatable)");
  rsystem_cmd->add_option("--avoid", avoid, "Value the witness must differ from (repeatable)");
  rsystem_cmd->add_flag("--json", as_json, "JSON output");
  add_structure(rsystem_cmd, false);

  Int bound = 2;
  Int free_bound = 0;
  auto* oracle_cmd = app.add_subcommand("oracle", "Bounded witness search for an existential formula");
  add_formula_input(oracle_cmd);
  add_structure(oracle_cmd, true);
  oracle_cmd->add_option("--bound", bound, "Exponent bound (torsion denominators over C)");
  oracle_cmd->add_option("--free-bound", free_bound, "Exponent bound of the divisible part (default: --bound)");

  Int max_n = 10;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  auto* axioms_cmd = app.add_subcommand("axioms", "Check the stand-in model against the group axioms");
  add_structure(axioms_cmd, true);
  axioms_cmd->add_option("--max-n", max_n, "Largest n for divisibility and torsion checks");
  axioms_cmd->add_option("--samples", samples, "Number of sample elements");
  axioms_cmd->add_option("--seed", seed, "Sampling seed");
  axioms_cmd->add_flag("--json", as_json, "JSON output");

  std::size_t count = 200;
  auto* corpus_cmd = app.add_subcommand("corpus", "Agreement of decide with the bounded oracle on random sentences");
  add_structure(corpus_cmd, false);
  corpus_cmd->add_option("--seed", seed, "Generator seed");
  corpus_cmd->add_option("--budget", budget, "Case-split budget");
  corpus_cmd->add_option("--count", count, "Sentences per structure");
  corpus_cmd->add_flag("--json", as_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    StructureId sid = StructureId::QPOS;
    if (!structure_name.empty()) sid = parse_structure(structure_name);

    if (parse_cmd->parsed()) {
      print_json(formula_document(load_formula(input)));
      return 0;
    }
    if (normalize_cmd->parsed()) {
      const Formula f = to_nnf_prenex_dnf(check_language(load_formula(input), sid));
      if (as_json) {
        json j = header(sid);
        j["formula"] = formula_to_json(f);
        print_json(j);
      } else {
        std::cout << to_string(f) << "\n";
      }
      return 0;
    }
    if (eliminate_cmd->parsed()) {
      const Formula f = eliminate(load_formula(input), sid, budget);
      if (as_json) {
        json j = header(sid);
        j["formula"] = formula_to_json(f);
        print_json(j);
      } else {
        std::cout << to_string(f) << "\n";
      }
      return 0;
    }
    if (decide_cmd->parsed()) {
      const bool v = decide(load_formula(input), sid, budget);
      if (as_json) {
        json j = header(sid);
        j["result"] = v;
        print_json(j);
      } else {
        std::cout << (v ? "true" : "false") << "\n";
      }
      return v ? 0 : 1;
    }
    if (crt_cmd->parsed()) {
      CrtSystem s;
      for (const auto& m : mods) {
        auto [n, u] = split_pair(m);
        try {
          s.entries.push_back({n, std::stoll(u)});
        } catch (const std::logic_error&) {
          throw ArgumentError("expected integer residue in '" + m + "'");
        }
      }
      const CrtResult r = crt_solve(s);
      if (as_json) {
        json j = {{"schema", kJsonSchema}};
        if (const auto* sol = std::get_if<CrtSolution>(&r)) {
          j["result"] = "solution";
          j["x0"] = sol->x0;
          j["modulus"] = sol->modulus;
        } else {
          const auto& c = std::get<CrtConflict>(r);
          j["result"] = "conflict";
          j["i"] = c.i;
          j["j"] = c.j;
          j["gcd"] = c.gcd;
        }
        print_json(j);
      } else {
        std::cout << to_string(r) << "\n";
      }
      return std::holds_alternative<CrtSolution>(r) ? 0 : 1;
    }
    if (rsystem_cmd->parsed()) {
      if (sid != StructureId::QPOS) throw ArgumentError("rsystem works over qpos only");
      RSystem s;
      for (const auto& p : pos) {
        auto [n, u] = split_pair(p);
        s.positives.push_back({n, parse_fraction(u)});
      }
      for (const auto& p : neg) {
        auto [n, u] = split_pair(p);
        s.negatives.push_back({n, parse_fraction(u)});
      }
      std::vector<FactoredRational> av;
      for (const auto& a : avoid) av.push_back(parse_fraction(a));
      const RResult r = rm_solve(s, av);
      json j = {{"schema", kJsonSchema}};
      std::ostringstream out;
      if (const auto* sol = std::get_if<RSolution>(&r)) {
        j["result"] = "sat";
        j["n"] = sol->n;
        j["bezout"] = sol->bezout.coefficients;
        j["x0"] = sol->x0.to_fraction_string();
        j["witness"] = sol->witness.to_fraction_string();
        if (sol->fresh_prime) j["fresh_prime"] = *sol->fresh_prime;
        out << "sat\nn=" << sol->n << "\nbezout=" << json(sol->bezout.coefficients).dump() << "\nx0="
            << sol->x0.to_fraction_string() << "\nwitness=" << sol->witness.to_fraction_string();
        if (sol->fresh_prime) out << " (P=" << *sol->fresh_prime << ", j=" << sol->j << ")";
        out << "\n";
      } else {
        const auto& c = std::get<RConflict>(r);
        j["result"] = "unsat";
        if (c.kind == RConflict::Kind::Pairwise) {
          j["conflict"] = {{"kind", "pairwise"}, {"i", c.i}, {"j", c.j}, {"gcd", c.gcd}};
          out << "unsat\nconflict pairwise i=" << c.i << " j=" << c.j << " gcd=" << c.gcd << "\n";
        } else {
          j["conflict"] = {{"kind", "negative"}, {"k", c.k}, {"n", c.n}, {"x0", c.x0.to_fraction_string()}};
          out << "unsat\nconflict negative k=" << c.k << " n=" << c.n << " x0=" << c.x0.to_fraction_string() << "\n";
        }
      }
      if (as_json) {
        print_json(j);
      } else {
        std::cout << out.str();
      }
      return std::holds_alternative<RSolution>(r) ? 0 : 1;
    }
    if (oracle_cmd->parsed()) {
      OracleBounds b{bound, std::nullopt};
      if (free_bound > 0) b.free_bound = free_bound;
      const OracleResult r = oracle_search(load_formula(input), sid, b);
      if (as_json) {
        json j = header(sid);
        j["result"] = r.sat ? "sat" : "no_witness";
        j["bound"] = bound;
        if (r.sat) {
          for (const auto& [v, e] : r.witness) j["witness"][v] = e.to_string();
        }
        print_json(j);
      } else if (r.sat) {
        std::cout << "sat " << to_string(r.witness) << "\n";
      } else {
        std::cout << "no witness within bound " << bound << " (" << r.tried << " assignments)\n";
      }
      return r.sat ? 0 : 1;
    }
    if (axioms_cmd->parsed()) {
      const AxiomReport rep = axiom_check(sid, max_n, samples, seed);
      if (as_json) {
        json j = header(sid);
        for (const auto& r : rep.results) {
          j["axioms"].push_back(
              {{"name", r.name}, {"passed", r.passed}, {"expected", r.expected}, {"counterexample", r.counterexample}});
        }
        j["as_expected"] = rep.as_expected();
        print_json(j);
      } else {
        for (const auto& r : rep.results) {
          std::cout << r.name << ": " << (r.passed ? "pass" : "fail") << " (expected " << (r.expected ? "pass" : "fail")
                    << ")";
          if (!r.counterexample.empty()) std::cout << " counterexample " << r.counterexample;
          std::cout << "\n";
        }
      }
      return rep.as_expected() ? 0 : 1;
    }
    if (corpus_cmd->parsed()) {
      std::vector<StructureId> sids;
      if (structure_name.empty()) {
        for (const auto& s : kStructures) sids.push_back(s.id);
      } else {
        sids.push_back(sid);
      }
      CorpusOptions opt{seed, count, budget};
      bool ok = true, exhausted = false;
      json rows = json::array();
      if (!as_json) std::printf("%-10s %9s %11s %11s %16s\n", "structure", "formulas", "conclusive", "agreements", "budget_exceeded");
      for (auto s : sids) {
        const CorpusRow r = run_corpus(s, opt);
        ok = ok && r.ok();
        exhausted = exhausted || r.budget_exceeded > 0;
        if (as_json) {
          rows.push_back({{"structure", lower_name(s)},
                          {"formulas", r.formulas},
                          {"conclusive", r.conclusive},
                          {"agreements", r.agreements},
                          {"budget_exceeded", r.budget_exceeded}});
        } else {
          std::printf("%-10s %9zu %11zu %11zu %16zu\n", lower_name(s).c_str(), r.formulas, r.conclusive, r.agreements,
                      r.budget_exceeded);
          for (const auto& m : r.mismatches) {
            std::printf("  mismatch: %s (decide %s, oracle %s)\n", m.formula.c_str(), m.decided ? "true" : "false",
                        to_string(m.oracle).c_str());
          }
        }
      }
      if (as_json) print_json({{"schema", kJsonSchema}, {"rows", rows}});
      if (exhausted) return 3;
      return ok ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: parse error at " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

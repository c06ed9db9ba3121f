#pragma once

// Systems of power-residue constraints over the positive rationals:
//   R_{n_j}(u_j * x)   and   not R_{m_k}(v_k * x).
// With n = lcm(n_j) and Bezout coefficients c_j for {n / n_j}, every solution
// of the positive part is w^n * x0 where x0 = prod u_j^(-c_j * n / n_j); the
// system is solvable iff the positive part is pairwise compatible and no
// negative constraint with m_k | n already fails at x0.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "muldecide/arith.hpp"

namespace muldecide {

/// R_n(u * x) for the unknown x.
struct PowerConstraint {
  Int n = 2;
  FactoredRational u;
};

struct RSystem {
  std::vector<PowerConstraint> positives;
  std::vector<PowerConstraint> negatives;
};

struct RSolution {
  Int n = 1;
  BezoutCertificate bezout;  // over {n / n_j}; empty when there are no positives
  FactoredRational x0;
  FactoredRational witness;
  std::optional<Int> fresh_prime;
  Int j = 0;  // witness = fresh_prime^(n*j) * x0
};

/// Pairwise: not R_gcd(u_i / u_j). Negative: m_k | n and R_{m_k}(v_k * x0).
/// Indices are 1-based.
struct RConflict {
  enum class Kind { Pairwise, Negative };
  Kind kind = Kind::Pairwise;
  std::size_t i = 0;
  std::size_t j = 0;
  Int gcd = 0;
  std::size_t k = 0;
  Int n = 1;
  FactoredRational x0;
};

using RResult = std::variant<RSolution, RConflict>;

namespace detail {

inline void check_constraints(const std::vector<PowerConstraint>& cs) {
  for (const auto& c : cs) {
    if (c.n < 2) throw ArgumentError("power-residue modulus must be at least 2");
    if (c.u.is_zero() || c.u.sign() < 0) throw ArgumentError("constraint constant must be a positive rational");
  }
}

inline bool holds(const PowerConstraint& c, const FactoredRational& x) {
  return is_nth_power(c.u * x, c.n, PowerDomain::PositiveRationals);
}

}  // namespace detail

/// Whether x satisfies every constraint of s.
inline bool satisfies(const RSystem& s, const FactoredRational& x) {
  for (const auto& c : s.positives) {
    if (!detail::holds(c, x)) return false;
  }
  for (const auto& c : s.negatives) {
    if (detail::holds(c, x)) return false;
  }
  return true;
}

/// Positive systems only.
inline RResult rn_solve(const std::vector<PowerConstraint>& positives) {
  if (positives.empty()) throw ArgumentError("rn_solve needs at least one constraint");
  detail::check_constraints(positives);
  for (std::size_t i = 0; i < positives.size(); ++i) {
    for (std::size_t j = i + 1; j < positives.size(); ++j) {
      const Int g = gcd(positives[i].n, positives[j].n);
      if (g < 2) continue;
      if (!is_nth_power(positives[i].u * positives[j].u.inverse(), g, PowerDomain::PositiveRationals)) {
        RConflict c;
        c.kind = RConflict::Kind::Pairwise;
        c.i = i + 1;
        c.j = j + 1;
        c.gcd = g;
        return c;
      }
    }
  }
  RSolution sol;
  for (const auto& c : positives) sol.n = lcm(sol.n, c.n);
  std::vector<Int> cofactors;
  for (const auto& c : positives) cofactors.push_back(sol.n / c.n);
  sol.bezout = bezout_multi(cofactors);
  for (std::size_t i = 0; i < positives.size(); ++i) {
    sol.x0 = sol.x0 * positives[i].u.pow(checked::neg(checked::mul(sol.bezout.coefficients[i], cofactors[i])));
  }
  sol.witness = sol.x0;
  return sol;
}

/// Mixed systems. The witness is P^(n*j) * x0 for the smallest prime P absent
/// from every constant, x0 and `avoid`, and the least j >= 1 for which the
/// witness satisfies the system and differs from every element of `avoid`.
inline RResult rm_solve(const RSystem& s, const std::vector<FactoredRational>& avoid = {}) {
  detail::check_constraints(s.negatives);
  RSolution sol;
  if (!s.positives.empty()) {
    RResult base = rn_solve(s.positives);
    if (std::holds_alternative<RConflict>(base)) return base;
    sol = std::get<RSolution>(base);
  } else {
    sol.bezout.gcd = 1;
  }
  for (std::size_t k = 0; k < s.negatives.size(); ++k) {
    const auto& c = s.negatives[k];
    if (sol.n % c.n == 0 && detail::holds(c, sol.x0)) {
      RConflict conf;
      conf.kind = RConflict::Kind::Negative;
      conf.k = k + 1;
      conf.n = sol.n;
      conf.x0 = sol.x0;
      return conf;
    }
  }
  std::set<Int> used = sol.x0.primes();
  for (const auto& c : s.positives) {
    auto p = c.u.primes();
    used.insert(p.begin(), p.end());
  }
  for (const auto& c : s.negatives) {
    auto p = c.u.primes();
    used.insert(p.begin(), p.end());
  }
  for (const auto& a : avoid) {
    auto p = a.primes();
    used.insert(p.begin(), p.end());
  }
  const Int prime = fresh_prime(used);
  sol.fresh_prime = prime;
  for (Int j = 1;; ++j) {
    FactoredRational w = FactoredRational::from_factors(1, {{prime, checked::mul(sol.n, j)}}, true) * sol.x0;
    if (!satisfies(s, w)) continue;
    if (std::find(avoid.begin(), avoid.end(), w) != avoid.end()) continue;
    sol.witness = std::move(w);
    sol.j = j;
    return sol;
  }
}

/// Re-checks the defining condition of a conflict against the system.
inline bool conflict_holds(const RSystem& s, const RConflict& c) {
  if (c.kind == RConflict::Kind::Pairwise) {
    if (c.i < 1 || c.j <= c.i || c.j > s.positives.size()) return false;
    const auto& a = s.positives[c.i - 1];
    const auto& b = s.positives[c.j - 1];
    if (gcd(a.n, b.n) != c.gcd || c.gcd < 2) return false;
    return !is_nth_power(a.u * b.u.inverse(), c.gcd, PowerDomain::PositiveRationals);
  }
  if (c.k < 1 || c.k > s.negatives.size()) return false;
  const auto& v = s.negatives[c.k - 1];
  return c.n % v.n == 0 && detail::holds(v, c.x0);
}

}  // namespace muldecide

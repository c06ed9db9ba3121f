#pragma once

// General Chinese remainder theorem: x = u_i (mod n_i) is solvable iff
// u_i = u_j (mod gcd(n_i, n_j)) for all pairs, and then the solution is unique
// modulo lcm(n_1, ..., n_l).

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "muldecide/arith.hpp"

namespace muldecide {

struct Congruence {
  Int modulus;
  Int residue;
};

struct CrtSystem {
  std::vector<Congruence> entries;
};

struct CrtSolution {
  Int x0 = 0;       // in [0, modulus)
  Int modulus = 1;  // lcm of all moduli
};

/// First incompatible pair; indices are 1-based.
struct CrtConflict {
  std::size_t i = 0;
  std::size_t j = 0;
  Int gcd = 0;
  Int residue_i = 0;
  Int residue_j = 0;
};

using CrtResult = std::variant<CrtSolution, CrtConflict>;

inline CrtResult crt_solve(const CrtSystem& s) {
  const auto& e = s.entries;
  for (const auto& c : e) {
    if (c.modulus < 1) throw ArgumentError("CRT modulus must be positive");
  }
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      const Int g = gcd(e[i].modulus, e[j].modulus);
      if (floor_mod(checked::sub(e[i].residue, e[j].residue), g) != 0) {
        return CrtConflict{i + 1, j + 1, g, e[i].residue, e[j].residue};
      }
    }
  }
  if (e.empty()) return CrtSolution{0, 1};

  Int n = 1;
  for (const auto& c : e) n = lcm(n, c.modulus);
  std::vector<Int> cofactors;
  for (const auto& c : e) cofactors.push_back(n / c.modulus);
  const BezoutCertificate cert = bezout_multi(cofactors);

  // x0 = sum u_i c_i (n / n_i)  (mod n)
  __int128 acc = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const __int128 u = floor_mod(e[i].residue, n);
    const __int128 c = floor_mod(cert.coefficients[i], n);
    acc = (acc + (u * c % n) * cofactors[i]) % n;
  }
  return CrtSolution{static_cast<Int>(acc), n};
}

inline bool satisfies(const CrtSystem& s, Int x) {
  for (const auto& c : s.entries) {
    if (floor_mod(checked::sub(x, c.residue), c.modulus) != 0) return false;
  }
  return true;
}

inline std::string to_string(const CrtResult& r) {
  if (const auto* sol = std::get_if<CrtSolution>(&r)) {
    return "x0=" + std::to_string(sol->x0) + " mod " + std::to_string(sol->modulus);
  }
  const auto& c = std::get<CrtConflict>(r);
  return "conflict i=" + std::to_string(c.i) + " j=" + std::to_string(c.j) + " gcd=" + std::to_string(c.gcd);
}

}  // namespace muldecide

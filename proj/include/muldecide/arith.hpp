#pragma once

// Exact arithmetic used throughout: checked 64-bit integers, small rationals,
// rationals in prime-factored form, Bezout certificates, and roots of unity
// kept symbolically as elements of Q/Z.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "muldecide/errors.hpp"

namespace muldecide {

using Int = std::int64_t;

namespace checked {

inline Int add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

inline Int sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
  return r;
}

inline Int mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

inline Int neg(Int a) { return sub(0, a); }

inline Int abs(Int a) { return a < 0 ? neg(a) : a; }

inline Int pow(Int base, Int exp) {
  if (exp < 0) throw DomainError("negative integer exponent");
  Int r = 1;
  while (exp-- > 0) r = mul(r, base);
  return r;
}

}  // namespace checked

inline Int gcd(Int a, Int b) { return std::gcd(checked::abs(a), checked::abs(b)); }

inline Int lcm(Int a, Int b) {
  if (a == 0 || b == 0) return 0;
  return checked::abs(checked::mul(a / gcd(a, b), b));
}

/// Floor division and the matching non-negative remainder.
inline Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int floor_mod(Int a, Int b) {
  Int r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

// ---------------------------------------------------------------------------
// Rational

class Rational {
 public:
  Rational() = default;
  Rational(Int value) : num_(value) {}  // NOLINT: implicit from integers is intended
  Rational(Int num, Int den) {
    if (den == 0) throw ArgumentError("rational with zero denominator");
    if (den < 0) {
      num = checked::neg(num);
      den = checked::neg(den);
    }
    const Int g = gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  Int num() const { return num_; }
  Int den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const Int g = gcd(a.den_, b.den_);
    const Int l = checked::mul(a.den_ / g, b.den_);
    return {checked::add(checked::mul(a.num_, l / a.den_), checked::mul(b.num_, l / b.den_)), l};
  }
  friend Rational operator-(const Rational& a) { return {checked::neg(a.num_), a.den_}; }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    const Int g1 = gcd(a.num_, b.den_);
    const Int g2 = gcd(b.num_, a.den_);
    return {checked::mul(a.num_ / (g1 ? g1 : 1), b.num_ / (g2 ? g2 : 1)),
            checked::mul(a.den_ / (g2 ? g2 : 1), b.den_ / (g1 ? g1 : 1))};
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("rational division by zero");
    return a * Rational(b.den_, b.num_);
  }

  /// Representative in [0, 1) of this value modulo 1.
  Rational frac() const { return {floor_mod(num_, den_), den_}; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 l = static_cast<__int128>(a.num_) * b.den_;
    const __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less
                 : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  Int num_ = 0;
  Int den_ = 1;
};

// ---------------------------------------------------------------------------
// Primes

inline bool is_prime(Int n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (Int d = 5; d <= n / d; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

/// Prime factorization of |n| by trial division; n must be nonzero.
inline std::map<Int, Int> factor_integer(Int n) {
  if (n == 0) throw ArgumentError("cannot factor zero");
  if (n == std::numeric_limits<Int>::min()) throw ArgumentError("integer magnitude exceeds 2^63 - 1");
  n = checked::abs(n);
  std::map<Int, Int> out;
  auto strip = [&](Int p) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  };
  strip(2);
  strip(3);
  for (Int d = 5; d <= n / d; d += 6) {
    strip(d);
    strip(d + 2);
  }
  if (n > 1) ++out[n];
  return out;
}

/// Smallest prime not contained in `exclude`.
inline Int fresh_prime(const std::set<Int>& exclude) {
  for (Int p = 2;; ++p) {
    if (is_prime(p) && !exclude.contains(p)) return p;
  }
}

// ---------------------------------------------------------------------------
// FactoredRational

/// A rational number as sign * prod p^e. Zero is represented with an empty
/// map and sign +1; otherwise no stored exponent is 0.
class FactoredRational {
 public:
  FactoredRational() = default;  // the value 1

  static FactoredRational zero() {
    FactoredRational z;
    z.zero_ = true;
    return z;
  }

  static FactoredRational one() { return {}; }

  /// Build from a sign and a prime->exponent map. Keys must be prime.
  static FactoredRational from_factors(int sign, std::map<Int, Int> factors, bool keys_known_prime = false) {
    FactoredRational r;
    if (sign != 1 && sign != -1) throw ArgumentError("sign must be +1 or -1");
    r.sign_ = sign;
    for (auto it = factors.begin(); it != factors.end();) {
      if (!keys_known_prime && !is_prime(it->first)) throw ArgumentError("factor key " + std::to_string(it->first) + " is not prime");
      it = it->second == 0 ? factors.erase(it) : std::next(it);
    }
    r.factors_ = std::move(factors);
    return r;
  }

  bool is_zero() const { return zero_; }
  int sign() const { return sign_; }
  const std::map<Int, Int>& factors() const { return factors_; }

  Int exponent(Int prime) const {
    auto it = factors_.find(prime);
    return it == factors_.end() ? 0 : it->second;
  }

  bool is_one() const { return !zero_ && sign_ == 1 && factors_.empty(); }

  std::set<Int> primes() const {
    std::set<Int> out;
    for (const auto& [p, e] : factors_) out.insert(p);
    return out;
  }

  /// Absolute value.
  FactoredRational magnitude() const {
    FactoredRational r = *this;
    r.sign_ = 1;
    return r;
  }

  FactoredRational negated() const {
    FactoredRational r = *this;
    if (!zero_) r.sign_ = -sign_;
    return r;
  }

  friend FactoredRational operator*(const FactoredRational& a, const FactoredRational& b) {
    if (a.zero_ || b.zero_) return zero();
    FactoredRational r = a;
    r.sign_ = a.sign_ * b.sign_;
    for (const auto& [p, e] : b.factors_) {
      const Int s = checked::add(r.exponent(p), e);
      if (s == 0) {
        r.factors_.erase(p);
      } else {
        r.factors_[p] = s;
      }
    }
    return r;
  }

  /// Multiplicative inverse with the convention 0^-1 = 0.
  FactoredRational inverse() const {
    if (zero_) return zero();
    FactoredRational r = *this;
    for (auto& [p, e] : r.factors_) e = checked::neg(e);
    return r;
  }

  /// a^k. Raising 0 to k <= 0 is a DomainError.
  FactoredRational pow(Int k) const {
    if (zero_) {
      if (k <= 0) throw DomainError("0 raised to a non-positive power is undefined");
      return zero();
    }
    if (k == 0) return one();
    FactoredRational r;
    r.sign_ = (k % 2 == 0) ? 1 : sign_;
    for (const auto& [p, e] : factors_) r.factors_[p] = checked::mul(e, k);
    return r;
  }

  /// Exact n-th root when every exponent is divisible by n and the sign allows it.
  FactoredRational root(Int n) const {
    if (n < 1) throw ArgumentError("root index must be positive");
    if (zero_) return zero();
    if (sign_ < 0 && n % 2 == 0) throw DomainError("even root of a negative rational");
    FactoredRational r;
    r.sign_ = sign_;
    for (const auto& [p, e] : factors_) {
      if (e % n != 0) throw DomainError("value is not an exact power");
      r.factors_[p] = e / n;
    }
    return r;
  }

  /// (numerator, denominator) if both fit in 64 bits.
  std::pair<Int, Int> to_fraction() const {
    if (zero_) return {0, 1};
    Int num = 1;
    Int den = 1;
    for (const auto& [p, e] : factors_) {
      if (e > 0) {
        num = checked::mul(num, checked::pow(p, e));
      } else {
        den = checked::mul(den, checked::pow(p, -e));
      }
    }
    return {sign_ * num, den};
  }

  /// Canonical rendering "+ 2^3 3^-1 5^-1"; zero renders as "0".
  std::string to_string() const {
    if (zero_) return "0";
    std::string out = sign_ > 0 ? "+" : "-";
    for (const auto& [p, e] : factors_) out += " " + std::to_string(p) + "^" + std::to_string(e);
    return out;
  }

  /// Rendering as an ordinary fraction "a/b" (or "a").
  std::string to_fraction_string() const {
    auto [n, d] = to_fraction();
    return d == 1 ? std::to_string(n) : std::to_string(n) + "/" + std::to_string(d);
  }

  friend bool operator==(const FactoredRational&, const FactoredRational&) = default;
  friend auto operator<=>(const FactoredRational&, const FactoredRational&) = default;

 private:
  bool zero_ = false;
  int sign_ = 1;
  std::map<Int, Int> factors_;
};

/// Factor numerator/denominator. Magnitudes beyond 2^63 - 1 are rejected.
inline FactoredRational factor(Int numerator, Int denominator) {
  if (denominator == 0) throw ArgumentError("zero denominator");
  if (numerator == 0) return FactoredRational::zero();
  const int sign = ((numerator < 0) != (denominator < 0)) ? -1 : 1;
  auto factors = factor_integer(numerator);
  for (const auto& [p, e] : factor_integer(denominator)) factors[p] -= e;
  return FactoredRational::from_factors(sign, std::move(factors), true);
}

inline FactoredRational factor(Int value) { return factor(value, 1); }

enum class PowerDomain { PositiveRationals, Rationals };

/// Whether `a` is an n-th power in the given domain (R_n).
inline bool is_nth_power(const FactoredRational& a, Int n, PowerDomain domain) {
  if (n < 2) throw ArgumentError("power-residue index must be at least 2");
  if (domain == PowerDomain::PositiveRationals && (a.is_zero() || a.sign() < 0)) {
    throw ArgumentError("input is not a positive rational");
  }
  if (a.is_zero()) return true;
  if (a.sign() < 0 && n % 2 == 0) return false;
  return std::all_of(a.factors().begin(), a.factors().end(),
                     [n](const auto& pe) { return pe.second % n == 0; });
}

// ---------------------------------------------------------------------------
// Bezout

struct BezoutCertificate {
  std::vector<Int> inputs;
  std::vector<Int> coefficients;
  Int gcd = 0;

  /// Re-checks sum c_i a_i == gcd exactly.
  bool verify() const {
    if (inputs.size() != coefficients.size() || inputs.empty()) return false;
    __int128 sum = 0;
    Int g = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      sum += static_cast<__int128>(inputs[i]) * coefficients[i];
      g = muldecide::gcd(g, inputs[i]);
    }
    return g == gcd && sum == gcd;
  }
};

/// Extended Euclid on (a, b): returns (g, s, t) with s*a + t*b = g, using the
/// classical iteration (old_r, r) <- (r, old_r - q r).
inline std::tuple<Int, Int, Int> extended_gcd(Int a, Int b) {
  Int old_r = a, r = b;
  Int old_s = 1, s = 0;
  Int old_t = 0, t = 1;
  while (r != 0) {
    const Int q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, checked::sub(old_r, checked::mul(q, r)));
    std::tie(old_s, s) = std::make_pair(s, checked::sub(old_s, checked::mul(q, s)));
    std::tie(old_t, t) = std::make_pair(t, checked::sub(old_t, checked::mul(q, t)));
  }
  if (old_r < 0) return {checked::neg(old_r), checked::neg(old_s), checked::neg(old_t)};
  return {old_r, old_s, old_t};
}

/// Bezout coefficients for a list of nonzero integers, by a left fold of
/// two-argument extended Euclid.
inline BezoutCertificate bezout_multi(std::span<const Int> a) {
  if (a.empty()) throw ArgumentError("bezout_multi needs at least one integer");
  for (Int v : a) {
    if (v == 0) throw ArgumentError("bezout_multi inputs must be nonzero");
  }
  BezoutCertificate cert;
  cert.inputs.assign(a.begin(), a.end());
  cert.gcd = checked::abs(a[0]);
  cert.coefficients.push_back(a[0] < 0 ? -1 : 1);
  for (std::size_t i = 1; i < a.size(); ++i) {
    auto [g, s, t] = extended_gcd(cert.gcd, a[i]);
    for (Int& c : cert.coefficients) c = checked::mul(c, s);
    cert.coefficients.push_back(t);
    cert.gcd = g;
  }
  return cert;
}

inline BezoutCertificate bezout_multi(std::initializer_list<Int> a) {
  return bezout_multi(std::span<const Int>(a.begin(), a.size()));
}

// ---------------------------------------------------------------------------
// RootOfUnity

/// e^{2 pi i * exponent} with exponent a reduced fraction in [0, 1).
class RootOfUnity {
 public:
  RootOfUnity() = default;
  explicit RootOfUnity(Rational exponent) : exponent_(exponent.frac()) {}

  /// Primitive n-th root e^{2 pi i / n}.
  static RootOfUnity primitive(Int n) {
    if (n < 1) throw ArgumentError("root of unity order must be positive");
    return RootOfUnity(Rational(1, n));
  }

  static RootOfUnity minus_one() { return RootOfUnity(Rational(1, 2)); }

  const Rational& exponent() const { return exponent_; }
  Int order() const { return exponent_.den(); }
  bool is_one() const { return exponent_.is_zero(); }

  friend RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
    return RootOfUnity(a.exponent_ + b.exponent_);
  }

  RootOfUnity pow(Int k) const { return RootOfUnity(exponent_ * Rational(k)); }
  RootOfUnity inverse() const { return RootOfUnity(-exponent_); }

  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
  friend auto operator<=>(const RootOfUnity&, const RootOfUnity&) = default;

 private:
  Rational exponent_{0};
};

// ---------------------------------------------------------------------------
// Scalar

/// Constant coefficient of a monomial: either 0, or a root of unity times a
/// positive rational. Over the real structures the phase is 0 or 1/2 (the sign).
class Scalar {
 public:
  Scalar() = default;  // 1

  static Scalar zero() {
    Scalar s;
    s.zero_ = true;
    return s;
  }
  static Scalar one() { return {}; }
  static Scalar minus_one() { return Scalar(RootOfUnity::minus_one(), FactoredRational::one()); }
  static Scalar omega(Int n) { return Scalar(RootOfUnity::primitive(n), FactoredRational::one()); }

  static Scalar from_rational(const FactoredRational& r) {
    if (r.is_zero()) return zero();
    return Scalar(r.sign() < 0 ? RootOfUnity::minus_one() : RootOfUnity(), r.magnitude());
  }
  static Scalar from_fraction(Int num, Int den) { return from_rational(factor(num, den)); }

  Scalar(RootOfUnity phase, FactoredRational magnitude) : phase_(phase), magnitude_(std::move(magnitude)) {
    if (magnitude_.is_zero()) {
      *this = zero();
    } else if (magnitude_.sign() < 0) {
      magnitude_ = magnitude_.magnitude();
      phase_ = phase_ * RootOfUnity::minus_one();
    }
  }

  bool is_zero() const { return zero_; }
  bool is_one() const { return !zero_ && phase_.is_one() && magnitude_.is_one(); }
  const RootOfUnity& phase() const { return phase_; }
  const FactoredRational& magnitude() const { return magnitude_; }

  /// Whether the value is real (phase 0 or 1/2) or zero.
  bool is_real() const { return zero_ || phase_.order() <= 2; }
  bool is_positive_real() const { return !zero_ && phase_.is_one(); }

  /// Signed rational value; only meaningful when is_real().
  FactoredRational to_rational() const {
    if (zero_) return FactoredRational::zero();
    if (!is_real()) throw DomainError("scalar is not real");
    return phase_.is_one() ? magnitude_ : magnitude_.negated();
  }

  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.zero_ || b.zero_) return zero();
    return Scalar(a.phase_ * b.phase_, a.magnitude_ * b.magnitude_);
  }

  /// Inverse with 0^-1 = 0.
  Scalar inverse() const {
    if (zero_) return zero();
    return Scalar(phase_.inverse(), magnitude_.inverse());
  }

  /// Term-level power: t^0 = 1 for every t, and 0^k = 0 for k != 0.
  Scalar pow(Int k) const {
    if (k == 0) return one();
    if (zero_) return zero();
    return Scalar(phase_.pow(k), magnitude_.pow(k));
  }

  std::set<Int> primes() const { return zero_ ? std::set<Int>{} : magnitude_.primes(); }

  /// Rendering in the formula text syntax ("0", "2/3", "-1", "w4^3*2").
  std::string to_string() const {
    if (zero_) return "0";
    std::string mag;
    try {
      mag = magnitude_.to_fraction_string();
    } catch (const OverflowError&) {
      // too large for a fraction literal: spell out prime powers instead
      for (const auto& [p, e] : magnitude_.factors()) {
        if (!mag.empty()) mag += "*";
        mag += std::to_string(p) + "^" + std::to_string(e);
      }
    }
    if (phase_.is_one()) return mag;
    if (phase_ == RootOfUnity::minus_one()) return "-" + mag;
    const Int d = phase_.exponent().den();
    const Int k = phase_.exponent().num();
    std::string out = "w" + std::to_string(d);
    if (k != 1) out += "^" + std::to_string(k);
    if (!magnitude_.is_one()) out += "*" + mag;
    return out;
  }

  friend bool operator==(const Scalar&, const Scalar&) = default;
  friend auto operator<=>(const Scalar&, const Scalar&) = default;

 private:
  bool zero_ = false;
  RootOfUnity phase_;
  FactoredRational magnitude_;
};

}  // namespace muldecide

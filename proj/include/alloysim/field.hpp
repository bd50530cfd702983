#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include "alloysim/rng.hpp"

namespace alloysim {

bool is_prime(std::uint64_t n);

/// Arithmetic over the prime field F_q with a runtime modulus.
///
/// Elements are plain uint64_t values reduced into [0, q). The field object
/// carries the modulus plus a Barrett constant, so reduction in the hot
/// elimination loops costs a mulhi and a conditional subtract instead of a
/// hardware divide. q must be prime and < 2^32 so products fit in 64 bits.
class PrimeField {
 public:
  using Elem = std::uint64_t;
  static constexpr bool exact = true;

  explicit PrimeField(std::uint64_t q) : q_(q) {
    if (q < 2 || q >= (1ULL << 32))
      throw std::invalid_argument("field modulus out of range: " + std::to_string(q));
    if (!is_prime(q)) throw std::invalid_argument("field modulus not prime: " + std::to_string(q));
    magic_ = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) / q);
  }

  std::uint64_t modulus() const { return q_; }

  Elem zero() const { return 0; }
  Elem one() const { return q_ > 1 ? 1 : 0; }

  Elem add(Elem a, Elem b) const {
    Elem s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + q_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : q_ - a; }

  Elem mul(Elem a, Elem b) const { return reduce(a * b); }

  /// Reduces any 64-bit value mod q (Barrett; at most one correction step).
  Elem reduce(std::uint64_t p) const {
    const std::uint64_t t =
        static_cast<std::uint64_t>((static_cast<unsigned __int128>(p) * magic_) >> 64);
    std::uint64_t r = p - t * q_;
    if (r >= q_) r -= q_;
    return r;
  }

  Elem pow(Elem a, std::uint64_t e) const {
    Elem r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return pow(a, q_ - 2);
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  /// Maps a (possibly negative) integer into the field.
  Elem from_int(long long v) const {
    long long m = v % static_cast<long long>(q_);
    if (m < 0) m += static_cast<long long>(q_);
    return static_cast<Elem>(m);
  }

  bool is_zero(Elem a) const { return a == 0; }
  bool equal(Elem a, Elem b) const { return a == b; }

  /// Pivot quality for elimination: any nonzero element works.
  double magnitude(Elem a) const { return a == 0 ? 0.0 : 1.0; }

  Elem sample_uniform(Rng& rng) const { return rng.uniform_below(q_); }
  Elem sample_uniform_nonzero(Rng& rng) const { return 1 + rng.uniform_below(q_ - 1); }

  double to_double(Elem a) const { return static_cast<double>(a); }

  bool operator==(const PrimeField& o) const { return q_ == o.q_; }

 private:
  std::uint64_t q_;
  std::uint64_t magic_;
};

/// Real arithmetic with the tolerance conventions used by the solvers:
/// pivots below 1e-10 of the running scale count as zero.
class RealField {
 public:
  using Elem = double;
  static constexpr bool exact = false;
  static constexpr double pivot_rel_tol = 1e-10;

  Elem zero() const { return 0.0; }
  Elem one() const { return 1.0; }
  Elem add(Elem a, Elem b) const { return a + b; }
  Elem sub(Elem a, Elem b) const { return a - b; }
  Elem neg(Elem a) const { return -a; }
  Elem mul(Elem a, Elem b) const { return a * b; }
  Elem inv(Elem a) const { return 1.0 / a; }
  Elem div(Elem a, Elem b) const { return a / b; }
  Elem from_int(long long v) const { return static_cast<double>(v); }
  bool is_zero(Elem a) const { return a == 0.0; }
  bool equal(Elem a, Elem b) const { return a == b; }
  double magnitude(Elem a) const { return a < 0 ? -a : a; }
  double to_double(Elem a) const { return a; }
  bool operator==(const RealField&) const { return true; }
};

/// Runtime selector between exact F_q and real arithmetic.
using ScalarMode = std::variant<PrimeField, RealField>;

inline ScalarMode finite_mode(std::uint64_t q) { return PrimeField(q); }
inline ScalarMode real_mode() { return RealField{}; }

inline bool is_finite(const ScalarMode& m) { return std::holds_alternative<PrimeField>(m); }

}  // namespace alloysim

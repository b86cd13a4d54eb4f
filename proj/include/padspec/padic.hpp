// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <optional>

#include "padspec/errors.hpp"
#include "padspec/rational.hpp"

namespace padspec {

// Fixed prime for a whole session/document. Mixing contexts is an error, never
// a coercion.
struct PrimeContext {
  unsigned long p;

  explicit PrimeContext(unsigned long prime);
  bool operator==(const PrimeContext&) const = default;
  Int p_int() const { return Int(static_cast<unsigned long>(p)); }
};

// v with q = p^v * (unit); empty means q = 0 (valuation +infinity).
std::optional<long> valuation(const Rat& q, const PrimeContext& ctx);

// An exact ultrametric norm value: zero or an integer power of p. The prime
// itself is not stored; comparisons between PNormValues are exponent
// comparisons and only norm_compare against a rational threshold needs p.
class PNormValue {
 public:
  static PNormValue zero() { return PNormValue(); }
  static PNormValue pow(long e) {
    PNormValue n;
    n.zero_ = false;
    n.e_ = e;
    return n;
  }
  static PNormValue one() { return pow(0); }

  bool is_zero() const { return zero_; }
  long exponent() const;  // requires !is_zero()

  PNormValue operator*(const PNormValue& o) const {
    return (zero_ || o.zero_) ? zero() : pow(e_ + o.e_);
  }
  PNormValue inverse() const;          // requires !is_zero()
  PNormValue pow_n(long k) const;      // k-th power; zero stays zero for k > 0
  static PNormValue max(const PNormValue& a, const PNormValue& b) { return a < b ? b : a; }
  static PNormValue min(const PNormValue& a, const PNormValue& b) { return a < b ? a : b; }

  std::strong_ordering operator<=>(const PNormValue& o) const {
    if (zero_ && o.zero_) return std::strong_ordering::equal;
    if (zero_) return std::strong_ordering::less;
    if (o.zero_) return std::strong_ordering::greater;
    return e_ <=> o.e_;
  }
  bool operator==(const PNormValue&) const = default;

 private:
  bool zero_ = true;
  long e_ = 0;
};

// |q| = p^{-v(q)}, zero iff q = 0.
PNormValue pnorm(const Rat& q, const PrimeContext& ctx);

// Exact comparison of the real number behind `a` against a positive rational
// threshold, by integer cross-multiplication.
std::strong_ordering norm_compare(const PNormValue& a, const Rat& threshold,
                                  const PrimeContext& ctx);

// p^e as an exact rational; requires !a.is_zero().
Rat pnorm_to_rational(const PNormValue& a, const PrimeContext& ctx);

// Largest e with p^e < t (t > 0). Used to turn strict rational thresholds into
// strict thresholds on the value group p^Z.
long max_pow_below(const Rat& t, const PrimeContext& ctx);

// An exact rational read inside Q_p under a fixed prime context.
struct PadicScalar {
  Rat value;
  PrimeContext context;

  PNormValue norm() const { return pnorm(value, context); }
};

}  // namespace padspec

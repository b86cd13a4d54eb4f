// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "padspec/padic.hpp"

#include <cmath>

namespace padspec {

namespace {

const char* kErrcNames[] = {
    "schema violation",
    "context mismatch",
    "ambient mismatch",
    "zero vector",
    "zero beta",
    "not finite dimensional",
    "unsupported family",
    "singular",
    "not invertible on side",
    "nonterminating recursion",
    "contraction failure",
    "scalar operator",
    "not in pseudospectrum",
    "not in condition pseudospectrum",
    "in spectrum",
    "unknown law",
};

// sign of p^e - num/den for a positive rational, via cross multiplication.
int cmp_pow_rational(long e, const Rat& t, const PrimeContext& ctx) {
  Int pw = int_pow(ctx.p, static_cast<unsigned long>(e >= 0 ? e : -e));
  Int lhs, rhs;
  if (e >= 0) {
    lhs = pw * t.get_den();
    rhs = t.get_num();
  } else {
    lhs = t.get_den();
    rhs = t.get_num() * pw;
  }
  return cmp(lhs, rhs);
}

}  // namespace

const char* errc_name(Errc code) { return kErrcNames[static_cast<int>(code)]; }

PrimeContext::PrimeContext(unsigned long prime) : p(prime) {
  if (prime < 2) fail(Errc::schema, "p must be >= 2");
  // Trial division; inputs are desk-scale primes.
  if (prime > 1000003) fail(Errc::schema, "p is too large for this tool");
  for (unsigned long d = 2; d * d <= prime; ++d)
    if (prime % d == 0) fail(Errc::schema, std::to_string(prime) + " is not prime");
}

std::optional<long> valuation(const Rat& q, const PrimeContext& ctx) {
  if (sgn(q) == 0) return std::nullopt;
  Int pz = ctx.p_int();
  Int rest;
  Int num = q.get_num();
  Int den = q.get_den();
  long vn = static_cast<long>(mpz_remove(rest.get_mpz_t(), num.get_mpz_t(), pz.get_mpz_t()));
  long vd = static_cast<long>(mpz_remove(rest.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t()));
  return vn - vd;
}

long PNormValue::exponent() const {
  if (zero_) fail(Errc::schema, "norm value 0 has no exponent");
  return e_;
}

PNormValue PNormValue::inverse() const {
  if (zero_) fail(Errc::schema, "norm value 0 has no inverse");
  return pow(-e_);
}

PNormValue PNormValue::pow_n(long k) const {
  if (zero_) {
    if (k <= 0) fail(Errc::schema, "0^k undefined for k <= 0");
    return zero();
  }
  return pow(e_ * k);
}

PNormValue pnorm(const Rat& q, const PrimeContext& ctx) {
  auto v = valuation(q, ctx);
  return v ? PNormValue::pow(-*v) : PNormValue::zero();
}

std::strong_ordering norm_compare(const PNormValue& a, const Rat& threshold,
                                  const PrimeContext& ctx) {
  if (sgn(threshold) <= 0) fail(Errc::schema, "norm_compare threshold must be positive");
  if (a.is_zero()) return std::strong_ordering::less;
  int c = cmp_pow_rational(a.exponent(), threshold, ctx);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rat pnorm_to_rational(const PNormValue& a, const PrimeContext& ctx) {
  long e = a.exponent();
  Int pw = int_pow(ctx.p, static_cast<unsigned long>(e >= 0 ? e : -e));
  return e >= 0 ? Rat(pw) : Rat(1, pw);
}

long max_pow_below(const Rat& t, const PrimeContext& ctx) {
  if (sgn(t) <= 0) fail(Errc::schema, "threshold must be positive");
  // Float estimate, then exact adjustment.
  double bits = static_cast<double>(mpz_sizeinbase(t.get_num().get_mpz_t(), 2)) -
                static_cast<double>(mpz_sizeinbase(t.get_den().get_mpz_t(), 2));
  long e = static_cast<long>(std::floor(bits / std::log2(static_cast<double>(ctx.p))));
  while (cmp_pow_rational(e, t, ctx) >= 0) --e;
  while (cmp_pow_rational(e + 1, t, ctx) < 0) ++e;
  return e;
}

}  // namespace padspec

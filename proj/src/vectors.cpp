// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "padspec/vectors.hpp"

namespace padspec {

namespace {

void check_same_space(const FinSuppVector& a, const FinSuppVector& b) {
  if (!(a.context() == b.context())) fail(Errc::context_mismatch, "vectors over different primes");
  if (!(a.ambient() == b.ambient())) fail(Errc::ambient_mismatch, "vectors in different spaces");
}

}  // namespace

Ambient Ambient::kn(uint32_t dim) {
  if (dim == 0) fail(Errc::schema, "K^n needs n >= 1");
  Ambient a;
  a.kind = Kind::kn;
  a.n = dim;
  return a;
}

FinSuppVector FinSuppVector::basis(PrimeContext ctx, Ambient ambient, uint32_t i) {
  FinSuppVector v(ctx, ambient);
  v.set(i, Rat(1));
  return v;
}

Rat FinSuppVector::at(uint32_t i) const {
  auto it = entries_.find(i);
  return it == entries_.end() ? Rat(0) : it->second;
}

void FinSuppVector::set(uint32_t i, const Rat& value) {
  if (ambient_.finite() && i >= ambient_.n)
    fail(Errc::ambient_mismatch, "index " + std::to_string(i) + " outside K^" + std::to_string(ambient_.n));
  if (sgn(value) == 0) {
    entries_.erase(i);
  } else {
    entries_[i] = value;
    entries_[i].canonicalize();
  }
}

uint32_t FinSuppVector::max_index() const {
  if (entries_.empty()) fail(Errc::zero_vector, "zero vector has no support");
  return entries_.rbegin()->first;
}

PNormValue FinSuppVector::sup_norm() const {
  PNormValue n = PNormValue::zero();
  for (const auto& [i, v] : entries_) n = PNormValue::max(n, pnorm(v, ctx_));
  return n;
}

FinSuppVector FinSuppVector::operator+(const FinSuppVector& o) const {
  check_same_space(*this, o);
  FinSuppVector r = *this;
  for (const auto& [i, v] : o.entries_) r.set(i, r.at(i) + v);
  return r;
}

FinSuppVector FinSuppVector::operator-(const FinSuppVector& o) const {
  check_same_space(*this, o);
  FinSuppVector r = *this;
  for (const auto& [i, v] : o.entries_) r.set(i, r.at(i) - v);
  return r;
}

FinSuppVector FinSuppVector::scaled(const Rat& c) const {
  FinSuppVector r(ctx_, ambient_);
  if (sgn(c) == 0) return r;
  for (const auto& [i, v] : entries_) r.set(i, c * v);
  return r;
}

void Functional::set(uint32_t i, const Rat& value) {
  if (sgn(value) == 0) {
    coeffs_.erase(i);
  } else {
    coeffs_[i] = value;
    coeffs_[i].canonicalize();
  }
}

Rat Functional::at(uint32_t i) const {
  auto it = coeffs_.find(i);
  return it == coeffs_.end() ? Rat(0) : it->second;
}

PNormValue Functional::norm() const {
  PNormValue n = PNormValue::zero();
  for (const auto& [i, v] : coeffs_) n = PNormValue::max(n, pnorm(v, ctx_));
  return n;
}

Functional unit_functional(const FinSuppVector& x) {
  if (x.is_zero()) fail(Errc::zero_vector, "unit functional needs a nonzero vector");
  PNormValue nx = x.sup_norm();
  // Smallest index attaining the sup norm; ties broken here keep results
  // reproducible.
  for (const auto& [i, v] : x.entries()) {
    if (pnorm(v, x.context()) == nx) {
      Functional phi(x.context());
      phi.set(i, Rat(1) / v);
      return phi;
    }
  }
  fail(Errc::zero_vector, "unreachable: sup norm not attained");
}

Normalized normalize(const FinSuppVector& x) {
  if (x.is_zero()) fail(Errc::zero_vector, "cannot normalize the zero vector");
  long e = x.sup_norm().exponent();
  // |c| = p^e exactly when c = p^{-e}.
  Rat c = pnorm_to_rational(PNormValue::pow(-e), x.context());
  return Normalized{x.scaled(Rat(1) / c), PadicScalar{c, x.context()}};
}

PadicScalar apply_functional(const Functional& phi, const FinSuppVector& y) {
  if (!(phi.context() == y.context()))
    fail(Errc::context_mismatch, "functional and vector over different primes");
  Rat acc(0);
  for (const auto& [i, c] : phi.coefficients()) acc += c * y.at(i);
  return PadicScalar{acc, y.context()};
}

}  // namespace padspec

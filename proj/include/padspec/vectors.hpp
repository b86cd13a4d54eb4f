// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>

#include "padspec/padic.hpp"

namespace padspec {

// c_0 over Q_p, or Q_p^n for finite n. Finitely supported vectors are the
// computational dense subspace; limits never enter the data path.
struct Ambient {
  enum class Kind { c0, kn };
  Kind kind = Kind::c0;
  uint32_t n = 0;

  static Ambient c0() { return Ambient{}; }
  static Ambient kn(uint32_t dim);
  bool finite() const { return kind == Kind::kn; }
  bool operator==(const Ambient&) const = default;
};

// Sparse vector with no stored zero entries; sup norm is the max entry norm.
class FinSuppVector {
 public:
  FinSuppVector(PrimeContext ctx, Ambient ambient) : ctx_(ctx), ambient_(ambient) {}
  static FinSuppVector basis(PrimeContext ctx, Ambient ambient, uint32_t i);

  const PrimeContext& context() const { return ctx_; }
  const Ambient& ambient() const { return ambient_; }
  const std::map<uint32_t, Rat>& entries() const { return entries_; }

  bool is_zero() const { return entries_.empty(); }
  Rat at(uint32_t i) const;  // 0 when absent
  void set(uint32_t i, const Rat& value);
  uint32_t max_index() const;  // requires !is_zero()

  PNormValue sup_norm() const;

  FinSuppVector operator+(const FinSuppVector& o) const;
  FinSuppVector operator-(const FinSuppVector& o) const;
  FinSuppVector scaled(const Rat& c) const;
  bool operator==(const FinSuppVector&) const = default;

 private:
  std::map<uint32_t, Rat> entries_;
  PrimeContext ctx_;
  Ambient ambient_;
};

// Finitely supported coordinate functional sum_i c_i x_i.
class Functional {
 public:
  explicit Functional(PrimeContext ctx) : ctx_(ctx) {}

  const PrimeContext& context() const { return ctx_; }
  const std::map<uint32_t, Rat>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  void set(uint32_t i, const Rat& value);
  Rat at(uint32_t i) const;

  PNormValue norm() const;  // max coefficient norm

  bool operator==(const Functional&) const = default;

 private:
  std::map<uint32_t, Rat> coeffs_;
  PrimeContext ctx_;
};

// The functional phi with phi(x) = 1 and ||phi|| = ||x||^{-1}, supported on the
// smallest index where x attains its sup norm.
Functional unit_functional(const FinSuppVector& x);

struct Normalized {
  FinSuppVector z;  // sup norm exactly 1
  PadicScalar c;    // |c| = ||x||, z = c^{-1} x
};
Normalized normalize(const FinSuppVector& x);

PadicScalar apply_functional(const Functional& phi, const FinSuppVector& y);

}  // namespace padspec

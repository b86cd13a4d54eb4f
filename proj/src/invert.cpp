// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "padspec/invert.hpp"

#include <algorithm>
#include <cassert>

namespace padspec {

namespace {

long int_valuation(const Int& z, const Int& p) {
  Int rest;
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), z.get_mpz_t(), p.get_mpz_t()));
}

// Fraction-free forward elimination (Bareiss) of an n x width integer matrix
// whose left n x n block is eliminated. Pivots are chosen with smallest p-adic
// valuation, ties broken by row index; the division by the previous pivot is
// exact by the Sylvester minor identity, which also covers augmented columns.
struct Eliminated {
  std::vector<Int> w;  // n rows * width, row-major, upper triangular left block
  uint32_t n = 0, width = 0;
  int sign = 1;
  bool singular = false;

  Int& at(uint32_t i, uint32_t j) { return w[static_cast<size_t>(i) * width + j]; }
  const Int& at(uint32_t i, uint32_t j) const { return w[static_cast<size_t>(i) * width + j]; }
};

Eliminated bareiss_forward(std::vector<Int> w, uint32_t n, uint32_t width, const Int& p) {
  Eliminated e;
  e.w = std::move(w);
  e.n = n;
  e.width = width;
  Int prev(1);
  for (uint32_t k = 0; k < n; ++k) {
    uint32_t pivot = n;
    long best_v = 0;
    for (uint32_t r = k; r < n; ++r) {
      if (sgn(e.at(r, k)) == 0) continue;
      long v = int_valuation(e.at(r, k), p);
      if (pivot == n || v < best_v) {
        pivot = r;
        best_v = v;
      }
    }
    if (pivot == n) {
      e.singular = true;
      return e;
    }
    if (pivot != k) {
      for (uint32_t j = 0; j < width; ++j) std::swap(e.at(k, j), e.at(pivot, j));
      e.sign = -e.sign;
    }
    for (uint32_t i = k + 1; i < n; ++i) {
      for (uint32_t j = k + 1; j < width; ++j) {
        Int t = e.at(k, k) * e.at(i, j) - e.at(i, k) * e.at(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        e.at(i, j) = t;
      }
      e.at(i, k) = 0;
    }
    prev = e.at(k, k);
  }
  return e;
}

// Common denominator clearing: returns L and B = L*M as integers.
std::pair<Int, std::vector<Int>> scale_to_integers(const MaterializedMatrix& m, uint32_t width) {
  uint32_t n = m.dim();
  Int l(1);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m.at(i, j).get_den().get_mpz_t());
  std::vector<Int> w(static_cast<size_t>(n) * width, Int(0));
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j) {
      Rat scaled = m.at(i, j) * Rat(l);
      assert(scaled.get_den() == 1);
      w[static_cast<size_t>(i) * width + j] = scaled.get_num();
    }
  return {l, std::move(w)};
}

struct Rref {
  std::vector<Rat> r;
  uint32_t n;
  std::vector<std::pair<uint32_t, uint32_t>> pivots;  // (row, col)

  Rat& at(uint32_t i, uint32_t j) { return r[static_cast<size_t>(i) * n + j]; }
};

Rref rref(const MaterializedMatrix& m) {
  uint32_t n = m.dim();
  Rref out;
  out.n = n;
  out.r.resize(static_cast<size_t>(n) * n);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j) out.at(i, j) = m.at(i, j);
  Int p = m.context().p_int();
  uint32_t row = 0;
  for (uint32_t col = 0; col < n && row < n; ++col) {
    uint32_t pivot = n;
    long best_v = 0;
    for (uint32_t r = row; r < n; ++r) {
      if (sgn(out.at(r, col)) == 0) continue;
      Rat q = out.at(r, col);
      Int rest;
      long v = static_cast<long>(
                   mpz_remove(rest.get_mpz_t(), q.get_num().get_mpz_t(), p.get_mpz_t())) -
               static_cast<long>(
                   mpz_remove(rest.get_mpz_t(), q.get_den().get_mpz_t(), p.get_mpz_t()));
      if (pivot == n || v < best_v) {
        pivot = r;
        best_v = v;
      }
    }
    if (pivot == n) continue;
    for (uint32_t j = 0; j < n; ++j) std::swap(out.at(row, j), out.at(pivot, j));
    Rat inv = Rat(1) / out.at(row, col);
    for (uint32_t j = 0; j < n; ++j) out.at(row, j) *= inv;
    for (uint32_t i = 0; i < n; ++i) {
      if (i == row || sgn(out.at(i, col)) == 0) continue;
      Rat f = out.at(i, col);
      for (uint32_t j = 0; j < n; ++j) out.at(i, j) -= f * out.at(row, j);
    }
    out.pivots.emplace_back(row, col);
    ++row;
  }
  return out;
}

struct ShiftFacts {
  PNormValue abs_lambda, abs_scale;
  bool lt_one, eq_one, gt_one;
};

ShiftFacts shift_facts(const ShiftedShiftOp& s, const PrimeContext& ctx) {
  ShiftFacts f;
  f.abs_lambda = pnorm(s.lambda, ctx);
  f.abs_scale = pnorm(s.scale, ctx);
  auto c = f.abs_lambda <=> PNormValue::one();
  f.lt_one = c == std::strong_ordering::less;
  f.eq_one = c == std::strong_ordering::equal;
  f.gt_one = c == std::strong_ordering::greater;
  return f;
}

InvertibilityVerdict invertible_verdict(Side side, PNormValue min_norm, Certificate cert) {
  return InvertibilityVerdict{side, true, min_norm, std::move(cert)};
}

InvertibilityVerdict not_invertible_verdict(Side side, Certificate cert) {
  return InvertibilityVerdict{side, false, std::nullopt, std::move(cert)};
}

// Truncation order giving ratio |lambda|^{m+1} <= p^{-8}.
long default_truncation_order(const PNormValue& abs_lambda) {
  long k = -abs_lambda.exponent();  // |lambda| = p^{-k}, k >= 1
  long m_plus_1 = (8 + k - 1) / k;
  return std::max<long>(m_plus_1 - 1, 0);
}

InvertibilityVerdict decide_left_shift(const ShiftedShiftOp& s, const PrimeContext& ctx,
                                       Side side) {
  ShiftFacts f = shift_facts(s, ctx);
  PNormValue op = f.abs_scale * PNormValue::max(PNormValue::one(), f.abs_lambda);
  if (side == Side::left || side == Side::two_sided) {
    if (f.lt_one) {
      if (f.abs_lambda.is_zero())
        return not_invertible_verdict(
            side, KernelVectorCert{FinSuppVector::basis(ctx, Ambient::c0(), 0)});
      long m = default_truncation_order(f.abs_lambda);
      // Ratio of the scaled operator: |scale| |lambda|^{m+1}.
      return not_invertible_verdict(
          side, KernelTruncationCert{s.lambda, m, f.abs_scale * f.abs_lambda.pow_n(m + 1)});
    }
  }
  // |lambda| >= 1 is two-sided invertible; |lambda| < 1 is right invertible
  // only. Either way the minimal inverse norm is 1/max(1, |lambda|) before
  // scaling: the unique inverse for |lambda| >= 1, and the forward recursion
  // with zero seed for |lambda| < 1.
  PNormValue min_norm = (f.abs_scale * PNormValue::max(PNormValue::one(), f.abs_lambda)).inverse();
  PNormValue gamma = f.lt_one ? PNormValue::zero() : op;
  return invertible_verdict(side, min_norm,
                            CanonicalInverseCert{"left_shift_minus_lambda", side, gamma});
}

InvertibilityVerdict decide_right_shift(const ShiftedShiftOp& s, const PrimeContext& ctx,
                                        Side side) {
  ShiftFacts f = shift_facts(s, ctx);
  // Scaled isometry: ||A x|| = |scale| max(1, |lambda|) ||x|| for every x, by
  // the telescoping ultrametric argument at the last/first index attaining the
  // sup. Hence gamma equals the operator norm and the minimal one-sided
  // inverse norm is its reciprocal.
  PNormValue gamma = f.abs_scale * PNormValue::max(PNormValue::one(), f.abs_lambda);
  PNormValue min_norm = gamma.inverse();
  if (side == Side::left)
    return invertible_verdict(side, min_norm,
                              CanonicalInverseCert{"right_shift_minus_lambda", side, gamma});
  if (f.gt_one)
    return invertible_verdict(side, min_norm,
                              CanonicalInverseCert{"right_shift_minus_lambda", side, gamma});
  return not_invertible_verdict(
      side, NonSurjectivityCert{FinSuppVector::basis(ctx, Ambient::c0(), 0),
                                "formal solution of A x = e_0 needs |x_i| = |lambda|^{-(i+1)} "
                                "(constant 1 for lambda = 0), which does not vanish at infinity"});
}

}  // namespace

const char* side_name(Side s) {
  switch (s) {
    case Side::left:
      return "left";
    case Side::right:
      return "right";
    default:
      return "two_sided";
  }
}

Rat determinant(const MaterializedMatrix& m) {
  uint32_t n = m.dim();
  auto [l, w] = scale_to_integers(m, n);
  Eliminated e = bareiss_forward(std::move(w), n, n, m.context().p_int());
  if (e.singular) return Rat(0);
  Rat det(e.sign >= 0 ? e.at(n - 1, n - 1) : -e.at(n - 1, n - 1));
  Int ln;
  mpz_pow_ui(ln.get_mpz_t(), l.get_mpz_t(), n);
  det /= Rat(ln);
  return det;
}

MaterializedMatrix matrix_inverse(const MaterializedMatrix& m) {
  uint32_t n = m.dim();
  uint32_t width = 2 * n;
  auto [l, w] = scale_to_integers(m, width);
  for (uint32_t i = 0; i < n; ++i) w[static_cast<size_t>(i) * width + n + i] = 1;
  Eliminated e = bareiss_forward(std::move(w), n, width, m.context().p_int());
  if (e.singular || sgn(e.at(n - 1, n - 1)) == 0) fail(Errc::singular, "matrix has determinant 0");
  // Rational back substitution on the triangular system; entries of the
  // inverse of the integer-scaled matrix times l give the inverse of m.
  MaterializedMatrix inv(m.context(), n);
  for (uint32_t c = 0; c < n; ++c) {
    std::vector<Rat> x(n);
    for (uint32_t ii = n; ii-- > 0;) {
      Rat acc = Rat(e.at(ii, n + c));
      for (uint32_t j = ii + 1; j < n; ++j) acc -= Rat(e.at(ii, j)) * x[j];
      x[ii] = acc / Rat(e.at(ii, ii));
    }
    for (uint32_t i = 0; i < n; ++i) inv.set(i, c, x[i] * Rat(l));
  }
  if (!(m * inv).is_identity() || !(inv * m).is_identity())
    fail(Errc::singular, "inverse verification failed");
  return inv;
}

FinSuppVector matrix_kernel_vector(const MaterializedMatrix& m) {
  uint32_t n = m.dim();
  Rref r = rref(m);
  if (r.pivots.size() == n) fail(Errc::singular, "matrix is invertible, kernel is trivial");
  std::vector<bool> is_pivot(n, false);
  for (auto [row, col] : r.pivots) {
    (void)row;
    is_pivot[col] = true;
  }
  uint32_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  FinSuppVector x(m.context(), Ambient::kn(n));
  x.set(free_col, Rat(1));
  for (auto [row, col] : r.pivots) x.set(col, -r.at(row, free_col));
  assert(m.apply(x).is_zero());
  return x;
}

Functional matrix_left_annihilator(const MaterializedMatrix& m) {
  FinSuppVector k = matrix_kernel_vector(m.transpose());
  Functional psi(m.context());
  for (const auto& [i, v] : k.entries()) psi.set(i, v);
  return psi;
}

InvertibilityVerdict decide_invertibility(const OperatorExpr& a, Side side) {
  const PrimeContext ctx = a.context();
  if (const auto* mo = a.as<MatrixOp>()) {
    const MaterializedMatrix& m = mo->m;
    if (sgn(determinant(m)) == 0) {
      if (side == Side::right) return not_invertible_verdict(side, LeftAnnihilatorCert{matrix_left_annihilator(m)});
      return not_invertible_verdict(side, KernelVectorCert{matrix_kernel_vector(m)});
    }
    MaterializedMatrix inv = matrix_inverse(m);
    PNormValue inv_norm = inv.max_entry_norm();
    return invertible_verdict(side, inv_norm, ExactInverseCert{std::move(inv)});
  }
  if (const auto* d = a.as<DiagonalOp>()) {
    for (uint32_t i : d->representative_indices()) {
      if (sgn(d->entry(i)) == 0)
        return not_invertible_verdict(side,
                                      KernelVectorCert{FinSuppVector::basis(ctx, Ambient::c0(), i)});
    }
    PNormValue min_entry = PNormValue::pow(0);
    bool first = true;
    for (uint32_t i : d->representative_indices()) {
      PNormValue e = pnorm(d->entry(i), ctx);
      min_entry = first ? e : PNormValue::min(min_entry, e);
      first = false;
    }
    // Entrywise reciprocal: norm of the inverse is 1/min |d_i|, one operator
    // serves as left, right and two-sided inverse.
    return invertible_verdict(side, min_entry.inverse(),
                              CanonicalInverseCert{"diagonal_reciprocal", side, min_entry});
  }
  if (const auto* s = a.as<ShiftedShiftOp>()) {
    return s->shift == ShiftKind::right ? decide_right_shift(*s, ctx, side)
                                        : decide_left_shift(*s, ctx, side);
  }
  fail(Errc::unsupported_family,
       "invertibility of infinite-dimensional rank-one composites is handled through membership "
       "certificates only");
}

PNormValue lower_modulus(const OperatorExpr& a) {
  const PrimeContext ctx = a.context();
  if (const auto* mo = a.as<MatrixOp>()) {
    if (sgn(determinant(mo->m)) == 0) return PNormValue::zero();
    return matrix_inverse(mo->m).max_entry_norm().inverse();
  }
  if (const auto* d = a.as<DiagonalOp>()) {
    PNormValue g = PNormValue::pow(0);
    bool first = true;
    for (uint32_t i : d->representative_indices()) {
      PNormValue e = pnorm(d->entry(i), ctx);
      g = first ? e : PNormValue::min(g, e);
      first = false;
    }
    return g;
  }
  if (const auto* s = a.as<ShiftedShiftOp>()) {
    ShiftFacts f = shift_facts(*s, ctx);
    if (s->shift == ShiftKind::left && f.lt_one) return PNormValue::zero();
    return f.abs_scale * PNormValue::max(PNormValue::one(), f.abs_lambda);
  }
  fail(Errc::unsupported_family, "no closed-form lower modulus for this operator");
}

FinSuppVector kernel_truncation_vector(PrimeContext ctx, const Rat& lambda, long m) {
  FinSuppVector x(ctx, Ambient::c0());
  Rat pw(1);
  for (long i = 0; i <= m; ++i) {
    x.set(static_cast<uint32_t>(i), pw);
    pw *= lambda;
  }
  return x;
}

namespace {

// Solve (S - lambda) x = y by the discounted-future sum x_i = sum_k lambda^k
// y_{i+k+1}; a total left inverse of norm 1 for |lambda| <= 1.
FinSuppVector right_shift_series(const Rat& lambda, const FinSuppVector& y) {
  FinSuppVector x(y.context(), Ambient::c0());
  if (y.is_zero()) return x;
  uint32_t top = y.max_index();
  std::vector<Rat> pows(top, Rat(1));
  for (uint32_t t = 1; t < top; ++t) pows[t] = pows[t - 1] * lambda;
  for (uint32_t i = 0; i < top; ++i) {
    Rat acc(0);
    for (const auto& [j, v] : y.entries())
      if (j > i) acc += pows[j - i - 1] * v;
    x.set(i, acc);
  }
  return x;
}

// Solve (S - lambda) x = y by back substitution; requires the formal solution
// to terminate in support.
FinSuppVector right_shift_recursion(const Rat& lambda, const FinSuppVector& y) {
  FinSuppVector x(y.context(), Ambient::c0());
  if (y.is_zero()) return x;
  uint32_t top = y.max_index();
  Rat prev = -y.at(0) / lambda;
  for (uint32_t i = 0; i + 1 <= top; ++i) {
    x.set(i, prev);
    prev = (prev - y.at(i + 1)) / lambda;
  }
  if (sgn(prev) != 0)
    fail(Errc::nonterminating_recursion, "inverse image is not finitely supported");
  return x;
}

// Solve (T - lambda) x = y by the forward recursion x_{i+1} = lambda x_i + y_i
// from the given seed x_0; requires termination in support.
FinSuppVector left_shift_recursion(const Rat& lambda, const Rat& x0, const FinSuppVector& y) {
  FinSuppVector x(y.context(), Ambient::c0());
  if (y.is_zero() && sgn(x0) == 0) return x;
  uint32_t top = y.is_zero() ? 0 : y.max_index();
  Rat cur = x0;
  for (uint32_t i = 0; i <= top; ++i) {
    x.set(i, cur);
    cur = lambda * cur + y.at(i);
  }
  if (sgn(cur) != 0)
    fail(Errc::nonterminating_recursion, "inverse image is not finitely supported");
  return x;
}

// sum_j lambda^{-1-j} y_j: the unique seed making the forward recursion land
// in c_0 when |lambda| >= 1.
Rat canonical_seed(const Rat& lambda, const FinSuppVector& y) {
  Rat acc(0);
  Rat inv = Rat(1) / lambda;
  for (const auto& [j, v] : y.entries()) {
    Rat pw = inv;
    for (uint32_t t = 0; t < j; ++t) pw *= inv;
    acc += pw * v;
  }
  return acc;
}

}  // namespace

FinSuppVector apply_canonical_inverse(const OperatorExpr& a, Side side, const FinSuppVector& y) {
  const PrimeContext ctx = a.context();
  if (!(y.context() == ctx)) fail(Errc::context_mismatch, "vector over a different prime");
  if (!(y.ambient() == a.ambient())) fail(Errc::ambient_mismatch, "vector not in the operator's space");
  InvertibilityVerdict verdict = decide_invertibility(a, side);
  if (!verdict.invertible)
    fail(Errc::not_invertible_on_side,
         std::string("operator is not ") + side_name(side) + " invertible");
  if (const auto* mo = a.as<MatrixOp>()) return matrix_inverse(mo->m).apply(y);
  if (const auto* d = a.as<DiagonalOp>()) {
    FinSuppVector x(ctx, Ambient::c0());
    for (const auto& [i, v] : y.entries()) x.set(i, v / d->entry(i));
    return x;
  }
  const auto& s = std::get<ShiftedShiftOp>(a.node());
  ShiftFacts f = shift_facts(s, ctx);
  FinSuppVector yn = y.scaled(Rat(1) / s.scale);
  if (s.shift == ShiftKind::right) {
    if (f.gt_one) return right_shift_recursion(s.lambda, yn);
    return right_shift_series(s.lambda, yn);
  }
  if (f.abs_lambda.is_zero()) {
    // x = S y: the canonical solution of T x = y with x_0 = 0.
    FinSuppVector x(ctx, Ambient::c0());
    for (const auto& [i, v] : yn.entries()) x.set(i + 1, v);
    return x;
  }
  if (f.lt_one) return left_shift_recursion(s.lambda, Rat(0), yn);
  return left_shift_recursion(s.lambda, -canonical_seed(s.lambda, yn), yn);
}

NeumannMatrixResult neumann_inverse(const MaterializedMatrix& shifted, const MaterializedMatrix& c,
                                    int n_max) {
  MaterializedMatrix cl = matrix_inverse(shifted);
  PNormValue cl_norm = cl.max_entry_norm();
  PNormValue c_norm = c.max_entry_norm();
  if (!((c_norm * cl_norm) < PNormValue::one()))
    fail(Errc::contraction_failure, "||C|| ||C_l|| >= 1, the contraction series diverges");
  MaterializedMatrix ccl = c * cl;
  PNormValue ccl_norm = ccl.max_entry_norm();
  uint32_t n = shifted.dim();
  MaterializedMatrix i_plus = MaterializedMatrix::identity(shifted.context(), n) + ccl;
  MaterializedMatrix d = cl * matrix_inverse(i_plus);
  if (!(d * (shifted + c)).is_identity())
    fail(Errc::contraction_failure, "closed-form inverse verification failed");
  // Truncated series against the closed form: the tail of a geometric
  // ultrametric series is bounded by its first dropped term.
  MaterializedMatrix power = MaterializedMatrix::identity(shifted.context(), n);
  MaterializedMatrix partial(shifted.context(), n);
  PNormValue tail = cl_norm * ccl_norm;  // n = 0 bound
  for (int k = 0; k <= n_max; ++k) {
    if (k > 0) power = power * ccl.scaled(Rat(-1));
    partial = partial + power;
    MaterializedMatrix dn = cl * partial;
    tail = ccl_norm.is_zero() ? PNormValue::zero() : cl_norm * ccl_norm.pow_n(k + 1);
    if (!((dn - d).max_entry_norm() <= tail))
      fail(Errc::contraction_failure, "series truncation bound violated");
  }
  return NeumannMatrixResult{d, tail};
}

NeumannApplyResult neumann_apply(const OperatorExpr& shifted, const FinSuppVector& u,
                                 const Functional& phi, const FinSuppVector& y, int n_max) {
  InvertibilityVerdict v = decide_invertibility(shifted, Side::left);
  if (!v.invertible) fail(Errc::not_invertible_on_side, "operator is not left invertible");
  PNormValue cl_norm = *v.min_inverse_norm;
  PNormValue c_norm = phi.norm() * u.sup_norm();
  if (!((c_norm * cl_norm) < PNormValue::one()))
    fail(Errc::contraction_failure, "||C|| ||C_l|| >= 1, the contraction series diverges");
  FinSuppVector vk = y;
  FinSuppVector acc(y.context(), y.ambient());
  for (int k = 0; k <= n_max; ++k) {
    FinSuppVector clvk = apply_canonical_inverse(shifted, Side::left, vk);
    acc = acc + clvk;
    if (k < n_max) vk = u.scaled(-apply_functional(phi, clvk).value);
  }
  PNormValue contraction = c_norm * cl_norm;
  PNormValue tail = contraction.is_zero()
                        ? PNormValue::zero()
                        : cl_norm * contraction.pow_n(n_max + 1) * y.sup_norm();
  return NeumannApplyResult{acc, tail};
}

}  // namespace padspec

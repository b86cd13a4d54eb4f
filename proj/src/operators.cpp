// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "padspec/operators.hpp"

#include <algorithm>

namespace padspec {

namespace {

void check_context(const OperatorExpr& a, const PrimeContext& ctx) {
  if (!(a.context() == ctx)) fail(Errc::context_mismatch, "operators over different primes");
}

PNormValue shift_column_norm(const ShiftedShiftOp& s, const PrimeContext& ctx) {
  // Generic column scale*(e_{j+1} - lambda e_j) resp. scale*(e_{j-1} - lambda e_j).
  return pnorm(s.scale, ctx) * PNormValue::max(PNormValue::one(), pnorm(s.lambda, ctx));
}

}  // namespace

MaterializedMatrix MaterializedMatrix::identity(PrimeContext ctx, uint32_t n) {
  MaterializedMatrix m(ctx, n);
  for (uint32_t i = 0; i < n; ++i) m.set(i, i, Rat(1));
  return m;
}

MaterializedMatrix MaterializedMatrix::operator+(const MaterializedMatrix& o) const {
  if (!(ctx_ == o.ctx_)) fail(Errc::context_mismatch, "matrix contexts differ");
  if (n_ != o.n_) fail(Errc::ambient_mismatch, "matrix dimensions differ");
  MaterializedMatrix r = *this;
  for (size_t k = 0; k < a_.size(); ++k) r.a_[k] += o.a_[k];
  return r;
}

MaterializedMatrix MaterializedMatrix::operator-(const MaterializedMatrix& o) const {
  return *this + o.scaled(Rat(-1));
}

MaterializedMatrix MaterializedMatrix::operator*(const MaterializedMatrix& o) const {
  if (!(ctx_ == o.ctx_)) fail(Errc::context_mismatch, "matrix contexts differ");
  if (n_ != o.n_) fail(Errc::ambient_mismatch, "matrix dimensions differ");
  MaterializedMatrix r(ctx_, n_);
  for (uint32_t i = 0; i < n_; ++i)
    for (uint32_t k = 0; k < n_; ++k) {
      const Rat& aik = at(i, k);
      if (sgn(aik) == 0) continue;
      for (uint32_t j = 0; j < n_; ++j) r.set(i, j, r.at(i, j) + aik * o.at(k, j));
    }
  return r;
}

MaterializedMatrix MaterializedMatrix::scaled(const Rat& c) const {
  MaterializedMatrix r = *this;
  for (auto& v : r.a_) v *= c;
  return r;
}

MaterializedMatrix MaterializedMatrix::transpose() const {
  MaterializedMatrix r(ctx_, n_);
  for (uint32_t i = 0; i < n_; ++i)
    for (uint32_t j = 0; j < n_; ++j) r.set(j, i, at(i, j));
  return r;
}

FinSuppVector MaterializedMatrix::apply(const FinSuppVector& x) const {
  if (!(x.context() == ctx_)) fail(Errc::context_mismatch, "matrix/vector contexts differ");
  if (!(x.ambient() == Ambient::kn(n_))) fail(Errc::ambient_mismatch, "vector not in K^n");
  FinSuppVector y(ctx_, Ambient::kn(n_));
  for (uint32_t i = 0; i < n_; ++i) {
    Rat acc(0);
    for (const auto& [j, v] : x.entries()) acc += at(i, j) * v;
    y.set(i, acc);
  }
  return y;
}

PNormValue MaterializedMatrix::max_entry_norm() const {
  PNormValue n = PNormValue::zero();
  for (const auto& v : a_) n = PNormValue::max(n, pnorm(v, ctx_));
  return n;
}

bool MaterializedMatrix::is_identity() const { return *this == identity(ctx_, n_); }

std::vector<uint32_t> DiagonalOp::representative_indices() const {
  std::vector<uint32_t> idx(prefix.size());
  for (uint32_t i = 0; i < prefix.size(); ++i) idx[i] = i;
  idx.push_back(static_cast<uint32_t>(prefix.size()));  // first tail index
  return idx;
}

OperatorExpr make_matrix(PrimeContext ctx, const MaterializedMatrix& m) {
  if (!(m.context() == ctx)) fail(Errc::context_mismatch, "matrix context differs");
  return OperatorExpr(ctx, Ambient::kn(m.dim()), MatrixOp{m});
}

OperatorExpr make_matrix(PrimeContext ctx, const std::vector<std::vector<Rat>>& rows) {
  uint32_t n = static_cast<uint32_t>(rows.size());
  if (n == 0) fail(Errc::schema, "empty matrix");
  MaterializedMatrix m(ctx, n);
  for (uint32_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) fail(Errc::schema, "matrix is not square");
    for (uint32_t j = 0; j < n; ++j) m.set(i, j, rows[i][j]);
  }
  return make_matrix(ctx, m);
}

OperatorExpr make_diagonal(PrimeContext ctx, std::vector<Rat> prefix, Rat tail) {
  // Trim prefix entries equal to the tail so equal operators share one form.
  while (!prefix.empty() && prefix.back() == tail) prefix.pop_back();
  return OperatorExpr(ctx, Ambient::c0(), DiagonalOp{std::move(prefix), std::move(tail)});
}

OperatorExpr make_right_shift(PrimeContext ctx) {
  return OperatorExpr(ctx, Ambient::c0(), ShiftedShiftOp{ShiftKind::right, Rat(0), Rat(1)});
}

OperatorExpr make_left_shift(PrimeContext ctx) {
  return OperatorExpr(ctx, Ambient::c0(), ShiftedShiftOp{ShiftKind::left, Rat(0), Rat(1)});
}

OperatorExpr shift_by_lambda(const OperatorExpr& a, const Rat& lambda) {
  const PrimeContext ctx = a.context();
  if (const auto* m = a.as<MatrixOp>()) {
    MaterializedMatrix r = m->m - MaterializedMatrix::identity(ctx, m->m.dim()).scaled(lambda);
    return make_matrix(ctx, r);
  }
  if (const auto* d = a.as<DiagonalOp>()) {
    std::vector<Rat> prefix = d->prefix;
    for (auto& v : prefix) v -= lambda;
    return make_diagonal(ctx, std::move(prefix), d->tail - lambda);
  }
  if (const auto* s = a.as<ShiftedShiftOp>()) {
    // scale*(shift - l0) - mu = scale*(shift - (l0 + mu/scale))
    return OperatorExpr(ctx, Ambient::c0(),
                        ShiftedShiftOp{s->shift, s->lambda + lambda / s->scale, s->scale});
  }
  const auto& r = std::get<RankOneOp>(a.node());
  RankOneOp node{std::make_shared<OperatorExpr>(shift_by_lambda(*r.inner, lambda)), r.u, r.phi};
  return OperatorExpr(ctx, a.ambient(), std::move(node));
}

OperatorExpr affine(const OperatorExpr& a, const Rat& alpha, const Rat& beta) {
  if (sgn(beta) == 0) fail(Errc::zero_beta, "affine image needs beta != 0");
  const PrimeContext ctx = a.context();
  if (const auto* m = a.as<MatrixOp>()) {
    MaterializedMatrix r =
        m->m.scaled(beta) + MaterializedMatrix::identity(ctx, m->m.dim()).scaled(alpha);
    return make_matrix(ctx, r);
  }
  if (const auto* d = a.as<DiagonalOp>()) {
    std::vector<Rat> prefix = d->prefix;
    for (auto& v : prefix) v = beta * v + alpha;
    return make_diagonal(ctx, std::move(prefix), beta * d->tail + alpha);
  }
  if (const auto* s = a.as<ShiftedShiftOp>()) {
    // beta*scale*(shift - l0) + alpha = (beta*scale)*(shift - (l0 - alpha/(beta*scale)))
    Rat scale = beta * s->scale;
    return OperatorExpr(ctx, Ambient::c0(),
                        ShiftedShiftOp{s->shift, s->lambda - alpha / scale, scale});
  }
  const auto& r = std::get<RankOneOp>(a.node());
  RankOneOp node{std::make_shared<OperatorExpr>(affine(*r.inner, alpha, beta)),
                 r.u.scaled(beta), r.phi};
  return OperatorExpr(ctx, a.ambient(), std::move(node));
}

OperatorExpr add_rank_one(const OperatorExpr& a, const FinSuppVector& u, const Functional& phi) {
  const PrimeContext ctx = a.context();
  if (!(u.context() == ctx) || !(phi.context() == ctx))
    fail(Errc::context_mismatch, "rank-one data over a different prime");
  if (!(u.ambient() == a.ambient())) fail(Errc::ambient_mismatch, "rank-one vector not in the operator's space");
  if (const auto* m = a.as<MatrixOp>()) {
    uint32_t n = m->m.dim();
    for (const auto& [j, c] : phi.coefficients()) {
      (void)c;
      if (j >= n) fail(Errc::ambient_mismatch, "functional support outside K^n");
    }
    MaterializedMatrix r = m->m;
    for (const auto& [i, ui] : u.entries())
      for (const auto& [j, cj] : phi.coefficients()) r.set(i, j, r.at(i, j) + ui * cj);
    return make_matrix(ctx, r);
  }
  RankOneOp node{std::make_shared<OperatorExpr>(a), u, phi};
  return OperatorExpr(ctx, a.ambient(), std::move(node));
}

FinSuppVector apply(const OperatorExpr& a, const FinSuppVector& x) {
  check_context(a, x.context());
  if (!(x.ambient() == a.ambient())) fail(Errc::ambient_mismatch, "vector not in the operator's space");
  if (const auto* m = a.as<MatrixOp>()) return m->m.apply(x);
  if (const auto* d = a.as<DiagonalOp>()) {
    FinSuppVector y(x.context(), x.ambient());
    for (const auto& [i, v] : x.entries()) y.set(i, d->entry(i) * v);
    return y;
  }
  if (const auto* s = a.as<ShiftedShiftOp>()) {
    FinSuppVector y(x.context(), x.ambient());
    for (const auto& [i, v] : x.entries()) {
      if (s->shift == ShiftKind::right) {
        y.set(i + 1, y.at(i + 1) + s->scale * v);
      } else if (i > 0) {
        y.set(i - 1, y.at(i - 1) + s->scale * v);
      }
      y.set(i, y.at(i) - s->scale * s->lambda * v);
    }
    return y;
  }
  const auto& r = std::get<RankOneOp>(a.node());
  FinSuppVector y = apply(*r.inner, x);
  return y + r.u.scaled(apply_functional(r.phi, x).value);
}

FinSuppVector column(const OperatorExpr& a, uint32_t j) {
  return apply(a, FinSuppVector::basis(a.context(), a.ambient(), j));
}

PNormValue norm_excluding_columns(const OperatorExpr& a, const std::set<uint32_t>& excluded) {
  const PrimeContext& ctx = a.context();
  if (const auto* m = a.as<MatrixOp>()) {
    PNormValue n = PNormValue::zero();
    for (uint32_t j = 0; j < m->m.dim(); ++j) {
      if (excluded.count(j)) continue;
      for (uint32_t i = 0; i < m->m.dim(); ++i) n = PNormValue::max(n, pnorm(m->m.at(i, j), ctx));
    }
    return n;
  }
  if (const auto* d = a.as<DiagonalOp>()) {
    PNormValue n = PNormValue::zero();
    for (uint32_t i = 0; i < d->prefix.size(); ++i)
      if (!excluded.count(i)) n = PNormValue::max(n, pnorm(d->prefix[i], ctx));
    // Finitely many exclusions never cover the constant tail.
    n = PNormValue::max(n, pnorm(d->tail, ctx));
    return n;
  }
  if (const auto* s = a.as<ShiftedShiftOp>()) return shift_column_norm(*s, ctx);
  const auto& r = std::get<RankOneOp>(a.node());
  std::set<uint32_t> inner_excluded = excluded;
  PNormValue n = PNormValue::zero();
  for (const auto& [j, c] : r.phi.coefficients()) {
    (void)c;
    if (!excluded.count(j)) n = PNormValue::max(n, column(a, j).sup_norm());
    inner_excluded.insert(j);
  }
  return PNormValue::max(n, norm_excluding_columns(*r.inner, inner_excluded));
}

OpNorm op_norm(const OperatorExpr& a) { return OpNorm{norm_excluding_columns(a, {}), true}; }

MaterializedMatrix materialize_matrix(const OperatorExpr& a) {
  if (const auto* m = a.as<MatrixOp>()) return m->m;
  fail(Errc::not_finite_dimensional, "operator does not act on K^n");
}

bool is_scalar_operator(const OperatorExpr& a) {
  if (const auto* m = a.as<MatrixOp>()) {
    for (uint32_t i = 0; i < m->m.dim(); ++i)
      for (uint32_t j = 0; j < m->m.dim(); ++j) {
        if (i == j ? (m->m.at(i, i) != m->m.at(0, 0)) : sgn(m->m.at(i, j)) != 0) return false;
      }
    return true;
  }
  if (const auto* d = a.as<DiagonalOp>()) {
    // Constructors trim prefix entries equal to the tail.
    return d->prefix.empty();
  }
  return false;
}

}  // namespace padspec

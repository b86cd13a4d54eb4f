// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <set>
#include <variant>
#include <vector>

#include "padspec/vectors.hpp"

namespace padspec {

class OperatorExpr;

// Exact dense square matrix over Q, the finite-dimensional workhorse.
class MaterializedMatrix {
 public:
  MaterializedMatrix(PrimeContext ctx, uint32_t n)
      : n_(n), a_(static_cast<size_t>(n) * n, Rat(0)), ctx_(ctx) {}
  static MaterializedMatrix identity(PrimeContext ctx, uint32_t n);

  uint32_t dim() const { return n_; }
  const PrimeContext& context() const { return ctx_; }
  const Rat& at(uint32_t i, uint32_t j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  void set(uint32_t i, uint32_t j, const Rat& v) {
    Rat& cell = a_[static_cast<size_t>(i) * n_ + j];
    cell = v;
    cell.canonicalize();
  }

  MaterializedMatrix operator+(const MaterializedMatrix& o) const;
  MaterializedMatrix operator-(const MaterializedMatrix& o) const;
  MaterializedMatrix operator*(const MaterializedMatrix& o) const;
  MaterializedMatrix scaled(const Rat& c) const;
  MaterializedMatrix transpose() const;
  FinSuppVector apply(const FinSuppVector& x) const;

  PNormValue max_entry_norm() const;
  bool is_identity() const;
  bool operator==(const MaterializedMatrix&) const = default;

 private:
  uint32_t n_;
  std::vector<Rat> a_;
  PrimeContext ctx_;
};

struct MatrixOp {
  MaterializedMatrix m;
};

// Diagonal on c_0 with eventually-constant entries: d_i = prefix[i] for
// i < prefix.size(), tail afterwards. Keeps sup/inf over all entries finite
// computations.
struct DiagonalOp {
  std::vector<Rat> prefix;
  Rat tail;

  Rat entry(uint32_t i) const { return i < prefix.size() ? prefix[i] : tail; }
  // First index per distinct entry value, prefix positions then one tail index.
  std::vector<uint32_t> representative_indices() const;
};

enum class ShiftKind { right, left };

// scale * (shift - lambda*I) on c_0. Bare shifts are lambda = 0, scale = 1;
// shifted and affine images of shifts fold into this form at construction.
struct ShiftedShiftOp {
  ShiftKind shift;
  Rat lambda;
  Rat scale;
};

struct RankOneOp {
  std::shared_ptr<const OperatorExpr> inner;
  FinSuppVector u;   // update is y -> inner(y) + phi(y) * u
  Functional phi;
};

// Symbolic operator, normalized at construction: Shifted/Affine over Matrix or
// Diagonal fold entrywise, over shifts they fold into ShiftedShiftOp, and
// rank-one updates in K^n fold into the matrix.
class OperatorExpr {
 public:
  using Node = std::variant<MatrixOp, DiagonalOp, ShiftedShiftOp, RankOneOp>;

  OperatorExpr(PrimeContext ctx, Ambient ambient, Node node)
      : ctx_(ctx), ambient_(ambient), node_(std::move(node)) {}

  const PrimeContext& context() const { return ctx_; }
  const Ambient& ambient() const { return ambient_; }
  const Node& node() const { return node_; }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }

 private:
  PrimeContext ctx_;
  Ambient ambient_;
  Node node_;
};

OperatorExpr make_matrix(PrimeContext ctx, const MaterializedMatrix& m);
OperatorExpr make_matrix(PrimeContext ctx, const std::vector<std::vector<Rat>>& rows);
OperatorExpr make_diagonal(PrimeContext ctx, std::vector<Rat> prefix, Rat tail);
OperatorExpr make_right_shift(PrimeContext ctx);
OperatorExpr make_left_shift(PrimeContext ctx);

// A - lambda*I
OperatorExpr shift_by_lambda(const OperatorExpr& a, const Rat& lambda);
// beta*A + alpha*I, beta != 0
OperatorExpr affine(const OperatorExpr& a, const Rat& alpha, const Rat& beta);
// A + C with C y = phi(y) * u
OperatorExpr add_rank_one(const OperatorExpr& a, const FinSuppVector& u, const Functional& phi);

FinSuppVector apply(const OperatorExpr& a, const FinSuppVector& x);

// Column A e_j; every catalog form maps basis vectors to finitely supported
// vectors.
FinSuppVector column(const OperatorExpr& a, uint32_t j);

struct OpNorm {
  PNormValue value;
  bool exact;
};

// Exact operator norm. Under the sup norm the operator norm is the sup of
// column norms, which is a finite computation for every catalog form: rank-one
// updates touch finitely many columns and the untouched columns have a closed
// form. The `exact` flag is part of the contract; in this catalog it is always
// true.
OpNorm op_norm(const OperatorExpr& a);

// Sup of column norms over columns outside `excluded`.
PNormValue norm_excluding_columns(const OperatorExpr& a, const std::set<uint32_t>& excluded);

MaterializedMatrix materialize_matrix(const OperatorExpr& a);

// A = c*I for some scalar c (only Matrix/Diagonal can be scalar).
bool is_scalar_operator(const OperatorExpr& a);

}  // namespace padspec

// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "padspec/operators.hpp"

using namespace padspec;

namespace {

Rat q(long num, unsigned long den = 1) {
  Rat r{Int(num), Int(den)};
  r.canonicalize();
  return r;
}

FinSuppVector vec(PrimeContext ctx, Ambient amb,
                  std::initializer_list<std::pair<uint32_t, Rat>> entries) {
  FinSuppVector v(ctx, amb);
  for (const auto& [i, value] : entries) v.set(i, value);
  return v;
}

Rat random_entry(std::mt19937_64& g, unsigned long p) {
  if (g() % 4 == 0) return Rat(0);
  long u = 1 + static_cast<long>(g() % (p - 1 ? p - 1 : 1));
  long v = static_cast<long>(g() % 5) - 2;
  Rat val(u);
  for (long k = 0; k < (v >= 0 ? v : -v); ++k) {
    if (v >= 0)
      val *= Rat(p);
    else
      val /= Rat(p);
  }
  return val;
}

FinSuppVector random_vec(std::mt19937_64& g, PrimeContext ctx, Ambient amb, uint32_t max_index) {
  FinSuppVector v(ctx, amb);
  uint32_t supp = 1 + g() % 4;
  for (uint32_t k = 0; k < supp; ++k)
    v.set(static_cast<uint32_t>(g() % (max_index + 1)), random_entry(g, ctx.p));
  return v;
}

}  // namespace

TEST_CASE("apply on the catalog forms") {
  PrimeContext p5(5);
  OperatorExpr s = make_right_shift(p5);
  OperatorExpr t = make_left_shift(p5);
  FinSuppVector e0 = FinSuppVector::basis(p5, Ambient::c0(), 0);

  CHECK(apply(s, e0) == FinSuppVector::basis(p5, Ambient::c0(), 1));
  CHECK(apply(t, e0).is_zero());

  OperatorExpr d = make_diagonal(p5, {q(2)}, q(3));
  FinSuppVector x = vec(p5, Ambient::c0(), {{0, q(1)}, {5, q(1)}});
  CHECK(apply(d, x) == vec(p5, Ambient::c0(), {{0, q(2)}, {5, q(3)}}));
}

TEST_CASE("operator norms on the catalog forms") {
  PrimeContext p5(5);
  OpNorm n1 = op_norm(make_matrix(p5, {{q(1), q(1, 5)}, {q(0), q(2)}}));
  CHECK(n1.value == PNormValue::pow(1));
  CHECK(n1.exact);

  OpNorm n2 = op_norm(shift_by_lambda(make_right_shift(p5), q(5)));
  CHECK(n2.value == PNormValue::pow(0));

  // A zero rank-one update leaves the norm of the inner operator.
  OperatorExpr inner = make_diagonal(p5, {q(1)}, q(5));
  OperatorExpr r = add_rank_one(inner, FinSuppVector(p5, Ambient::c0()), Functional(p5));
  CHECK(op_norm(r).value == op_norm(inner).value);
}

TEST_CASE("rank-one updates can cancel columns; the norm stays exact") {
  PrimeContext p5(5);
  // Diagonal(5, tail 1) minus 5*e_0 on column 0 leaves sup over the tail only.
  OperatorExpr d = make_diagonal(p5, {q(1, 5)}, q(1));
  FinSuppVector u = vec(p5, Ambient::c0(), {{0, q(-1, 5)}});
  Functional phi(p5);
  phi.set(0, q(1));
  OperatorExpr updated = add_rank_one(d, u, phi);
  CHECK(op_norm(d).value == PNormValue::pow(1));
  CHECK(op_norm(updated).value == PNormValue::pow(0));  // column 0 cancels to zero
  CHECK(apply(updated, FinSuppVector::basis(p5, Ambient::c0(), 0)).is_zero());
}

TEST_CASE("materialization folds constructors entrywise") {
  PrimeContext p5(5);
  OperatorExpr m = make_matrix(p5, {{q(1), q(0)}, {q(0), q(2)}});
  CHECK(materialize_matrix(m) == materialize_matrix(m));

  OperatorExpr shifted = shift_by_lambda(m, q(1));
  MaterializedMatrix want(p5, 2);
  want.set(1, 1, q(1));
  CHECK(materialize_matrix(shifted) == want);

  // Rank-one over the zero matrix is the outer product u phi^T.
  MaterializedMatrix zero(p5, 2);
  FinSuppVector u = vec(p5, Ambient::kn(2), {{0, q(1)}});
  Functional phi(p5);
  phi.set(1, q(1));
  OperatorExpr r = add_rank_one(make_matrix(p5, zero), u, phi);
  MaterializedMatrix outer(p5, 2);
  outer.set(0, 1, q(1));
  CHECK(materialize_matrix(r) == outer);

  Functional phi0(p5);
  phi0.set(0, q(1));
  MaterializedMatrix corner(p5, 2);
  corner.set(0, 0, q(1));
  CHECK(materialize_matrix(add_rank_one(make_matrix(p5, zero), u, phi0)) == corner);

  CHECK_THROWS_AS(materialize_matrix(make_right_shift(p5)), Error);
}

TEST_CASE("constructor folding identities") {
  PrimeContext p5(5);
  OperatorExpr d = shift_by_lambda(make_diagonal(p5, {q(1)}, q(2)), q(1));
  const auto* dd = d.as<DiagonalOp>();
  REQUIRE(dd != nullptr);
  CHECK(dd->prefix == std::vector<Rat>{q(0)});
  CHECK(dd->tail == q(1));

  // Identity affine map returns the same operator.
  OperatorExpr s = affine(make_right_shift(p5), q(0), q(1));
  const auto* ss = s.as<ShiftedShiftOp>();
  REQUIRE(ss != nullptr);
  CHECK(ss->scale == q(1));
  CHECK(sgn(ss->lambda) == 0);

  CHECK_THROWS_AS(affine(make_right_shift(p5), q(1), q(0)), Error);
}

TEST_CASE("folded constructors agree with their defining actions") {
  std::mt19937_64 g(17);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    PrimeContext ctx(p);
    for (int i = 0; i < 400; ++i) {
      OperatorExpr base = (g() % 2) ? make_right_shift(ctx) : make_left_shift(ctx);
      if (g() % 3 == 0) {
        std::vector<Rat> prefix;
        for (uint32_t k = 0; k < g() % 3; ++k) prefix.push_back(random_entry(g, p));
        base = make_diagonal(ctx, prefix, random_entry(g, p));
      }
      Rat lambda = random_entry(g, p), alpha = random_entry(g, p);
      Rat beta = random_entry(g, p);
      if (sgn(beta) == 0) beta = q(1);
      FinSuppVector x = random_vec(g, ctx, Ambient::c0(), 8);

      CHECK(apply(shift_by_lambda(base, lambda), x) == apply(base, x) - x.scaled(lambda));
      CHECK(apply(affine(base, alpha, beta), x) == apply(base, x).scaled(beta) + x.scaled(alpha));

      FinSuppVector u = random_vec(g, ctx, Ambient::c0(), 6);
      Functional phi(ctx);
      phi.set(static_cast<uint32_t>(g() % 6), q(1 + g() % 3));
      FinSuppVector want = apply(base, x) + u.scaled(apply_functional(phi, x).value);
      CHECK(apply(add_rank_one(base, u, phi), x) == want);
    }
  }
}

TEST_CASE("matrix folding of shifted, affine and rank-one chains") {
  std::mt19937_64 g(19);
  PrimeContext p3(3);
  for (int i = 0; i < 300; ++i) {
    uint32_t n = 2 + g() % 3;
    MaterializedMatrix m(p3, n);
    for (uint32_t r = 0; r < n; ++r)
      for (uint32_t c = 0; c < n; ++c) m.set(r, c, random_entry(g, 3));
    OperatorExpr a = make_matrix(p3, m);
    Rat lambda = random_entry(g, 3);
    FinSuppVector x = random_vec(g, p3, Ambient::kn(n), n - 1);
    CHECK(apply(shift_by_lambda(a, lambda), x) == apply(a, x) - x.scaled(lambda));
    CHECK(shift_by_lambda(a, lambda).as<MatrixOp>() != nullptr);
  }
}

TEST_CASE("operator norm bounds every ratio and some basis vector attains it") {
  std::mt19937_64 g(29);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    PrimeContext ctx(p);
    for (int i = 0; i < 100; ++i) {
      uint32_t n = 2 + g() % 3;
      MaterializedMatrix m(ctx, n);
      for (uint32_t r = 0; r < n; ++r)
        for (uint32_t c = 0; c < n; ++c) m.set(r, c, random_entry(g, p));
      OperatorExpr a = make_matrix(ctx, m);
      PNormValue norm = op_norm(a).value;

      PNormValue attained = PNormValue::zero();
      for (uint32_t j = 0; j < n; ++j)
        attained = PNormValue::max(attained, column(a, j).sup_norm());
      CHECK(attained == norm);

      for (int t = 0; t < 10; ++t) {
        FinSuppVector x = random_vec(g, ctx, Ambient::kn(n), n - 1);
        CHECK(apply(a, x).sup_norm() <= norm * x.sup_norm());
      }
    }
  }
}

TEST_CASE("matrix norm equals the max entry norm against ratio sampling") {
  std::mt19937_64 g(31);
  PrimeContext p5(5);
  MaterializedMatrix m(p5, 3);
  for (uint32_t r = 0; r < 3; ++r)
    for (uint32_t c = 0; c < 3; ++c) m.set(r, c, random_entry(g, 5));
  m.set(1, 2, q(1, 25));  // make the max entry unambiguous
  OperatorExpr a = make_matrix(p5, m);

  PNormValue entry_max = PNormValue::zero();
  for (uint32_t r = 0; r < 3; ++r)
    for (uint32_t c = 0; c < 3; ++c) entry_max = PNormValue::max(entry_max, pnorm(m.at(r, c), p5));
  CHECK(op_norm(a).value == entry_max);

  bool attained = false;
  for (int t = 0; t < 1000; ++t) {
    FinSuppVector x = random_vec(g, p5, Ambient::kn(3), 2);
    if (x.is_zero()) continue;
    PNormValue ratio_bound = entry_max * x.sup_norm();
    PNormValue image = apply(a, x).sup_norm();
    CHECK(image <= ratio_bound);
    if (image == ratio_bound) attained = true;
  }
  for (uint32_t j = 0; j < 3; ++j)
    if (column(a, j).sup_norm() == entry_max) attained = true;
  CHECK(attained);
}

TEST_CASE("rank-one update norms agree with finite matrix truncations") {
  // Oracle: past the supports of u, phi and the prefix, every column is the
  // constant tail (or a plain shift column), so the sup of column norms is
  // reached inside a large enough truncation.
  std::mt19937_64 g(41);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    PrimeContext ctx(p);
    for (int i = 0; i < 300; ++i) {
      OperatorExpr base = [&]() -> OperatorExpr {
        if (g() % 2) {
          std::vector<Rat> prefix;
          for (uint32_t k = 0; k < g() % 4; ++k) prefix.push_back(random_entry(g, p));
          return make_diagonal(ctx, prefix, random_entry(g, p));
        }
        return shift_by_lambda(g() % 2 ? make_right_shift(ctx) : make_left_shift(ctx),
                               random_entry(g, p));
      }();
      FinSuppVector u = random_vec(g, ctx, Ambient::c0(), 5);
      Functional phi(ctx);
      for (uint32_t k = 0; k < 1 + g() % 3; ++k)
        phi.set(static_cast<uint32_t>(g() % 6), random_entry(g, p, 0));
      OperatorExpr a = add_rank_one(base, u, phi);
      if (g() % 3 == 0) a = add_rank_one(a, random_vec(g, ctx, Ambient::c0(), 4), phi);

      PNormValue truncated = PNormValue::zero();
      for (uint32_t j = 0; j < 12; ++j)
        truncated = PNormValue::max(truncated, column(a, j).sup_norm());
      CHECK(op_norm(a).value == truncated);
    }
  }
}

TEST_CASE("diagonal and shift operator norms are attained on basis vectors") {
  std::mt19937_64 g(37);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    PrimeContext ctx(p);
    for (int i = 0; i < 200; ++i) {
      OperatorExpr a = [&]() -> OperatorExpr {
        if (g() % 2) {
          std::vector<Rat> prefix;
          for (uint32_t k = 0; k < g() % 4; ++k) prefix.push_back(random_entry(g, p));
          return make_diagonal(ctx, prefix, random_entry(g, p));
        }
        OperatorExpr base = g() % 2 ? make_right_shift(ctx) : make_left_shift(ctx);
        return shift_by_lambda(base, random_entry(g, p));
      }();
      PNormValue norm = op_norm(a).value;
      bool attained = norm.is_zero();
      uint32_t search = 6;
      if (const auto* d = a.as<DiagonalOp>())
        search = static_cast<uint32_t>(d->prefix.size()) + 2;
      for (uint32_t j = 0; j < search && !attained; ++j)
        attained = column(a, j).sup_norm() == norm;
      CHECK(attained);
    }
  }
}

TEST_CASE("context and ambient mismatches are rejected") {
  PrimeContext p5(5), p3(3);
  OperatorExpr s = make_right_shift(p5);
  CHECK_THROWS_AS(apply(s, FinSuppVector(p3, Ambient::c0())), Error);
  CHECK_THROWS_AS(apply(s, FinSuppVector(p5, Ambient::kn(2))), Error);
  FinSuppVector u(p5, Ambient::kn(2));
  Functional phi(p5);
  CHECK_THROWS_AS(add_rank_one(s, u, phi), Error);
}

TEST_CASE("scalar operators are recognized") {
  PrimeContext p5(5);
  CHECK(is_scalar_operator(make_diagonal(p5, {}, q(3))));
  CHECK(is_scalar_operator(make_diagonal(p5, {q(3)}, q(3))));
  CHECK(!is_scalar_operator(make_diagonal(p5, {q(1)}, q(3))));
  CHECK(is_scalar_operator(make_matrix(p5, {{q(2), q(0)}, {q(0), q(2)}})));
  CHECK(!is_scalar_operator(make_matrix(p5, {{q(2), q(1)}, {q(0), q(2)}})));
  CHECK(!is_scalar_operator(make_right_shift(p5)));
}

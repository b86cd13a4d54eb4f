// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "padspec/spectra.hpp"

using namespace padspec;

namespace {

Rat q(long num, unsigned long den = 1) {
  Rat r{Int(num), Int(den)};
  r.canonicalize();
  return r;
}

Rat random_entry(std::mt19937_64& g, unsigned long p, int zero_in = 4) {
  if (zero_in > 0 && g() % zero_in == 0) return Rat(0);
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

OperatorExpr random_operator(std::mt19937_64& g, PrimeContext ctx) {
  switch (g() % 4) {
    case 0:
    case 1: {
      uint32_t n = 1 + g() % 3;
      std::vector<std::vector<Rat>> rows(n, std::vector<Rat>(n));
      for (auto& row : rows)
        for (auto& cell : row) cell = random_entry(g, ctx.p);
      return make_matrix(ctx, rows);
    }
    case 2: {
      std::vector<Rat> prefix;
      for (uint32_t k = 0; k < g() % 3; ++k) prefix.push_back(random_entry(g, ctx.p));
      return make_diagonal(ctx, prefix, random_entry(g, ctx.p));
    }
    default:
      return g() % 2 ? make_right_shift(ctx) : make_left_shift(ctx);
  }
}

bool member_of(const OperatorExpr& a, const Rat& lambda, const std::optional<Rat>& eps, Side side,
               SpectralKind kind) {
  if (kind == SpectralKind::spectrum) return in_spectrum(a, lambda, side);
  if (kind == SpectralKind::pseudospectrum) return in_pseudospectrum(a, lambda, *eps, side);
  return in_condition_pseudospectrum(a, lambda, *eps, side);
}

}  // namespace

TEST_CASE("spectrum membership examples") {
  PrimeContext p5(5);
  OperatorExpr nilpotent = make_matrix(p5, {{q(0), q(1)}, {q(0), q(0)}});
  CHECK(in_spectrum(nilpotent, q(0), Side::left));

  OperatorExpr s = make_right_shift(p5);
  CHECK(!in_spectrum(s, q(0), Side::left));
  CHECK(in_spectrum(s, q(0), Side::right));

  OperatorExpr d = make_diagonal(p5, {q(1)}, q(2));
  for (Side side : {Side::left, Side::right, Side::two_sided}) CHECK(in_spectrum(d, q(2), side));
}

TEST_CASE("pseudospectrum membership for scalar matrices is the |1 - lambda| < epsilon ball") {
  PrimeContext p5(5);
  OperatorExpr eye = make_matrix(p5, {{q(1), q(0)}, {q(0), q(1)}});

  struct Case {
    Rat lambda, eps;
    bool want;
  };
  // |1 - lambda| < eps exactly decides membership.
  const Case cases[] = {
      {q(6), q(1), true},        // |1-6| = 1/5 < 1
      {q(6), q(1, 5), false},    // 1/5 is not strictly below 1/5
      {q(26), q(1, 5), true},    // |1-26| = 1/25
      {q(2), q(1, 2), false},    // |1-2| = 1
      {q(2), q(2), true},        // 1 < 2
  };
  for (const auto& c : cases) {
    CHECK(in_pseudospectrum(eye, c.lambda, c.eps, Side::left) == c.want);

    // Cross-check by rank-one perturbation search: a singularizing C of norm
    // below epsilon exists iff lambda is a member.
    MaterializedMatrix perturb(p5, 2);
    perturb.set(0, 0, c.lambda - q(1));
    MaterializedMatrix shifted_pert =
        materialize_matrix(eye) + perturb -
        MaterializedMatrix::identity(p5, 2).scaled(c.lambda);
    CHECK(sgn(determinant(shifted_pert)) == 0);
    bool below = norm_compare(perturb.max_entry_norm(), c.eps, p5) == std::strong_ordering::less;
    CHECK(below == c.want);
  }

  // Negative direction: no sampled perturbation below epsilon singularizes a
  // non-member point.
  std::mt19937_64 g(101);
  MaterializedMatrix base = materialize_matrix(eye);
  for (int t = 0; t < 1000; ++t) {
    MaterializedMatrix c(p5, 2);
    for (uint32_t i = 0; i < 2; ++i)
      for (uint32_t j = 0; j < 2; ++j) {
        Rat e = random_entry(g, 5);
        // scale into norm < 1/5 strictly
        while (sgn(e) != 0 && !(norm_compare(pnorm(e, p5), q(1, 5), p5) == std::strong_ordering::less))
          e *= Rat(5);
        c.set(i, j, e);
      }
    MaterializedMatrix shifted_pert = base + c - MaterializedMatrix::identity(p5, 2).scaled(q(6));
    CHECK(sgn(determinant(shifted_pert)) != 0);
  }
}

TEST_CASE("shift pseudospectra: the engine's closed forms at sample points") {
  PrimeContext p5(5);
  OperatorExpr s = make_right_shift(p5);
  for (const Rat& lambda : {q(0), q(1), q(5), q(1, 5), q(6)}) {
    CHECK(!in_pseudospectrum(s, lambda, q(1, 5), Side::left));
    CHECK(!in_condition_pseudospectrum(s, lambda, q(1, 5), Side::left));
    CHECK(!in_condition_pseudospectrum(s, lambda, q(1), Side::left));
  }
  CHECK(in_pseudospectrum(s, q(5), q(1, 5), Side::right));  // |5| = 1/5 <= 1: spectral point
}

TEST_CASE("condition pseudospectrum membership examples") {
  PrimeContext p5(5);
  // A = lambda I exactly: the shifted operator is 0 and membership holds via
  // the spectrum branch.
  OperatorExpr scalar = make_diagonal(p5, {}, q(3));
  CHECK(in_condition_pseudospectrum(scalar, q(3), q(1, 125), Side::left));

  // Diagonal (1, 1/5, 1/5, ...): norm 5, inverse norm 1, condition number 5.
  OperatorExpr d = make_diagonal(p5, {q(1)}, q(1, 5));
  CHECK(in_condition_pseudospectrum(d, q(0), q(1), Side::left));
  CHECK(!in_condition_pseudospectrum(d, q(0), q(1, 25), Side::left));
}

TEST_CASE("distance to scalars") {
  PrimeContext p5(5);
  CHECK(distance_to_scalars(make_matrix(p5, {{q(0), q(1)}, {q(0), q(0)}})) == PNormValue::pow(0));
  CHECK(distance_to_scalars(make_diagonal(p5, {q(0)}, q(1))) == PNormValue::pow(0));
  CHECK(distance_to_scalars(make_right_shift(p5)) == PNormValue::pow(0));
  CHECK(distance_to_scalars(make_diagonal(p5, {q(2)}, q(52))) == PNormValue::pow(-2));
  // Scaling the shift scales the whole distance landscape.
  CHECK(distance_to_scalars(affine(make_right_shift(p5), q(0), q(5))) == PNormValue::pow(-1));
  CHECK(distance_to_scalars(shift_by_lambda(make_left_shift(p5), q(7))) == PNormValue::pow(0));
  CHECK_THROWS_AS(distance_to_scalars(make_diagonal(p5, {}, q(3))), Error);
  CHECK_THROWS_AS(distance_to_scalars(make_matrix(p5, {{q(2), q(0)}, {q(0), q(2)}})), Error);
}

TEST_CASE("scan worked examples and row invariants") {
  PrimeContext p5(5);
  OperatorExpr eye1 = make_matrix(p5, {{q(1)}});
  RegionReport r1 = scan(eye1, GridSpec::explicit_list({q(1)}), q(1, 5));
  REQUIRE(r1.rows.size() == 1);
  CHECK(r1.rows[0].in_left_spectrum);
  CHECK(r1.rows[0].in_right_spectrum);
  CHECK(r1.rows[0].in_left_pseudo);
  CHECK(r1.rows[0].in_right_pseudo);
  CHECK(r1.rows[0].in_left_condition);
  CHECK(r1.rows[0].in_right_condition);

  OperatorExpr s = make_right_shift(p5);
  RegionReport r2 = scan(s, GridSpec::explicit_list({q(0), q(1), q(5), q(1, 5)}), q(1, 5));
  REQUIRE(r2.rows.size() == 4);
  for (const auto& row : r2.rows) CHECK(!row.in_left_spectrum);
  CHECK(r2.rows[0].in_right_spectrum);
  CHECK(r2.rows[1].in_right_spectrum);
  CHECK(r2.rows[2].in_right_spectrum);
  CHECK(!r2.rows[3].in_right_spectrum);

  // Row-wise inclusions hold on every scan.
  std::mt19937_64 g(7);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    PrimeContext ctx(p);
    for (int i = 0; i < 30; ++i) {
      OperatorExpr a = random_operator(g, ctx);
      Rat eps = random_entry(g, p, 0);
      if (sgn(eps) < 0) eps = -eps;
      if (sgn(eps) == 0) eps = q(1);
      GridSpec grid;
      grid.val_min = -2;
      grid.val_max = 2;
      RegionReport rep = scan(a, grid, eps);
      for (const auto& row : rep.rows) {
        REQUIRE(!row.unsupported);
        CHECK((!row.in_left_spectrum || row.in_left_pseudo));
        CHECK((!row.in_right_spectrum || row.in_right_pseudo));
        CHECK((!row.in_left_spectrum || row.in_left_condition));
        CHECK((!row.in_right_spectrum || row.in_right_condition));
      }
    }
  }
}

TEST_CASE("scan records unsupported rows without aborting") {
  PrimeContext p5(5);
  FinSuppVector u(p5, Ambient::c0());
  u.set(0, q(1));
  Functional phi(p5);
  phi.set(1, q(1));
  OperatorExpr composite = add_rank_one(make_right_shift(p5), u, phi);
  RegionReport rep = scan(composite, GridSpec::explicit_list({q(0), q(1)}), q(1));
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].unsupported);
  CHECK(rep.rows[1].unsupported);
}

TEST_CASE("closed-form regions match the membership predicates on the default grid") {
  PrimeContext p5(5);
  std::vector<OperatorExpr> ops = {
      make_diagonal(p5, {}, q(2)),
      make_diagonal(p5, {q(0)}, q(1)),
      make_diagonal(p5, {q(1), q(1, 5)}, q(5)),
      make_diagonal(p5, {q(2), q(3)}, q(1, 25)),
      make_right_shift(p5),
      make_left_shift(p5),
  };
  std::vector<Rat> epsilons = {q(1, 25), q(1, 5), q(1), q(5), q(25), q(2, 7), q(7, 2)};
  GridSpec grid;  // widened generator: shells beyond every closed-form radius
  grid.val_min = -5;
  grid.val_max = 5;
  std::vector<Rat> lambdas = grid.materialize(p5);

  for (const auto& a : ops) {
    for (Side side : {Side::left, Side::right, Side::two_sided}) {
      RegionDescription spec_region = closed_form_region(a, std::nullopt, side, SpectralKind::spectrum);
      for (const auto& lambda : lambdas)
        CHECK(spec_region.contains(lambda, p5) == in_spectrum(a, lambda, side));
      for (const auto& eps : epsilons) {
        for (SpectralKind kind :
             {SpectralKind::pseudospectrum, SpectralKind::condition_pseudospectrum}) {
          RegionDescription region = closed_form_region(a, eps, side, kind);
          for (const auto& lambda : lambdas) {
            bool want = member_of(a, lambda, eps, side, kind);
            CHECK(region.contains(lambda, p5) == want);
          }
        }
      }
    }
  }

  CHECK_THROWS_AS(
      closed_form_region(make_matrix(p5, {{q(1)}}), q(1), Side::left, SpectralKind::spectrum),
      Error);
}

TEST_CASE("single-value diagonal pseudospectral region is one ball") {
  PrimeContext p5(5);
  OperatorExpr d = make_diagonal(p5, {}, q(2));
  RegionDescription ball =
      closed_form_region(d, q(1, 5), Side::left, SpectralKind::pseudospectrum);
  CHECK(ball.contains(q(2), p5));
  CHECK(ball.contains(q(2 + 25), p5));   // |27 - 2| = 1/25 < 1/5
  CHECK(!ball.contains(q(2 + 5), p5));   // |7 - 2| = 1/5, not strict
  CHECK(!ball.contains(q(3), p5));
}

TEST_CASE("bare shift regions") {
  PrimeContext p5(5);
  OperatorExpr s = make_right_shift(p5);
  RegionDescription right_spec = closed_form_region(s, std::nullopt, Side::right, SpectralKind::spectrum);
  CHECK(right_spec.contains(q(0), p5));
  CHECK(right_spec.contains(q(1), p5));
  CHECK(right_spec.contains(q(5), p5));
  CHECK(!right_spec.contains(q(1, 5), p5));

  RegionDescription left_spec = closed_form_region(s, std::nullopt, Side::left, SpectralKind::spectrum);
  for (const Rat& lambda : {q(0), q(1), q(5), q(1, 5)}) CHECK(!left_spec.contains(lambda, p5));
}

TEST_CASE("membership is monotone in epsilon") {
  std::mt19937_64 g(11);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    PrimeContext ctx(p);
    for (int i = 0; i < 200; ++i) {
      OperatorExpr a = random_operator(g, ctx);
      Rat lambda = random_entry(g, p);
      Rat e1 = random_entry(g, p, 0);
      if (sgn(e1) <= 0) e1 = q(1, 5);
      if (sgn(e1) < 0) e1 = -e1;
      Rat e2 = e1 * Rat(ctx.p);
      for (Side side : {Side::left, Side::right}) {
        if (in_pseudospectrum(a, lambda, e1, side))
          CHECK(in_pseudospectrum(a, lambda, e2, side));
        if (in_condition_pseudospectrum(a, lambda, e1, side))
          CHECK(in_condition_pseudospectrum(a, lambda, e2, side));
      }
    }
  }
}

TEST_CASE("intersection ladder: membership dies out exactly off the spectrum") {
  std::mt19937_64 g(13);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    PrimeContext ctx(p);
    for (int i = 0; i < 120; ++i) {
      OperatorExpr a = random_operator(g, ctx);
      Rat lambda = random_entry(g, p);
      for (Side side : {Side::left, Side::right}) {
        bool spectral = in_spectrum(a, lambda, side);
        bool previous = true;
        bool last = true;
        for (long k = 0; k <= 9; ++k) {
          Rat eps = pnorm_to_rational(PNormValue::pow(-k), ctx);
          bool m = in_pseudospectrum(a, lambda, eps, side);
          CHECK((!m || previous));  // monotone along the ladder
          previous = m;
          last = m;
        }
        if (spectral) {
          CHECK(last);  // spectral points survive every epsilon
        } else {
          InvertibilityVerdict v = decide_invertibility(shift_by_lambda(a, lambda), side);
          long transition = v.min_inverse_norm->exponent();
          Rat eps = pnorm_to_rational(PNormValue::pow(-std::max(transition, 0l)), ctx);
          CHECK(!in_pseudospectrum(a, lambda, eps, side));
        }
      }
    }
  }
}

TEST_CASE("condition membership at epsilon equals plain membership at scaled epsilon") {
  std::mt19937_64 g(17);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    PrimeContext ctx(p);
    for (int i = 0; i < 200; ++i) {
      OperatorExpr a = random_operator(g, ctx);
      Rat lambda = random_entry(g, p);
      PNormValue n = op_norm(shift_by_lambda(a, lambda)).value;
      if (n.is_zero()) continue;
      Rat nr = pnorm_to_rational(n, ctx);
      Rat eps = pnorm_to_rational(PNormValue::pow(static_cast<long>(g() % 5) - 2), ctx);
      CHECK(in_condition_pseudospectrum(a, lambda, eps, Side::left) ==
            in_pseudospectrum(a, lambda, eps * nr, Side::left));
      CHECK(in_pseudospectrum(a, lambda, eps, Side::left) ==
            in_condition_pseudospectrum(a, lambda, eps / nr, Side::left));
    }
  }
}

TEST_CASE("condition pseudospectra are affine-covariant") {
  std::mt19937_64 g(19);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    PrimeContext ctx(p);
    for (int i = 0; i < 200; ++i) {
      OperatorExpr a = random_operator(g, ctx);
      Rat lambda = random_entry(g, p);
      Rat alpha = random_entry(g, p);
      Rat beta = random_entry(g, p, 0);
      if (sgn(beta) == 0) beta = q(1);
      Rat eps = pnorm_to_rational(PNormValue::pow(static_cast<long>(g() % 5) - 2), ctx);
      CHECK(in_condition_pseudospectrum(affine(a, alpha, beta), alpha + beta * lambda, eps,
                                        Side::left) ==
            in_condition_pseudospectrum(a, lambda, eps, Side::left));
    }
  }
}

// Derived analogue for the plain pseudospectrum: left inverses of
// beta*(A - lambda) are the left inverses of A - lambda scaled by 1/beta, so
// membership transports with epsilon / |beta|.
TEST_CASE("pseudospectra transform with epsilon scaled by |beta|") {
  std::mt19937_64 g(23);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    PrimeContext ctx(p);
    for (int i = 0; i < 200; ++i) {
      OperatorExpr a = random_operator(g, ctx);
      Rat lambda = random_entry(g, p);
      Rat alpha = random_entry(g, p);
      Rat beta = random_entry(g, p, 0);
      if (sgn(beta) == 0) beta = q(1);
      Rat eps = pnorm_to_rational(PNormValue::pow(static_cast<long>(g() % 5) - 2), ctx);
      Rat beta_norm = pnorm_to_rational(pnorm(beta, ctx), ctx);
      CHECK(in_pseudospectrum(affine(a, alpha, beta), alpha + beta * lambda, eps, Side::left) ==
            in_pseudospectrum(a, lambda, eps / beta_norm, Side::left));
    }
  }
}

TEST_CASE("pseudospectrum membership implies condition membership at epsilon over the distance") {
  std::mt19937_64 g(29);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    PrimeContext ctx(p);
    for (int i = 0; i < 200; ++i) {
      OperatorExpr a = random_operator(g, ctx);
      if (is_scalar_operator(a)) continue;
      Rat lambda = random_entry(g, p);
      Rat eps = pnorm_to_rational(PNormValue::pow(static_cast<long>(g() % 5) - 2), ctx);
      if (!in_pseudospectrum(a, lambda, eps, Side::left)) continue;
      Rat ca = pnorm_to_rational(distance_to_scalars(a), ctx);
      CHECK(in_condition_pseudospectrum(a, lambda, eps / ca, Side::left));
    }
  }
}

TEST_CASE("epsilon validation") {
  PrimeContext p5(5);
  OperatorExpr s = make_right_shift(p5);
  CHECK_THROWS_AS(in_pseudospectrum(s, q(0), q(0), Side::left), Error);
  CHECK_THROWS_AS(in_condition_pseudospectrum(s, q(0), q(-1), Side::left), Error);
}

// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "padspec/spectra.hpp"

#include <algorithm>

namespace padspec {

namespace {

void check_epsilon(const Rat& epsilon) {
  if (sgn(epsilon) <= 0) fail(Errc::schema, "epsilon must be a positive rational");
}

// {|x| < t} over the value group p^Z, as a strict bound by a power of p.
PNormValue strict_radius(const Rat& t, const PrimeContext& ctx) {
  return PNormValue::pow(max_pow_below(t, ctx) + 1);
}

bool atom_holds(const RegionAtom& atom, const Rat& lambda, const PrimeContext& ctx) {
  PNormValue d = pnorm(lambda - atom.center, ctx);
  switch (atom.rel) {
    case RegionAtom::Rel::lt:
      return d < atom.radius;
    case RegionAtom::Rel::eq:
      return d == atom.radius;
    default:
      return d > atom.radius;
  }
}

RegionDescription empty_region() { return RegionDescription{}; }

RegionDescription everything_region() {
  RegionDescription r;
  r.everything = true;
  return r;
}

RegionDescription ball_union(const std::vector<Rat>& centers, const PNormValue& radius) {
  RegionDescription r;
  for (const auto& c : centers) r.clauses.push_back({RegionAtom{c, RegionAtom::Rel::lt, radius}});
  return r;
}

bool epsilon_gt_one(const Rat& epsilon) { return epsilon > 1; }

RegionDescription diagonal_region(const DiagonalOp& d, const PrimeContext& ctx,
                                  const std::optional<Rat>& epsilon, SpectralKind kind) {
  std::vector<Rat> values = d.prefix;
  values.push_back(d.tail);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  RegionDescription r;
  if (kind == SpectralKind::spectrum) {
    for (const auto& v : values)
      r.clauses.push_back({RegionAtom{v, RegionAtom::Rel::eq, PNormValue::zero()}});
    return r;
  }
  check_epsilon(*epsilon);
  if (kind == SpectralKind::pseudospectrum) return ball_union(values, strict_radius(*epsilon, ctx));
  // Condition kind: the condition number of the shifted diagonal is
  // max|v - lambda| / min|v - lambda|. Above 1/epsilon everywhere once
  // epsilon > 1; otherwise exactly inside the balls |lambda - v| < epsilon*R_v
  // with R_v the distance from v to the farthest other value.
  if (epsilon_gt_one(*epsilon)) return everything_region();
  for (const auto& v : values) {
    PNormValue rv = PNormValue::zero();
    for (const auto& w : values)
      if (w != v) rv = PNormValue::max(rv, pnorm(v - w, ctx));
    if (!rv.is_zero()) {
      Rat bound = *epsilon * pnorm_to_rational(rv, ctx);
      r.clauses.push_back({RegionAtom{v, RegionAtom::Rel::lt, strict_radius(bound, ctx)}});
    }
    r.clauses.push_back({RegionAtom{v, RegionAtom::Rel::eq, PNormValue::zero()}});
  }
  return r;
}

RegionDescription shift_region(ShiftKind shift, const PrimeContext& ctx,
                               const std::optional<Rat>& epsilon, Side side, SpectralKind kind) {
  const Rat zero(0);
  const PNormValue closed_unit = PNormValue::pow(1);  // |lambda| <= 1 as |lambda| < p
  const PNormValue open_unit = PNormValue::pow(0);    // |lambda| < 1
  if (kind == SpectralKind::spectrum) {
    if (shift == ShiftKind::right)
      return side == Side::left ? empty_region() : ball_union({zero}, closed_unit);
    return side == Side::right ? empty_region() : ball_union({zero}, open_unit);
  }
  check_epsilon(*epsilon);
  bool big = epsilon_gt_one(*epsilon);
  if (kind == SpectralKind::pseudospectrum) {
    PNormValue eps_ball = strict_radius(*epsilon, ctx);
    if (shift == ShiftKind::right) {
      if (side == Side::left) return big ? ball_union({zero}, eps_ball) : empty_region();
      RegionDescription r = ball_union({zero}, closed_unit);
      r.clauses.push_back({RegionAtom{zero, RegionAtom::Rel::lt, eps_ball}});
      return r;
    }
    if (side == Side::right) return big ? ball_union({zero}, eps_ball) : empty_region();
    return big ? ball_union({zero}, eps_ball) : ball_union({zero}, open_unit);
  }
  // Condition kind: ||A - lambda|| times the minimal inverse norm is exactly 1
  // on every invertible side of both shifts, so everything once epsilon > 1
  // and nothing beyond the spectrum otherwise.
  if (big) return everything_region();
  if (shift == ShiftKind::right)
    return side == Side::left ? empty_region() : ball_union({zero}, closed_unit);
  return side == Side::right ? empty_region() : ball_union({zero}, open_unit);
}

}  // namespace

const char* spectral_kind_name(SpectralKind k) {
  switch (k) {
    case SpectralKind::spectrum:
      return "spectrum";
    case SpectralKind::pseudospectrum:
      return "pseudospectrum";
    default:
      return "condition_pseudospectrum";
  }
}

bool in_spectrum(const OperatorExpr& a, const Rat& lambda, Side side,
                 const MembershipContext& ctx) {
  return !ctx.decide(shift_by_lambda(a, lambda), side).invertible;
}

bool in_pseudospectrum(const OperatorExpr& a, const Rat& lambda, const Rat& epsilon, Side side,
                       const MembershipContext& ctx) {
  check_epsilon(epsilon);
  OperatorExpr shifted = shift_by_lambda(a, lambda);
  InvertibilityVerdict v = ctx.decide(shifted, side);
  if (!v.invertible) return true;
  return norm_compare(*v.min_inverse_norm, Rat(1) / epsilon, a.context()) ==
         std::strong_ordering::greater;
}

bool in_condition_pseudospectrum(const OperatorExpr& a, const Rat& lambda, const Rat& epsilon,
                                 Side side, const MembershipContext& ctx) {
  check_epsilon(epsilon);
  OperatorExpr shifted = shift_by_lambda(a, lambda);
  InvertibilityVerdict v = ctx.decide(shifted, side);
  if (!v.invertible) return true;
  PNormValue product = op_norm(shifted).value * *v.min_inverse_norm;
  return norm_compare(product, Rat(1) / epsilon, a.context()) == std::strong_ordering::greater;
}

PNormValue distance_to_scalars(const OperatorExpr& a) {
  const PrimeContext ctx = a.context();
  if (is_scalar_operator(a))
    fail(Errc::scalar_operator, "distance to scalars is 0 for scalar multiples of the identity");
  if (const auto* mo = a.as<MatrixOp>()) {
    const MaterializedMatrix& m = mo->m;
    PNormValue off = PNormValue::zero();
    PNormValue diam = PNormValue::zero();
    for (uint32_t i = 0; i < m.dim(); ++i)
      for (uint32_t j = 0; j < m.dim(); ++j) {
        if (i != j) off = PNormValue::max(off, pnorm(m.at(i, j), ctx));
        if (i < j) diam = PNormValue::max(diam, pnorm(m.at(i, i) - m.at(j, j), ctx));
      }
    return PNormValue::max(off, diam);
  }
  if (const auto* d = a.as<DiagonalOp>()) {
    std::vector<Rat> values = d->prefix;
    values.push_back(d->tail);
    PNormValue diam = PNormValue::zero();
    for (size_t i = 0; i < values.size(); ++i)
      for (size_t j = i + 1; j < values.size(); ++j)
        diam = PNormValue::max(diam, pnorm(values[i] - values[j], ctx));
    return diam;
  }
  if (const auto* s = a.as<ShiftedShiftOp>()) {
    // ||scale*(shift - l0) - mu|| = |scale| max(1, |l0 + mu/scale|) >= |scale|,
    // attained on the whole unit ball of recentered mu.
    return pnorm(s->scale, ctx);
  }
  fail(Errc::unsupported_family, "no closed form for rank-one composites");
}

GridSpec GridSpec::explicit_list(std::vector<Rat> pts) {
  GridSpec g;
  g.generated = false;
  g.points = std::move(pts);
  return g;
}

std::vector<Rat> GridSpec::materialize(const PrimeContext& ctx) const {
  std::vector<Rat> out;
  if (!generated) {
    out = points;
  } else {
    std::vector<Rat> us = units;
    if (us.empty()) {
      for (unsigned long u = 1; u < ctx.p; ++u) us.push_back(Rat(u));
      us.push_back(Rat(1 + ctx.p));
    }
    out.push_back(Rat(0));
    for (long v = val_min; v <= val_max; ++v) {
      Rat shell = pnorm_to_rational(PNormValue::pow(v), ctx);
      for (const auto& u : us) out.push_back(u * shell);
    }
  }
  std::vector<Rat> dedup;
  for (const auto& q : out)
    if (std::find(dedup.begin(), dedup.end(), q) == dedup.end()) dedup.push_back(q);
  return dedup;
}

RegionReport scan(const OperatorExpr& a, const GridSpec& grid, const Rat& epsilon,
                  const MembershipContext& ctx) {
  check_epsilon(epsilon);
  RegionReport report{a.context(), epsilon, {}};
  Rat inv_eps = Rat(1) / epsilon;
  for (const Rat& lambda : grid.materialize(a.context())) {
    ScanRow row;
    row.lambda = lambda;
    try {
      OperatorExpr shifted = shift_by_lambda(a, lambda);
      InvertibilityVerdict vl = ctx.decide(shifted, Side::left);
      InvertibilityVerdict vr = ctx.decide(shifted, Side::right);
      row.op_norm_shifted = op_norm(shifted).value;
      row.min_left_inverse_norm = vl.min_inverse_norm;
      row.min_right_inverse_norm = vr.min_inverse_norm;
      auto beyond = [&](const std::optional<PNormValue>& n) {
        return norm_compare(*n, inv_eps, a.context()) == std::strong_ordering::greater;
      };
      row.in_left_spectrum = !vl.invertible;
      row.in_right_spectrum = !vr.invertible;
      row.in_left_pseudo = !vl.invertible || beyond(vl.min_inverse_norm);
      row.in_right_pseudo = !vr.invertible || beyond(vr.min_inverse_norm);
      auto cond = [&](const InvertibilityVerdict& v) {
        if (!v.invertible) return true;
        PNormValue product = row.op_norm_shifted * *v.min_inverse_norm;
        return norm_compare(product, inv_eps, a.context()) == std::strong_ordering::greater;
      };
      row.in_left_condition = cond(vl);
      row.in_right_condition = cond(vr);
    } catch (const Error& e) {
      row.unsupported = true;
      row.note = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

bool RegionDescription::contains(const Rat& lambda, const PrimeContext& ctx) const {
  if (everything) return true;
  for (const auto& clause : clauses) {
    bool all = true;
    for (const auto& atom : clause)
      if (!atom_holds(atom, lambda, ctx)) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

RegionDescription closed_form_region(const OperatorExpr& a, const std::optional<Rat>& epsilon,
                                     Side side, SpectralKind kind) {
  if (kind != SpectralKind::spectrum && !epsilon)
    fail(Errc::schema, "epsilon required for pseudospectral regions");
  if (const auto* d = a.as<DiagonalOp>()) return diagonal_region(*d, a.context(), epsilon, kind);
  if (const auto* s = a.as<ShiftedShiftOp>()) {
    if (sgn(s->lambda) == 0 && s->scale == 1)
      return shift_region(s->shift, a.context(), epsilon, side, kind);
    fail(Errc::unsupported_family, "closed-form regions cover the bare shifts only");
  }
  fail(Errc::unsupported_family, "matrices are membership-only; diagonals and shifts have regions");
}

}  // namespace padspec

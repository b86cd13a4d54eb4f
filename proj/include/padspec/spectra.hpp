// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "padspec/invert.hpp"

namespace padspec {

enum class SpectralKind { spectrum, pseudospectrum, condition_pseudospectrum };
const char* spectral_kind_name(SpectralKind k);

// Indirection for the invertibility oracle behind the membership predicates.
// The default routes to decide_invertibility; the law harness swaps in a
// deliberately corrupted oracle for its mutation self-test.
struct MembershipContext {
  std::function<InvertibilityVerdict(const OperatorExpr&, Side)> decide =
      [](const OperatorExpr& a, Side s) { return decide_invertibility(a, s); };
};

// lambda in the left/right/two-sided spectrum: A - lambda*I fails to be
// invertible on that side.
bool in_spectrum(const OperatorExpr& a, const Rat& lambda, Side side,
                 const MembershipContext& ctx = {});

// Spectrum, plus the points where every one-sided inverse of A - lambda*I has
// norm strictly above 1/epsilon.
bool in_pseudospectrum(const OperatorExpr& a, const Rat& lambda, const Rat& epsilon, Side side,
                       const MembershipContext& ctx = {});

// Same with the condition product ||A - lambda*I|| * ||inverse|| against
// 1/epsilon.
bool in_condition_pseudospectrum(const OperatorExpr& a, const Rat& lambda, const Rat& epsilon,
                                 Side side, const MembershipContext& ctx = {});

// inf over scalars mu of ||A - mu*I||; defined for non-scalar Matrix, Diagonal
// and shift operators. For a matrix this is the max of the off-diagonal entry
// norms and the ultrametric diameter of the diagonal; the infimum is attained
// at any diagonal value.
PNormValue distance_to_scalars(const OperatorExpr& a);

struct ScanRow {
  Rat lambda;
  bool unsupported = false;
  std::string note;
  bool in_left_spectrum = false, in_right_spectrum = false;
  bool in_left_pseudo = false, in_right_pseudo = false;
  bool in_left_condition = false, in_right_condition = false;
  PNormValue op_norm_shifted;
  std::optional<PNormValue> min_left_inverse_norm, min_right_inverse_norm;
};

struct RegionReport {
  PrimeContext context;
  Rat epsilon;
  std::vector<ScanRow> rows;
};

// Grid of rational sample points: an explicit list, or the generated shells
// u * p^v for units u and valuations v, plus 0.
struct GridSpec {
  bool generated = true;
  std::vector<Rat> points;  // explicit list when !generated
  std::vector<Rat> units;   // defaults to 1..p-1 and 1+p
  long val_min = -3, val_max = 3;

  static GridSpec explicit_list(std::vector<Rat> pts);
  std::vector<Rat> materialize(const PrimeContext& ctx) const;
};

RegionReport scan(const OperatorExpr& a, const GridSpec& grid, const Rat& epsilon,
                  const MembershipContext& ctx = {});

// Symbolic region as a union of constraint conjunctions on |lambda - center|.
struct RegionAtom {
  enum class Rel { lt, eq, gt };
  Rat center;
  Rel rel;
  PNormValue radius;
};

struct RegionDescription {
  bool everything = false;
  std::vector<std::vector<RegionAtom>> clauses;  // union of conjunctions; empty + !everything = empty set

  bool contains(const Rat& lambda, const PrimeContext& ctx) const;
};

// Closed-form region for Diagonal, RightShift and LeftShift operators
// (epsilon ignored for kind = spectrum). Matrices are membership-only.
RegionDescription closed_form_region(const OperatorExpr& a, const std::optional<Rat>& epsilon,
                                     Side side, SpectralKind kind);

}  // namespace padspec

// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <variant>

#include "padspec/operators.hpp"

namespace padspec {

enum class Side { left, right, two_sided };
const char* side_name(Side s);

// Constructive evidence attached to every invertibility verdict.
struct ExactInverseCert {
  MaterializedMatrix inverse;  // B with B*A = A*B = I exactly
  bool operator==(const ExactInverseCert&) const = default;
};
struct KernelVectorCert {
  FinSuppVector v;  // v != 0 with A v = 0 exactly
  bool operator==(const KernelVectorCert&) const = default;
};
struct NonSurjectivityCert {
  FinSuppVector missed;  // vector outside the range
  std::string reason;
  bool operator==(const NonSurjectivityCert&) const = default;
};
struct LeftAnnihilatorCert {
  Functional psi;  // psi != 0 with psi(A x) = 0 for all x; the range misses ker(psi)'s complement
  bool operator==(const LeftAnnihilatorCert&) const = default;
};
struct CanonicalInverseCert {
  std::string family;  // recursion descriptor served by apply_canonical_inverse
  Side side;
  PNormValue gamma;  // exact lower modulus inf ||Ax||/||x||
  bool operator==(const CanonicalInverseCert&) const = default;
};
// Geometric-decay witness family x^(m) = (1, lambda, ..., lambda^m): the exact
// eigenvector of the left shift lives only in the completion, but the family
// certifies failure of boundedness below at rate |lambda|^{m+1}.
struct KernelTruncationCert {
  Rat lambda;
  long m;
  PNormValue ratio;  // ||A x^(m)|| / ||x^(m)|| = |lambda|^{m+1}
  bool operator==(const KernelTruncationCert&) const = default;
};

using Certificate = std::variant<ExactInverseCert, KernelVectorCert, NonSurjectivityCert,
                                 LeftAnnihilatorCert, CanonicalInverseCert, KernelTruncationCert>;

struct InvertibilityVerdict {
  Side side;
  bool invertible;
  std::optional<PNormValue> min_inverse_norm;  // present iff invertible
  Certificate certificate;
};

// Exact determinant by fraction-free elimination with smallest-valuation
// pivoting (ties broken by row index).
Rat determinant(const MaterializedMatrix& m);

// Exact inverse; the product with the input is verified to be the identity.
// Throws Errc::singular when det = 0.
MaterializedMatrix matrix_inverse(const MaterializedMatrix& m);

// Some nonzero kernel vector of a singular matrix.
FinSuppVector matrix_kernel_vector(const MaterializedMatrix& m);
// Nonzero functional psi with psi o M = 0 for a singular matrix.
Functional matrix_left_annihilator(const MaterializedMatrix& m);

// Decides one-sided invertibility and computes the minimal one-sided-inverse
// norm for the folded catalog families. In the discrete value group p^Z the
// infimum over one-sided inverses is attained, so a norm is always returned
// for invertible verdicts.
InvertibilityVerdict decide_invertibility(const OperatorExpr& a, Side side);

// Applies the canonical minimal-norm one-sided inverse. The recursions used
// keep finitely supported data finitely supported on their natural domains;
// inputs whose formal solution does not terminate in support raise
// Errc::nonterminating_recursion.
FinSuppVector apply_canonical_inverse(const OperatorExpr& a, Side side, const FinSuppVector& y);

// Exact lower modulus inf_{x != 0} ||Ax|| / ||x|| for the decidable families.
PNormValue lower_modulus(const OperatorExpr& a);

// (1, lambda, ..., lambda^m) in c_0.
FinSuppVector kernel_truncation_vector(PrimeContext ctx, const Rat& lambda, long m);

// Closed-form inverse of (shifted + c) from the contraction series
// sum_k inv(-c*inv)^k, together with the verified truncation tail bound
// ||D_n - D|| <= ||inv|| * ||c*inv||^{n+1} for n = 0..n_max.
struct NeumannMatrixResult {
  MaterializedMatrix d;
  PNormValue tail_bound;
};
NeumannMatrixResult neumann_inverse(const MaterializedMatrix& shifted, const MaterializedMatrix& c,
                                    int n_max);

// Series application for the shift families: evaluates n_max + 1 terms of the
// same series against a rank-one perturbation and returns the certified tail
// bound for the dropped remainder.
struct NeumannApplyResult {
  FinSuppVector x;
  PNormValue tail_bound;
};
NeumannApplyResult neumann_apply(const OperatorExpr& shifted, const FinSuppVector& u,
                                 const Functional& phi, const FinSuppVector& y, int n_max);

}  // namespace padspec

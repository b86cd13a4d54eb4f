// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <random>
#include <vector>

#include "padspec/json_io.hpp"

namespace padspec {

// x != 0 with ||(A - lambda)x|| < epsilon ||x|| strictly, exact arithmetic.
// Requires lambda inside the left pseudospectrum but outside the left
// spectrum.
FinSuppVector pseudospectrum_witness(const OperatorExpr& a, const Rat& lambda, const Rat& epsilon);

// Same with the scaled threshold epsilon * ||A - lambda|| * ||x||.
FinSuppVector condition_witness(const OperatorExpr& a, const Rat& lambda, const Rat& epsilon);

// C y = phi(y) * u
struct RankOnePerturbation {
  FinSuppVector u;
  Functional phi;

  bool is_zero() const { return u.is_zero() || phi.is_zero(); }
  PNormValue norm() const { return phi.norm() * u.sup_norm(); }
  FinSuppVector apply_to(const FinSuppVector& y) const {
    return u.scaled(apply_functional(phi, y).value);
  }
};

// Rank-one perturbation driving lambda into the left spectrum of A + C,
// built from a normalized witness z: C y = -phi(y)(A - lambda)z kills z.
struct Destabilizer {
  RankOnePerturbation c;  // zero when lambda is already in the left spectrum
  PNormValue c_norm;
  std::optional<FinSuppVector> kernel_witness;   // z with (A - lambda + C) z = 0 exactly
  std::optional<Certificate> spectrum_certificate;  // evidence for the C = 0 case
  bool norm_bound_checked = false;
};

Destabilizer make_destabilizer(const OperatorExpr& a, const Rat& lambda, const Rat& epsilon);
Destabilizer make_condition_destabilizer(const OperatorExpr& a, const Rat& lambda,
                                         const Rat& epsilon);

// Deterministic seeded sampling over the norm shells u * p^v.
class Sampler {
 public:
  explicit Sampler(uint64_t seed) : g_(seed) {}

  uint64_t below(uint64_t n);  // uniform-ish in [0, n), reproducible across platforms
  long range(long lo, long hi);
  bool chance(uint64_t num, uint64_t den);
  Rat unit(const PrimeContext& ctx);                       // |u| = 1
  Rat shell(const PrimeContext& ctx, long vmin, long vmax);  // u * p^v, never zero
  Rat entry(const PrimeContext& ctx, long vmin, long vmax);  // shell or zero
  FinSuppVector vector(const PrimeContext& ctx, Ambient amb, uint32_t max_index, long vmin,
                       long vmax);

 private:
  std::mt19937_64 g_;
};

// Matrix with every entry of norm < bound strictly (valuations floored to
// respect the bound on the discrete value group).
MaterializedMatrix random_bounded_matrix(Sampler& s, PrimeContext ctx, uint32_t n,
                                         const Rat& bound);

enum class PerturbationShape { matrix, rank_one };

// Deterministic-from-seed operator with exact norm < bound.
OperatorExpr random_bounded_perturbation(uint64_t seed, PerturbationShape shape, uint32_t n,
                                         const Rat& bound, PrimeContext ctx);

struct LawInstance {
  PrimeContext ctx;
  OperatorExpr a;
  Rat lambda;
  Rat epsilon;
  Rat epsilon2;  // second threshold for the nesting laws (> epsilon)
  Rat alpha;     // affine law data
  Rat beta;      // != 0
  uint64_t seed = 0;
  int samples = 100;
};

struct LawVerdict {
  std::string law_id;
  std::string description;
  bool pass = true;
  std::string counterexample;  // serialized JSON, empty when passing
};

const std::vector<std::string>& all_law_ids();
LawVerdict law_check(const std::string& law_id, const LawInstance& inst,
                     const MembershipContext& ctx = {});

// Seeded instance generator shared by the laws CLI and the acceptance suite.
// Matrix instances are resampled until the shifted inverse norm is at most
// p^6, which keeps the intersection-ladder transitions inside the tested
// range of thresholds.
std::vector<LawInstance> standard_ensemble(const std::vector<unsigned long>& primes, int count,
                                           uint64_t seed);

Json law_instance_to_json(const LawInstance& inst);
std::string law_verdict_to_json_line(const LawVerdict& v);
Json destabilizer_to_json(const Destabilizer& d, const PrimeContext& ctx);

}  // namespace padspec

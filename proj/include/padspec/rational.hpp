// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <string>

namespace padspec {

// All scalars are exact rationals in canonical reduced form (gcd(num, den) = 1,
// den > 0). GMP keeps the invariant as long as values are built through these
// helpers or through arithmetic on already-canonical operands.
using Rat = mpq_class;
using Int = mpz_class;

// Accepts "a" or "a/b" in base 10 with an optional leading minus.
Rat parse_rational(const std::string& text);

// Canonical text form, inverse of parse_rational.
std::string rat_to_string(const Rat& q);

// base^exp for small non-negative exponents.
Int int_pow(unsigned long base, unsigned long exp);

}  // namespace padspec

// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "padspec/rational.hpp"

#include <cctype>

#include "padspec/errors.hpp"

namespace padspec {

Rat parse_rational(const std::string& text) {
  // ^-?[0-9]+(/[0-9]+)?$ so the denominator is syntactically positive.
  size_t i = 0;
  if (i < text.size() && text[i] == '-') ++i;
  size_t digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++digits;
  if (digits == 0) fail(Errc::schema, "bad rational '" + text + "'");
  if (i < text.size()) {
    if (text[i] != '/') fail(Errc::schema, "bad rational '" + text + "'");
    ++i;
    digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++digits;
    if (digits == 0 || i != text.size()) fail(Errc::schema, "bad rational '" + text + "'");
  }
  Rat q;
  if (mpq_set_str(q.get_mpq_t(), text.c_str(), 10) != 0)
    fail(Errc::schema, "bad rational '" + text + "'");
  if (sgn(q.get_den()) == 0) fail(Errc::schema, "zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

std::string rat_to_string(const Rat& q) { return q.get_str(10); }

Int int_pow(unsigned long base, unsigned long exp) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

}  // namespace padspec

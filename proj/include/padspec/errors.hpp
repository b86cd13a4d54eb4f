// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace padspec {

enum class Errc {
  schema,  // malformed input document or value text
  context_mismatch,
  ambient_mismatch,
  zero_vector,
  zero_beta,
  not_finite_dimensional,
  unsupported_family,
  singular,
  not_invertible_on_side,
  nonterminating_recursion,
  contraction_failure,
  scalar_operator,
  not_in_pseudospectrum,
  not_in_condition_pseudospectrum,
  in_spectrum,
  unknown_law,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace padspec

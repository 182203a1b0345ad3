// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace gallager {

/// Error categories surfaced by the library.  The CLI maps every code to
/// exit status 2 (usage/validation); tests dispatch on the code.
enum class errc {
  not_a_distribution,
  row_not_stochastic,
  negative_entry,
  degenerate_alphabet,
  parse_error,
  empty_word,
  symbol_out_of_range,
  invalid_rho,
  invalid_s,
  non_positive_input,
  all_zero_update,
  non_positive_start,
  too_many_types,
  alphabet_too_large,
  output_space_too_large,
  infinite_divergence,
  invalid_config,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace gallager

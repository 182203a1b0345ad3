// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "gallager/errors.hpp"

namespace gallager {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::not_a_distribution: return "NotADistribution";
    case errc::row_not_stochastic: return "RowNotStochastic";
    case errc::negative_entry: return "NegativeEntry";
    case errc::degenerate_alphabet: return "DegenerateAlphabet";
    case errc::parse_error: return "ParseError";
    case errc::empty_word: return "EmptyWord";
    case errc::symbol_out_of_range: return "SymbolOutOfRange";
    case errc::invalid_rho: return "InvalidRho";
    case errc::invalid_s: return "InvalidS";
    case errc::non_positive_input: return "NonPositiveInput";
    case errc::all_zero_update: return "AllZeroUpdate";
    case errc::non_positive_start: return "NonPositiveStart";
    case errc::too_many_types: return "TooManyTypes";
    case errc::alphabet_too_large: return "AlphabetTooLarge";
    case errc::output_space_too_large: return "OutputSpaceTooLarge";
    case errc::infinite_divergence: return "InfiniteDivergence";
    case errc::invalid_config: return "InvalidConfig";
  }
  return "UnknownError";
}

}  // namespace gallager

// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gallager/errors.hpp"

namespace gallager {

/// Probability vector on the channel input alphabet.  Immutable after
/// construction; construction validates the simplex invariants.
class Distribution {
 public:
  /// Entries must lie in [0,1] and sum to 1 within this tolerance.
  static constexpr double kSumTolerance = 1e-12;

  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(std::size_t size);
  static Distribution point_mass(std::size_t size, std::size_t x);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t x) const noexcept { return probs_[x]; }
  const std::vector<double>& probs() const noexcept { return probs_; }

  bool strictly_positive() const noexcept;

  friend bool operator==(const Distribution& a, const Distribution& b) noexcept {
    return a.probs_ == b.probs_;
  }

 private:
  std::vector<double> probs_;
};

/// Half the L1 distance between two distributions of equal length.
double total_variation(const Distribution& a, const Distribution& b);

/// Max-norm distance between two distributions of equal length.
double linf_distance(const Distribution& a, const Distribution& b);

/// Discrete memoryless channel: a row-stochastic |X| x |Y| matrix P(y|x).
/// Rows are probability distributions over outputs; immutable once built.
class Channel {
 public:
  static Channel validate(const std::vector<std::vector<double>>& matrix,
                          std::vector<std::string> input_labels = {},
                          std::vector<std::string> output_labels = {});

  std::size_t num_inputs() const noexcept { return num_inputs_; }
  std::size_t num_outputs() const noexcept { return num_outputs_; }

  /// P(y|x)
  double prob(std::size_t x, std::size_t y) const noexcept {
    return matrix_[x * num_outputs_ + y];
  }

  std::span<const double> row(std::size_t x) const noexcept {
    return {matrix_.data() + x * num_outputs_, num_outputs_};
  }

  const std::vector<std::string>& input_labels() const noexcept { return input_labels_; }
  const std::vector<std::string>& output_labels() const noexcept { return output_labels_; }

 private:
  Channel() = default;

  std::size_t num_inputs_ = 0;
  std::size_t num_outputs_ = 0;
  std::vector<double> matrix_;  // row-major, P(y|x) at [x*|Y| + y]
  std::vector<std::string> input_labels_;
  std::vector<std::string> output_labels_;
};

/// Validates a raw matrix and wraps it as a Channel.
Channel validate_channel(const std::vector<std::vector<double>>& matrix);

/// Parses the channel-spec JSON document (see README for the schema) and
/// validates it.
Channel load_channel_text(std::string_view text);
Channel load_channel(const std::filesystem::path& path);

/// Empirical type of a length-n word: exact integer counts per input symbol.
class EmpiricalType {
 public:
  /// counts must be non-empty and sum to a positive n.
  explicit EmpiricalType(std::vector<std::uint64_t> counts);

  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t n() const noexcept { return n_; }
  std::size_t alphabet_size() const noexcept { return counts_.size(); }

  /// counts/n as a Distribution.
  Distribution to_distribution() const;

  friend bool operator==(const EmpiricalType& a, const EmpiricalType& b) noexcept {
    return a.counts_ == b.counts_;
  }

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_ = 0;
};

/// Counts symbol occurrences of `word` over the alphabet [0, alphabet_size).
EmpiricalType type_of(std::span<const int> word, std::size_t alphabet_size);

/// Exponent parameters (rho, s).  The simplified exponent fixes s = 1/(1+rho).
struct ExponentParams {
  double rho;
  double s;

  static ExponentParams simplified(double rho);
  static ExponentParams general(double rho, double s);
};

/// Throws errc::invalid_rho unless rho is in (0, 1].
void check_rho(double rho);

}  // namespace gallager

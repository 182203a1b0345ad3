// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "gallager/dmc.hpp"
#include "gallager/exponents.hpp"
#include "gallager/rng.hpp"

namespace gallager {
namespace nts {

/// Configuration of one natural-type-selection experiment.
struct NtsConfig {
  double rho;
  Distribution q;  // generating (codebook) distribution; strictly positive
  Channel ch;
  std::uint64_t n;       // block length in symbols
  std::uint64_t trials;  // independent repetitions
  std::uint64_t seed;    // master seed; trial t uses trial_stream(seed, t)
  std::uint64_t m_cap = 100'000'000;  // safety valve on codewords per trial

  void validate() const;
};

/// Outcome of one favorite-type search.
struct FavoriteTypeResult {
  std::uint64_t winner_index;  // 1-based index N_n of the winning codeword
  EmpiricalType winner_type;
  double value;  // E0(rho, Q, winner type) - rho * log(winner_index)/n, nats
  std::uint64_t codewords_examined;
  bool truncated;  // m_cap hit before the stopping rule fired
};

/// Trial results plus order-insensitive aggregates.
struct NtsAggregate {
  Distribution mean_type;   // average of winner types over trials
  double tv_to_target;      // TV(mean_type, target)
  double median_tv;         // median over trials of TV(winner type, target)
  std::vector<double> per_trial_tv;
  std::vector<FavoriteTypeResult> per_trial;
  std::uint64_t truncated_trials;
  Distribution target;
  NtsConfig config;
};

/// Draws the type of one i.i.d.(Q) word of length n (a multinomial count
/// vector) by per-symbol inverse-CDF sampling.
EmpiricalType sample_codeword(const Distribution& q, std::uint64_t n, RngStream& rng);

/// Debug helper: materializes the word itself rather than its type.  Used by
/// tests that need actual symbol sequences for the exhaustive bound.
std::vector<int> sample_codeword_symbols(const Distribution& q, std::uint64_t n,
                                         RngStream& rng);

/// Walker/Vose alias table over a finite weight vector.
class AliasTable {
 public:
  static AliasTable build(const std::vector<double>& weights);

  std::size_t size() const noexcept { return prob_.size(); }

  std::size_t sample(RngStream& rng) const noexcept {
    const double u = rng.uniform() * static_cast<double>(prob_.size());
    std::size_t i = static_cast<std::size_t>(u);
    if (i >= prob_.size()) i = prob_.size() - 1;
    return (u - static_cast<double>(i)) < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

/// Samples empirical types of i.i.d.(Q) words.  Since scores depend only on
/// the type, codewords are drawn directly as types: for small type classes a
/// single alias-table lookup per codeword, otherwise per-symbol counting.
class TypeSampler {
 public:
  TypeSampler(const Distribution& q, std::uint64_t n);

  /// True when the O(1) class-index path is active.
  bool indexed() const noexcept { return mode_ != Mode::per_symbol; }
  std::size_t num_classes() const noexcept { return class_count_; }

  std::size_t sample_class(RngStream& rng) const { return alias_.sample(rng); }
  EmpiricalType class_type(std::size_t c) const;
  std::uint64_t class_count(std::size_t c, std::size_t x) const;

  EmpiricalType sample(RngStream& rng) const;
  void sample_into(RngStream& rng, std::vector<std::uint64_t>& counts) const;

 private:
  enum class Mode { binary, enumerated, per_symbol };

  Mode mode_;
  Distribution q_;
  std::uint64_t n_;
  std::size_t class_count_ = 0;
  AliasTable alias_;                       // indexed modes
  std::vector<std::uint32_t> class_counts_;  // enumerated mode, flat
  std::vector<double> cdf_;                // per-symbol mode
};

/// Shared per-config state for favorite-type searches: the per-letter
/// exponent vector, its vertex bound, and the type sampler.
class NtsRunner {
 public:
  explicit NtsRunner(NtsConfig cfg);

  const NtsConfig& config() const noexcept { return cfg_; }
  const PerLetterExponent& letters() const noexcept { return letters_; }
  const TypeSampler& sampler() const noexcept { return sampler_; }
  double vertex_bound() const noexcept { return e_max_; }

  /// E0(rho, Q, T_c) for class c (indexed sampler modes).
  double class_exponent(std::size_t c) const noexcept { return class_e_[c]; }

  /// Streams codewords m = 1, 2, ... scoring E0(rho,Q,Q_m) - rho*log(m)/n,
  /// stops once rho*log(m)/n > E_max - best (no later codeword can win) or at
  /// m_cap.  First-occurrence tie-break: strict improvement only.
  FavoriteTypeResult run_trial(RngStream& rng) const;

 private:
  NtsConfig cfg_;
  PerLetterExponent letters_;
  double e_max_;
  TypeSampler sampler_;
  std::vector<double> class_e_;
};

/// Single search with a caller-supplied stream.
FavoriteTypeResult favorite_type(const NtsConfig& cfg, RngStream& rng);

/// Runs cfg.trials independent searches on decorrelated streams derived from
/// (seed, trial), possibly across worker threads (capped by the
/// GALLAGER_FORGE_THREADS environment variable), and aggregates.  Results are
/// bit-identical for a fixed (seed, cfg) regardless of worker count.
NtsAggregate run_trials(const NtsConfig& cfg, const Distribution& target);
NtsAggregate run_trials(const NtsRunner& runner, const Distribution& target);

/// ceil(exp(n * D(qprime || q))): the codebook size at which the first
/// codeword of type ~ qprime is expected.  Returned as a double because the
/// value overflows 64-bit integers already at moderate n * D; it is exact
/// whenever it fits in the 53-bit mantissa.
double codebook_size_for_target(std::uint64_t n, const Distribution& q,
                                const Distribution& qprime);

/// Worker count used by run_trials (env override, hardware fallback).
unsigned worker_count(std::uint64_t trials);

}  // namespace nts
}  // namespace gallager

// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gallager/dmc.hpp"

namespace gallager {
namespace oracle {

/// All empirical types of denominator n over an alphabet, with exact log
/// multinomial coefficients and log type-class probabilities under Q.
/// Stored flat; entry i is counts(i) with log_coeff(i), log_prob(i).
/// Enumeration order is lexicographically ascending in the count vector.
class TypeClassTable {
 public:
  TypeClassTable(std::uint64_t n, std::size_t alphabet_size, std::size_t num_classes);

  std::uint64_t n() const noexcept { return n_; }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t size() const noexcept { return log_coeff_.size(); }

  std::span<const std::uint32_t> counts(std::size_t i) const noexcept {
    return {counts_.data() + i * alphabet_size_, alphabet_size_};
  }
  double log_coeff(std::size_t i) const noexcept { return log_coeff_[i]; }
  double log_prob(std::size_t i) const noexcept { return log_prob_[i]; }

  EmpiricalType type(std::size_t i) const;

  void append(std::span<const std::uint32_t> counts, double log_coeff, double log_prob);

 private:
  std::uint64_t n_;
  std::size_t alphabet_size_;
  std::vector<std::uint32_t> counts_;  // flat, size() * alphabet_size_
  std::vector<double> log_coeff_;
  std::vector<double> log_prob_;
};

/// Number of compositions of n into `alphabet_size` parts,
/// C(n + |X| - 1, |X| - 1), as a double (may be huge).
double count_type_classes(std::uint64_t n, std::size_t alphabet_size);

/// Enumerates every type of denominator n.  Throws TooManyTypes when the
/// class count exceeds 1e7.
TypeClassTable enumerate_types(std::uint64_t n, std::size_t alphabet_size,
                               const Distribution& q);

struct BestType {
  EmpiricalType type;
  double value;
  /// constrained_best_type only: false when no type satisfied the radius and
  /// the divergence-minimizing type was returned instead.
  bool radius_feasible = true;
};

/// Exact argmax over denominator-n types T of
///   E0(rho, Q, T) - rho * D(T||Q),
/// ties broken toward the lexicographically smallest count vector.
BestType best_type_exact(double rho, const Distribution& q, const Channel& ch,
                         std::uint64_t n);

/// Exact argmax of E0(rho, Q, T) over types with D(T||Q) <= radius (closed
/// ball).  If no type qualifies, returns the divergence-minimizing type with
/// radius_feasible = false.
BestType constrained_best_type(double rho, const Distribution& q, const Channel& ch,
                               std::uint64_t n, double radius);

/// Minimum of E0(rho,Q,.) + D(.||Q) over the simplex lattice of spacing
/// `step` (points with coordinates k/round(1/step)).  Independent check of
/// the closed-form decomposition minimizer.  Requires |X| <= 4.
std::pair<Distribution, double> grid_min_decomposition(double rho, const Distribution& q,
                                                       const Channel& ch, double step);

/// Brute-force evaluation of the n-dimensional conditional bound for a fixed
/// word: M^rho * sum over all y-sequences of
///   P^{1-s*rho}(y-seq | word) * prod_k [sum_x Q(x) P^s(y_k|x)]^rho.
/// The x-sum is computed per letter via the product form; the y-sum is a full
/// |Y|^n enumeration (must be <= 1e6).
double exhaustive_conditional_bound(double s, double rho, const Distribution& q,
                                    const Channel& ch, std::span<const int> word,
                                    std::uint64_t num_messages);

}  // namespace oracle
}  // namespace gallager

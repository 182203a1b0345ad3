// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "gallager/dmc.hpp"

namespace gallager {

/// Backward transition matrix Phi(x|y) of the alternating maximization.
/// Rows (fixed y) are distributions over x, except rows flagged degenerate:
/// outputs no Q-supported input can reach are emitted all-zero.
struct PhiMatrix {
  std::size_t num_outputs = 0;
  std::size_t num_inputs = 0;
  std::vector<double> data;  // row-major, Phi(x|y) at [y*|X| + x]
  std::vector<std::size_t> degenerate_outputs;

  double operator()(std::size_t y, std::size_t x) const noexcept {
    return data[y * num_inputs + x];
  }
};

enum class StopReason { tolerance_met, max_iterations };

const char* stop_reason_name(StopReason reason) noexcept;

/// Iterates of one solver run.  iterates[k] is Q_{k+1} in 1-based counting
/// (iterates[0] is the start); objectives[k] is E0(rho, iterates[k]) for
/// solve(), and I(iterates[k], P) for solve_capacity().
struct ArimotoTrace {
  std::vector<Distribution> iterates;
  std::vector<double> objectives;
  bool converged = false;
  StopReason stop_reason = StopReason::max_iterations;
  double rho = 0.0;  // 0 marks a capacity run

  std::size_t iterations() const noexcept { return iterates.size() - 1; }
  const Distribution& final_input() const noexcept { return iterates.back(); }
  double final_objective() const noexcept { return objectives.back(); }
};

/// Phi(x|y) = Q(x) P^{1/(1+rho)}(y|x) / sum_x' Q(x') P^{1/(1+rho)}(y|x').
PhiMatrix phi_step(double rho, const Distribution& q, const Channel& ch);

/// One alternating-maximization step:
///   Q'(x) = (1/K) Q(x) [sum_y P^{1/(1+rho)}(y|x)
///                       (sum_x' Q(x') P^{1/(1+rho)}(y|x'))^rho]^{-1/rho}.
/// Never decreases E0(rho, .); preserves zeros of Q.
Distribution q_update(double rho, const Distribution& q, const Channel& ch);

/// One step of the 1972 capacity algorithm (the rho -> 0 limit of q_update):
///   Q'(x) = (1/K) Q(x) exp{ sum_y P(y|x) log [P(y|x) / sum_x' Q(x')P(y|x')] }.
Distribution capacity_update(const Distribution& q, const Channel& ch);

/// Iterates q_update from a strictly positive start until
/// ||Q_{k+1} - Q_k||_inf < tol or max_iter updates.
ArimotoTrace solve(double rho, const Distribution& q0, const Channel& ch,
                   double tol = 1e-9, std::size_t max_iter = 10000);

/// Same loop with capacity_update; objectives hold I(Q_k, P).
ArimotoTrace solve_capacity(const Distribution& q0, const Channel& ch,
                            double tol = 1e-9, std::size_t max_iter = 10000);

}  // namespace gallager

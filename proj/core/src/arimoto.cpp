// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "gallager/arimoto.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "gallager/exponents.hpp"

namespace gallager {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_input_dim(const Distribution& q, const Channel& ch, const char* who) {
  if (q.size() != ch.num_inputs())
    fail(errc::invalid_config, std::string(who) + ": distribution length != |X|");
}

/// Normalizes exp(log_weight) over the support, subtracting the max log
/// first.  Entries with log_weight == -inf stay exactly zero.
Distribution normalize_log_weights(const std::vector<double>& log_weight,
                                   const char* who) {
  double max_log = -kInf;
  std::size_t inf_count = 0;
  for (double lw : log_weight) {
    if (lw == kInf) ++inf_count;
    max_log = std::max(max_log, lw);
  }

  std::vector<double> w(log_weight.size(), 0.0);
  if (inf_count > 0) {
    // Some letter is never confusable: the update piles all mass there.
    for (std::size_t x = 0; x < log_weight.size(); ++x)
      if (log_weight[x] == kInf) w[x] = 1.0 / static_cast<double>(inf_count);
    return Distribution(std::move(w));
  }

  if (max_log == -kInf) fail(errc::all_zero_update, std::string(who) + ": empty support");
  double norm = 0.0;
  for (std::size_t x = 0; x < log_weight.size(); ++x) {
    if (log_weight[x] == -kInf) continue;
    w[x] = std::exp(log_weight[x] - max_log);
    norm += w[x];
  }
  if (!(norm > 0.0) || !std::isfinite(norm))
    fail(errc::all_zero_update, std::string(who) + ": normalization collapsed");
  for (double& wx : w) wx /= norm;
  return Distribution(std::move(w));
}

ArimotoTrace run_iteration(const Distribution& q0, double tol, std::size_t max_iter,
                           double rho,
                           const std::function<Distribution(const Distribution&)>& update,
                           const std::function<double(const Distribution&)>& objective) {
  if (!q0.strictly_positive())
    fail(errc::non_positive_start,
         "start must be strictly positive: zero entries never recover under the "
         "multiplicative update");
  if (!(tol > 0.0)) fail(errc::invalid_config, "tol must be positive");
  if (max_iter == 0) fail(errc::invalid_config, "max_iter must be positive");

  ArimotoTrace trace;
  trace.rho = rho;
  trace.iterates.push_back(q0);
  trace.objectives.push_back(objective(q0));
  for (std::size_t k = 0; k < max_iter; ++k) {
    Distribution next = update(trace.iterates.back());
    const double delta = linf_distance(next, trace.iterates.back());
    trace.iterates.push_back(std::move(next));
    trace.objectives.push_back(objective(trace.iterates.back()));
    if (delta < tol) {
      trace.converged = true;
      trace.stop_reason = StopReason::tolerance_met;
      return trace;
    }
  }
  trace.converged = false;
  trace.stop_reason = StopReason::max_iterations;
  return trace;
}

}  // namespace

const char* stop_reason_name(StopReason reason) noexcept {
  return reason == StopReason::tolerance_met ? "ToleranceMet" : "MaxIterations";
}

PhiMatrix phi_step(double rho, const Distribution& q, const Channel& ch) {
  check_rho(rho);
  check_input_dim(q, ch, "phi_step");
  const std::size_t nx = ch.num_inputs();
  const std::size_t ny = ch.num_outputs();
  const double s = 1.0 / (1.0 + rho);

  PhiMatrix phi;
  phi.num_outputs = ny;
  phi.num_inputs = nx;
  phi.data.assign(ny * nx, 0.0);
  for (std::size_t y = 0; y < ny; ++y) {
    double denom = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      const double p = ch.prob(x, y);
      if (q[x] > 0.0 && p > 0.0) {
        const double term = q[x] * std::pow(p, s);
        phi.data[y * nx + x] = term;
        denom += term;
      }
    }
    if (denom > 0.0) {
      for (std::size_t x = 0; x < nx; ++x) phi.data[y * nx + x] /= denom;
    } else {
      phi.degenerate_outputs.push_back(y);  // row stays all-zero
    }
  }
  return phi;
}

Distribution q_update(double rho, const Distribution& q, const Channel& ch) {
  const PerLetterExponent pl = per_letter(rho, q, ch);
  // Q'(x) ~ Q(x) * exp(values[x] / rho); the (.)^{-1/rho} power is done in
  // the log domain to keep small rho stable.
  std::vector<double> log_weight(q.size(), -kInf);
  for (std::size_t x = 0; x < q.size(); ++x) {
    if (q[x] == 0.0) continue;  // zeros are absorbing
    log_weight[x] = std::log(q[x]) + pl.values[x] / rho;
  }
  return normalize_log_weights(log_weight, "q_update");
}

Distribution capacity_update(const Distribution& q, const Channel& ch) {
  check_input_dim(q, ch, "capacity_update");
  const std::size_t nx = ch.num_inputs();
  const std::size_t ny = ch.num_outputs();

  std::vector<double> out_marginal(ny, 0.0);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x) out_marginal[y] += q[x] * ch.prob(x, y);

  std::vector<double> log_weight(nx, -kInf);
  for (std::size_t x = 0; x < nx; ++x) {
    if (q[x] == 0.0) continue;
    double gain = 0.0;  // sum_y P(y|x) log [P(y|x) / out_marginal(y)]
    for (std::size_t y = 0; y < ny; ++y) {
      const double p = ch.prob(x, y);
      if (p == 0.0) continue;
      gain += p * std::log(p / out_marginal[y]);
    }
    log_weight[x] = std::log(q[x]) + gain;
  }
  return normalize_log_weights(log_weight, "capacity_update");
}

ArimotoTrace solve(double rho, const Distribution& q0, const Channel& ch, double tol,
                   std::size_t max_iter) {
  check_rho(rho);
  check_input_dim(q0, ch, "solve");
  return run_iteration(
      q0, tol, max_iter, rho,
      [rho, &ch](const Distribution& q) { return q_update(rho, q, ch); },
      [rho, &ch](const Distribution& q) { return gallager_e0(rho, q, ch); });
}

ArimotoTrace solve_capacity(const Distribution& q0, const Channel& ch, double tol,
                            std::size_t max_iter) {
  check_input_dim(q0, ch, "solve_capacity");
  return run_iteration(
      q0, tol, max_iter, /*rho=*/0.0,
      [&ch](const Distribution& q) { return capacity_update(q, ch); },
      [&ch](const Distribution& q) { return mutual_information(q, ch); });
}

}  // namespace gallager

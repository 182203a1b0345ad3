// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "gallager/dmc.hpp"

namespace gallager {

/// Per-input-letter conditional exponent against a fixed codebook input Q:
///
///   values[x] = -log sum_y P^{1/(1+rho)}(y|x) * [sum_x' Q(x') P^{1/(1+rho)}(y|x')]^rho
///
/// The conditional exponent E0(rho, Q, Qt) is linear in Qt, equal to
/// sum_x Qt(x) * values[x], so this vector fully determines it.
struct PerLetterExponent {
  std::vector<double> values;  // nats per symbol; +inf when letter x is never confusable
  double rho;
  Distribution base_input;
};

/// I(Q,P) in nats.
double mutual_information(const Distribution& q, const Channel& ch);

/// Gallager function E0(rho, Q) = -log sum_y [sum_x Q(x) P^{1/(1+rho)}(y|x)]^(1+rho).
double gallager_e0(double rho, const Distribution& q, const Channel& ch);

/// Conditional exponent at general parameters:
///   -sum_x Qt(x) log sum_y P^{1-s*rho}(y|x) [sum_x' Q(x') P^s(y|x')]^rho
/// Requires s > 0, s*rho < 1, rho in (0,1].
double conditional_e0_general(double s, double rho, const Distribution& q,
                              const Distribution& qtilde, const Channel& ch);

/// Simplified conditional exponent at s = 1/(1+rho).
double conditional_e0(double rho, const Distribution& q, const Distribution& qtilde,
                      const Channel& ch);

/// The per-letter vector behind conditional_e0.
PerLetterExponent per_letter(double rho, const Distribution& q, const Channel& ch);

/// D(Qt || Q) in nats; +infinity when Qt puts mass outside Q's support
/// (a valid result, not an error).
double kl_divergence(const Distribution& qtilde, const Distribution& q);

/// The tilted distribution Qt*(x) proportional to Q(x) exp(-values[x]) that
/// attains min_Qt { E0(rho,Q,Qt) + D(Qt||Q) }, together with the attained
/// minimum (which equals gallager_e0).  Requires strictly positive Q.
std::pair<Distribution, double> e0_decomposition_minimizer(double rho,
                                                           const Distribution& q,
                                                           const Channel& ch);

/// E0(rho,Q,P) - rho * D(P||Q) for P = qtilde against pl's base input;
/// -infinity when P escapes the support of Q.
double penalized_objective(const PerLetterExponent& pl, const Distribution& qtilde);

}  // namespace gallager

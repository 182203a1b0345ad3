// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "gallager/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gallager {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this, a directly accumulated sum is treated as underflowed and the
// log is recomputed by max-factoring.
constexpr double kUnderflow = 1e-300;

void check_input_dim(const Distribution& q, const Channel& ch, const char* who) {
  if (q.size() != ch.num_inputs())
    fail(errc::invalid_config, std::string(who) + ": distribution length != |X|");
}

double log_sum_exp(const std::vector<double>& logs) {
  double m = -kInf;
  for (double l : logs) m = std::max(m, l);
  if (m == -kInf) return -kInf;
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - m);
  return m + std::log(acc);
}

/// log of sum_i exp(logs[i]), computed directly unless the direct sum
/// underflows, in which case it is max-factored.
double stable_log_of_sum(const std::vector<double>& logs) {
  double direct = 0.0;
  bool any = false;
  for (double l : logs) {
    if (l == -kInf) continue;
    any = true;
    direct += std::exp(l);
  }
  if (!any) return -kInf;
  if (direct >= kUnderflow) return std::log(direct);
  return log_sum_exp(logs);
}

/// log alpha_y = log sum_x Q(x) P^s(y|x), for every output y.
std::vector<double> log_output_weights(double s, const Distribution& q, const Channel& ch) {
  const std::size_t nx = ch.num_inputs();
  const std::size_t ny = ch.num_outputs();
  std::vector<double> log_alpha(ny);
  std::vector<double> terms;
  terms.reserve(nx);
  for (std::size_t y = 0; y < ny; ++y) {
    terms.clear();
    for (std::size_t x = 0; x < nx; ++x) {
      const double p = ch.prob(x, y);
      if (q[x] > 0.0 && p > 0.0) terms.push_back(std::log(q[x]) + s * std::log(p));
    }
    log_alpha[y] = stable_log_of_sum(terms);
  }
  return log_alpha;
}

/// values[x] = -log sum_y P^{1-s*rho}(y|x) * alpha_y^rho.
/// A y-term with alpha_y = 0 contributes 0 (limiting value).
std::vector<double> per_letter_values(double s, double rho, const Distribution& q,
                                      const Channel& ch) {
  const std::size_t nx = ch.num_inputs();
  const std::size_t ny = ch.num_outputs();
  const auto log_alpha = log_output_weights(s, q, ch);
  const double own_exp = 1.0 - s * rho;

  std::vector<double> values(nx);
  std::vector<double> terms;
  terms.reserve(ny);
  for (std::size_t x = 0; x < nx; ++x) {
    terms.clear();
    for (std::size_t y = 0; y < ny; ++y) {
      const double p = ch.prob(x, y);
      if (p > 0.0 && log_alpha[y] != -kInf)
        terms.push_back(own_exp * std::log(p) + rho * log_alpha[y]);
    }
    values[x] = -stable_log_of_sum(terms);  // empty support -> +inf
  }
  return values;
}

double weighted_value_sum(const std::vector<double>& values, const Distribution& w) {
  double acc = 0.0;
  for (std::size_t x = 0; x < w.size(); ++x) {
    if (w[x] == 0.0) continue;  // 0 * anything (incl. +inf) contributes 0
    acc += w[x] * values[x];
  }
  return acc;
}

}  // namespace

double mutual_information(const Distribution& q, const Channel& ch) {
  check_input_dim(q, ch, "mutual_information");
  const std::size_t nx = ch.num_inputs();
  const std::size_t ny = ch.num_outputs();

  std::vector<double> out_marginal(ny, 0.0);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x) out_marginal[y] += q[x] * ch.prob(x, y);

  double info = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    if (q[x] == 0.0) continue;
    for (std::size_t y = 0; y < ny; ++y) {
      const double p = ch.prob(x, y);
      if (p == 0.0) continue;
      info += q[x] * p * std::log(p / out_marginal[y]);
    }
  }
  // Rounding can leave a tiny negative residue (or a signed zero) at
  // (near-)zero information.
  if (info > -1e-12 && info <= 0.0) info = 0.0;
  return info;
}

double gallager_e0(double rho, const Distribution& q, const Channel& ch) {
  check_rho(rho);
  check_input_dim(q, ch, "gallager_e0");
  const double s = 1.0 / (1.0 + rho);
  const auto log_alpha = log_output_weights(s, q, ch);
  std::vector<double> terms;
  terms.reserve(log_alpha.size());
  for (double la : log_alpha)
    if (la != -kInf) terms.push_back((1.0 + rho) * la);
  const double value = -stable_log_of_sum(terms);
  return (value > -1e-12 && value <= 0.0) ? 0.0 : value;
}

double conditional_e0_general(double s, double rho, const Distribution& q,
                              const Distribution& qtilde, const Channel& ch) {
  check_rho(rho);
  if (!(s > 0.0) || s * rho >= 1.0)
    fail(errc::invalid_s, "require s > 0 and s*rho < 1");
  check_input_dim(q, ch, "conditional_e0_general");
  check_input_dim(qtilde, ch, "conditional_e0_general");
  return weighted_value_sum(per_letter_values(s, rho, q, ch), qtilde);
}

double conditional_e0(double rho, const Distribution& q, const Distribution& qtilde,
                      const Channel& ch) {
  check_rho(rho);
  check_input_dim(q, ch, "conditional_e0");
  check_input_dim(qtilde, ch, "conditional_e0");
  return weighted_value_sum(per_letter_values(1.0 / (1.0 + rho), rho, q, ch), qtilde);
}

PerLetterExponent per_letter(double rho, const Distribution& q, const Channel& ch) {
  check_rho(rho);
  check_input_dim(q, ch, "per_letter");
  return {per_letter_values(1.0 / (1.0 + rho), rho, q, ch), rho, q};
}

double kl_divergence(const Distribution& qtilde, const Distribution& q) {
  if (qtilde.size() != q.size())
    fail(errc::invalid_config, "kl_divergence: dimension mismatch");
  double d = 0.0;
  for (std::size_t x = 0; x < q.size(); ++x) {
    if (qtilde[x] == 0.0) continue;
    if (q[x] == 0.0) return kInf;
    d += qtilde[x] * std::log(qtilde[x] / q[x]);
  }
  // Guard against rounding pushing a true zero slightly negative.
  if (d > -1e-12 && d <= 0.0) d = 0.0;
  return d;
}

std::pair<Distribution, double> e0_decomposition_minimizer(double rho,
                                                           const Distribution& q,
                                                           const Channel& ch) {
  check_rho(rho);
  check_input_dim(q, ch, "e0_decomposition_minimizer");
  if (!q.strictly_positive())
    fail(errc::non_positive_input,
         "decomposition minimizer requires strictly positive Q");

  const auto values = per_letter_values(1.0 / (1.0 + rho), rho, q, ch);
  const std::size_t nx = q.size();

  // Tilt in the log domain: log w_x = log Q(x) - values[x].
  std::vector<double> log_w(nx);
  double max_log = -kInf;
  for (std::size_t x = 0; x < nx; ++x) {
    log_w[x] = std::log(q[x]) - values[x];
    max_log = std::max(max_log, log_w[x]);
  }
  double norm = 0.0;
  std::vector<double> w(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    w[x] = std::exp(log_w[x] - max_log);
    norm += w[x];
  }
  for (double& wx : w) wx /= norm;
  // min value = -log sum_x Q(x) e^{-values[x]} = -(max_log + log norm)
  const double minimum = -(max_log + std::log(norm));
  return {Distribution(std::move(w)), minimum};
}

double penalized_objective(const PerLetterExponent& pl, const Distribution& qtilde) {
  if (qtilde.size() != pl.base_input.size())
    fail(errc::invalid_config, "penalized_objective: dimension mismatch");
  const double d = kl_divergence(qtilde, pl.base_input);
  if (d == kInf) return -kInf;
  return weighted_value_sum(pl.values, qtilde) - pl.rho * d;
}

}  // namespace gallager

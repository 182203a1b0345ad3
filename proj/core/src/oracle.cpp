// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "gallager/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gallager/exponents.hpp"

namespace gallager {
namespace oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxClasses = 1e7;

template <typename Visitor>
void compositions_rec(std::uint64_t remaining, std::size_t idx,
                      std::vector<std::uint32_t>& counts, Visitor& visit) {
  if (idx + 1 == counts.size()) {
    counts[idx] = static_cast<std::uint32_t>(remaining);
    visit(std::span<const std::uint32_t>(counts.data(), counts.size()));
    return;
  }
  for (std::uint64_t c = 0; c <= remaining; ++c) {
    counts[idx] = static_cast<std::uint32_t>(c);
    compositions_rec(remaining - c, idx + 1, counts, visit);
  }
}

/// Visits every composition of n into `parts` non-negative integers in
/// lexicographically ascending order.
template <typename Visitor>
void for_each_composition(std::uint64_t n, std::size_t parts, Visitor&& visit) {
  std::vector<std::uint32_t> counts(parts, 0);
  compositions_rec(n, 0, counts, visit);
}

double log_multinomial_coeff(std::uint64_t n, std::span<const std::uint32_t> counts) {
  double lc = std::lgamma(static_cast<double>(n) + 1.0);
  for (std::uint32_t c : counts) lc -= std::lgamma(static_cast<double>(c) + 1.0);
  return lc;
}

void check_enumerable(std::uint64_t n, std::size_t alphabet_size) {
  if (alphabet_size < 1) fail(errc::invalid_config, "alphabet must be non-empty");
  if (n < 1) fail(errc::invalid_config, "n must be positive");
  const double classes = count_type_classes(n, alphabet_size);
  if (classes > kMaxClasses)
    fail(errc::too_many_types, "type class count " + std::to_string(classes) +
                                   " exceeds the 1e7 enumeration cap");
}

}  // namespace

TypeClassTable::TypeClassTable(std::uint64_t n, std::size_t alphabet_size,
                               std::size_t num_classes)
    : n_(n), alphabet_size_(alphabet_size) {
  counts_.reserve(num_classes * alphabet_size);
  log_coeff_.reserve(num_classes);
  log_prob_.reserve(num_classes);
}

EmpiricalType TypeClassTable::type(std::size_t i) const {
  const auto c = counts(i);
  return EmpiricalType(std::vector<std::uint64_t>(c.begin(), c.end()));
}

void TypeClassTable::append(std::span<const std::uint32_t> counts, double log_coeff,
                            double log_prob) {
  counts_.insert(counts_.end(), counts.begin(), counts.end());
  log_coeff_.push_back(log_coeff);
  log_prob_.push_back(log_prob);
}

double count_type_classes(std::uint64_t n, std::size_t alphabet_size) {
  // C(n + d - 1, d - 1) via lgamma; exact enough for cap checks.
  const double nd = static_cast<double>(n);
  const double d = static_cast<double>(alphabet_size);
  return std::exp(std::lgamma(nd + d) - std::lgamma(nd + 1.0) - std::lgamma(d));
}

TypeClassTable enumerate_types(std::uint64_t n, std::size_t alphabet_size,
                               const Distribution& q) {
  if (q.size() != alphabet_size)
    fail(errc::invalid_config, "enumerate_types: distribution length != alphabet size");
  check_enumerable(n, alphabet_size);

  std::vector<double> log_q(alphabet_size);
  for (std::size_t x = 0; x < alphabet_size; ++x)
    log_q[x] = q[x] > 0.0 ? std::log(q[x]) : -kInf;

  TypeClassTable table(n, alphabet_size,
                       static_cast<std::size_t>(count_type_classes(n, alphabet_size)));
  for_each_composition(n, alphabet_size, [&](std::span<const std::uint32_t> counts) {
    const double lc = log_multinomial_coeff(n, counts);
    double lp = lc;
    for (std::size_t x = 0; x < alphabet_size; ++x) {
      if (counts[x] == 0) continue;
      lp = (log_q[x] == -kInf) ? -kInf : lp + counts[x] * log_q[x];
    }
    table.append(counts, lc, lp);
  });
  return table;
}

BestType best_type_exact(double rho, const Distribution& q, const Channel& ch,
                         std::uint64_t n) {
  check_rho(rho);
  if (q.size() != ch.num_inputs())
    fail(errc::invalid_config, "best_type_exact: distribution length != |X|");
  check_enumerable(n, ch.num_inputs());

  const PerLetterExponent pl = per_letter(rho, q, ch);
  const std::size_t d = ch.num_inputs();
  const double nd = static_cast<double>(n);

  std::vector<std::uint32_t> best_counts;
  double best_score = -kInf;
  for_each_composition(n, d, [&](std::span<const std::uint32_t> counts) {
    double e = 0.0;
    double div = 0.0;
    for (std::size_t x = 0; x < d; ++x) {
      if (counts[x] == 0) continue;
      const double t = counts[x] / nd;
      e += t * pl.values[x];
      if (q[x] == 0.0) {
        div = kInf;
        break;
      }
      div += t * std::log(t / q[x]);
    }
    if (div == kInf) return;
    const double score = e - rho * div;
    if (score > best_score) {
      best_score = score;
      best_counts.assign(counts.begin(), counts.end());
    }
  });
  if (best_counts.empty())
    fail(errc::non_positive_input, "no type lies inside the support of Q");
  return {EmpiricalType(std::vector<std::uint64_t>(best_counts.begin(), best_counts.end())),
          best_score, true};
}

BestType constrained_best_type(double rho, const Distribution& q, const Channel& ch,
                               std::uint64_t n, double radius) {
  check_rho(rho);
  if (q.size() != ch.num_inputs())
    fail(errc::invalid_config, "constrained_best_type: distribution length != |X|");
  if (radius < 0.0) fail(errc::invalid_config, "radius must be non-negative");
  check_enumerable(n, ch.num_inputs());

  const PerLetterExponent pl = per_letter(rho, q, ch);
  const std::size_t d = ch.num_inputs();
  const double nd = static_cast<double>(n);

  std::vector<std::uint32_t> best_counts;
  double best_e = -kInf;
  std::vector<std::uint32_t> closest_counts;
  double closest_div = kInf;
  double closest_e = -kInf;

  for_each_composition(n, d, [&](std::span<const std::uint32_t> counts) {
    double e = 0.0;
    double div = 0.0;
    for (std::size_t x = 0; x < d; ++x) {
      if (counts[x] == 0) continue;
      const double t = counts[x] / nd;
      e += t * pl.values[x];
      if (q[x] == 0.0) {
        div = kInf;
        break;
      }
      div += t * std::log(t / q[x]);
    }
    if (div < closest_div) {
      closest_div = div;
      closest_e = e;
      closest_counts.assign(counts.begin(), counts.end());
    }
    if (div <= radius && e > best_e) {
      best_e = e;
      best_counts.assign(counts.begin(), counts.end());
    }
  });

  if (!best_counts.empty())
    return {EmpiricalType(std::vector<std::uint64_t>(best_counts.begin(), best_counts.end())),
            best_e, true};
  return {EmpiricalType(std::vector<std::uint64_t>(closest_counts.begin(), closest_counts.end())),
          closest_e, false};
}

std::pair<Distribution, double> grid_min_decomposition(double rho, const Distribution& q,
                                                       const Channel& ch, double step) {
  check_rho(rho);
  if (q.size() != ch.num_inputs())
    fail(errc::invalid_config, "grid_min_decomposition: distribution length != |X|");
  if (ch.num_inputs() > 4)
    fail(errc::alphabet_too_large, "grid search supports |X| <= 4");
  if (!(step > 0.0) || step > 1.0)
    fail(errc::invalid_config, "step must be in (0, 1]");

  const std::uint64_t k = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(1.0 / step)));
  const std::size_t d = ch.num_inputs();
  if (count_type_classes(k, d) > 2e7)
    fail(errc::too_many_types, "lattice too fine for |X|; increase step");

  const PerLetterExponent pl = per_letter(rho, q, ch);
  const double kd = static_cast<double>(k);

  std::vector<std::uint32_t> best_counts;
  double best_obj = kInf;
  for_each_composition(k, d, [&](std::span<const std::uint32_t> counts) {
    double obj = 0.0;
    for (std::size_t x = 0; x < d; ++x) {
      if (counts[x] == 0) continue;
      const double t = counts[x] / kd;
      if (q[x] == 0.0) {
        obj = kInf;
        break;
      }
      obj += t * pl.values[x] + t * std::log(t / q[x]);
    }
    if (obj < best_obj) {
      best_obj = obj;
      best_counts.assign(counts.begin(), counts.end());
    }
  });
  if (best_counts.empty())
    fail(errc::non_positive_input, "no lattice point lies inside the support of Q");

  std::vector<double> probs(d);
  for (std::size_t x = 0; x < d; ++x) probs[x] = best_counts[x] / kd;
  return {Distribution(std::move(probs)), best_obj};
}

double exhaustive_conditional_bound(double s, double rho, const Distribution& q,
                                    const Channel& ch, std::span<const int> word,
                                    std::uint64_t num_messages) {
  check_rho(rho);
  if (!(s > 0.0) || s * rho >= 1.0)
    fail(errc::invalid_s, "require s > 0 and s*rho < 1");
  if (q.size() != ch.num_inputs())
    fail(errc::invalid_config, "exhaustive_conditional_bound: distribution length != |X|");
  if (word.empty()) fail(errc::empty_word, "word must be non-empty");
  if (num_messages == 0) fail(errc::invalid_config, "need at least one message");

  const std::size_t nx = ch.num_inputs();
  const std::size_t ny = ch.num_outputs();
  const std::size_t n = word.size();
  for (int symbol : word)
    if (symbol < 0 || static_cast<std::size_t>(symbol) >= nx)
      fail(errc::symbol_out_of_range, "word symbol outside the input alphabet");

  if (static_cast<double>(n) * std::log(static_cast<double>(ny)) > std::log(1e6) + 1e-9)
    fail(errc::output_space_too_large, "|Y|^n exceeds the 1e6 enumeration cap");

  // Per-letter factor table: factor[x][y] = P(y|x)^{1-s*rho} * alpha_y^rho,
  // alpha_y = sum_x' Q(x') P^s(y|x').  The sum over y-sequences below stays
  // a full enumeration; only the inner x-sum uses the product form.
  std::vector<double> alpha(ny, 0.0);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x)
      if (q[x] > 0.0 && ch.prob(x, y) > 0.0) alpha[y] += q[x] * std::pow(ch.prob(x, y), s);

  std::vector<double> factor(nx * ny);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      const double p = ch.prob(x, y);
      factor[x * ny + y] =
          (p > 0.0 ? std::pow(p, 1.0 - s * rho) : 0.0) * std::pow(alpha[y], rho);
    }

  std::vector<std::size_t> yseq(n, 0);
  double total = 0.0;
  while (true) {
    double term = 1.0;
    for (std::size_t k = 0; k < n; ++k)
      term *= factor[static_cast<std::size_t>(word[k]) * ny + yseq[k]];
    total += term;
    // odometer increment
    std::size_t k = 0;
    while (k < n && ++yseq[k] == ny) {
      yseq[k] = 0;
      ++k;
    }
    if (k == n) break;
  }
  return std::pow(static_cast<double>(num_messages), rho) * total;
}

}  // namespace oracle
}  // namespace gallager

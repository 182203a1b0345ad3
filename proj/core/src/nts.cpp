// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "gallager/nts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <thread>

#include "gallager/oracle.hpp"

namespace gallager {
namespace nts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Above this many type classes the alias table is not built and codewords
// are sampled per symbol.
constexpr double kMaxIndexedClasses = 300'000.0;

std::size_t draw_symbol(const std::vector<double>& cdf, RngStream& rng) {
  const double u = rng.uniform();
  // cdf is non-decreasing with back() == 1 (up to rounding); the final
  // bucket absorbs any residue.
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  std::size_t x = static_cast<std::size_t>(it - cdf.begin());
  if (x >= cdf.size()) x = cdf.size() - 1;
  return x;
}

std::vector<double> cumulative(const Distribution& q) {
  std::vector<double> cdf(q.size());
  double acc = 0.0;
  for (std::size_t x = 0; x < q.size(); ++x) {
    acc += q[x];
    cdf[x] = acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

}  // namespace

void NtsConfig::validate() const {
  check_rho(rho);
  if (q.size() != ch.num_inputs())
    fail(errc::invalid_config, "nts: distribution length != |X|");
  if (!q.strictly_positive())
    fail(errc::non_positive_input, "nts: generating distribution must be strictly positive");
  if (n < 1) fail(errc::invalid_config, "nts: block length n must be >= 1");
  if (trials < 1) fail(errc::invalid_config, "nts: trials must be >= 1");
  if (m_cap < 1) fail(errc::invalid_config, "nts: m_cap must be >= 1");
}

EmpiricalType sample_codeword(const Distribution& q, std::uint64_t n, RngStream& rng) {
  if (n == 0) fail(errc::empty_word, "cannot sample a length-0 codeword");
  const auto cdf = cumulative(q);
  std::vector<std::uint64_t> counts(q.size(), 0);
  for (std::uint64_t i = 0; i < n; ++i) ++counts[draw_symbol(cdf, rng)];
  return EmpiricalType(std::move(counts));
}

std::vector<int> sample_codeword_symbols(const Distribution& q, std::uint64_t n,
                                         RngStream& rng) {
  if (n == 0) fail(errc::empty_word, "cannot sample a length-0 codeword");
  const auto cdf = cumulative(q);
  std::vector<int> word(n);
  for (std::uint64_t i = 0; i < n; ++i) word[i] = static_cast<int>(draw_symbol(cdf, rng));
  return word;
}

AliasTable AliasTable::build(const std::vector<double>& weights) {
  const std::size_t k = weights.size();
  if (k == 0) fail(errc::invalid_config, "alias table over empty support");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) fail(errc::invalid_config, "alias weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) fail(errc::invalid_config, "alias weights sum to zero");

  AliasTable table;
  table.prob_.assign(k, 0.0);
  table.alias_.assign(k, 0);

  std::vector<double> scaled(k);
  for (std::size_t i = 0; i < k; ++i)
    scaled[i] = weights[i] * static_cast<double>(k) / total;

  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  small.reserve(k);
  large.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));

  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    table.prob_[s] = scaled[s];
    table.alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::uint32_t l : large) table.prob_[l] = 1.0;
  for (std::uint32_t s : small) table.prob_[s] = 1.0;  // numerical leftovers
  return table;
}

TypeSampler::TypeSampler(const Distribution& q, std::uint64_t n)
    : mode_(Mode::per_symbol), q_(q), n_(n) {
  if (n == 0) fail(errc::empty_word, "type sampler needs n >= 1");
  const std::size_t d = q.size();

  const double classes = oracle::count_type_classes(n, d);
  const bool binary_fits = d == 2 && n <= 4'000'000;
  if (binary_fits || classes <= kMaxIndexedClasses) {
    // Weights exp(log_prob - max) over the enumerated classes.
    std::vector<double> log_prob;
    if (d == 2) {
      // class c carries counts (c, n - c), matching the lexicographic order
      // of enumerate_types
      mode_ = Mode::binary;
      log_prob.resize(static_cast<std::size_t>(n) + 1);
      const double lg_n = std::lgamma(static_cast<double>(n) + 1.0);
      const double lq0 = q[0] > 0.0 ? std::log(q[0]) : -kInf;
      const double lq1 = q[1] > 0.0 ? std::log(q[1]) : -kInf;
      for (std::uint64_t c = 0; c <= n; ++c) {
        const double k0 = static_cast<double>(c);
        const double k1 = static_cast<double>(n - c);
        double lp = lg_n - std::lgamma(k0 + 1.0) - std::lgamma(k1 + 1.0);
        lp += (c > 0) ? (lq0 == -kInf ? -kInf : k0 * lq0) : 0.0;
        lp += (n - c > 0) ? (lq1 == -kInf ? -kInf : k1 * lq1) : 0.0;
        log_prob[static_cast<std::size_t>(c)] = lp;
      }
      class_count_ = log_prob.size();
    } else {
      mode_ = Mode::enumerated;
      const auto table = oracle::enumerate_types(n, d, q);
      class_count_ = table.size();
      class_counts_.reserve(class_count_ * d);
      log_prob.resize(class_count_);
      for (std::size_t i = 0; i < class_count_; ++i) {
        const auto c = table.counts(i);
        class_counts_.insert(class_counts_.end(), c.begin(), c.end());
        log_prob[i] = table.log_prob(i);
      }
    }
    double max_lp = -kInf;
    for (double lp : log_prob) max_lp = std::max(max_lp, lp);
    std::vector<double> weights(log_prob.size());
    for (std::size_t i = 0; i < log_prob.size(); ++i)
      weights[i] = log_prob[i] == -kInf ? 0.0 : std::exp(log_prob[i] - max_lp);
    alias_ = AliasTable::build(weights);
  } else {
    cdf_ = cumulative(q);
  }
}

std::uint64_t TypeSampler::class_count(std::size_t c, std::size_t x) const {
  if (mode_ == Mode::binary) return x == 0 ? c : n_ - c;
  return class_counts_[c * q_.size() + x];
}

EmpiricalType TypeSampler::class_type(std::size_t c) const {
  std::vector<std::uint64_t> counts(q_.size());
  for (std::size_t x = 0; x < q_.size(); ++x) counts[x] = class_count(c, x);
  return EmpiricalType(std::move(counts));
}

void TypeSampler::sample_into(RngStream& rng, std::vector<std::uint64_t>& counts) const {
  counts.assign(q_.size(), 0);
  if (indexed()) {
    const std::size_t c = alias_.sample(rng);
    for (std::size_t x = 0; x < q_.size(); ++x) counts[x] = class_count(c, x);
    return;
  }
  for (std::uint64_t i = 0; i < n_; ++i) ++counts[draw_symbol(cdf_, rng)];
}

EmpiricalType TypeSampler::sample(RngStream& rng) const {
  std::vector<std::uint64_t> counts;
  sample_into(rng, counts);
  return EmpiricalType(std::move(counts));
}

namespace {
PerLetterExponent validated_letters(const NtsConfig& cfg) {
  cfg.validate();
  return per_letter(cfg.rho, cfg.q, cfg.ch);
}
}  // namespace

NtsRunner::NtsRunner(NtsConfig cfg)
    : cfg_(std::move(cfg)),
      letters_(validated_letters(cfg_)),
      e_max_(*std::max_element(letters_.values.begin(), letters_.values.end())),
      sampler_(cfg_.q, cfg_.n) {
  if (sampler_.indexed()) {
    class_e_.resize(sampler_.num_classes());
    const double n = static_cast<double>(cfg_.n);
    for (std::size_t c = 0; c < class_e_.size(); ++c) {
      double dot = 0.0;
      for (std::size_t x = 0; x < cfg_.q.size(); ++x) {
        const std::uint64_t cx = sampler_.class_count(c, x);
        if (cx > 0) dot += static_cast<double>(cx) * letters_.values[x];
      }
      class_e_[c] = dot / n;
    }
  }
}

FavoriteTypeResult NtsRunner::run_trial(RngStream& rng) const {
  const double n = static_cast<double>(cfg_.n);
  const double rho = cfg_.rho;
  const bool indexed = sampler_.indexed();

  double best = -kInf;
  std::uint64_t best_index = 0;
  std::size_t best_class = 0;
  std::vector<std::uint64_t> best_counts;
  std::vector<std::uint64_t> counts;

  std::uint64_t m = 0;
  bool truncated = false;
  while (true) {
    ++m;
    double e;
    std::size_t cls = 0;
    if (indexed) {
      cls = sampler_.sample_class(rng);
      e = class_e_[cls];
    } else {
      sampler_.sample_into(rng, counts);
      double dot = 0.0;
      for (std::size_t x = 0; x < counts.size(); ++x)
        if (counts[x] > 0) dot += static_cast<double>(counts[x]) * letters_.values[x];
      e = dot / n;
    }
    const double penalty = rho * std::log(static_cast<double>(m)) / n;
    if (e - penalty > best) {
      best = e - penalty;
      best_index = m;
      best_class = cls;
      if (!indexed) best_counts = counts;
    }
    // No codeword m' > m can beat `best`: E(T) <= e_max and the penalty only
    // grows, so once it exceeds the gap the search is complete.
    if (penalty > e_max_ - best) break;
    if (m >= cfg_.m_cap) {
      truncated = true;
      break;
    }
  }

  EmpiricalType winner =
      indexed ? sampler_.class_type(best_class) : EmpiricalType(std::move(best_counts));
  return {best_index, std::move(winner), best, m, truncated};
}

FavoriteTypeResult favorite_type(const NtsConfig& cfg, RngStream& rng) {
  return NtsRunner(cfg).run_trial(rng);
}

unsigned worker_count(std::uint64_t trials) {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GALLAGER_FORGE_THREADS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end != env && parsed >= 1) workers = static_cast<unsigned>(parsed);
  }
  if (trials < workers) workers = static_cast<unsigned>(trials);
  return std::max(1u, workers);
}

NtsAggregate run_trials(const NtsConfig& cfg, const Distribution& target) {
  return run_trials(NtsRunner(cfg), target);
}

NtsAggregate run_trials(const NtsRunner& runner, const Distribution& target) {
  const NtsConfig& cfg = runner.config();
  if (target.size() != cfg.q.size())
    fail(errc::invalid_config, "nts: target length != |X|");

  const std::uint64_t trials = cfg.trials;
  std::vector<std::optional<FavoriteTypeResult>> results(trials);

  const unsigned workers = worker_count(trials);
  auto work = [&](unsigned worker) {
    for (std::uint64_t t = worker; t < trials; t += workers) {
      RngStream rng = trial_stream(cfg.seed, t);
      results[t] = runner.run_trial(rng);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  // Aggregation walks trials in index order: identical output for any
  // worker count.
  NtsAggregate agg{Distribution::uniform(cfg.q.size()),
                   0.0,
                   0.0,
                   {},
                   {},
                   0,
                   target,
                   cfg};
  agg.per_trial.reserve(trials);
  agg.per_trial_tv.reserve(trials);
  std::vector<double> mean(cfg.q.size(), 0.0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    FavoriteTypeResult& r = *results[t];
    const Distribution winner = r.winner_type.to_distribution();
    for (std::size_t x = 0; x < mean.size(); ++x) mean[x] += winner[x];
    agg.per_trial_tv.push_back(total_variation(winner, target));
    if (r.truncated) ++agg.truncated_trials;
    agg.per_trial.push_back(std::move(r));
  }
  for (double& m : mean) m /= static_cast<double>(trials);
  agg.mean_type = Distribution(std::move(mean));
  agg.tv_to_target = total_variation(agg.mean_type, target);

  std::vector<double> sorted_tv = agg.per_trial_tv;
  std::sort(sorted_tv.begin(), sorted_tv.end());
  const std::size_t mid = sorted_tv.size() / 2;
  agg.median_tv = (sorted_tv.size() % 2 == 1)
                      ? sorted_tv[mid]
                      : 0.5 * (sorted_tv[mid - 1] + sorted_tv[mid]);
  return agg;
}

double codebook_size_for_target(std::uint64_t n, const Distribution& q,
                                const Distribution& qprime) {
  if (n < 1) fail(errc::invalid_config, "n must be >= 1");
  const double d = kl_divergence(qprime, q);
  if (d == kInf)
    fail(errc::infinite_divergence,
         "target escapes the support of Q: expected codebook size is infinite");
  return std::ceil(std::exp(static_cast<double>(n) * d));
}

}  // namespace nts
}  // namespace gallager

// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: information functionals, the Arimoto solver, the
// natural-type-selection experiment, and oracle cross-checks.
//
// Exit codes: 0 success, 1 check failure, 2 usage/validation error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gallager/arimoto.hpp"
#include "gallager/dmc.hpp"
#include "gallager/exponents.hpp"
#include "gallager/nts.hpp"
#include "gallager/oracle.hpp"
#include "gallager/rng.hpp"

namespace {

using gallager::Channel;
using gallager::Distribution;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct DisplayUnit {
  bool bits = false;
  double scale() const { return bits ? 1.0 / std::numbers::ln2 : 1.0; }
  const char* name() const { return bits ? "bits" : "nats"; }
};

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_csv_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      gallager::fail(gallager::errc::parse_error, "not a number: '" + item + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size())
      gallager::fail(gallager::errc::parse_error, "not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) gallager::fail(gallager::errc::parse_error, "empty list");
  return out;
}

/// Command-line distributions tolerate float noise up to 1e-9 and are then
/// renormalized; anything farther off is a typo and rejected.
Distribution parse_distribution(const std::string& text, std::size_t expected_size) {
  std::vector<double> probs = parse_csv_doubles(text);
  if (probs.size() != expected_size)
    gallager::fail(gallager::errc::invalid_config,
                   "distribution has " + std::to_string(probs.size()) +
                       " entries, channel needs " + std::to_string(expected_size));
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0)
      gallager::fail(gallager::errc::not_a_distribution, "negative probability");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    gallager::fail(gallager::errc::not_a_distribution,
                   "distribution does not sum to 1 (got " + fmt12(sum) + ")");
  for (double& p : probs) p /= sum;
  return Distribution(std::move(probs));
}

std::vector<std::uint64_t> parse_csv_u64(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (double v : parse_csv_doubles(text)) {
    if (v < 1 || v != std::floor(v))
      gallager::fail(gallager::errc::invalid_config,
                     "expected positive integers, got " + fmt12(v));
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

std::ostream& open_sink(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);
  if (!file)
    gallager::fail(gallager::errc::parse_error, "cannot open output file: " + path);
  return file;
}

json distribution_to_json(const Distribution& d) {
  json arr = json::array();
  for (std::size_t x = 0; x < d.size(); ++x) arr.push_back(d[x]);
  return arr;
}

void write_trace_csv(std::ostream& out, const gallager::ArimotoTrace& trace) {
  const std::size_t d = trace.iterates.front().size();
  out << "iter";
  for (std::size_t x = 0; x < d; ++x) out << ",Q_" << x;
  out << ",objective\n";
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    out << (k + 1);
    for (std::size_t x = 0; x < d; ++x) out << ',' << fmt17(trace.iterates[k][x]);
    out << ',' << fmt17(trace.objectives[k]) << '\n';
  }
}

void print_solver_summary(const gallager::ArimotoTrace& trace, const DisplayUnit& unit,
                          const char* objective_name) {
  std::cout << "final Q =";
  const Distribution& q = trace.final_input();
  for (std::size_t x = 0; x < q.size(); ++x) std::cout << ' ' << fmt12(q[x]);
  std::cout << '\n'
            << objective_name << " = " << fmt12(trace.final_objective() * unit.scale())
            << ' ' << unit.name() << '\n'
            << "iterations = " << trace.iterations() << '\n'
            << "stop_reason = " << gallager::stop_reason_name(trace.stop_reason) << '\n';
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_e0(const Channel& ch, double rho, const std::string& q_text,
           const std::string& qtilde_text, const DisplayUnit& unit) {
  const Distribution q = parse_distribution(q_text, ch.num_inputs());
  const double e0 = gallager::gallager_e0(rho, q, ch);
  std::cout << "E0(rho,Q) = " << fmt12(e0 * unit.scale()) << ' ' << unit.name() << '\n';
  if (!qtilde_text.empty()) {
    const Distribution qt = parse_distribution(qtilde_text, ch.num_inputs());
    const double cond = gallager::conditional_e0(rho, q, qt, ch);
    const double div = gallager::kl_divergence(qt, q);
    std::cout << "E0(rho,Q,Qt) = " << fmt12(cond * unit.scale()) << ' ' << unit.name()
              << '\n'
              << "D(Qt||Q) = " << fmt12(div * unit.scale()) << ' ' << unit.name() << '\n';
  }
  return kExitOk;
}

int cmd_mi(const Channel& ch, const std::string& q_text, const DisplayUnit& unit) {
  const Distribution q = parse_distribution(q_text, ch.num_inputs());
  std::cout << "I(Q,P) = " << fmt12(gallager::mutual_information(q, ch) * unit.scale())
            << ' ' << unit.name() << '\n';
  return kExitOk;
}

int cmd_arimoto(const Channel& ch, double rho, const std::string& q0_text, double tol,
                std::uint64_t max_iter, const std::string& out_path,
                const DisplayUnit& unit) {
  const Distribution q0 = q0_text.empty() ? Distribution::uniform(ch.num_inputs())
                                          : parse_distribution(q0_text, ch.num_inputs());
  const auto trace = gallager::solve(rho, q0, ch, tol, max_iter);
  if (!out_path.empty()) {
    std::ofstream file;
    write_trace_csv(open_sink(file, out_path), trace);
  }
  print_solver_summary(trace, unit, "E0");
  return kExitOk;
}

int cmd_capacity(const Channel& ch, const std::string& q0_text, double tol,
                 std::uint64_t max_iter, const std::string& out_path,
                 const DisplayUnit& unit) {
  const Distribution q0 = q0_text.empty() ? Distribution::uniform(ch.num_inputs())
                                          : parse_distribution(q0_text, ch.num_inputs());
  const auto trace = gallager::solve_capacity(q0, ch, tol, max_iter);
  if (!out_path.empty()) {
    std::ofstream file;
    write_trace_csv(open_sink(file, out_path), trace);
  }
  print_solver_summary(trace, unit, "I");
  return kExitOk;
}

int cmd_trace_fig1(const Channel& ch, double rho, const std::string& q0_text, double tol,
                   std::uint64_t max_iter, const std::string& out_path) {
  const Distribution q0 = q0_text.empty() ? Distribution::uniform(ch.num_inputs())
                                          : parse_distribution(q0_text, ch.num_inputs());
  const auto trace = gallager::solve(rho, q0, ch, tol, max_iter);

  std::ofstream file;
  std::ostream& out = open_sink(file, out_path);
  const std::size_t d = q0.size();
  // One row per Arimoto step k -> k+1: the current input, its Gallager
  // function, the conditional exponent toward the next iterate, the step
  // divergence, and the rate-penalized objective the step maximizes.
  out << "iter";
  for (std::size_t x = 0; x < d; ++x) out << ",Q_" << x;
  out << ",objective,conditional,divergence,penalized\n";
  for (std::size_t k = 0; k + 1 < trace.iterates.size(); ++k) {
    const Distribution& qk = trace.iterates[k];
    const Distribution& qn = trace.iterates[k + 1];
    const double cond = gallager::conditional_e0(rho, qk, qn, ch);
    const double div = gallager::kl_divergence(qn, qk);
    out << (k + 1);
    for (std::size_t x = 0; x < d; ++x) out << ',' << fmt17(qk[x]);
    out << ',' << fmt17(trace.objectives[k]) << ',' << fmt17(cond) << ',' << fmt17(div)
        << ',' << fmt17(cond - rho * div) << '\n';
  }
  return kExitOk;
}

int cmd_nts(const Channel& ch, double rho, const std::string& q_text,
            const std::string& n_text, std::uint64_t trials, std::uint64_t seed,
            std::uint64_t m_cap, const std::string& target_text,
            const std::string& out_path, const std::string& format) {
  if (format != "json" && format != "csv" && format != "text")
    gallager::fail(gallager::errc::invalid_config,
                   "unknown format '" + format + "' (want json, csv, or text)");
  const Distribution q = parse_distribution(q_text, ch.num_inputs());
  const std::vector<std::uint64_t> n_list = parse_csv_u64(n_text);
  const Distribution target = target_text.empty()
                                  ? gallager::q_update(rho, q, ch)
                                  : parse_distribution(target_text, ch.num_inputs());

  json doc;
  doc["config"] = {{"rho", rho},
                   {"q", distribution_to_json(q)},
                   {"n", n_list},
                   {"trials", trials},
                   {"seed", seed},
                   {"m_cap", m_cap},
                   {"target", distribution_to_json(target)}};
  doc["results"] = json::array();

  std::ostringstream csv;
  csv << "n,trial,winner_index,value,truncated,tv";
  for (std::size_t x = 0; x < q.size(); ++x) csv << ",count_" << x;
  csv << '\n';

  std::uint64_t total_truncated = 0;
  std::ostringstream table;
  char row[160];
  std::snprintf(row, sizeof(row), "%8s %14s %14s %10s %16s\n", "n", "median_tv",
                "tv(mean)", "truncated", "expected_index");
  table << row;
  for (const std::uint64_t n : n_list) {
    gallager::nts::NtsConfig cfg{rho, q, ch, n, trials, seed, m_cap};
    const auto agg = gallager::nts::run_trials(cfg, target);
    total_truncated += agg.truncated_trials;
    // expected first index of a target-typed codeword, ceil(exp(n D))
    const double depth = gallager::nts::codebook_size_for_target(n, q, target);

    json block;
    block["n"] = n;
    block["aggregate"] = {{"mean_type", distribution_to_json(agg.mean_type)},
                          {"tv_to_target", agg.tv_to_target},
                          {"median_tv", agg.median_tv},
                          {"truncated_trials", agg.truncated_trials}};
    block["trials"] = json::array();
    for (std::size_t t = 0; t < agg.per_trial.size(); ++t) {
      const auto& r = agg.per_trial[t];
      block["trials"].push_back({{"trial", t},
                                 {"winner_index", r.winner_index},
                                 {"counts", r.winner_type.counts()},
                                 {"value", r.value},
                                 {"truncated", r.truncated},
                                 {"tv", agg.per_trial_tv[t]}});
      csv << n << ',' << t << ',' << r.winner_index << ',' << fmt17(r.value) << ','
          << (r.truncated ? 1 : 0) << ',' << fmt17(agg.per_trial_tv[t]);
      for (std::uint64_t c : r.winner_type.counts()) csv << ',' << c;
      csv << '\n';
    }
    doc["results"].push_back(std::move(block));
    std::snprintf(row, sizeof(row), "%8llu %14.6g %14.6g %10llu %16.6g\n",
                  static_cast<unsigned long long>(n), agg.median_tv, agg.tv_to_target,
                  static_cast<unsigned long long>(agg.truncated_trials), depth);
    table << row;
  }
  std::cout << table.str();
  if (total_truncated > 0)
    std::cerr << "warning: " << total_truncated
              << " trial(s) hit m_cap before the stopping rule fired\n";

  if (!out_path.empty()) {
    std::ofstream file;
    std::ostream& out = open_sink(file, out_path);
    if (format == "csv")
      out << csv.str();
    else if (format == "json")
      out << doc.dump(2) << '\n';
    else
      out << table.str();
  }
  return kExitOk;
}

int cmd_oracle_check(const Channel& ch, double rho, const std::string& q_text,
                     std::uint64_t exhaustive_n, std::uint64_t type_n) {
  const Distribution q = q_text.empty() ? Distribution::uniform(ch.num_inputs())
                                        : parse_distribution(q_text, ch.num_inputs());
  bool all_ok = true;
  auto report = [&](const char* name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    all_ok = all_ok && ok;
  };

  // 1. Single-letterization: brute-force output enumeration vs the
  //    single-letter exponent, on random small words.  An explicit --n is
  //    honored verbatim so that infeasible requests surface as validation
  //    errors; otherwise word lengths up to 6 (capped by |Y|^n <= 1e6).
  {
    std::uint64_t max_len = exhaustive_n;
    if (max_len == 0) {
      max_len = 6;
      while (max_len > 1 &&
             double(max_len) * std::log(double(ch.num_outputs())) > std::log(1e6))
        --max_len;
    }
    double worst = 0.0;
    gallager::RngStream rng(0xF00DF00DULL);
    for (std::uint64_t len = 1; len <= max_len; ++len) {
      for (int rep = 0; rep < 5; ++rep) {
        const double rr = 0.05 + 0.9 * rng.uniform();
        const double ss = (0.1 + 0.8 * rng.uniform()) / (1.0 + rr);
        std::vector<int> word(len);
        for (auto& sym : word) sym = static_cast<int>(rng.uniform_below(ch.num_inputs()));
        const std::uint64_t msgs = 1 + rng.uniform_below(64);
        const double brute =
            gallager::oracle::exhaustive_conditional_bound(ss, rr, q, ch, word, msgs);
        const double e0 = gallager::conditional_e0_general(
            ss, rr, q, gallager::type_of(word, ch.num_inputs()).to_distribution(), ch);
        const double reference =
            std::exp(-double(len) * (e0 - rr * std::log(double(msgs)) / double(len)));
        worst = std::max(worst, std::fabs(brute - reference) /
                                    std::max(std::fabs(reference), 1e-300));
      }
    }
    report("appendix-single-letterization", worst < 1e-9,
           "max relative error " + fmt12(worst) + " over word lengths 1.." +
               std::to_string(max_len) + " (tolerance 1e-9)");
  }

  // 2. Decomposition: closed-form minimizer vs gallager_e0, and the lattice
  //    search for small alphabets.
  {
    const auto [minimizer, minimum] = gallager::e0_decomposition_minimizer(rho, q, ch);
    const double e0 = gallager::gallager_e0(rho, q, ch);
    const double err = std::fabs(minimum - e0);
    bool ok = err < 1e-9;
    std::string detail = "closed-form |min - E0| = " + fmt12(err);
    if (ch.num_inputs() == 2) {
      const auto [grid_arg, grid_min] =
          gallager::oracle::grid_min_decomposition(rho, q, ch, 1e-3);
      const double gerr = std::fabs(grid_min - e0);
      ok = ok && gerr < 1e-5;
      detail += ", grid(step 1e-3) |min - E0| = " + fmt12(gerr);
    } else if (ch.num_inputs() <= 4) {
      const auto [grid_arg, grid_min] =
          gallager::oracle::grid_min_decomposition(rho, q, ch, 0.02);
      const double gerr = std::fabs(grid_min - e0);
      ok = ok && gerr < 1e-2;
      detail += ", grid(step 0.02) |min - E0| = " + fmt12(gerr);
    }
    report("e0-decomposition", ok, detail);
  }

  // 3. Finite-n penalized argmax vs the Arimoto iterate.
  {
    if (!q.strictly_positive()) {
      report("best-type-vs-arimoto", false, "requires strictly positive Q");
    } else {
      const Distribution qprime = gallager::q_update(rho, q, ch);
      const auto best = gallager::oracle::best_type_exact(rho, q, ch, type_n);
      const double tv = gallager::total_variation(best.type.to_distribution(), qprime);
      const double tol =
          std::max(0.05, 3.0 * double(ch.num_inputs()) / double(type_n));
      report("best-type-vs-arimoto", tv <= tol,
             "TV(argmax over n=" + std::to_string(type_n) + " types, Q') = " + fmt12(tv) +
                 " (tolerance " + fmt12(tol) + ")");
    }
  }

  return all_ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gallager exponent and Arimoto iteration toolkit"};
  app.require_subcommand(1);

  std::string channel_path;
  DisplayUnit unit;
  double rho = 0.1;
  double tol = 1e-9;
  std::uint64_t max_iter = 10000;
  std::string q_text, qtilde_text, q0_text, target_text, out_path;
  std::string n_text = "100";
  std::string format = "json";
  std::uint64_t trials = 100, seed = 1, m_cap = 100'000'000;
  std::uint64_t exhaustive_n = 0, type_n = 400;

  auto add_channel = [&](CLI::App* cmd) {
    cmd->add_option("--channel", channel_path, "channel spec JSON file")->required();
  };

  CLI::App* e0 = app.add_subcommand("e0", "Gallager function and conditional exponent");
  add_channel(e0);
  e0->add_option("--rho", rho, "exponent parameter in (0,1]")->required();
  e0->add_option("--q", q_text, "input distribution, comma separated")->required();
  e0->add_option("--qtilde", qtilde_text, "codeword type to condition on");
  e0->add_flag("--bits", unit.bits, "display in bits instead of nats");

  CLI::App* mi = app.add_subcommand("mi", "mutual information I(Q,P)");
  add_channel(mi);
  mi->add_option("--q", q_text)->required();
  mi->add_flag("--bits", unit.bits);

  CLI::App* ar = app.add_subcommand("arimoto", "maximize E0 over the input");
  add_channel(ar);
  ar->add_option("--rho", rho)->required();
  ar->add_option("--q0", q0_text, "start distribution (default uniform)");
  ar->add_option("--tol", tol, "stop when ||dQ||_inf < tol");
  ar->add_option("--max-iter", max_iter);
  ar->add_option("--out", out_path, "write the iterate trace CSV here");
  ar->add_flag("--bits", unit.bits);

  CLI::App* cap = app.add_subcommand("capacity", "capacity-achieving input");
  add_channel(cap);
  cap->add_option("--q0", q0_text);
  cap->add_option("--tol", tol);
  cap->add_option("--max-iter", max_iter);
  cap->add_option("--out", out_path);
  cap->add_flag("--bits", unit.bits);

  CLI::App* fig = app.add_subcommand(
      "trace-fig1", "per-step conditional/unconditional exponent trace");
  add_channel(fig);
  fig->add_option("--rho", rho)->required();
  fig->add_option("--q0", q0_text);
  fig->add_option("--tol", tol);
  fig->add_option("--max-iter", max_iter);
  fig->add_option("--out", out_path, "CSV destination (default stdout)");

  CLI::App* nts = app.add_subcommand("nts", "natural-type-selection experiment");
  add_channel(nts);
  nts->add_option("--rho", rho)->required();
  nts->add_option("--q", q_text)->required();
  nts->add_option("--n", n_text, "block lengths, comma separated")->required();
  nts->add_option("--trials", trials);
  nts->add_option("--seed", seed);
  nts->add_option("--m-cap", m_cap, "hard cap on codewords per trial");
  nts->add_option("--target", target_text, "reference type (default: Arimoto iterate)");
  nts->add_option("--out", out_path, "results file");
  nts->add_option("--format", format, "json or csv");

  CLI::App* oc = app.add_subcommand("oracle-check", "brute-force cross checks");
  add_channel(oc);
  oc->add_option("--rho", rho);
  oc->add_option("--q", q_text, "default uniform");
  oc->add_option("--n", exhaustive_n,
                 "word length for the exhaustive suite (default: auto <= 6)");
  oc->add_option("--type-n", type_n, "denominator for the type-lattice check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const Channel ch = gallager::load_channel(channel_path);
    if (e0->parsed()) return cmd_e0(ch, rho, q_text, qtilde_text, unit);
    if (mi->parsed()) return cmd_mi(ch, q_text, unit);
    if (ar->parsed()) return cmd_arimoto(ch, rho, q0_text, tol, max_iter, out_path, unit);
    if (cap->parsed()) return cmd_capacity(ch, q0_text, tol, max_iter, out_path, unit);
    if (fig->parsed()) return cmd_trace_fig1(ch, rho, q0_text, tol, max_iter, out_path);
    if (nts->parsed())
      return cmd_nts(ch, rho, q_text, n_text, trials, seed, m_cap, target_text, out_path,
                     format);
    if (oc->parsed()) return cmd_oracle_check(ch, rho, q_text, exhaustive_n, type_n);
  } catch (const gallager::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

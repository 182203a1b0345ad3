// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "gallager/arimoto.hpp"
#include "gallager/dmc.hpp"
#include "gallager/exponents.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("gf_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const fs::path out = work_dir() / "stdout.txt";
  const fs::path err = work_dir() / "stderr.txt";
  std::string cmd = env_prefix;
  if (!cmd.empty()) cmd += ' ';
  cmd += GF_CLI_PATH;
  cmd += ' ';
  cmd += args;
  cmd += " > " + out.string() + " 2> " + err.string();
  const int rc = std::system(cmd.c_str());
  return {WEXITSTATUS(rc), slurp(out), slurp(err)};
}

const std::string& bsc02_path() {
  static const std::string path = [] {
    const fs::path p = work_dir() / "bsc02.json";
    spit(p, R"({"matrix":[[0.8,0.2],[0.2,0.8]]})");
    return p.string();
  }();
  return path;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::size_t count_fields(const std::string& csv_line) {
  return static_cast<std::size_t>(std::count(csv_line.begin(), csv_line.end(), ',')) + 1;
}

}  // namespace

TEST_CASE("e0 prints the Gallager function to 12 significant digits") {
  const CliResult r =
      run_cli("e0 --channel " + bsc02_path() + " --rho 0.1 --q 0.5,0.5");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0.0178415176") != std::string::npos);
  CHECK(r.out.find("nats") != std::string::npos);
}

TEST_CASE("e0 with a conditioning type reports the conditional exponent") {
  const CliResult r = run_cli("e0 --channel " + bsc02_path() +
                              " --rho 0.1 --q 0.5,0.5 --qtilde 0.3,0.7");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("E0(rho,Q,Qt)") != std::string::npos);
  CHECK(r.out.find("D(Qt||Q)") != std::string::npos);
}

TEST_CASE("e0 validation failures exit with status 2") {
  CHECK(run_cli("e0 --channel " + bsc02_path() + " --rho 0.1 --q 0.5,0.6").exit_code == 2);
  const CliResult r =
      run_cli("e0 --channel " + bsc02_path() + " --rho 0.1 --q 0.5,0.6");
  CHECK(r.err.find("does not sum to 1") != std::string::npos);
  CHECK(run_cli("e0 --channel " + bsc02_path() + " --rho 0 --q 0.5,0.5").exit_code == 2);
  CHECK(run_cli("e0 --channel " + bsc02_path() + " --rho 1.5 --q 0.5,0.5").exit_code == 2);
  CHECK(run_cli("e0 --channel /nonexistent.json --rho 0.1 --q 0.5,0.5").exit_code == 2);
  CHECK(run_cli("e0 --rho 0.1 --q 0.5,0.5").exit_code == 2);  // missing --channel
}

TEST_CASE("mi prints the BSC mutual information") {
  const CliResult r = run_cli("mi --channel " + bsc02_path() + " --q 0.5,0.5");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0.192744757022") != std::string::npos);
}

TEST_CASE("bits flag rescales the display") {
  const CliResult r = run_cli("mi --channel " + bsc02_path() + " --q 0.5,0.5 --bits");
  CHECK(r.exit_code == 0);
  // ln2 - Hb(0.2) in bits = 0.27807190511...
  CHECK(r.out.find("0.278071905") != std::string::npos);
  CHECK(r.out.find("bits") != std::string::npos);
}

TEST_CASE("arimoto converges on the reference BSC instance and writes a trace") {
  const fs::path trace = work_dir() / "trace.csv";
  const CliResult r = run_cli("arimoto --channel " + bsc02_path() +
                              " --rho 0.1 --q0 0.1,0.9 --tol 1e-9 --out " +
                              trace.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("stop_reason = ToleranceMet") != std::string::npos);
  // "final Q = <q0> <q1>": both components within 1e-8 of one half
  {
    const auto pos = r.out.find("final Q =");
    REQUIRE(pos != std::string::npos);
    std::stringstream ss(r.out.substr(pos + 9));
    double q0 = 0.0, q1 = 0.0;
    ss >> q0 >> q1;
    CHECK(std::fabs(q0 - 0.5) < 1e-8);
    CHECK(std::fabs(q1 - 0.5) < 1e-8);
  }

  const auto lines = lines_of(slurp(trace));
  REQUIRE(lines.size() >= 3);
  CHECK(lines[0] == "iter,Q_0,Q_1,objective");
  for (const auto& line : lines) CHECK(count_fields(line) == 4);
  // objective column is non-decreasing
  double prev = -1e300;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto pos = lines[i].rfind(',');
    const double obj = std::stod(lines[i].substr(pos + 1));
    CHECK(obj >= prev - 1e-12);
    prev = obj;
  }
}

TEST_CASE("arimoto defaults the start to uniform and honors --max-iter") {
  const CliResult r =
      run_cli("arimoto --channel " + bsc02_path() + " --rho 0.1");
  CHECK(r.exit_code == 0);

  const CliResult capped = run_cli("arimoto --channel " + bsc02_path() +
                                   " --rho 0.1 --q0 0.1,0.9 --max-iter 1");
  CHECK(capped.exit_code == 0);
  CHECK(capped.out.find("stop_reason = MaxIterations") != std::string::npos);
}

TEST_CASE("capacity subcommand reaches the closed-form BSC capacity") {
  const CliResult r = run_cli("capacity --channel " + bsc02_path() +
                              " --q0 0.3,0.7 --tol 1e-12 --max-iter 100000");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0.192744757") != std::string::npos);
}

TEST_CASE("trace-fig1 emits the per-step conditional picture") {
  const fs::path csv = work_dir() / "fig1.csv";
  const CliResult r = run_cli("trace-fig1 --channel " + bsc02_path() +
                              " --rho 0.1 --q0 0.1,0.9 --out " + csv.string());
  CHECK(r.exit_code == 0);

  const auto lines = lines_of(slurp(csv));
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == "iter,Q_0,Q_1,objective,conditional,divergence,penalized");
  double prev_pen = -1e300;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    REQUIRE(count_fields(lines[i]) == 7);
    std::stringstream ss(lines[i]);
    std::string field;
    std::vector<double> v;
    while (std::getline(ss, field, ',')) v.push_back(std::stod(field));
    const double e0 = v[3], pen = v[6];
    CHECK(pen >= e0 - 1e-12);       // conditional beats unconditional
    CHECK(pen >= prev_pen - 1e-12);  // and improves along the run
    prev_pen = pen;
  }
}

TEST_CASE("trace-fig1 columns are recomputable from the library") {
  // a fixed (seeded) non-symmetric 3x3 channel at rho = 1
  const fs::path ch_path = work_dir() / "ch3.json";
  spit(ch_path,
       R"({"matrix":[[0.6,0.3,0.1],[0.2,0.5,0.3],[0.1,0.2,0.7]]})");
  const fs::path csv = work_dir() / "fig1_r3.csv";
  const CliResult r = run_cli("trace-fig1 --channel " + ch_path.string() +
                              " --rho 1.0 --q0 0.2,0.3,0.5 --out " + csv.string());
  CHECK(r.exit_code == 0);

  const gallager::Channel ch = gallager::load_channel(ch_path);
  const auto trace =
      gallager::solve(1.0, gallager::Distribution({0.2, 0.3, 0.5}), ch, 1e-9, 10000);
  const auto lines = lines_of(slurp(csv));
  REQUIRE(lines.size() == trace.iterates.size());  // header + (len-1) steps
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::stringstream ss(lines[i]);
    std::string field;
    std::vector<double> v;
    while (std::getline(ss, field, ',')) v.push_back(std::stod(field));
    REQUIRE(v.size() == 8);
    const std::size_t k = i - 1;
    const auto& qk = trace.iterates[k];
    const auto& qn = trace.iterates[k + 1];
    for (std::size_t x = 0; x < 3; ++x) CHECK(v[1 + x] == qk[x]);  // %.17g round-trips
    CHECK(v[4] == doctest::Approx(gallager::gallager_e0(1.0, qk, ch)).epsilon(1e-15));
    const double cond = gallager::conditional_e0(1.0, qk, qn, ch);
    const double div = gallager::kl_divergence(qn, qk);
    CHECK(v[5] == doctest::Approx(cond).epsilon(1e-15));
    CHECK(v[6] == doctest::Approx(div).epsilon(1e-15));
    CHECK(v[7] == doctest::Approx(cond - 1.0 * div).epsilon(1e-15));
    CHECK(v[7] >= v[4] - 1e-12);  // penalized >= unconditional objective
  }
}

TEST_CASE("trace-fig1 from the fixed point has exactly one data row") {
  const fs::path csv = work_dir() / "fig1_fixed.csv";
  const CliResult r = run_cli("trace-fig1 --channel " + bsc02_path() +
                              " --rho 0.1 --q0 0.5,0.5 --out " + csv.string());
  CHECK(r.exit_code == 0);
  CHECK(lines_of(slurp(csv)).size() == 2);  // header + one step
}

TEST_CASE("nts runs, reports a TV table, and is byte-deterministic") {
  const fs::path j1 = work_dir() / "nts1.json";
  const fs::path j2 = work_dir() / "nts2.json";
  const std::string base = "nts --channel " + bsc02_path() +
                           " --rho 0.1 --q 0.1,0.9 --n 20,40 --trials 20 --seed 7"
                           " --m-cap 2000";
  const CliResult r1 = run_cli(base + " --format json --out " + j1.string());
  const CliResult r2 = run_cli(base + " --format json --out " + j2.string());
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(r1.out == r2.out);
  const std::string doc = slurp(j1);
  CHECK(doc == slurp(j2));
  CHECK(doc.find("\"median_tv\"") != std::string::npos);
  CHECK(doc.find("\"winner_index\"") != std::string::npos);

  const fs::path c1 = work_dir() / "nts1.csv";
  const CliResult r3 =
      run_cli(base + " --format csv --out " + c1.string());
  CHECK(r3.exit_code == 0);
  const auto lines = lines_of(slurp(c1));
  REQUIRE(lines.size() == 1 + 2 * 20);  // header + trials per n
  CHECK(lines[0] == "n,trial,winner_index,value,truncated,tv,count_0,count_1");
  for (const auto& line : lines) CHECK(count_fields(line) == 8);
}

TEST_CASE("trace files are byte-identical across reruns") {
  const fs::path t1 = work_dir() / "trace_a.csv";
  const fs::path t2 = work_dir() / "trace_b.csv";
  const std::string base =
      "arimoto --channel " + bsc02_path() + " --rho 0.1 --q0 0.1,0.9";
  CHECK(run_cli(base + " --out " + t1.string()).exit_code == 0);
  CHECK(run_cli(base + " --out " + t2.string()).exit_code == 0);
  const std::string a = slurp(t1);
  CHECK_FALSE(a.empty());
  CHECK(a == slurp(t2));
}

TEST_CASE("nts output is identical across the thread-count env override") {
  const fs::path ja = work_dir() / "nts_t1.json";
  const fs::path jb = work_dir() / "nts_t4.json";
  const std::string base = "nts --channel " + bsc02_path() +
                           " --rho 0.1 --q 0.1,0.9 --n 30 --trials 16 --seed 9"
                           " --m-cap 3000 --format json";
  CHECK(run_cli(base + " --out " + ja.string(), "GALLAGER_FORGE_THREADS=1").exit_code == 0);
  CHECK(run_cli(base + " --out " + jb.string(), "GALLAGER_FORGE_THREADS=4").exit_code == 0);
  CHECK(slurp(ja) == slurp(jb));
}

TEST_CASE("nts rejects invalid configurations with exit code 2") {
  CHECK(run_cli("nts --channel " + bsc02_path() +
                " --rho 0.1 --q 0.1,0.9 --n 0 --trials 5").exit_code == 2);
  CHECK(run_cli("nts --channel " + bsc02_path() +
                " --rho 0.1 --q 0.0,1.0 --n 10 --trials 5").exit_code == 2);
}

TEST_CASE("oracle-check passes on the default BSC suite") {
  const CliResult r =
      run_cli("oracle-check --channel " + bsc02_path() + " --rho 0.1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("PASS appendix-single-letterization") != std::string::npos);
  CHECK(r.out.find("PASS e0-decomposition") != std::string::npos);
  CHECK(r.out.find("PASS best-type-vs-arimoto") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("oracle-check surfaces validation failures as exit 2") {
  const fs::path bad = work_dir() / "bad.json";
  spit(bad, R"({"matrix":[[0.5,0.6],[0.2,0.8]]})");
  const CliResult r = run_cli("oracle-check --channel " + bad.string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("RowNotStochastic") != std::string::npos);

  // |Y| = 4 with words of length 12 would need 4^12 > 1e6 output sequences
  const fs::path wide = work_dir() / "wide.json";
  spit(wide, R"({"matrix":[[0.25,0.25,0.25,0.25],[0.1,0.2,0.3,0.4]]})");
  const CliResult too_big = run_cli("oracle-check --channel " + wide.string() + " --n 12");
  CHECK(too_big.exit_code == 2);
  CHECK(too_big.err.find("OutputSpaceTooLarge") != std::string::npos);
}

TEST_CASE("unknown subcommands and missing flags exit with usage status") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("e0 --channel " + bsc02_path() + " --q 0.5,0.5").exit_code == 2);
}

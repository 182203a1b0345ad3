// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "gallager/dmc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gallager {

namespace {

void check_probability_vector(const std::vector<double>& probs, errc sum_code,
                              const std::string& what) {
  if (probs.empty()) fail(errc::not_a_distribution, what + " is empty");
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p)) fail(sum_code, what + " has a non-finite entry");
    if (p < 0.0) fail(errc::negative_entry, what + " has a negative entry");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > Distribution::kSumTolerance) {
    std::ostringstream oss;
    oss << what << " sums to " << sum << ", not 1 within 1e-12";
    fail(sum_code, oss.str());
  }
}

}  // namespace

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  check_probability_vector(probs_, errc::not_a_distribution, "distribution");
}

Distribution Distribution::uniform(std::size_t size) {
  if (size == 0) fail(errc::not_a_distribution, "uniform distribution over empty alphabet");
  return Distribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

Distribution Distribution::point_mass(std::size_t size, std::size_t x) {
  if (x >= size) fail(errc::symbol_out_of_range, "point mass outside alphabet");
  std::vector<double> p(size, 0.0);
  p[x] = 1.0;
  return Distribution(std::move(p));
}

bool Distribution::strictly_positive() const noexcept {
  return std::all_of(probs_.begin(), probs_.end(), [](double p) { return p > 0.0; });
}

double total_variation(const Distribution& a, const Distribution& b) {
  if (a.size() != b.size())
    fail(errc::invalid_config, "total_variation: dimension mismatch");
  double l1 = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) l1 += std::fabs(a[x] - b[x]);
  return 0.5 * l1;
}

double linf_distance(const Distribution& a, const Distribution& b) {
  if (a.size() != b.size())
    fail(errc::invalid_config, "linf_distance: dimension mismatch");
  double m = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) m = std::max(m, std::fabs(a[x] - b[x]));
  return m;
}

Channel Channel::validate(const std::vector<std::vector<double>>& matrix,
                          std::vector<std::string> input_labels,
                          std::vector<std::string> output_labels) {
  if (matrix.empty()) fail(errc::parse_error, "channel matrix is empty");
  const std::size_t nx = matrix.size();
  const std::size_t ny = matrix.front().size();
  for (const auto& row : matrix) {
    if (row.size() != ny) fail(errc::parse_error, "channel matrix is not rectangular");
  }
  if (nx < 2 || ny < 2)
    fail(errc::degenerate_alphabet, "channel requires |X| >= 2 and |Y| >= 2");

  Channel ch;
  ch.num_inputs_ = nx;
  ch.num_outputs_ = ny;
  ch.matrix_.reserve(nx * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    double sum = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      const double p = matrix[x][y];
      if (!std::isfinite(p))
        fail(errc::row_not_stochastic, "row " + std::to_string(x) + " has a non-finite entry");
      if (p < 0.0)
        fail(errc::negative_entry, "row " + std::to_string(x) + " has a negative entry");
      sum += p;
      ch.matrix_.push_back(p);
    }
    if (std::fabs(sum - 1.0) > Distribution::kSumTolerance) {
      std::ostringstream oss;
      oss << "row " << x << " sums to " << sum << ", not 1 within 1e-12";
      fail(errc::row_not_stochastic, oss.str());
    }
  }
  if (!input_labels.empty() && input_labels.size() != nx)
    fail(errc::parse_error, "input_labels length does not match |X|");
  if (!output_labels.empty() && output_labels.size() != ny)
    fail(errc::parse_error, "output_labels length does not match |Y|");
  ch.input_labels_ = std::move(input_labels);
  ch.output_labels_ = std::move(output_labels);
  return ch;
}

Channel validate_channel(const std::vector<std::vector<double>>& matrix) {
  return Channel::validate(matrix);
}

Channel load_channel_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, std::string("channel JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("matrix"))
    fail(errc::parse_error, "channel JSON must be an object with a \"matrix\" key");

  std::vector<std::vector<double>> matrix;
  std::vector<std::string> in_labels;
  std::vector<std::string> out_labels;
  try {
    matrix = doc.at("matrix").get<std::vector<std::vector<double>>>();
    if (doc.contains("input_labels"))
      in_labels = doc.at("input_labels").get<std::vector<std::string>>();
    if (doc.contains("output_labels"))
      out_labels = doc.at("output_labels").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, std::string("channel JSON: ") + e.what());
  }
  return Channel::validate(matrix, std::move(in_labels), std::move(out_labels));
}

Channel load_channel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(errc::parse_error, "cannot open channel file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_channel_text(buf.str());
}

EmpiricalType::EmpiricalType(std::vector<std::uint64_t> counts)
    : counts_(std::move(counts)) {
  if (counts_.empty()) fail(errc::empty_word, "type has an empty alphabet");
  n_ = 0;
  for (std::uint64_t c : counts_) n_ += c;
  if (n_ == 0) fail(errc::empty_word, "type has zero total count");
}

Distribution EmpiricalType::to_distribution() const {
  std::vector<double> p(counts_.size());
  const double denom = static_cast<double>(n_);
  for (std::size_t x = 0; x < counts_.size(); ++x)
    p[x] = static_cast<double>(counts_[x]) / denom;
  return Distribution(std::move(p));
}

EmpiricalType type_of(std::span<const int> word, std::size_t alphabet_size) {
  if (word.empty()) fail(errc::empty_word, "cannot take the type of an empty word");
  if (alphabet_size == 0) fail(errc::symbol_out_of_range, "alphabet size must be positive");
  std::vector<std::uint64_t> counts(alphabet_size, 0);
  for (int symbol : word) {
    if (symbol < 0 || static_cast<std::size_t>(symbol) >= alphabet_size)
      fail(errc::symbol_out_of_range,
           "symbol " + std::to_string(symbol) + " outside [0, " +
               std::to_string(alphabet_size) + ")");
    ++counts[static_cast<std::size_t>(symbol)];
  }
  return EmpiricalType(std::move(counts));
}

void check_rho(double rho) {
  if (!(rho > 0.0) || rho > 1.0)
    fail(errc::invalid_rho, "rho must be in (0, 1], got " + std::to_string(rho));
}

ExponentParams ExponentParams::simplified(double rho) {
  check_rho(rho);
  return {rho, 1.0 / (1.0 + rho)};
}

ExponentParams ExponentParams::general(double rho, double s) {
  check_rho(rho);
  if (!(s > 0.0) || s * rho >= 1.0)
    fail(errc::invalid_s, "require s > 0 and s*rho < 1");
  return {rho, s};
}

}  // namespace gallager

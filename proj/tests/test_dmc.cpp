// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <doctest.h>

#include "gallager/dmc.hpp"
#include "gallager/rng.hpp"
#include "test_util.hpp"

using namespace gallager;

TEST_CASE("validate_channel accepts stochastic matrices") {
  const Channel bsc = validate_channel({{0.8, 0.2}, {0.2, 0.8}});
  CHECK(bsc.num_inputs() == 2);
  CHECK(bsc.num_outputs() == 2);
  CHECK(bsc.prob(0, 0) == doctest::Approx(0.8));
  CHECK(bsc.prob(0, 1) == doctest::Approx(0.2));

  const Channel id = validate_channel({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(id.prob(0, 0) == 1.0);
  CHECK(id.prob(1, 0) == 0.0);
}

TEST_CASE("validate_channel rejects bad matrices") {
  CHECK_THROWS_WITH_AS(validate_channel({{0.5, 0.6}, {0.2, 0.8}}),
                       doctest::Contains("RowNotStochastic"), Error);
  CHECK_THROWS_AS(validate_channel({{1.1, -0.1}, {0.2, 0.8}}), Error);
  try {
    validate_channel({{1.1, -0.1}, {0.2, 0.8}});
  } catch (const Error& e) {
    CHECK(e.code() == errc::negative_entry);
  }
  try {
    validate_channel({{0.9, 0.1}});
  } catch (const Error& e) {
    CHECK(e.code() == errc::degenerate_alphabet);
  }
  try {
    validate_channel({{1.0}, {1.0}});
  } catch (const Error& e) {
    CHECK(e.code() == errc::degenerate_alphabet);
  }
  CHECK_THROWS_AS(validate_channel({{0.5, 0.5}, {1.0}}), Error);
}

TEST_CASE("1000 random normalized matrices validate") {
  RngStream rng(42);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t nx = 2 + rng.uniform_below(5);
    const std::size_t ny = 2 + rng.uniform_below(5);
    const Channel ch = testutil::random_channel(rng, nx, ny);
    for (std::size_t x = 0; x < nx; ++x) {
      double sum = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        CHECK(ch.prob(x, y) >= 0.0);
        sum += ch.prob(x, y);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("load_channel parses the JSON schema") {
  const Channel bsc = load_channel_text(R"({"matrix":[[0.8,0.2],[0.2,0.8]]})");
  CHECK(bsc.prob(1, 0) == doctest::Approx(0.2));

  const Channel id = load_channel_text(R"({"matrix":[[1.0,0.0],[0.0,1.0]]})");
  CHECK(id.prob(1, 1) == 1.0);

  const Channel labeled = load_channel_text(
      R"({"matrix":[[0.9,0.1],[0.4,0.6]],"input_labels":["a","b"],"output_labels":["0","1"]})");
  CHECK(labeled.input_labels()[1] == "b");

  try {
    load_channel_text(R"({"matrix":[[0.9,0.1]]})");
    FAIL("degenerate alphabet accepted");
  } catch (const Error& e) {
    CHECK(e.code() == errc::degenerate_alphabet);
  }
  try {
    load_channel_text("{not json");
    FAIL("parse error expected");
  } catch (const Error& e) {
    CHECK(e.code() == errc::parse_error);
  }
  try {
    load_channel_text(R"({"rows":[[1.0,0.0],[0.0,1.0]]})");
    FAIL("missing matrix key accepted");
  } catch (const Error& e) {
    CHECK(e.code() == errc::parse_error);
  }
}

TEST_CASE("type_of counts symbols") {
  const std::vector<int> w1{0, 1, 1, 0};
  const EmpiricalType t1 = type_of(w1, 2);
  CHECK(t1.counts() == std::vector<std::uint64_t>{2, 2});
  CHECK(t1.n() == 4);

  const std::vector<int> w2{1, 1, 1};
  const EmpiricalType t2 = type_of(w2, 2);
  CHECK(t2.counts() == std::vector<std::uint64_t>{0, 3});

  const std::vector<int> w3{0, 2, 1};
  try {
    type_of(w3, 2);
    FAIL("out-of-range symbol accepted");
  } catch (const Error& e) {
    CHECK(e.code() == errc::symbol_out_of_range);
  }
  try {
    type_of(std::vector<int>{}, 2);
    FAIL("empty word accepted");
  } catch (const Error& e) {
    CHECK(e.code() == errc::empty_word);
  }
}

TEST_CASE("type_of is permutation invariant") {
  RngStream rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t d = 2 + rng.uniform_below(4);
    std::vector<int> word(20 + rng.uniform_below(60));
    for (auto& s : word) s = static_cast<int>(rng.uniform_below(d));
    const EmpiricalType before = type_of(word, d);
    // Fisher-Yates with the same deterministic stream.
    for (std::size_t i = word.size(); i > 1; --i)
      std::swap(word[i - 1], word[rng.uniform_below(i)]);
    CHECK(type_of(word, d) == before);
  }
}

TEST_CASE("empirical types induce valid distributions up to n = 1e6") {
  RngStream rng(11);
  for (const std::uint64_t n :
       {std::uint64_t{1}, std::uint64_t{3}, std::uint64_t{17}, std::uint64_t{1000},
        std::uint64_t{999983}, std::uint64_t{1000000}}) {
    const std::size_t d = 2 + rng.uniform_below(5);
    std::vector<std::uint64_t> counts(d, 0);
    std::uint64_t left = n;
    for (std::size_t x = 0; x + 1 < d; ++x) {
      counts[x] = rng.uniform_below(left + 1);
      left -= counts[x];
    }
    counts[d - 1] = left;
    const EmpiricalType t(counts);
    CHECK(t.n() == n);
    const Distribution induced = t.to_distribution();  // ctor revalidates
    double sum = 0.0;
    for (std::size_t x = 0; x < d; ++x) sum += induced[x];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("distribution validation") {
  CHECK_NOTHROW(Distribution({0.5, 0.5}));
  CHECK_NOTHROW(Distribution({0.1, 0.9}));
  CHECK_THROWS_AS(Distribution({0.5, 0.6}), Error);
  CHECK_THROWS_AS(Distribution({-0.1, 1.1}), Error);
  CHECK(Distribution::uniform(4)[2] == doctest::Approx(0.25));
  CHECK(Distribution::point_mass(3, 1)[1] == 1.0);
  CHECK_FALSE(Distribution::point_mass(3, 1).strictly_positive());
  CHECK(Distribution::uniform(3).strictly_positive());
}

TEST_CASE("exponent params") {
  const ExponentParams p = ExponentParams::simplified(0.25);
  CHECK(p.s == doctest::Approx(0.8));
  CHECK_THROWS_AS(ExponentParams::simplified(0.0), Error);
  CHECK_THROWS_AS(ExponentParams::simplified(1.5), Error);
  CHECK_THROWS_AS(ExponentParams::general(0.5, 2.5), Error);
  CHECK_NOTHROW(ExponentParams::general(0.5, 1.2));
}

TEST_CASE("total variation and linf") {
  const Distribution a({0.1, 0.9});
  const Distribution b({0.5, 0.5});
  CHECK(total_variation(a, b) == doctest::Approx(0.4));
  CHECK(linf_distance(a, b) == doctest::Approx(0.4));
  CHECK(total_variation(a, a) == 0.0);
}

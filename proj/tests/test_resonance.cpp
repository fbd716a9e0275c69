#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "ilw/resonance.hpp"

using namespace ilw;

TEST_CASE("omega: zero tuple, closed form at infinite depth, symmetry") {
  CHECK(omega(Regime::deep, std::nullopt, FrequencyTuple::make({0, 0, 0})) == 0.0);

  // sign-definite pair (n, m, -n-m) under the deep limit: n^2 + m^2 - (n+m)^2 = -2nm
  CHECK(omega(Regime::deep, std::nullopt, FrequencyTuple::make({3, 5, -8})) == -30.0);
  CHECK(omega(Regime::deep, std::nullopt, FrequencyTuple::make({2, 2, -4})) == -8.0);

  const FrequencyTuple t = FrequencyTuple::make({7, -4, -3});
  const FrequencyTuple neg = FrequencyTuple::make({-7, 4, 3});
  for (auto d : {std::optional<double>{}, std::optional<double>{2.5}})
    CHECK(omega(Regime::deep, d, t) == -omega(Regime::deep, d, neg));

  // permutation invariance
  CHECK(omega(Regime::shallow, 0.3, FrequencyTuple::make({5, -2, -3})) ==
        omega(Regime::shallow, 0.3, FrequencyTuple::make({-3, 5, -2})));

  CHECK_THROWS_AS(FrequencyTuple::make({1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(omega(Regime::deep, std::nullopt, FrequencyTuple{{1, 1}}),
                  std::invalid_argument);
}

TEST_CASE("omega approaches the infinite-depth value like 2/delta") {
  const FrequencyTuple t = FrequencyTuple::make({9, -5, -4});
  const double limit = omega(Regime::deep, std::nullopt, t);
  double prev_err = 1e300;
  for (double d : {4.0, 16.0, 64.0, 256.0}) {
    const double err = std::abs(omega(Regime::deep, d, t) - limit);
    CHECK(err <= (9.0 + 5.0 + 4.0) * 2.0 / d);
    CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("check_res1 floors on the deep and shallow grids") {
  const std::vector<std::optional<double>> deep = {2.0, 4.0, 8.0, 16.0, std::nullopt};
  const BoundReport rep = check_res1(Regime::deep, deep, 1, 64);
  CHECK(!rep.indeterminate);
  CHECK(rep.pass);
  CHECK(rep.per_delta.size() == 5);
  double lo = 1e300, hi = 0.0;
  for (const auto& df : rep.per_delta) {
    CHECK(df.tuple_count > 0);
    CHECK(df.min_ratio > 0.0);
    CHECK(df.min_ratio > 0.9);  // sign-definite family floor is ~1
    lo = std::min(lo, df.min_ratio);
    hi = std::max(hi, df.min_ratio);
  }
  CHECK(hi / lo < 4.0);
  CHECK(!rep.worst.empty());
  CHECK(std::is_sorted(rep.worst.begin(), rep.worst.end(),
                       [](const WorstTuple& a, const WorstTuple& b) { return a.ratio < b.ratio; }));
  CHECK(rep.worst.size() <= 100);

  const std::vector<std::optional<double>> shallow = {0.5, 0.25, 0.1};
  const BoundReport srep = check_res1(Regime::shallow, shallow, 1, 64);
  CHECK(srep.pass);
  for (const auto& df : srep.per_delta) CHECK(df.min_ratio > 0.0);
}

TEST_CASE("check_res1 reports an empty hypothesis set instead of passing") {
  ComparisonConstants strict;
  strict.n0 = 16;  // pushes the |n1| threshold past the cap
  const BoundReport rep = check_res1(Regime::deep, {2.0}, 1, 8, strict);
  CHECK(rep.indeterminate);
  CHECK(!rep.pass);
  CHECK(rep.per_delta.front().tuple_count == 0);
}

TEST_CASE("check_res2 floors, degenerate pair exclusion, both shallow sub-regimes") {
  const std::vector<std::optional<double>> deep = {2.0, 8.0, std::nullopt};
  const BoundReport rep = check_res2(Regime::deep, deep, 2, 64);
  CHECK(rep.pass);
  double lo = 1e300, hi = 0.0;
  for (const auto& df : rep.per_delta) {
    CHECK(df.min_ratio > 0.0);
    lo = std::min(lo, df.min_ratio);
    hi = std::max(hi, df.min_ratio);
  }
  CHECK(hi / lo < 4.0);
  for (const auto& w : rep.worst) CHECK(w.entries[2] + w.entries[3] != 0);

  const std::vector<std::optional<double>> shallow = {0.5, 0.1, 0.02};
  const BoundReport srep = check_res2(Regime::shallow, shallow, 2, 64);
  CHECK(srep.pass);

  // at delta = 0.02 the threshold 1/delta = 50 splits the cap range; both
  // sides must be populated and pass
  const BoundReport low_side = check_res2(Regime::shallow, {0.02}, 2, 40);
  const BoundReport full = check_res2(Regime::shallow, {0.02}, 2, 64);
  CHECK(low_side.per_delta.front().tuple_count > 0);
  CHECK(full.per_delta.front().tuple_count > low_side.per_delta.front().tuple_count);
  CHECK(low_side.pass);
  CHECK(full.pass);
}

TEST_CASE("min ratio is non-increasing in the cap") {
  double prev = 1e300;
  for (int cap : {16, 32, 64}) {
    const BoundReport rep = check_res1(Regime::deep, {4.0}, 1, cap);
    REQUIRE(!rep.indeterminate);
    CHECK(rep.min_ratio <= prev + 1e-15);
    prev = rep.min_ratio;
  }
}

TEST_CASE("threaded enumeration matches single-threaded exactly") {
  const std::vector<std::optional<double>> deep = {2.0, std::nullopt};
  const BoundReport a = check_res1(Regime::deep, deep, 2, 48, {}, 1);
  const BoundReport b = check_res1(Regime::deep, deep, 2, 48, {}, 4);
  REQUIRE(a.per_delta.size() == b.per_delta.size());
  for (std::size_t i = 0; i < a.per_delta.size(); ++i) {
    CHECK(a.per_delta[i].tuple_count == b.per_delta[i].tuple_count);
    CHECK(a.per_delta[i].min_ratio == b.per_delta[i].min_ratio);
    CHECK(a.per_delta[i].argmin == b.per_delta[i].argmin);
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(check_res1(Regime::deep, {2.0}, 0, 16), std::invalid_argument);
  CHECK_THROWS_AS(check_res2(Regime::deep, {2.0}, 1, 16), std::invalid_argument);
  CHECK_THROWS_AS(check_res1(Regime::deep, {2.0}, 1, 200), std::invalid_argument);
  CHECK_THROWS_AS(check_res1(Regime::deep, {1.0}, 1, 16), std::invalid_argument);
  CHECK_THROWS_AS(check_res1(Regime::shallow, {1.5}, 1, 16), std::invalid_argument);
  CHECK_THROWS_AS(check_res1(Regime::deep, {}, 1, 16), std::invalid_argument);
}

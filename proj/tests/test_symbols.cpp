#include <cmath>
#include <vector>

#include "doctest.h"
#include "ilw/experiments.hpp"
#include "ilw/symbols.hpp"

using namespace ilw;

namespace {

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::exp(std::log(lo) +
                      (std::log(hi) - std::log(lo)) * double(i) / double(n - 1));
  return out;
}

}  // namespace

TEST_CASE("coth_stable: reference value, tail, series, branch agreement") {
  CHECK(coth_stable(1.0) == doctest::Approx(1.3130352854993312).epsilon(1e-15));
  CHECK(coth_stable(-1.0) == doctest::Approx(-1.3130352854993312).epsilon(1e-15));
  CHECK(coth_stable(50.0) == 1.0);
  CHECK(coth_stable(-50.0) == -1.0);

  const double x = 1e-6;
  const double expected = 1e6 + x / 3.0 - x * x * x / 45.0;
  CHECK(coth_stable(x) == doctest::Approx(expected).epsilon(1e-12));

  CHECK_THROWS_AS(coth_stable(0.0), std::invalid_argument);

  // adjacent branches agree at the crossovers
  for (double c : {1e-4, 20.0}) {
    const double below = coth_stable(c * (1.0 - 1e-9));
    const double above = coth_stable(c * (1.0 + 1e-9));
    CHECK(std::abs(below - above) / std::abs(above) < 1e-12);
  }
}

TEST_CASE("k_delta: reference point, convention at zero, sandwich, monotonicity") {
  CHECK(k_delta(1.0, 1.0) == doctest::Approx(0.3130352854993312).epsilon(1e-14));
  CHECK(k_delta(5.0, 0.0) == 0.0);
  CHECK(k_delta(2.0, 5.0) > 4.5);
  CHECK(k_delta(2.0, 5.0) < 5.0);
  CHECK_THROWS_AS(k_delta(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(k_delta(-1.0, 1.0), std::invalid_argument);

  const std::vector<double> deltas = {2.0, 3.0, 5.0, 10.0, 50.0, 1e3, 1e6};
  for (double d : deltas) {
    for (int n = -512; n <= 512; ++n) {
      const double K = k_delta(d, n);
      CHECK(K >= std::max(0.0, std::abs(double(n)) - 1.0 / d));
      CHECK(K <= std::abs(double(n)));
      if (n != 0 && std::abs(d * n) < 19.0) {  // strictness resolvable below saturation
        CHECK(K > std::max(0.0, std::abs(double(n)) - 1.0 / d));
        CHECK(K < std::abs(double(n)));
      }
    }
  }

  for (int n : {1, 3, 17, 100, 511}) {
    double prev = k_delta(deltas[0], n);
    for (std::size_t i = 1; i < deltas.size(); ++i) {
      const double cur = k_delta(deltas[i], n);
      CHECK(cur > prev);
      prev = cur;
    }
    CHECK(std::abs(prev - n) <= 1.0 / deltas.back());
  }

  // evenness
  for (double d : {0.3, 2.0, 40.0})
    for (int n : {1, 2, 9, 300}) CHECK(k_delta(d, n) == k_delta(d, -n));
}

TEST_CASE("l_delta: bounds and monotone increase to xi^2 as delta shrinks") {
  CHECK(l_delta(0.5, 0.0) == 0.0);
  const double v = l_delta(0.5, 3.0);
  CHECK(v > 0.0);
  CHECK(v < 9.0);

  for (int n = 1; n <= 16; ++n) {
    double prev = 0.0;
    for (double d : {0.4, 0.2, 0.1, 0.05, 0.01}) {
      const double L = l_delta(d, n);
      CHECK(L > prev);
      CHECK(L < double(n) * n);
      prev = L;
    }
    CHECK(prev >= 0.995 * n * n);
  }

  // uniform-in-delta floor L/|n| on the shallow range
  double c = 1e300;
  for (double d : {0.999, 0.9, 0.5, 0.25, 0.1, 0.02, 1e-3})
    for (int n = 1; n <= 512; ++n) c = std::min(c, l_delta(d, n) / n);
  CHECK(c > 0.25);
  MESSAGE("measured shallow floor c = ", c);
}

TEST_CASE("q_delta: range, limit value, regime gate") {
  CHECK(q_delta(2.0, 0.0) == 0.0);
  CHECK(q_delta(2.0, 100.0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_THROWS_AS(q_delta(1.9, 1.0), std::invalid_argument);

  for (double d : {2.0, 4.0, 33.0, 1e4}) {
    for (int n = -512; n <= 512; ++n) {
      const double q = q_delta(d, n);
      CHECK(q >= 0.0);
      CHECK(q <= 2.0 / d);
      CHECK(q == q_delta(d, -n));
      CHECK(q == doctest::Approx(std::abs(double(n)) - k_delta(d, n)).epsilon(1e-14));
    }
  }
}

TEST_CASE("h remainder: series vs closed form, size, decay rates") {
  CHECK(h_series(0.7, 0.0) == 0.0);
  CHECK(h_closed(0.7, 0.0) == 0.0);

  const double h1 = h_series(0.1, 1.0, 1e-12);
  CHECK(h1 > 0.0);
  // O(delta^3) regime at fixed frequency: h/delta^3 stable under delta -> delta/2
  const double r1 = h_series(0.1, 1.0, 1e-14) / std::pow(0.1, 3);
  const double r2 = h_series(0.05, 1.0, 1e-14) / std::pow(0.05, 3);
  CHECK(std::abs(r1 - r2) / r2 < 0.10);

  for (double d : log_space(1e-3, 1.0, 12)) {
    for (double xi : log_space(1.0, 100.0, 12)) {
      const double hs = h_series(d, xi, 1e-13);
      const double hc = h_closed(d, xi);
      CHECK(std::abs(hs - hc) < 1e-10 * std::max(1.0, std::abs(hc)));
    }
  }

  // |h| <= C0 * delta with a finite constant; measure it
  double c0 = 0.0;
  for (double d : log_space(1e-3, 1.0, 20))
    for (double xi : log_space(1.0, 1e3, 20)) c0 = std::max(c0, h_closed(d, xi) / d);
  CHECK(c0 <= 1.0 + 1e-12);
  MESSAGE("measured C0 with |h| <= C0 delta: ", c0);

  // h(xi, delta)/delta decays like delta^2 on bounded frequencies
  const auto dgrid = log_space(1e-3, 1e-1, 9);
  for (int n = 1; n <= 16; ++n) {
    std::vector<double> e;
    for (double d : dgrid) e.push_back(h_closed(d, n) / d);
    const RateFit f = fit_rate(dgrid, e);
    CHECK(f.slope > 1.9);
    CHECK(f.slope < 2.1);
  }
}

TEST_CASE("cotangent Taylor identity holds against the certified series") {
  for (double d : log_space(1e-3, 1.0, 20)) {
    for (double xi : log_space(1.0, 512.0, 20)) {
      const double scale = 1.0 / d + d * xi * xi;
      const double tol = std::max(1e-15, 1e-12 * scale * 3.0 / (xi * xi));
      const double h = h_series(d, xi, tol);
      const double resid =
          std::abs(xi * coth_stable(d * xi) - 1.0 / d - d * xi * xi / 3.0 + xi * xi * h / 3.0);
      CHECK(resid < 1e-10 * scale);
    }
  }
}

TEST_CASE("depth and family validation") {
  CHECK_THROWS_AS(DepthParam::deep(1.5), std::invalid_argument);
  CHECK_THROWS_AS(DepthParam::shallow(1.5), std::invalid_argument);
  CHECK_THROWS_AS(DepthParam::shallow(0.0), std::invalid_argument);
  CHECK_THROWS_AS(EquationSpec::make(Family::gilw_deep, 2, DepthParam::shallow(0.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(EquationSpec::make(Family::gkdv, 2, DepthParam::infinite()),
                  std::invalid_argument);
  CHECK_THROWS_AS(EquationSpec::deep(4.0, 1), std::invalid_argument);
  CHECK(family_from_name("scaled-gILW").has_value());
  CHECK(!family_from_name("ilw").has_value());
}

TEST_CASE("symbol tables: exact limits, oddness, aux columns") {
  const Grid g(16);
  const SymbolTable kdv = SymbolTable::build(EquationSpec::kdv(), g);
  for (int m = -7; m <= 7; ++m) CHECK(kdv.p(m) == double(m) * m * m);
  CHECK(kdv.has_L());
  CHECK(!kdv.has_K());

  const Grid g64(64);
  const SymbolTable far = SymbolTable::build(EquationSpec::deep(1e6), g64);
  const SymbolTable bo = SymbolTable::build(EquationSpec::bo(), g64);
  double gap = 0.0;
  for (int m = -31; m <= 32; ++m) gap = std::max(gap, std::abs(far.p(m) - bo.p(m)));
  CHECK(gap < 2.0 * g64.xi_max() / 1e6 + 1e-12);
  CHECK(far.has_q());

  const SymbolTable shal = SymbolTable::build(EquationSpec::shallow(1e-3), g64);
  const SymbolTable kdv64 = SymbolTable::build(EquationSpec::kdv(), g64);
  double gap2 = 0.0;
  for (int m = -8; m <= 8; ++m) gap2 = std::max(gap2, std::abs(shal.p(m) - kdv64.p(m)));
  CHECK(gap2 < 1e-4 * 512.0);
  CHECK(shal.has_h());
  CHECK(shal.has_K());

  for (const auto& t : {far, bo, shal, kdv64}) {
    CHECK(t.p(0) == 0.0);
    for (int m = 1; m < 32; ++m) CHECK(t.p(-m) == -t.p(m));
  }

  const SymbolTable raw = SymbolTable::unscaled_ilw(g64, 0.5, 2);
  CHECK(raw.effective_delta() == 0.5);
  CHECK(raw.p(3) == doctest::Approx(3.0 * k_delta(0.5, 3.0)).epsilon(1e-15));
  CHECK(!raw.has_q());
}

TEST_CASE("two-scale windows of the deep symbol") {
  for (double d : {0.01, 0.05, 0.25, 2.0, 10.0, 1e3}) {
    for (int n = 1; n <= 512; ++n) {
      const double K = k_delta(d, n);
      if (n >= 2.0 / d) {
        CHECK(K / n >= 0.4);
        CHECK(K / n <= 1.0);
      }
      if (n <= 1.0 / (2.0 * d)) {
        CHECK(K / (d * n * n) >= 0.3);
        CHECK(K / (d * n * n) <= 0.3334);
      }
    }
  }
}

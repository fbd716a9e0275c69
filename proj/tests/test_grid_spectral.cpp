#include <cmath>
#include <random>

#include "doctest.h"
#include "ilw/grid.hpp"

using namespace ilw;

TEST_CASE("grid construction and frequency layout") {
  const Grid g = make_grid(8, two_pi);
  CHECK(g.max_mode() == 4);
  CHECK(g.wavenumber(1) == doctest::Approx(1.0));
  CHECK(g.wavenumber(-3) == doctest::Approx(-3.0));
  CHECK(g.wavenumber(0) == 0.0);
  for (int m = 1; m <= 3; ++m) CHECK(g.wavenumber(-m) == -g.wavenumber(m));

  const Grid g2 = make_grid(8, 2.0 * two_pi);
  CHECK(g2.wavenumber(1) == doctest::Approx(0.5));

  CHECK_THROWS_AS(make_grid(7), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(4), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(100), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, -1.0), std::invalid_argument);
}

TEST_CASE("transforms: zeros, pure cosine, round trip, Parseval") {
  const Grid g(16);

  std::vector<double> zeros(16, 0.0);
  const SpectralField z = to_spectral(g, zeros);
  for (const auto& c : z.coeffs()) CHECK(std::abs(c) == 0.0);

  std::vector<double> cosx(16);
  for (std::size_t j = 0; j < 16; ++j) cosx[j] = std::cos(two_pi * j / 16.0);
  const SpectralField u = to_spectral(g, cosx);
  CHECK(std::abs(u.coeff(1) - std::complex<double>{0.5, 0.0}) < 1e-15);
  CHECK(std::abs(u.coeff(-1) - std::complex<double>{0.5, 0.0}) < 1e-15);
  for (int m = -7; m <= 8; ++m)
    if (m != 1 && m != -1) CHECK(std::abs(u.coeff(m)) < 1e-15);

  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const Grid big(256);
  std::vector<double> x(256);
  for (auto& v : x) v = dist(rng);
  // Nyquist content is dropped by design, so remove it before the comparison
  SpectralField f = to_spectral(big, x);
  const auto x_ref = to_physical(f);
  const auto rt = to_physical(to_spectral(big, x_ref));
  double xmax = 0.0, err = 0.0;
  for (std::size_t j = 0; j < 256; ++j) {
    xmax = std::max(xmax, std::abs(x_ref[j]));
    err = std::max(err, std::abs(rt[j] - x_ref[j]));
  }
  CHECK(err < 1e-12 * std::max(1.0, xmax));
  CHECK(f.is_real_symmetric(0.0));

  double phys = 0.0;
  for (double v : x_ref) phys += v * v;
  phys /= 256.0;
  double spec = 0.0;
  for (const auto& c : f.coeffs()) spec += std::norm(c);
  CHECK(std::abs(phys - spec) < 1e-12 * spec);

  std::vector<double> wrong(17, 0.0);
  CHECK_THROWS_AS(to_spectral(big, wrong), std::invalid_argument);
}

TEST_CASE("dyadic projectors partition the represented modes") {
  const Grid g(128);
  const SpectralField u = random_hs_field(g, 1.0, 1.0, 99);

  SpectralField sum(g);
  for (int N : dyadic_blocks(g)) sum += project_dyadic(u, N);
  double err = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    err = std::max(err, std::abs(sum.coeffs()[i] - u.coeffs()[i]));
  CHECK(err < 1e-14);

  const SpectralField mean_only = project_leq(u, 0.0);
  for (int m = -63; m <= 64; ++m)
    if (m != 0) CHECK(std::abs(mean_only.coeff(m)) == 0.0);

  const SpectralField all = project_leq(u, static_cast<double>(g.max_mode()));
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(all.coeffs()[i] == u.coeffs()[i]);

  // out-of-range block gives the zero field on represented modes
  const SpectralField none = project_dyadic(u, 4 * g.max_mode());
  for (const auto& c : none.coeffs()) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("sobolev norm values and projection contraction") {
  const Grid g(16);
  SpectralField f(g);
  CHECK(sobolev_norm(f, 1.0) == 0.0);

  f.set_coeff(1, {0.5, 0.0});
  f.set_coeff(-1, {0.5, 0.0});
  // <1>^2 = 2 on both modes: (2 * 2 * 1/4)^(1/2) = 1
  CHECK(sobolev_norm(f, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

  const SpectralField u = random_hs_field(Grid(128), 1.0, 1.0, 7);
  for (double K : {0.0, 1.0, 5.0, 17.0, 64.0})
    CHECK(sobolev_norm(project_leq(u, K), 1.5) <= sobolev_norm(u, 1.5) + 1e-15);
}

TEST_CASE("envelope norm with unit weights matches the sharp block sum") {
  const Grid g(64);
  const SpectralField u = random_hs_field(g, 0.5, 2.0, 11);
  FrequencyEnvelope ones;
  ones.kappa = 2.0;
  ones.weights.assign(dyadic_blocks(g).size(), 1.0);

  const double via_env = envelope_norm(u, 1.25, ones, BlockShape::sharp);
  // independent block-wise oracle with indicator tiles
  double sum = 0.0;
  for (int N : dyadic_blocks(g)) {
    double sq = 0.0;
    for (int m = -31; m <= 32; ++m) {
      const int a = std::abs(m);
      const bool inside = (N == 1) ? (a <= 1) : (a > N / 2 && a <= N);
      if (inside) sq += std::norm(u.coeff(m));
    }
    sum += std::pow(static_cast<double>(N), 2.5) * sq;
  }
  CHECK(via_env == doctest::Approx(std::sqrt(sum)).epsilon(1e-10));

  FrequencyEnvelope bad;
  bad.kappa = 2.0;
  bad.weights = {1.0, 4.0, 8.0, 16.0, 32.0, 64.0};  // jump above kappa
  CHECK_THROWS_AS(envelope_norm(u, 1.0, bad), std::invalid_argument);
}

TEST_CASE("envelope regularization") {
  FrequencyEnvelope env;
  env.kappa = 2.0;
  for (int i = 0; i <= 10; ++i) env.weights.push_back(std::ldexp(1.0, i));  // w_N = N

  SUBCASE("already tempered at kappa' = kappa stays unchanged") {
    const auto reg = regularize_envelope(env, 2.0);
    for (std::size_t i = 0; i < env.weights.size(); ++i)
      CHECK(reg.weights[i] == doctest::Approx(env.weights[i]).epsilon(1e-14));
  }

  SUBCASE("kappa' = sqrt(2) gives the sqrt profile") {
    const double kp = std::sqrt(2.0);
    const auto reg = regularize_envelope(env, kp);
    reg.validate();
    for (std::size_t i = 0; i < env.weights.size(); ++i) {
      // oracle: direct minimum over all blocks
      double best = 1e300;
      for (std::size_t j = 0; j < env.weights.size(); ++j)
        best = std::min(best, env.weights[j] * std::pow(kp, std::abs(double(i) - double(j))));
      CHECK(reg.weights[i] == doctest::Approx(best).epsilon(1e-13));
      CHECK(reg.weights[i] <= env.weights[i] + 1e-13);
      CHECK(reg.weights[i] ==
            doctest::Approx(std::pow(std::sqrt(2.0), static_cast<double>(i))).epsilon(1e-12));
    }
  }

  SUBCASE("constant envelope is a fixed point") {
    FrequencyEnvelope ones;
    ones.kappa = 2.0;
    ones.weights.assign(8, 1.0);
    const auto reg = regularize_envelope(ones, 1.5);
    for (double w : reg.weights) CHECK(w == doctest::Approx(1.0).epsilon(1e-14));
  }

  CHECK_THROWS_AS(regularize_envelope(env, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(regularize_envelope(env, 2.5), std::invalid_argument);
}

TEST_CASE("random field generator: determinism, decay, refinement stability") {
  const Grid g(64);
  const SpectralField zero = random_hs_field(g, 1.0, 0.0, 1);
  for (const auto& c : zero.coeffs()) CHECK(std::abs(c) == 0.0);

  const SpectralField a = random_hs_field(g, 1.0, 1.0, 1);
  const SpectralField b = random_hs_field(g, 1.0, 1.0, 1);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.coeffs()[i] == b.coeffs()[i]);
  CHECK(a.coeff(0) == std::complex<double>{0.0, 0.0});
  CHECK(a.is_real_symmetric(0.0));

  const SpectralField c = random_hs_field(g, 1.0, 1.0, 2);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.coeffs()[i] != c.coeffs()[i]) differs = true;
  CHECK(differs);

  const double n64 = sobolev_norm(a, 1.0);
  const double n128 = sobolev_norm(random_hs_field(Grid(128), 1.0, 1.0, 1), 1.0);
  CHECK(n64 > 0.0);
  CHECK(std::abs(n128 - n64) / n64 < 0.05);
}

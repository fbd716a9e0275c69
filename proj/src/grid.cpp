#include "ilw/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ilw/fft_backend.hpp"

namespace ilw {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(std::size_t modes, double period) : modes_(modes), period_(period) {
  if (!is_power_of_two(modes) || modes < 8)
    throw std::invalid_argument("grid modes must be a power of two >= 8");
  if (!(period > 0.0)) throw std::invalid_argument("grid period must be positive");
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(modes_);
  for (std::size_t j = 0; j < modes_; ++j) x[j] = period_ * static_cast<double>(j) / modes_;
  return x;
}

Grid make_grid(std::size_t modes, double period) { return Grid(modes, period); }

SpectralField::SpectralField(Grid grid) : grid_(grid), coeffs_(grid.modes(), {0.0, 0.0}) {}

void SpectralField::enforce_real_symmetry() {
  const std::size_t M = coeffs_.size();
  coeffs_[0] = {coeffs_[0].real(), 0.0};
  coeffs_[M / 2] = {0.0, 0.0};
  for (std::size_t m = 1; m < M / 2; ++m) {
    const auto avg = 0.5 * (coeffs_[m] + std::conj(coeffs_[M - m]));
    coeffs_[m] = avg;
    coeffs_[M - m] = std::conj(avg);
  }
}

bool SpectralField::is_real_symmetric(double tol) const {
  const std::size_t M = coeffs_.size();
  if (std::abs(coeffs_[0].imag()) > tol) return false;
  if (std::abs(coeffs_[M / 2]) > tol) return false;
  for (std::size_t m = 1; m < M / 2; ++m)
    if (std::abs(coeffs_[m] - std::conj(coeffs_[M - m])) > tol) return false;
  return true;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (grid_ != other.grid_) throw std::invalid_argument("grid mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (grid_ != other.grid_) throw std::invalid_argument("grid mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double a, SpectralField f) { return f *= a; }

SpectralField to_spectral(const Grid& grid, std::span<const double> samples) {
  if (samples.size() != grid.modes())
    throw std::invalid_argument("sample count does not match grid modes");
  SpectralField out(grid);
  auto buf = out.coeffs();
  for (std::size_t j = 0; j < samples.size(); ++j) buf[j] = {samples[j], 0.0};
  fft::forward(buf);
  const double inv = 1.0 / static_cast<double>(grid.modes());
  for (auto& c : buf) c *= inv;
  out.enforce_real_symmetry();
  return out;
}

std::vector<double> to_physical(const SpectralField& field) {
  std::vector<std::complex<double>> buf(field.coeffs().begin(), field.coeffs().end());
  fft::backward(buf);
  std::vector<double> out(buf.size());
  for (std::size_t j = 0; j < buf.size(); ++j) out[j] = buf[j].real();
  return out;
}

namespace {

// eta is 1 on [-1,1], 0 outside [-2,2], cubic smoothstep on the transition.
double eta(double x) {
  const double a = std::abs(x);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double t = a - 1.0;
  return 1.0 - t * t * (3.0 - 2.0 * t);
}

}  // namespace

double dyadic_bump(double n, int block) {
  if (block <= 1) return eta(n);
  const double N = static_cast<double>(block);
  return eta(n / N) - eta(2.0 * n / N);
}

double dyadic_bump_at(int block, int m) { return dyadic_bump(static_cast<double>(m), block); }

SpectralField project_dyadic(const SpectralField& field, int block) {
  SpectralField out(field.grid());
  const Grid& g = field.grid();
  for (std::size_t i = 0; i < field.size(); ++i) {
    const int m = g.mode_at(i);
    out.coeffs()[i] = field.coeffs()[i] * dyadic_bump_at(block, m);
  }
  return out;
}

SpectralField project_leq(const SpectralField& field, double cutoff) {
  if (cutoff < 0.0) throw std::invalid_argument("cutoff must be nonnegative");
  SpectralField out(field.grid());
  const Grid& g = field.grid();
  for (std::size_t i = 0; i < field.size(); ++i) {
    const int m = g.mode_at(i);
    if (std::abs(m) <= cutoff) out.coeffs()[i] = field.coeffs()[i];
  }
  return out;
}

std::vector<int> dyadic_blocks(const Grid& grid) {
  std::vector<int> blocks;
  for (int N = 1; N <= grid.max_mode(); N *= 2) blocks.push_back(N);
  return blocks;
}

double sobolev_norm(const SpectralField& field, double s) {
  const Grid& g = field.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double xi = g.wavenumber(g.mode_at(i));
    const double w = std::pow(1.0 + xi * xi, s);
    sum += w * std::norm(field.coeffs()[i]);
  }
  return std::sqrt(sum);
}

void FrequencyEnvelope::validate() const {
  if (weights.empty()) throw std::invalid_argument("envelope has no blocks");
  if (kappa < 1.0) throw std::invalid_argument("envelope kappa must be >= 1");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) throw std::invalid_argument("envelope weights must be positive");
    if (i + 1 < weights.size()) {
      if (weights[i + 1] < weights[i] || weights[i + 1] > kappa * weights[i] * (1.0 + 1e-12))
        throw std::invalid_argument("envelope violates w_N <= w_2N <= kappa*w_N");
    }
  }
}

double envelope_norm(const SpectralField& field, double s, const FrequencyEnvelope& env,
                     BlockShape shape) {
  env.validate();
  const auto blocks = dyadic_blocks(field.grid());
  if (env.weights.size() != blocks.size())
    throw std::invalid_argument("envelope block count does not match grid");
  const Grid& g = field.grid();
  double sum = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const int N = blocks[b];
    double block_sq = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
      const int m = g.mode_at(i);
      double w;
      if (shape == BlockShape::smooth) {
        w = dyadic_bump_at(N, m);
      } else {
        const int a = std::abs(m);
        w = (N == 1) ? (a <= 1 ? 1.0 : 0.0) : ((a > N / 2 && a <= N) ? 1.0 : 0.0);
      }
      block_sq += w * w * std::norm(field.coeffs()[i]);
    }
    sum += env.weights[b] * env.weights[b] * std::pow(static_cast<double>(N), 2.0 * s) * block_sq;
  }
  return std::sqrt(sum);
}

FrequencyEnvelope regularize_envelope(const FrequencyEnvelope& env, double kappa_prime) {
  env.validate();
  if (!(kappa_prime > 1.0) || !(kappa_prime < env.kappa))
    throw std::invalid_argument("kappa' must lie in (1, kappa)");
  const std::size_t n = env.weights.size();
  FrequencyEnvelope out;
  out.kappa = kappa_prime;
  out.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      const double dist = std::abs(static_cast<double>(i) - static_cast<double>(j));
      best = std::min(best, env.weights[j] * std::pow(kappa_prime, dist));
    }
    out.weights[i] = best;
  }
  return out;
}

namespace {

// SplitMix64 (Vigna): state += 0x9E3779B97F4A7C15, output finalized with
// murmur-style mixing. One documented stream; Box-Muller for normal draws.
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // uniform in (0,1]: 53-bit mantissa, never zero
  double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
};

}  // namespace

SpectralField random_hs_field(const Grid& grid, double s, double amplitude, std::uint64_t seed) {
  SpectralField out(grid);
  SplitMix64 rng{seed};
  const int half = grid.max_mode();
  for (int m = 1; m < half; ++m) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const std::complex<double> gauss{r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
    const double xi = grid.wavenumber(m);
    const double decay = std::pow(1.0 + xi * xi, -0.5 * (s + 1.0));
    const std::complex<double> c = amplitude * decay * gauss;
    out.set_coeff(m, c);
    out.set_coeff(-m, std::conj(c));
  }
  return out;
}

}  // namespace ilw

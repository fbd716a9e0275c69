#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace ilw {

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Uniform periodic grid with M sample points on a torus of length L.
///
/// Represented modes are m in {-M/2+1, ..., M/2}; the physical wavenumber of
/// mode m is xi_m = (2*pi/L)*m. Immutable after construction.
class Grid {
 public:
  Grid(std::size_t modes, double period = two_pi);

  std::size_t modes() const { return modes_; }
  double period() const { return period_; }

  /// Largest represented |m| (the Nyquist index M/2).
  int max_mode() const { return static_cast<int>(modes_ / 2); }

  /// Physical wavenumber of signed mode m.
  double wavenumber(int m) const { return two_pi * m / period_; }
  double xi_max() const { return wavenumber(max_mode()); }

  /// Storage index of signed mode m (FFT layout: 0,1,...,M/2,-M/2+1,...,-1).
  std::size_t index_of(int m) const {
    return static_cast<std::size_t>(m >= 0 ? m : m + static_cast<int>(modes_));
  }
  /// Signed mode of storage index i.
  int mode_at(std::size_t i) const {
    const int M = static_cast<int>(modes_);
    const int ii = static_cast<int>(i);
    return ii <= M / 2 ? ii : ii - M;
  }

  /// Sample locations x_j = j*L/M.
  std::vector<double> nodes() const;

  bool operator==(const Grid&) const = default;

 private:
  std::size_t modes_;
  double period_;
};

/// Complex Fourier coefficients of a real periodic function.
///
/// Invariant: coeff(-m) == conj(coeff(m)); the Nyquist mode is kept at zero.
/// Coefficients follow the convention u_hat(m) = (1/M) sum_j u(x_j) e^{-i xi_m x_j}.
class SpectralField {
 public:
  explicit SpectralField(Grid grid);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }

  std::complex<double> coeff(int m) const { return coeffs_[grid_.index_of(m)]; }
  void set_coeff(int m, std::complex<double> v) { coeffs_[grid_.index_of(m)] = v; }

  std::span<const std::complex<double>> coeffs() const { return coeffs_; }
  std::span<std::complex<double>> coeffs() { return coeffs_; }

  /// Zeroes the Nyquist mode and pins coeff(-m) = conj(coeff(m)) exactly.
  void enforce_real_symmetry();
  bool is_real_symmetric(double tol = 0.0) const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double a);

 private:
  Grid grid_;
  std::vector<std::complex<double>> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double a, SpectralField f);

/// Validated constructor: modes must be a power of two >= 8, period > 0.
Grid make_grid(std::size_t modes, double period = two_pi);

/// Forward transform of M real samples; Hermitian symmetry enforced exactly.
SpectralField to_spectral(const Grid& grid, std::span<const double> samples);
/// Inverse transform to M real samples.
std::vector<double> to_physical(const SpectralField& field);

/// Smooth dyadic bump phi_N evaluated at signed mode m. phi_1 covers |m| <= 1;
/// for N >= 2 the support is N/2 <= |m| <= 2N. sum_N phi_N(m) == 1 exactly.
double dyadic_bump(double n_over, int block);
double dyadic_bump_at(int block, int m);

/// Littlewood-Paley block: coefficients weighted by phi_N.
SpectralField project_dyadic(const SpectralField& field, int block);
/// Sharp low-pass cutoff 1{|m| <= K}.
SpectralField project_leq(const SpectralField& field, double cutoff);

/// Dyadic blocks represented on a grid: 1, 2, 4, ..., M/2.
std::vector<int> dyadic_blocks(const Grid& grid);

/// (sum_m <xi_m>^{2s} |coeff(m)|^2)^{1/2} with <x> = (1+x^2)^{1/2}.
double sobolev_norm(const SpectralField& field, double s);

/// Monotone kappa-tempered dyadic weight sequence, one weight per block of a
/// grid: w[i] is the weight of block 2^i.
struct FrequencyEnvelope {
  std::vector<double> weights;
  double kappa = 1.0;

  /// Throws unless weights are positive and w_N <= w_{2N} <= kappa*w_N.
  void validate() const;
};

enum class BlockShape { smooth, sharp };

/// (sum_N w_N^2 N^{2s} ||P_N u||^2)^{1/2}. The sharp shape uses the indicator
/// tiling {|m|<=1}, {N/2 < |m| <= N} instead of the smooth bumps.
double envelope_norm(const SpectralField& field, double s, const FrequencyEnvelope& env,
                     BlockShape shape = BlockShape::smooth);

/// Largest kappa'-tempered minorant: w~_N = min_M w_M * kappa'^{|log2(N/M)|}.
FrequencyEnvelope regularize_envelope(const FrequencyEnvelope& env, double kappa_prime);

/// Deterministic H^s-type sample: coeff(m) = amplitude * <xi_m>^{-s-1} * g_m
/// for m > 0 with complex Gaussian g_m from a SplitMix64 stream (Box-Muller),
/// zero mean mode, Hermitian symmetry enforced.
SpectralField random_hs_field(const Grid& grid, double s, double amplitude, std::uint64_t seed);

}  // namespace ilw

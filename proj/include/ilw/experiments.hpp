#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ilw/evolution.hpp"

namespace ilw {

/// Initial data recipe shared by all members of a sweep. The default profile
/// is cos(x) + 0.5*cos(2x + 1) plus an optional random H^s tail.
struct DataSpec {
  enum class Profile { standard, random };
  Profile profile = Profile::standard;
  double amplitude = 1.0;
  double tail_amplitude = 0.0;  // standard profile only
  double tail_s = 1.0;
  std::uint64_t seed = 2024;
  std::optional<double> band_limit;  // sharp cutoff applied to the data

  SpectralField realize(const Grid& grid) const;
};

/// How the initial data varies with delta in the varying-data sweep.
struct PerturbationSpec {
  enum class Scaling { inverse_delta, constant, none };
  Scaling scaling = Scaling::inverse_delta;
  double amplitude = 0.25;
  int mode = 3;
};

struct SweepConfig {
  enum class Kind { deep, shallow, shallow_truncated, deep_varying_data };
  Kind kind = Kind::deep;
  std::vector<double> deltas;  // ordered toward the limit
  int k = 2;
  Grid grid{256};
  double final_time = 0.3;
  double dt = 0.0;            // 0: default from the data
  double s = 1.0;             // comparison norm order; the weaker norm is s-1
  std::size_t min_snapshots = 50;
  std::optional<double> truncation_K;  // shallow_truncated only
  DataSpec data;
  PerturbationSpec perturbation;  // deep_varying_data only
  bool linear_only = false;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max absolute log misfit
};

struct LinearBoundCheck {
  double delta;
  double error_l2;
  double bound;
  bool ok;
};

struct ConvergenceReport {
  SweepConfig::Kind kind;
  double s = 1.0;
  std::vector<double> deltas;
  std::vector<double> error_low;   // max-over-snapshots H^{s-1} distance to the limit flow
  std::vector<double> error_high;  // same in H^s
  RateFit fit;                     // least squares on (log delta, log error_low)
  double fitted_constant = 0.0;    // max of error_low * delta (deep sweeps)
  bool monotone_decreasing = false;
  bool converged = false;  // monotone and slope consistent with convergence
  std::optional<double> scaling_check_delta;
  std::optional<double> scaling_check_error;  // direct vs transformed, relative H^s
  std::optional<double> truncation_gap;       // ||v_delta - v_{delta,K}||_{H^s} at largest delta
  std::vector<LinearBoundCheck> linear_bound;  // linear-only symbol-gap bound (deep)
  // deterministic run metadata
  std::size_t grid_modes = 0;
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t snapshots = 0;
};

/// Ordinary least squares of log E against log delta; throws if fewer than 4
/// points or any E <= 0.
RateFit fit_rate(std::span<const double> deltas, std::span<const double> errors);

/// Pull a trajectory of the unscaled equation at depth delta back through
/// v(t, x) = (3/delta)^{1/(k-1)} u(3 t / delta, x). Every requested time must
/// be present among the source snapshots.
Trajectory apply_scaling_transform(const Trajectory& traj, double delta, int k);

ConvergenceReport deep_water_sweep(const SweepConfig& config);
ConvergenceReport shallow_water_sweep(const SweepConfig& config);
ConvergenceReport truncated_shallow_sweep(const SweepConfig& config);
ConvergenceReport varying_data_sweep(const SweepConfig& config);

std::string sweep_kind_name(SweepConfig::Kind kind);

}  // namespace ilw

#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "ilw/grid.hpp"
#include "ilw/symbols.hpp"

namespace ilw {

/// Fixed-step solver parameters. The advisory step bound is
/// cfl_limit = 0.5 / (xi_max * (1 + max|u0|)); default_dt picks a step
/// with extra margin below it.
struct SolverConfig {
  EquationSpec spec = EquationSpec::deep(4.0, 2);
  Grid grid{256};
  double dt = 0.0;  // 0 means: use default_dt at evolve time
  double final_time = 0.3;
  int dealias_padding = 0;  // 0 means: ceil((k+1)/2)
  std::size_t snapshot_stride = 0;  // 0 means: aim for ~60 snapshots
  bool linear_only = false;
  double hs_order = 1.0;  // diagnostic H^s order
  std::optional<double> truncation;  // sharp cutoff applied to data + nonlinearity

  static double cfl_limit(const Grid& grid, std::span<const double> samples);
  static double default_dt(const Grid& grid, std::span<const double> samples);
};

struct Snapshot {
  double t;
  SpectralField field;
};

struct SnapshotDiagnostics {
  double t;
  double mean;
  double l2;
  double hs;
  std::optional<double> i2;
};

/// Time-ordered snapshots with per-snapshot diagnostics; t = 0 holds the
/// initial data. A blow-up keeps the last healthy snapshot and sets the flag.
struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<SnapshotDiagnostics> diagnostics;
  bool blown_up = false;
  double failure_time = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
};

/// Per-mode phases exp(i*t*p(m)) of the exact linear propagator.
std::vector<std::complex<double>> linear_propagator(const SymbolTable& table, double t);

/// Pseudospectral d/dx(u^k): u^k formed on a zero-padded grid (factor
/// ceil((k+1)/2) unless overridden), truncated back, multiplied by i*xi.
/// Output is Hermitian-symmetric with an exactly zero mean mode.
SpectralField nonlinear_term(const SpectralField& field, int k, int padding = 0);

/// One classical RK4 step in the integrating-factor variable
/// w(t) = e^{-i t p} u_hat(t). With linear_only the step is the exact
/// propagator. Throws on non-finite input.
SpectralField step_ifrk4(const SpectralField& state, double dt, const SymbolTable& table,
                         const EquationSpec& spec, int padding = 0, bool linear_only = false,
                         std::optional<double> truncation = std::nullopt);

/// Fixed-step march to final_time with snapshots every snapshot_stride steps;
/// the last snapshot lands exactly at final_time.
Trajectory evolve(const SpectralField& u0, const SolverConfig& config);
Trajectory evolve(const SpectralField& u0, const SolverConfig& config, const SymbolTable& table);

/// H^1-level ILW density integral
///   integral( u^4/4 + (3/4) u^2 Gdx u + (1/8) (dx u)^2 + (3/8) (Gdx u)^2
///             + 3/(8 delta) u Gdx u ) dx,
/// where Gdx has the real even multiplier K_delta. Quartic and cross terms
/// are evaluated on a 4x padded grid so the quadrature is alias-free.
double invariant_i2(const SpectralField& field, double delta);

/// Same density with the u*Gdx u cross term entering with weight -3/(8 delta);
/// this variant is the one conserved by the flow (see the drift diagnostics).
double invariant_i2_flipped(const SpectralField& field, double delta);

}  // namespace ilw

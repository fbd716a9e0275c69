#include "ilw/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ilw {

namespace {

void check_aligned(const Trajectory& a, const Trajectory& b) {
  if (a.snapshots.size() != b.snapshots.size())
    throw std::logic_error("trajectories have different snapshot counts");
  for (std::size_t i = 0; i < a.snapshots.size(); ++i)
    if (std::abs(a.snapshots[i].t - b.snapshots[i].t) > 1e-9)
      throw std::logic_error("trajectory snapshot times differ");
}

double max_norm_diff(const Trajectory& a, const Trajectory& b, double s) {
  check_aligned(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.snapshots.size(); ++i)
    worst = std::max(worst, sobolev_norm(a.snapshots[i].field - b.snapshots[i].field, s));
  return worst;
}

void require_no_blowup(const Trajectory& t, double delta) {
  if (t.blown_up)
    throw std::runtime_error("blow-up at delta = " + std::to_string(delta) +
                             ", t = " + std::to_string(t.failure_time));
}

struct SweepSetup {
  SpectralField u0;
  double dt;
  std::size_t stride;
};

SweepSetup prepare(const SweepConfig& config) {
  SpectralField u0 = config.data.realize(config.grid);
  double dt = config.dt;
  if (dt <= 0.0) dt = SolverConfig::default_dt(config.grid, to_physical(u0));
  const auto nsteps = static_cast<std::size_t>(std::ceil(config.final_time / dt - 1e-12));
  const std::size_t stride = std::max<std::size_t>(1, nsteps / std::max<std::size_t>(config.min_snapshots, 1));
  return {std::move(u0), dt, stride};
}

SolverConfig member_config(const SweepConfig& config, const EquationSpec& spec, double dt,
                           std::size_t stride) {
  SolverConfig sc;
  sc.spec = spec;
  sc.grid = config.grid;
  sc.dt = dt;
  sc.final_time = config.final_time;
  sc.snapshot_stride = stride;
  sc.linear_only = config.linear_only;
  sc.hs_order = config.s;
  sc.truncation = config.truncation_K;
  return sc;
}

void validate_deltas(const SweepConfig& config, bool deep) {
  if (config.deltas.size() < 4)
    throw std::invalid_argument("rate fitting requires at least 4 delta values");
  for (double d : config.deltas) {
    if (deep && !(d >= 2.0)) throw std::invalid_argument("deep sweep requires delta >= 2");
    if (!deep && !(d > 0.0 && d < 1.0))
      throw std::invalid_argument("shallow sweep requires 0 < delta < 1");
  }
  for (std::size_t i = 1; i < config.deltas.size(); ++i) {
    const bool ordered = deep ? config.deltas[i] > config.deltas[i - 1]
                              : config.deltas[i] < config.deltas[i - 1];
    if (!ordered) throw std::invalid_argument("delta list must be ordered toward the limit");
  }
}

void finalize_fit(ConvergenceReport& rep, bool deep) {
  rep.fit = fit_rate(rep.deltas, rep.error_low);
  rep.monotone_decreasing = true;
  for (std::size_t i = 1; i < rep.error_low.size(); ++i)
    if (!(rep.error_low[i] < rep.error_low[i - 1])) rep.monotone_decreasing = false;
  if (deep) {
    rep.fitted_constant = 0.0;
    for (std::size_t i = 0; i < rep.deltas.size(); ++i)
      rep.fitted_constant = std::max(rep.fitted_constant, rep.error_low[i] * rep.deltas[i]);
    rep.converged = rep.monotone_decreasing && rep.fit.slope <= -0.5;
  } else {
    rep.converged = rep.monotone_decreasing && rep.fit.slope >= 0.5;
  }
}

}  // namespace

SpectralField DataSpec::realize(const Grid& grid) const {
  SpectralField u0(grid);
  if (profile == Profile::standard) {
    // cos(x) + 0.5 cos(2x + 1), scaled by amplitude, in the grid's fundamental
    u0.set_coeff(1, {0.5 * amplitude, 0.0});
    u0.set_coeff(-1, {0.5 * amplitude, 0.0});
    const std::complex<double> c2 =
        0.25 * amplitude * std::complex<double>{std::cos(1.0), std::sin(1.0)};
    u0.set_coeff(2, c2);
    u0.set_coeff(-2, std::conj(c2));
    if (tail_amplitude != 0.0) u0 += random_hs_field(grid, tail_s, tail_amplitude, seed);
  } else {
    u0 = random_hs_field(grid, tail_s, amplitude, seed);
  }
  if (band_limit) u0 = project_leq(u0, *band_limit);
  return u0;
}

RateFit fit_rate(std::span<const double> deltas, std::span<const double> errors) {
  if (deltas.size() != errors.size()) throw std::invalid_argument("size mismatch");
  if (deltas.size() < 4) throw std::invalid_argument("rate fit needs at least 4 points");
  for (double e : errors)
    if (!(e > 0.0))
      throw std::invalid_argument("rate fit requires positive errors (degenerate comparison)");
  const std::size_t n = deltas.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(deltas[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = fit.slope * std::log(deltas[i]) + fit.intercept;
    fit.residual = std::max(fit.residual, std::abs(pred - std::log(errors[i])));
  }
  return fit;
}

Trajectory apply_scaling_transform(const Trajectory& traj, double delta, int k) {
  if (!(delta > 0.0)) throw std::invalid_argument("scaling transform requires delta > 0");
  if (k < 2) throw std::invalid_argument("scaling transform requires k >= 2");
  if (traj.snapshots.empty()) throw std::invalid_argument("empty trajectory");
  const double lambda = std::pow(3.0 / delta, 1.0 / (k - 1));
  Trajectory out;
  out.blown_up = traj.blown_up;
  out.failure_time = traj.failure_time * delta / 3.0;
  out.dt = traj.dt * delta / 3.0;
  out.steps = traj.steps;
  for (const auto& snap : traj.snapshots) {
    SpectralField v = snap.field;
    v *= lambda;
    const double t = snap.t * delta / 3.0;
    SnapshotDiagnostics d;
    d.t = t;
    d.mean = v.coeff(0).real();
    d.l2 = sobolev_norm(v, 0.0);
    d.hs = sobolev_norm(v, 1.0);
    out.snapshots.push_back({t, std::move(v)});
    out.diagnostics.push_back(d);
  }
  return out;
}

namespace {

// Direct scaled run vs the transform of an unscaled run at the same depth.
// The unscaled equation is marched so its snapshots land exactly on the
// pulled-back times 3 t_i / delta.
double scaling_consistency_error(const SweepConfig& config, const Trajectory& direct,
                                 double delta, double dt) {
  const int k = config.k;
  const double lambda = std::pow(3.0 / delta, 1.0 / (k - 1));
  const double c = 3.0 / delta;

  SpectralField u = direct.snapshots.front().field;
  u *= 1.0 / lambda;

  const SymbolTable table = SymbolTable::unscaled_ilw(config.grid, delta, k);
  const EquationSpec spec = table.spec();

  Trajectory utraj;
  utraj.dt = dt;
  utraj.snapshots.push_back({0.0, u});
  double tau = 0.0;
  for (std::size_t i = 1; i < direct.snapshots.size(); ++i) {
    const double tau_target = c * direct.snapshots[i].t;
    const double span = tau_target - tau;
    const auto nsub = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt - 1e-12)));
    const double h = span / static_cast<double>(nsub);
    for (std::size_t j = 0; j < nsub; ++j) u = step_ifrk4(u, h, table, spec, 0, false);
    tau = tau_target;
    utraj.snapshots.push_back({tau, u});
  }

  const Trajectory pulled = apply_scaling_transform(utraj, delta, k);
  double worst = 0.0;
  for (std::size_t i = 0; i < direct.snapshots.size(); ++i) {
    if (std::abs(pulled.snapshots[i].t - direct.snapshots[i].t) > 1e-9)
      throw std::logic_error("missing pulled-back snapshot");
    const double denom = std::max(sobolev_norm(direct.snapshots[i].field, config.s), 1e-300);
    worst = std::max(
        worst, sobolev_norm(pulled.snapshots[i].field - direct.snapshots[i].field, config.s) / denom);
  }
  return worst;
}

}  // namespace

ConvergenceReport deep_water_sweep(const SweepConfig& config) {
  validate_deltas(config, true);
  const auto setup = prepare(config);

  ConvergenceReport rep;
  rep.kind = config.kind;
  rep.s = config.s;
  rep.grid_modes = config.grid.modes();
  rep.dt = setup.dt;

  const auto ref_cfg = member_config(config, EquationSpec::bo(config.k), setup.dt, setup.stride);
  const Trajectory ref = evolve(setup.u0, ref_cfg);
  require_no_blowup(ref, std::numeric_limits<double>::infinity());
  rep.steps = ref.steps;
  rep.snapshots = ref.snapshots.size();

  for (double d : config.deltas) {
    const auto cfg = member_config(config, EquationSpec::deep(d, config.k), setup.dt, setup.stride);
    const Trajectory traj = evolve(setup.u0, cfg);
    require_no_blowup(traj, d);
    rep.deltas.push_back(d);
    rep.error_low.push_back(max_norm_diff(traj, ref, config.s - 1.0));
    rep.error_high.push_back(max_norm_diff(traj, ref, config.s));
  }
  finalize_fit(rep, true);

  // symbol-gap bound for the pure linear flows:
  // E_L2(delta) <= T * xi_max * (2/delta) * ||u0||_L2
  auto lin_cfg = ref_cfg;
  lin_cfg.linear_only = true;
  const Trajectory lin_ref = evolve(setup.u0, lin_cfg);
  const double l2_u0 = sobolev_norm(setup.u0, 0.0);
  for (double d : config.deltas) {
    auto cfg = member_config(config, EquationSpec::deep(d, config.k), setup.dt, setup.stride);
    cfg.linear_only = true;
    const Trajectory traj = evolve(setup.u0, cfg);
    const double err = max_norm_diff(traj, lin_ref, 0.0);
    const double bound = config.final_time * config.grid.xi_max() * (2.0 / d) * l2_u0;
    rep.linear_bound.push_back({d, err, bound, err <= bound});
  }
  return rep;
}

ConvergenceReport shallow_water_sweep(const SweepConfig& config) {
  validate_deltas(config, false);
  const auto setup = prepare(config);

  ConvergenceReport rep;
  rep.kind = config.kind;
  rep.s = config.s;
  rep.grid_modes = config.grid.modes();
  rep.dt = setup.dt;

  const auto ref_cfg = member_config(config, EquationSpec::kdv(config.k), setup.dt, setup.stride);
  const Trajectory ref = evolve(setup.u0, ref_cfg);
  require_no_blowup(ref, 0.0);
  rep.steps = ref.steps;
  rep.snapshots = ref.snapshots.size();

  Trajectory largest_delta_traj{};
  for (double d : config.deltas) {
    const auto cfg =
        member_config(config, EquationSpec::shallow(d, config.k), setup.dt, setup.stride);
    Trajectory traj = evolve(setup.u0, cfg);
    require_no_blowup(traj, d);
    rep.deltas.push_back(d);
    rep.error_low.push_back(max_norm_diff(traj, ref, config.s - 1.0));
    rep.error_high.push_back(max_norm_diff(traj, ref, config.s));
    if (rep.deltas.size() == 1) largest_delta_traj = std::move(traj);
  }
  finalize_fit(rep, false);

  rep.scaling_check_delta = config.deltas.front();
  rep.scaling_check_error =
      scaling_consistency_error(config, largest_delta_traj, config.deltas.front(), setup.dt);
  return rep;
}

ConvergenceReport truncated_shallow_sweep(const SweepConfig& config) {
  validate_deltas(config, false);
  if (!config.truncation_K) throw std::invalid_argument("truncated sweep requires truncation_K");
  const double K = *config.truncation_K;
  if (!(K >= 1.0) || K > static_cast<double>(config.grid.modes()) / 3.0)
    throw std::invalid_argument("truncation K must satisfy 1 <= K <= modes/3 (alias-free)");
  const auto setup = prepare(config);

  ConvergenceReport rep;
  rep.kind = config.kind;
  rep.s = config.s;
  rep.grid_modes = config.grid.modes();
  rep.dt = setup.dt;

  const auto ref_cfg = member_config(config, EquationSpec::kdv(config.k), setup.dt, setup.stride);
  const Trajectory ref = evolve(setup.u0, ref_cfg);
  require_no_blowup(ref, 0.0);
  rep.steps = ref.steps;
  rep.snapshots = ref.snapshots.size();

  for (double d : config.deltas) {
    const auto cfg =
        member_config(config, EquationSpec::shallow(d, config.k), setup.dt, setup.stride);
    const Trajectory traj = evolve(setup.u0, cfg);
    require_no_blowup(traj, d);
    rep.deltas.push_back(d);
    rep.error_low.push_back(max_norm_diff(traj, ref, config.s - 1.0));
    rep.error_high.push_back(max_norm_diff(traj, ref, config.s));
  }
  finalize_fit(rep, false);

  // truncation gap at the largest depth: full flow vs truncated flow
  {
    const double d = config.deltas.front();
    auto full_cfg =
        member_config(config, EquationSpec::shallow(d, config.k), setup.dt, setup.stride);
    full_cfg.truncation.reset();
    const Trajectory full = evolve(setup.u0, full_cfg);
    require_no_blowup(full, d);
    const auto trunc_cfg =
        member_config(config, EquationSpec::shallow(d, config.k), setup.dt, setup.stride);
    const Trajectory trunc = evolve(setup.u0, trunc_cfg);
    rep.truncation_gap = max_norm_diff(full, trunc, config.s);
  }
  return rep;
}

ConvergenceReport varying_data_sweep(const SweepConfig& config) {
  validate_deltas(config, true);
  const auto setup = prepare(config);

  SpectralField pert(config.grid);
  pert.set_coeff(config.perturbation.mode, {0.5 * config.perturbation.amplitude, 0.0});
  pert.set_coeff(-config.perturbation.mode, {0.5 * config.perturbation.amplitude, 0.0});

  ConvergenceReport rep;
  rep.kind = config.kind;
  rep.s = config.s;
  rep.grid_modes = config.grid.modes();
  rep.dt = setup.dt;

  const auto ref_cfg = member_config(config, EquationSpec::bo(config.k), setup.dt, setup.stride);
  const Trajectory ref = evolve(setup.u0, ref_cfg);
  require_no_blowup(ref, std::numeric_limits<double>::infinity());
  rep.steps = ref.steps;
  rep.snapshots = ref.snapshots.size();

  for (double d : config.deltas) {
    double a = 0.0;
    switch (config.perturbation.scaling) {
      case PerturbationSpec::Scaling::inverse_delta: a = 1.0 / d; break;
      case PerturbationSpec::Scaling::constant: a = 1.0; break;
      case PerturbationSpec::Scaling::none: a = 0.0; break;
    }
    SpectralField u0d = setup.u0;
    if (a != 0.0) u0d += a * pert;
    const auto cfg = member_config(config, EquationSpec::deep(d, config.k), setup.dt, setup.stride);
    const Trajectory traj = evolve(u0d, cfg);
    require_no_blowup(traj, d);
    rep.deltas.push_back(d);
    rep.error_low.push_back(max_norm_diff(traj, ref, config.s - 1.0));
    rep.error_high.push_back(max_norm_diff(traj, ref, config.s));
  }
  finalize_fit(rep, true);
  return rep;
}

std::string sweep_kind_name(SweepConfig::Kind kind) {
  switch (kind) {
    case SweepConfig::Kind::deep: return "deep";
    case SweepConfig::Kind::shallow: return "shallow";
    case SweepConfig::Kind::shallow_truncated: return "shallow-truncated";
    case SweepConfig::Kind::deep_varying_data: return "varying-data";
  }
  return "?";
}

}  // namespace ilw

#include "ilw/symbols.hpp"

#include <cmath>
#include <stdexcept>

namespace ilw {

namespace {
constexpr double pi = 3.14159265358979323846264338328;
constexpr double pi2 = pi * pi;
// Branch thresholds chosen so adjacent branches agree below 1e-13 at the
// crossover.
constexpr double series_cut = 1e-4;
constexpr double tail_cut = 20.0;
}  // namespace

double coth_stable(double x) {
  if (x == 0.0) throw std::invalid_argument("coth undefined at 0");
  const double a = std::abs(x);
  if (a > tail_cut) return x > 0 ? 1.0 : -1.0;
  if (a < series_cut) return 1.0 / x + x / 3.0 - x * x * x / 45.0;
  const double e = std::exp(2.0 * x);
  return (e + 1.0) / (e - 1.0);
}

double k_delta(double delta, double xi) {
  if (!(delta > 0.0)) throw std::invalid_argument("k_delta requires delta > 0");
  if (xi == 0.0) return 0.0;
  const double y = delta * xi;
  if (std::abs(y) < series_cut) {
    // xi*coth(delta*xi) - 1/delta expanded in y = delta*xi
    return delta * xi * xi / 3.0 - delta * delta * delta * xi * xi * xi * xi / 45.0;
  }
  return xi * coth_stable(y) - 1.0 / delta;
}

double k_delta_derivative(double delta, double xi) {
  if (!(delta > 0.0)) throw std::invalid_argument("k_delta_derivative requires delta > 0");
  const double y = delta * xi;
  const double a = std::abs(y);
  if (a < series_cut) return 2.0 * y / 3.0 - 4.0 * y * y * y / 45.0;
  if (a > tail_cut) return y > 0 ? 1.0 : -1.0;
  const double sh = std::sinh(y);
  return coth_stable(y) - y / (sh * sh);
}

double l_delta(double delta, double xi) {
  if (!(delta > 0.0)) throw std::invalid_argument("l_delta requires delta > 0");
  return 3.0 / delta * k_delta(delta, xi);
}

double q_delta(double delta, double xi) {
  if (!(delta >= 2.0)) throw std::invalid_argument("q_delta requires delta >= 2");
  return std::abs(xi) - k_delta(delta, xi);
}

double h_series(double delta, double xi, double tol) {
  if (!(delta > 0.0)) throw std::invalid_argument("h_series requires delta > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("h_series requires tol > 0");
  if (xi == 0.0) return 0.0;
  const double d3x2 = delta * delta * delta * xi * xi;
  // Tail beyond k0 is below sum_{k>k0} 6 d^3 xi^2/(k^4 pi^4) <= 2 d^3 xi^2/(pi^4 k0^3).
  const double k0_real = std::cbrt(2.0 * d3x2 / (pi2 * pi2 * tol));
  const std::size_t k0 = static_cast<std::size_t>(std::max(4.0, std::ceil(k0_real)));
  if (k0 > 100'000'000)
    throw std::invalid_argument("h_series tolerance unattainable at this (delta, xi)");
  const double y2 = delta * delta * xi * xi;
  double sum = 0.0;
  for (std::size_t k = k0; k >= 1; --k) {  // ascending magnitude for accuracy
    const double kk = static_cast<double>(k) * static_cast<double>(k) * pi2;
    sum += 6.0 * d3x2 / (kk * (kk + y2));
  }
  return sum;
}

double h_closed(double delta, double xi) {
  if (!(delta > 0.0)) throw std::invalid_argument("h_closed requires delta > 0");
  if (xi == 0.0) return 0.0;
  const double y = delta * xi;
  if (std::abs(y) < series_cut) {
    // h = 3*(1/d + d xi^2/3 - xi coth(d xi))/xi^2 with the same expansion as k_delta
    return delta * delta * delta * xi * xi / 15.0;
  }
  return 3.0 * (1.0 / delta + delta * xi * xi / 3.0 - xi * coth_stable(y)) / (xi * xi);
}

DepthParam DepthParam::deep(double delta) {
  if (!(delta >= 2.0)) throw std::invalid_argument("deep regime requires delta >= 2");
  return DepthParam(Tag::deep, delta);
}

DepthParam DepthParam::shallow(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("shallow regime requires 0 < delta < 1");
  return DepthParam(Tag::shallow, delta);
}

double DepthParam::delta() const {
  if (!has_delta()) throw std::logic_error("limit depth carries no delta");
  return delta_;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::gilw_deep: return "gILW-deep";
    case Family::gbo: return "gBO";
    case Family::scaled_gilw: return "scaled-gILW";
    case Family::gkdv: return "gKdV";
  }
  return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
  if (name == "gILW-deep") return Family::gilw_deep;
  if (name == "gBO") return Family::gbo;
  if (name == "scaled-gILW") return Family::scaled_gilw;
  if (name == "gKdV") return Family::gkdv;
  return std::nullopt;
}

EquationSpec EquationSpec::make(Family family, int k, DepthParam depth) {
  if (k < 2) throw std::invalid_argument("nonlinearity power k must be >= 2");
  const auto tag = depth.tag();
  const bool ok = (family == Family::gilw_deep && tag == DepthParam::Tag::deep) ||
                  (family == Family::gbo && tag == DepthParam::Tag::infinite) ||
                  (family == Family::scaled_gilw && tag == DepthParam::Tag::shallow) ||
                  (family == Family::gkdv && tag == DepthParam::Tag::kdv_limit);
  if (!ok) throw std::invalid_argument("family/depth mismatch");
  return EquationSpec{family, k, depth};
}

EquationSpec EquationSpec::deep(double delta, int k) {
  return make(Family::gilw_deep, k, DepthParam::deep(delta));
}
EquationSpec EquationSpec::bo(int k) { return make(Family::gbo, k, DepthParam::infinite()); }
EquationSpec EquationSpec::shallow(double delta, int k) {
  return make(Family::scaled_gilw, k, DepthParam::shallow(delta));
}
EquationSpec EquationSpec::kdv(int k) { return make(Family::gkdv, k, DepthParam::kdv_limit()); }

double deep_symbol(std::optional<double> delta, double xi) {
  if (!delta) return xi * std::abs(xi);
  return xi * k_delta(*delta, xi);
}

double scaled_symbol(std::optional<double> delta, double xi) {
  if (!delta) return xi * xi * xi;
  return xi * l_delta(*delta, xi);
}

double deep_symbol_derivative(std::optional<double> delta, double xi) {
  if (!delta) return 2.0 * std::abs(xi);
  return k_delta(*delta, xi) + xi * k_delta_derivative(*delta, xi);
}

double scaled_symbol_derivative(std::optional<double> delta, double xi) {
  if (!delta) return 3.0 * xi * xi;
  return l_delta(*delta, xi) + xi * (3.0 / *delta) * k_delta_derivative(*delta, xi);
}

void SymbolTable::fill() {
  const std::size_t M = grid_.modes();
  p_.assign(M, 0.0);
  const bool deep_form = spec_.family == Family::gilw_deep || spec_.family == Family::gbo;
  const bool finite_depth = delta_.has_value();
  const double delta = finite_depth ? *delta_ : 0.0;

  if (deep_form) {
    K_.assign(M, 0.0);
    if (!finite_depth || delta >= 2.0) q_.assign(M, 0.0);
  } else {
    L_.assign(M, 0.0);
    if (finite_depth) {
      K_.assign(M, 0.0);
      h_.assign(M, 0.0);
    }
  }

  for (std::size_t i = 0; i < M; ++i) {
    const int m = grid_.mode_at(i);
    const double xi = grid_.wavenumber(m);
    if (deep_form) {
      const double K = finite_depth ? k_delta(delta, xi) : std::abs(xi);
      p_[i] = xi * K;
      K_[i] = K;
      if (!q_.empty()) q_[i] = std::abs(xi) - K;
    } else {
      const double L = finite_depth ? l_delta(delta, xi) : xi * xi;
      p_[i] = xi * L;
      L_[i] = L;
      if (finite_depth) {
        K_[i] = k_delta(delta, xi);
        h_[i] = h_closed(delta, xi);
      }
    }
  }

  // construction-time guarantees: p odd, p(0) = 0
  if (p_[grid_.index_of(0)] != 0.0) throw std::logic_error("dispersion symbol p(0) != 0");
  for (int m = 1; m < grid_.max_mode(); ++m)
    if (p(-m) != -p(m)) throw std::logic_error("dispersion symbol is not odd");
}

SymbolTable SymbolTable::build(const EquationSpec& spec, const Grid& grid) {
  SymbolTable t(spec, grid);
  if (spec.depth.has_delta()) t.delta_ = spec.depth.delta();
  t.fill();
  return t;
}

SymbolTable SymbolTable::unscaled_ilw(const Grid& grid, double delta, int k) {
  if (!(delta > 0.0)) throw std::invalid_argument("unscaled_ilw requires delta > 0");
  if (k < 2) throw std::invalid_argument("nonlinearity power k must be >= 2");
  // Deep-form table at a depth below the regime gate; only p and K are used.
  EquationSpec spec{Family::gilw_deep, k, DepthParam::infinite()};
  SymbolTable t(spec, grid);
  t.delta_ = delta;
  t.fill();
  return t;
}

SymbolTable build_symbol_table(const EquationSpec& spec, const Grid& grid) {
  return SymbolTable::build(spec, grid);
}

}  // namespace ilw

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ilw/grid.hpp"

namespace ilw {

/// coth(x) = (e^{2x}+1)/(e^{2x}-1), with a Laurent-series branch for
/// |x| < 1e-4 and saturation to sign(x) for |x| > 20. Rejects x == 0.
double coth_stable(double x);

/// K_delta(xi) = xi*coth(delta*xi) - 1/delta, with K_delta(0) = 0.
/// Satisfies max(0, |xi| - 1/delta) <= K_delta(xi) <= |xi|, strict for xi != 0.
double k_delta(double delta, double xi);

/// d/dxi [xi*coth(delta*xi)], the derivative of K_delta. Even series branch
/// 2y/3 - 4y^3/45 (y = delta*xi) near zero, saturation to sign(xi) in the tail.
double k_delta_derivative(double delta, double xi);

/// L_delta(xi) = (3/delta)*K_delta(xi); 0 < L_delta(xi) < xi^2 for xi != 0,
/// increasing to xi^2 as delta -> 0.
double l_delta(double delta, double xi);

/// q_delta(xi) = 1/delta - xi*coth(delta*xi) + |xi| = |xi| - K_delta(xi),
/// the dispersion gap to the deep-water limit; lies in [0, 2/delta].
/// Rejects delta < 2 (outside the uniform deep regime).
double q_delta(double delta, double xi);

/// Remainder in the cotangent Taylor identity
///   xi*coth(delta*xi) = 1/delta + (1/3)*delta*xi^2 - (1/3)*xi^2*h(xi,delta),
/// summed as h = sum_k 6*delta^3*xi^2 / (k^2 pi^2 (k^2 pi^2 + delta^2 xi^2))
/// with a certified tail bound below tol. h(0,.) = 0.
double h_series(double delta, double xi, double tol = 1e-12);

/// Same remainder from the closed form h = 3*(1/delta + delta*xi^2/3
/// - xi*coth(delta*xi)) / xi^2, using the stable coth branches.
double h_closed(double delta, double xi);

/// Relative depth regime tag. Deep requires delta >= 2, Shallow 0 < delta < 1;
/// Infinite and KdVLimit are the two limiting equations.
class DepthParam {
 public:
  enum class Tag { deep, infinite, shallow, kdv_limit };

  static DepthParam deep(double delta);
  static DepthParam infinite() { return DepthParam(Tag::infinite, 0.0); }
  static DepthParam shallow(double delta);
  static DepthParam kdv_limit() { return DepthParam(Tag::kdv_limit, 0.0); }

  Tag tag() const { return tag_; }
  bool has_delta() const { return tag_ == Tag::deep || tag_ == Tag::shallow; }
  double delta() const;

 private:
  DepthParam(Tag t, double d) : tag_(t), delta_(d) {}
  Tag tag_;
  double delta_;
};

enum class Family { gilw_deep, gbo, scaled_gilw, gkdv };

std::string family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

/// Which member of the family to integrate: family, nonlinearity power k >= 2,
/// and the depth parameter (consistency between family and depth enforced).
struct EquationSpec {
  Family family;
  int k;
  DepthParam depth;

  static EquationSpec make(Family family, int k, DepthParam depth);
  static EquationSpec deep(double delta, int k = 2);
  static EquationSpec bo(int k = 2);
  static EquationSpec shallow(double delta, int k = 2);
  static EquationSpec kdv(int k = 2);
};

/// Dispersion value p(xi) of one family member at a single wavenumber:
///   deep:   p = xi*K_delta(xi)      (delta = nullopt gives the limit xi*|xi|)
///   scaled: p = xi*L_delta(xi)      (delta = nullopt gives the limit xi^3)
double deep_symbol(std::optional<double> delta, double xi);
double scaled_symbol(std::optional<double> delta, double xi);
double deep_symbol_derivative(std::optional<double> delta, double xi);
double scaled_symbol_derivative(std::optional<double> delta, double xi);

/// Per-mode dispersion table for one equation on one grid. p is odd with
/// p(0) = 0 (verified at construction); auxiliary symbol columns are filled
/// where they apply to the family.
class SymbolTable {
 public:
  static SymbolTable build(const EquationSpec& spec, const Grid& grid);

  /// Deep-form table at an arbitrary depth delta > 0, outside the regime
  /// gate (used when pulling scaled trajectories back through the unscaled
  /// equation, where delta < 2 is legitimate).
  static SymbolTable unscaled_ilw(const Grid& grid, double delta, int k);

  const Grid& grid() const { return grid_; }
  const EquationSpec& spec() const { return spec_; }
  /// Finite depth backing the table, when there is one.
  std::optional<double> effective_delta() const { return delta_; }

  double p(int m) const { return p_[grid_.index_of(m)]; }
  std::span<const double> p_values() const { return p_; }

  bool has_K() const { return !K_.empty(); }
  bool has_L() const { return !L_.empty(); }
  bool has_q() const { return !q_.empty(); }
  bool has_h() const { return !h_.empty(); }
  double K(int m) const { return K_[grid_.index_of(m)]; }
  double L(int m) const { return L_[grid_.index_of(m)]; }
  double q(int m) const { return q_[grid_.index_of(m)]; }
  double h(int m) const { return h_[grid_.index_of(m)]; }

 private:
  SymbolTable(const EquationSpec& spec, const Grid& grid) : spec_(spec), grid_(grid) {}
  void fill();

  EquationSpec spec_;
  Grid grid_;
  std::optional<double> delta_;
  std::vector<double> p_;
  std::vector<double> K_, L_, q_, h_;
};

SymbolTable build_symbol_table(const EquationSpec& spec, const Grid& grid);

}  // namespace ilw

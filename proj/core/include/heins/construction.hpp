#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "heins/numerics.hpp"
#include "heins/rotation.hpp"
#include "heins/strip_map.hpp"

namespace heins {

/// Complex number in (log-modulus, argument) form; arg is reduced to (-pi, pi].
struct LogValue {
  double log_abs = -std::numeric_limits<double>::infinity();
  double arg = 0.0;

  /// exp(log_abs + i arg); overflows to inf beyond log_abs ~ 709.
  Complex value() const { return std::polar(std::exp(log_abs), arg); }
  static LogValue from(Complex z) { return {std::log(std::abs(z)), std::arg(z)}; }
};

/// e(z) = exp(exp(z)).
LogValue eval_e(Complex z);

struct ConstructionOptions {
  double r_floor = 10.0;        ///< inner radius of Omega
  double growth_scale = 0.1;    ///< kappa: X is normalized so that e^X ~ kappa |w|
  double u_max = 40.0;          ///< strip-map truncation in log |w|
  int mesh = 128;               ///< transverse strip-map mesh
  bool estimate_map_error = true;  ///< also solve at mesh/2 and record the difference
  double r_cache = 1e6;         ///< boundary nodes are cached up to this radius
  double panel_du = 0.1;        ///< max panel length in log |w|
  int multipole_terms = 24;
  double d_near = 0.05;         ///< bump threshold, distance in the log |w| plane
};

struct FEvaluation {
  LogValue value;
  double error = 0.0;  ///< quadrature error estimate for the integral term
  double tail = 0.0;   ///< certified bound on the truncated contour tail
  std::string branch;  ///< "outside", "inside", "bump" or "deformed"
};

struct DistanceReport {
  double distance = 0.0;       ///< sampled dist(Omega, Omega_s), locally refined
  double at_radius = 0.0;      ///< |z| of the Omega point realizing it
  double analytic_bound = 0.0; ///< |z|/(20(log^2|z|+1)) at that radius
  double min_ratio = 0.0;      ///< min over samples of sampled / analytic distance
  bool disjoint = true;        ///< no Omega sample lies in Omega_s
};

struct GammaCurve {
  std::vector<double> r, t, residual;  ///< residual = t(r) - s(r) - 3 pi / 2
};

/// Entire function of finite exponential type bounded on the rotating half-plane
/// of `rotation`, realized as a Cauchy integral of g(w) = b(log w)/w^2 over the
/// boundary of Omega = {phi_-(log r) < arg < phi_+(log r), r > r_floor}.
class ConstructedFunction {
 public:
  /// Solves the strip map and caches boundary quadrature nodes. Requires a
  /// rotation that classifies as constructible (or a constant rotation).
  static ConstructedFunction build(const RotationFunction& rotation, const ConstructionOptions& options = {});

  const RotationFunction& rotation() const noexcept;
  const StripProfile& profile() const noexcept;
  const NumericStripMap& map() const noexcept;
  const ConstructionOptions& options() const noexcept;
  /// max |Z_mesh - Z_mesh/2| sampled off-node (0 when not estimated).
  double map_error() const noexcept;
  /// sup |phi_+-'| on the cached contour range.
  double max_slope() const noexcept;
  std::size_t node_count() const noexcept;

  /// Open membership in Omega.
  bool in_omega(Complex z) const;
  /// b(zeta) = e(Z(zeta) + gauge) for zeta = u + iv in the closed strip.
  LogValue eval_b(Complex zeta) const;
  /// g(w) on the closed domain; throws GeometryError outside it or beyond the mesh.
  LogValue eval_g(Complex w) const;

  /// f(z): Cauchy integral outside Omega, g(z) + integral inside, local bump near the boundary.
  FEvaluation eval_f(Complex z) const;
  /// Same with the contour truncated at r_cut <= r_cache.
  FEvaluation eval_f(Complex z, double r_cut) const;
  /// f(z) from the contour deformed through Omega along |w| = radius (needs radius > |z|).
  FEvaluation eval_f_deformed(Complex z, double radius) const;
  /// Bound on |eval_f_deformed(z, r1) - eval_f_deformed(z, r2)|: twice the tail bound
  /// plus the Cauchy-Pompeiu area term (1/pi) int |dbar g|/|z - w| dA over Omega between
  /// the two arcs, which is nonzero only because the grid map is not exactly holomorphic.
  /// Quadrature errors are reported separately in FEvaluation::error.
  double deformation_tolerance(Complex z, double r1, double r2) const;

  /// Tail bound sqrt(1+m^2)/(pi r_cut (r_cut - |z|)).
  double tail_bound(Complex z, double r_cut) const;
  /// Numeric integral of |g||dw| over the boundary (cached part plus tail bound).
  double boundary_l1() const noexcept;
  /// sup over boundary samples of log|g| + 2 log|w|.
  double boundary_log_excess() const noexcept;
  /// Largest arclength of the boundary inside an annulus n < |w| < n + 1, n < n_max.
  double max_annulus_arclength(int n_max) const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Sampled and locally refined dist(Omega, Omega_s) over r in [r_floor, r_max].
DistanceReport dist_omega_to_omegas(const RotationFunction& rotation, double r_max = 1e4, double r_floor = 10.0);

/// Image of the real axis of S_0 under exp(W): angles t(r) on `r_grid`.
GammaCurve gamma_curve(const ConstructedFunction& cf, const std::vector<double>& r_grid);

/// max over the tail half of r_grid of (max_{|z| = r} log|f(z)|) / r by circle sampling.
double exp_type_estimate(const std::function<double(Complex)>& log_abs_f, const std::vector<double>& r_grid,
                         int samples = 256);

/// Growth slope c of log|values| against radii (least squares).
LineFit growth_fit(const std::vector<double>& radii, const std::vector<double>& log_values);

}  // namespace heins

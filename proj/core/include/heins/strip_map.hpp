#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "heins/numerics.hpp"
#include "heins/rotation.hpp"

namespace heins {

/// Boundary data of a semi-infinite strip {phi_-(u) < v < phi_+(u), u > u_min}.
struct StripProfile {
  std::string name;
  std::function<Jet(double)> phi_minus;
  std::function<Jet(double)> phi_plus;
  double u_min = 0.0;

  Jet theta(double u) const;
  Jet psi(double u) const;

  /// phi = -+ half_width: the straight strip (pi/2 gives S_0 itself).
  static StripProfile straight(double u_min = 0.0, double half_width = kPi / 2);
  /// phi = psi -+ theta/2 from a midline and a width.
  static StripProfile from_center_width(std::string name, std::function<Jet(double)> psi,
                                        std::function<Jet(double)> theta, double u_min);
  /// phi_- = h + pi + 1/(u^2+1), phi_+ = h + 2 pi - 1/(u^2+1).
  static StripProfile construction(const RotationFunction& rf, double u_min);
  /// phi_- = h + pi, phi_+ = h + 2 pi (width exactly pi).
  static StripProfile rotation_band(const RotationFunction& rf, double u_min);
};

struct StripSolveOptions {
  int mesh = 128;             ///< transverse intervals (even, >= 64)
  double aspect = 2.0;        ///< longitudinal step / transverse physical step
  double anchor_offset = 5.0; ///< anchor u0 = u_min + anchor_offset
  double max_solve_residual = 1e-8;
};

/// Grid realization of the conformal map Z = X + iY of a strip onto a half-strip of
/// S_0 = {|Im z| < pi/2}, with Y = -+pi/2 on phi_-+, Y linear across u = u_max,
/// X constant on u = u_min, and X(u0 + i psi(u0)) = 0.
class NumericStripMap {
 public:
  struct Local {
    Complex z;
    Complex dz;  ///< Z'(w)
  };

  const StripProfile& profile() const noexcept { return profile_; }
  double u_min() const noexcept { return profile_.u_min; }
  double u_max() const noexcept { return u_max_; }
  double anchor_u() const noexcept { return anchor_u_; }
  int mesh() const noexcept { return mesh_; }
  int u_intervals() const noexcept { return nu_; }
  double u_step() const noexcept { return hu_; }

  /// Z(w); throws GeometryError when w lies outside the meshed strip.
  Complex operator()(Complex w) const { return eval(w).z; }
  Local eval(Complex w) const;
  /// Z at straightened coordinates (u, eta), eta in [0, 1].
  Local eval_straight(double u, double eta) const;
  /// X on the core curve v = psi(u).
  double core_x(double u) const;
  /// X on the lower (side = -1) or upper (side = +1) boundary curve.
  double boundary_x(double u, int side) const;
  /// Inverse map W(z) by Newton iteration; throws GeometryError if it leaves the mesh.
  Complex inverse(Complex z) const;

  /// Max discrete Cauchy-Riemann residual over nodes with u in [u_min + 1, u_max - 1].
  double cr_residual() const noexcept { return cr_residual_; }
  double boundary_error() const noexcept { return boundary_error_; }
  double solve_residual() const noexcept { return solve_residual_; }
  bool core_monotone() const noexcept { return core_monotone_; }
  /// Smallest and largest X on the core grid.
  std::pair<double, double> core_range() const { return {core_.front(), core_.back()}; }

 private:
  friend NumericStripMap solve_strip_map(const StripProfile&, double, const StripSolveOptions&);

  double node(const std::vector<double>& f, int i, int j) const { return f[static_cast<std::size_t>(i) * (mesh_ + 1) + j]; }
  void interpolate(const std::vector<double>& f, double u, double eta, double& value, double& du, double& deta) const;

  StripProfile profile_;
  double u_max_ = 0.0;
  double anchor_u_ = 0.0;
  int mesh_ = 0;
  int nu_ = 0;
  double hu_ = 0.0;
  std::vector<double> x_, y_;
  std::vector<double> core_;
  double cr_residual_ = 0.0;
  double boundary_error_ = 0.0;
  double solve_residual_ = 0.0;
  bool core_monotone_ = false;
};

/// Finite-difference Laplace solve for Y in (u, eta = (v - phi_-)/theta) coordinates
/// (sparse LU), then X by path integration of the Cauchy-Riemann equations.
/// Requires u_max >= u_min + 20. Throws GeometryError if theta <= 0 somewhere on the
/// grid and NumericError if the linear solve fails or leaves a residual above tolerance.
NumericStripMap solve_strip_map(const StripProfile& profile, double u_max, const StripSolveOptions& options = {});

/// max |Z_a - Z_b| over `samples` off-node points of the common core region
/// [u_min + 1, u_max - 10] x (0, 1).
double map_difference(const NumericStripMap& a, const NumericStripMap& b, int samples = 400);

/// pi * integral du / theta.
double wars_IIIa_lower(const StripProfile& profile, double u1, double u2);
/// pi int (1 + psi'^2)/theta + (pi/12) int theta'^2/theta + 8 pi (1 + 4 m^2 / 3).
/// Throws PreconditionError if |phi_+-'| > m at a sample of [u1, u2].
double wars_IVa_upper(const StripProfile& profile, double u1, double u2, double m);
/// pi int (1 + psi'^2)/theta - (pi/4) int theta'^2/theta. Throws PreconditionError
/// unless vi_gate passes.
double wars_VI_lower(const StripProfile& profile, double u1, double u2);

struct ViGate {
  double derivative_exponent = 0.0;  ///< decay exponent of max |phi'| on doubling windows
  double derivative_at_end = 0.0;
  double curvature_exponent = 0.0;   ///< decay exponent of the |phi''| window integrals
  bool derivative_decays = false;
  bool curvature_integrable = false;
  bool pass() const { return derivative_decays && curvature_integrable; }
};

/// Numerical tail test of phi_+-' -> 0 and phi_+-'' in L^1 on doubling windows.
ViGate vi_gate(const StripProfile& profile, double first_window = 1e3, int windows = 11);

/// sup |phi_+-'| over a sample grid of [u1, u2].
double max_boundary_slope(const StripProfile& profile, double u1, double u2, int samples = 2001);

struct ImageCurve {
  double y = 0.0;
  std::vector<double> u, v, x;
  std::vector<double> residual;           ///< f_y(u) - psi(u) - theta(u) y / pi
  std::vector<double> relative_residual;  ///< residual / theta(u)
};

/// Traces the level curve {Y = y} by root-finding across each column u of `u_grid`.
ImageCurve image_curve_Xiii(const NumericStripMap& map, double y, const std::vector<double>& u_grid);

struct WindowRow {
  double u1 = 0.0, u2 = 0.0;
  double x1 = 0.0, x_diff = 0.0;
  double iiia = 0.0, iva = 0.0, vi = 0.0;
  bool iiia_ok = false, iva_ok = false, vi_ok = false;
};

struct WindowReport {
  std::vector<WindowRow> rows;
  double m = 0.0;
  double x0 = 0.0;        ///< smallest x1 beyond which the IVa bound holds on every window
  double iiia_slack = 0.0; ///< max(iiia - x_diff)
  double vi_slack = 0.0;   ///< max(vi - x_diff), 0 if VI never binds
  bool vi_applicable = false;
};

/// Evaluates the three Warschawski bounds on core windows [u1, u2] against the map.
/// `vi_slack` is the allowance used for the VI pass flag.
WindowReport check_windows(const NumericStripMap& map, const std::vector<std::pair<double, double>>& windows,
                           double vi_slack = 1.0);

}  // namespace heins

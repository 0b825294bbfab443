#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "heins/numerics.hpp"

namespace heins {

/// A pair of entire functions given through their log-moduli.
///
/// log|f| is returned directly so scans never overflow; +inf means the
/// modulus overflowed (and is therefore above 1). Evaluators must be
/// re-entrant.
struct FunctionPair {
  std::string name;
  std::function<double(Complex)> log_abs_f;
  std::function<double(Complex)> log_abs_g;
  /// Known exponential-type constant (1/length).
  double type_bound = 0.0;
  /// Certified sup of min(|f|, |g|) over the plane, when known.
  std::optional<double> min_bound;
};

/// (c e^{a z}, d e^{-a z}); min-bound sqrt(c d) for a > 0.
FunctionPair exp_pair(double a = 1.0, double c = 1.0, double d = 1.0);
/// (e^{z}, e^{z}); violates the two-function bound.
FunctionPair same_exp_pair();
/// Two constants.
FunctionPair constant_pair(double f_value, double g_value);
/// (f, f(-z)) built from a single log-modulus evaluator, scaled by 1/scale.
FunctionPair reflected_pair(std::string name, std::function<double(Complex)> log_abs, double type_bound,
                            double scale = 1.0);

/// Which member of the pair an arc query refers to.
enum class Member { f, g };

struct Arc {
  double begin = 0.0;  ///< angle in [0, 2 pi)
  double end = 0.0;    ///< > begin, at most 2 pi
  bool f_small = false;  ///< |f| <= 1 on the arc
  bool g_small = false;  ///< |g| <= 1 on the arc
  bool f_in_v = false;   ///< |f| >= 1 on the arc (closed super-level set)
  bool g_in_v = false;
  double length() const { return end - begin; }
};

/// Tagged tiling of the circle |z| = R.
struct ArcSet {
  double radius = 0.0;
  int resolution = 0;
  std::vector<Arc> arcs;
  /// Angular width of a refined boundary bracket: 2 pi / n * 2^-10.
  double boundary_width() const { return kTwoPi / resolution / 1024.0; }
  /// Boundaries (angles) where the |f| >= 1 or |g| >= 1 state changes.
  std::vector<double> f_boundaries;
  std::vector<double> g_boundaries;
};

/// Samples n equispaced angles, bisection-refines every state change of
/// |f| >= 1 and |g| >= 1 ten times, and returns the tagged tiling.
/// Requires R > 0 and n >= 16 a power of two. NaN samples raise NumericError.
ArcSet scan_circle(const FunctionPair& pair, double radius, int n);

/// Longest-arc fraction m of the closed super-level set {|.| >= 1}; +inf
/// when the whole circle qualifies, 0 when the set is empty.
double longest_arc_fraction(const ArcSet& arcs, Member which);

/// 1/m, with 0 for the whole-circle marker and +inf for m = 0.
double eta(double m);

struct GrowthProfile {
  std::vector<double> tau;  ///< tau grid, tau[0] = 0
  std::vector<double> m_u, m_v, eta_u, eta_v;
  std::vector<double> lhs;  ///< integral of u^2 over the circle e^tau
  std::vector<double> rhs;  ///< integral_0^tau exp(integral_0^t eta_u) dt
  std::vector<double> ratio;
  /// Positive infimum of lhs/rhs over tau >= 1 (the witnessed constant), if applicable.
  double witnessed_constant = 0.0;
  bool applicable = true;
  std::string note;
};

/// Growth profile on tau = 0, tau_max/steps, ..., tau_max.
GrowthProfile lemma1_profile(const FunctionPair& pair, double tau_max, int steps, int n = 256);

struct DefectIntegral {
  double value = 0.0;
  double tau_start = 0.0;  ///< first tau of the trailing range where both etas are finite
  double min_integrand = 0.0;
  int points = 0;
};

/// Trapezoid integral of (eta_u + eta_v)/2 - 2 over the trailing tau-range where
/// both etas are finite. Throws InvariantViolation if the integrand drops below
/// -floor_tolerance anywhere on that range.
DefectIntegral defect_integral(const GrowthProfile& profile, double floor_tolerance = 1e-9);

/// Floor tolerance matching a scan resolution of n samples.
double defect_floor_for_resolution(int n);

/// delta(eps) = min{4/(1-eps^2) - 4, 4/(1-eps) - 4}, 0 < eps < 1/2.
double lemma3_delta(double eps);

struct TwoArcsAtTau {
  double tau = 0.0;
  double arc_i = 0.0;  ///< longest arc with |f| > 1, |g| <= 1
  double arc_j = 0.0;  ///< longest arc with |g| > 1, |f| <= 1
  double b_measure = 0.0;  ///< min over semicircles C of the exceptional measure
  double semicircle_start = 0.0;
  bool pass = false;
};

struct TwoArcsReport {
  double eps = 0.0;
  std::vector<TwoArcsAtTau> rows;
  std::vector<double> failing_tau;
  double failing_measure = 0.0;  ///< failing count times grid spacing
};

TwoArcsAtTau two_arcs_at(const ArcSet& arcs, double eps);
TwoArcsReport two_arcs_check(const FunctionPair& pair, const std::vector<double>& tau_grid, double eps, int n);

/// Annulus sample grid for min_modulus_sup.
struct AnnulusSpec {
  double r_inner = 0.1;
  double r_outer = 10.0;
  int radial = 200;
  int angular = 256;
};

/// max over the annulus samples of min(|f|, |g|).
double min_modulus_sup(const FunctionPair& pair, const AnnulusSpec& spec);

}  // namespace heins

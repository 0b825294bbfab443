#pragma once

#include <array>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "heins/numerics.hpp"

namespace heins {

struct PowerFamily {
  double a = 1.0;
  double p = 0.5;
};
struct SqrtLogFamily {};
struct ConstantFamily {
  double c = 0.0;
};
struct TableFamily {
  std::vector<std::array<double, 2>> knots;
};

/// Rotation function in logarithmic form, h(x) = s(e^x).
///
/// Families are evaluated on [x_min, inf). Below x_min the function is
/// extended by the constant h(x_min), so s(r) is defined for every r > 0
/// and stays non-decreasing.
class RotationFunction {
 public:
  using Power = PowerFamily;
  using SqrtLog = SqrtLogFamily;
  using Constant = ConstantFamily;
  using Table = TableFamily;
  using Family = std::variant<Power, SqrtLog, Constant, Table>;

  /// h(x) = a x^p + offset on [x_min, inf).
  static RotationFunction power(double a, double p, double x_min = 1.0, double offset = 0.0);
  /// s(r) = sqrt(log r) + offset, i.e. h(x) = sqrt(x) + offset, defined from r = 1 (x_min = 0).
  static RotationFunction sqrt_log(double offset = 0.0);
  static RotationFunction constant(double c);
  /// Natural cubic spline through (x, h) knots with linear continuation past
  /// the last knot. Knots must be strictly increasing in x and produce a
  /// non-decreasing interpolant.
  static RotationFunction table(std::vector<std::array<double, 2>> knots);

  /// Parses {"family":"power","a":..,"p":..,"x_min":..} | {"family":"sqrt_log"} |
  /// {"family":"constant","c":..} | {"family":"table","knots":[[x,h],...]}.
  /// An optional "offset" adds a constant to h. Throws UsageError naming the bad field.
  static RotationFunction from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  Jet jet(double x) const;
  double h(double x) const { return jet(x).value; }
  double dh(double x) const { return jet(x).d1; }
  /// s(r) = h(log r).
  double s(double r) const { return h(std::log(r)); }

  double x_min() const noexcept { return x_min_; }
  double offset() const noexcept { return offset_; }
  const Family& family() const noexcept { return family_; }
  std::string family_name() const;

  /// Same rotation rigidly turned by `delta` radians.
  RotationFunction shifted(double delta) const;

 private:
  struct Spline;
  Jet family_jet(double x) const;

  Family family_;
  double x_min_ = 1.0;
  double offset_ = 0.0;
  std::shared_ptr<const Spline> spline_;
};

/// Omega_s = { r e^{i alpha} : s(r) < alpha < s(r) + pi }, alpha unwrapped.
class RotatingHalfPlane {
 public:
  explicit RotatingHalfPlane(RotationFunction rotation) : rotation_(std::move(rotation)) {}

  /// Membership with the argument of z taken in (s(r) - pi, s(r) + pi].
  /// Throws PreconditionError for z = 0.
  bool contains(Complex z) const;

  /// Interior of the complement: rotation s + pi.
  RotatingHalfPlane complement() const { return RotatingHalfPlane(rotation_.shifted(kPi)); }

  const RotationFunction& rotation() const noexcept { return rotation_; }

 private:
  RotationFunction rotation_;
};

/// Integral of h'(x)^2 over [x_min, upper]. Throws NumericError on a non-finite
/// integrand sample (including the endpoints).
double sqint(const RotationFunction& rf, double upper);
/// Integral of |h''(x)| over [x_min, upper]; errors as sqint.
double habs2_int(const RotationFunction& rf, double upper);

/// Max of s(r)/sqrt(log r) over the tail half of `r_grid` (requires an
/// increasing grid reaching 1e6).
double sqrtlog_limsup_probe(const RotationFunction& rf, std::span<const double> r_grid);
/// Same probe on a grid of x = log r values.
double sqrtlog_limsup_probe_log(const RotationFunction& rf, std::span<const double> x_grid);

enum class Verdict { constructible, constant_only_regular, constant_only_sqrtlog, undetermined };
std::string to_string(Verdict v);

/// Doubling-window tail fit: increments I_j over [X_j, 2 X_j] fitted to c X^-beta.
struct TailFit {
  std::vector<double> window_starts;
  std::vector<double> increments;
  double head = 0.0;          ///< integral over [x_min, first window start]
  bool head_finite = true;
  double exponent = 0.0;      ///< beta; +inf when every increment vanishes
  double residual = 0.0;      ///< rms of log-residuals
  bool converges = false;
  bool diverges = false;
  std::string note;
};

struct ClassifyOptions {
  double first_window = 1e3;
  int windows = 11;
  double decay_exponent = 0.05;
  double fit_residual = 1e-3;
  double hprime_tolerance = 1e-3;
  double sqrtlog_threshold = 0.05;
  double probe_x_first = 1e4;
  double probe_x_last = 1e12;
  int probe_points = 33;
};

struct ClassificationEvidence {
  TailFit sqint_tail;
  TailFit habs2_tail;
  double x_max = 0.0;
  double hprime_at_xmax = 0.0;
  bool hprime_decreasing = false;
  double sqrtlog_probe = 0.0;
  bool constructible_gate = false;
  bool regular_gate = false;
  bool sqrtlog_gate = false;
};

struct Classification {
  Verdict verdict = Verdict::undetermined;
  ClassificationEvidence evidence;
};

/// Sorts a rotation function into the three regimes of the existence /
/// constancy theorems. Conflicting or insufficient evidence yields
/// Verdict::undetermined.
Classification classify(const RotationFunction& rf, const ClassifyOptions& options = {});

nlohmann::json to_json(const Classification& c);

}  // namespace heins

#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "heins/numerics.hpp"
#include "heins/rotation.hpp"

namespace heins {

/// Cap G_t = {0 < a < t, h(a) < b < h(a) + pi} of the log-domain over the graph of h.
/// With h constant it is the rectangle (0, t) x (h, h + pi).
class LogDomain {
 public:
  /// Throws PreconditionError unless t > 0.
  LogDomain(RotationFunction rotation, double t);

  const RotationFunction& rotation() const noexcept { return rotation_; }
  double t() const noexcept { return t_; }
  double lower(double a) const { return rotation_.h(a); }
  double upper(double a) const { return rotation_.h(a) + kPi; }
  /// Sampled sup |h'| on [0, t], padded by 5%.
  double lipschitz() const noexcept { return lipschitz_; }
  /// A(G_t) = pi t.
  double area() const noexcept { return kPi * t_; }
  /// Open membership.
  bool contains(Complex z) const;
  /// Endpoints of E_t = [t + i h(t), t + i (h(t) + pi)].
  Complex target_low() const { return {t_, lower(t_)}; }
  Complex target_high() const { return {t_, upper(t_)}; }

 private:
  RotationFunction rotation_;
  double t_ = 0.0;
  double lipschitz_ = 0.0;
};

/// Boundary pieces of a cap, combinable as a target mask.
enum BoundaryPiece : unsigned { kLeftEdge = 1, kRightEdge = 2, kLowerGraph = 4, kUpperGraph = 8 };

struct WosOptions {
  std::int64_t walks = 100000;
  double shell = 1e-4;
  std::uint64_t seed = 1;
  std::int64_t max_steps = 1000000;  ///< per walk; longer walks are censored
};

struct WosResult {
  double omega = 0.0;
  double std_error = 0.0;  ///< binomial standard error over uncensored walks
  std::int64_t walks = 0, hits = 0, censored = 0;
  double censored_fraction() const { return walks ? static_cast<double>(censored) / walks : 0.0; }
};

/// Walk-on-spheres estimate of the harmonic measure of the `target` pieces at z0.
/// Deterministic for fixed seed and walk count, independent of the thread count.
/// Censored walks are excluded from the estimate and reported. Throws
/// PreconditionError for an exterior z0 or options out of range.
WosResult wos_measure(const LogDomain& domain, Complex z0, const WosOptions& options = {},
                      unsigned target = kRightEdge);

/// Same on the unit disk with target arc {e^{i a} : arc_begin < a < arc_end}.
WosResult wos_disk(Complex z0, double arc_begin, double arc_end, const WosOptions& options = {});

struct GeodesicOptions {
  int initial_columns = 64;      ///< grid columns across [0, t] on the first pass
  double rel_change = 0.005;     ///< stop once successive passes agree to this
  int max_passes = 5;
  std::int64_t max_nodes = 6000000;
  int stencil = 5;               ///< edges to every primitive offset with max norm <= stencil
};

struct GeodesicResult {
  double length = 0.0;       ///< shortest path found (grid or direct segment)
  double lower_bound = 0.0;  ///< length corrected for stencil anisotropy and grid snapping
  double spacing = 0.0;      ///< grid step of the final pass
  std::vector<double> trace; ///< grid length per pass
  bool converged = false;
};

/// In-domain distance from the polyline `sigma` to E_t by Dijkstra on a grid inside
/// G_t, refined until successive passes agree. Throws PreconditionError if sigma
/// leaves the closed cap or touches E_t, GeometryError if the grid is disconnected.
GeodesicResult geodesic_dist(const LogDomain& domain, const std::vector<Complex>& sigma,
                             const GeodesicOptions& options = {});

/// (8/pi) exp(-pi dist^2 / area).
double beurling_bound(double dist, double area);

struct HMReport {
  WosResult wos;
  GeodesicResult dist;
  double lambda = 0.0;
  double bound = 0.0;
  bool pass = false;  ///< omega <= bound + 3 stderr
};

/// Full check at z0 with sigma = [a0 + i h(a0), z0], a0 = Re z0.
HMReport hm_problem(const LogDomain& domain, Complex z0, const WosOptions& wos = {},
                    const GeodesicOptions& geo = {});

nlohmann::json to_json(const HMReport& r);

/// t_1 < t_2 < ... with h(t_k) >= c sqrt(t_k) and h(t_{k+1}) / 2 > h(t_k) + pi + c^2 / 8.
struct TkSequence {
  double c = 0.0;
  double a0 = 0.0;
  std::vector<double> t;
  /// Number of t_k not greater than x.
  int count(double x) const;
  /// n(x) = count(x) - 1.
  int n(double x) const { return count(x) - 1; }
};

/// Greedy smallest admissible t_k > a0 on a relative grid of step 1e-4, refined by
/// bisection, up to t_max. Throws PreconditionError when h(t) >= c sqrt(t) fails on
/// the top decade of a sample reaching 1e12, or no admissible t_1 exists below t_max.
TkSequence build_tk(const RotationFunction& rotation, double c, double t_max, double a0 = 0.0);

/// (8C/pi) exp(t - (t - t_1 + c^2 n / 8)^2 / t) with n = n(t).
double decay_bound(const TkSequence& tk, double C, double t);
/// Same with an explicit n.
double decay_bound(const TkSequence& tk, double C, double t, int n);
/// (8C/pi) exp(2 (t_1 - c^2 n / 8)), the sup over t of decay_bound at fixed n.
double decay_bound_sup(const TkSequence& tk, double C, int n);
/// Smallest n with decay_bound_sup < target.
int decay_n_star(const TkSequence& tk, double C, double target = 1e-6);

struct DecayRow {
  double t = 0.0;
  int n = 0;
  double bound = 0.0;
  double mc = 0.0;         ///< C e^t omega
  double mc_stderr = 0.0;  ///< C e^t stderr
  bool ok = false;         ///< mc <= bound + 3 mc_stderr
};

/// Analytic bound against Monte Carlo C e^t omega(z0, E_t, G_t) for t in t_grid (t >= t_1).
std::vector<DecayRow> u_decay(const RotationFunction& rotation, const TkSequence& tk, double C,
                              const std::vector<double>& t_grid, Complex z0, const WosOptions& wos = {});

}  // namespace heins

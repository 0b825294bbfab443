#include "heins/circle_scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heins {

namespace {

constexpr int kRefineLevels = 10;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double checked(double v, const char* which, double angle) {
  if (std::isnan(v)) {
    throw NumericError(std::string("NaN log-modulus of ") + which + " at angle " + std::to_string(angle));
  }
  return v;
}

struct Sampled {
  ArcSet arcs;
  std::vector<double> log_f;  // at the n equispaced angles
};

// Locates the state change of (log_abs >= 0) inside [a, b]; returns the
// midpoint of the final bracket.
double refine(const std::function<double(Complex)>& log_abs, double radius, double a, double b, bool state_a,
              const char* which) {
  for (int level = 0; level < kRefineLevels; ++level) {
    const double mid = 0.5 * (a + b);
    const bool s = checked(log_abs(std::polar(radius, mid)), which, mid) >= 0.0;
    if (s == state_a) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> boundaries(const std::function<double(Complex)>& log_abs, double radius,
                               const std::vector<double>& samples, const char* which) {
  const int n = static_cast<int>(samples.size());
  const double step = kTwoPi / n;
  std::vector<double> out;
  for (int k = 0; k < n; ++k) {
    const bool s0 = samples[k] >= 0.0;
    const bool s1 = samples[(k + 1) % n] >= 0.0;
    if (s0 != s1) out.push_back(std::fmod(refine(log_abs, radius, step * k, step * (k + 1), s0, which), kTwoPi));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Sampled scan_with_samples(const FunctionPair& pair, double radius, int n) {
  if (!(radius > 0.0)) throw PreconditionError("scan radius must be positive");
  if (n < 16 || !power_of_two(n)) throw PreconditionError("scan resolution must be a power of two >= 16");
  std::vector<double> lf(n), lg(n);
  const double step = kTwoPi / n;
  for (int k = 0; k < n; ++k) {
    const Complex z = std::polar(radius, step * k);
    lf[k] = checked(pair.log_abs_f(z), "f", step * k);
    lg[k] = checked(pair.log_abs_g(z), "g", step * k);
  }
  Sampled out;
  ArcSet& set = out.arcs;
  set.radius = radius;
  set.resolution = n;
  set.f_boundaries = boundaries(pair.log_abs_f, radius, lf, "f");
  set.g_boundaries = boundaries(pair.log_abs_g, radius, lg, "g");

  std::vector<double> cuts{0.0, kTwoPi};
  cuts.insert(cuts.end(), set.f_boundaries.begin(), set.f_boundaries.end());
  cuts.insert(cuts.end(), set.g_boundaries.begin(), set.g_boundaries.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Arc arc;
    arc.begin = cuts[i];
    arc.end = cuts[i + 1];
    // Tag from the nearest sample inside the piece, else from its midpoint.
    const double mid = 0.5 * (arc.begin + arc.end);
    const int k = std::min(n - 1, static_cast<int>(std::lround(mid / step)));
    double f_val, g_val;
    if (step * k >= arc.begin && step * k < arc.end) {
      f_val = lf[k];
      g_val = lg[k];
    } else {
      const Complex z = std::polar(radius, mid);
      f_val = checked(pair.log_abs_f(z), "f", mid);
      g_val = checked(pair.log_abs_g(z), "g", mid);
    }
    arc.f_small = f_val <= 0.0;
    arc.g_small = g_val <= 0.0;
    arc.f_in_v = f_val >= 0.0;
    arc.g_in_v = g_val >= 0.0;
    set.arcs.push_back(arc);
  }
  out.log_f = std::move(lf);
  return out;
}

// Longest circular run of pieces satisfying pred; +inf if all do.
template <typename Pred>
double longest_run(const std::vector<Arc>& arcs, Pred pred) {
  if (arcs.empty()) return 0.0;
  if (std::all_of(arcs.begin(), arcs.end(), pred)) return kInf;
  std::size_t start = 0;
  while (pred(arcs[start])) ++start;  // a piece failing pred exists
  double best = 0.0, run = 0.0;
  for (std::size_t i = 1; i <= arcs.size(); ++i) {
    const Arc& a = arcs[(start + i) % arcs.size()];
    if (pred(a)) {
      run += a.length();
      best = std::max(best, run);
    } else {
      run = 0.0;
    }
  }
  return best;
}

// Measure of the pieces satisfying pred inside the circular interval [c, c + pi).
template <typename Pred>
double measure_in(const std::vector<Arc>& arcs, double c, Pred pred) {
  double total = 0.0;
  for (const Arc& a : arcs) {
    if (!pred(a)) continue;
    for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
      const double lo = std::max(a.begin + shift, c);
      const double hi = std::min(a.end + shift, c + kPi);
      if (hi > lo) total += hi - lo;
    }
  }
  return total;
}

}  // namespace

FunctionPair exp_pair(double a, double c, double d) {
  if (!(c > 0.0) || !(d > 0.0)) throw PreconditionError("exp_pair scale factors must be positive");
  FunctionPair p;
  p.name = "exp";
  const double lc = std::log(c), ld = std::log(d);
  p.log_abs_f = [a, lc](Complex z) { return lc + a * z.real(); };
  p.log_abs_g = [a, ld](Complex z) { return ld - a * z.real(); };
  p.type_bound = std::abs(a);
  if (a > 0.0) p.min_bound = std::sqrt(c * d);
  return p;
}

FunctionPair same_exp_pair() {
  FunctionPair p;
  p.name = "same_exp";
  p.log_abs_f = [](Complex z) { return z.real(); };
  p.log_abs_g = [](Complex z) { return z.real(); };
  p.type_bound = 1.0;
  return p;
}

FunctionPair constant_pair(double f_value, double g_value) {
  if (!(f_value > 0.0) || !(g_value > 0.0)) throw PreconditionError("constant pair values must be positive");
  FunctionPair p;
  p.name = "constant";
  const double lf = std::log(f_value), lg = std::log(g_value);
  p.log_abs_f = [lf](Complex) { return lf; };
  p.log_abs_g = [lg](Complex) { return lg; };
  if (std::min(f_value, g_value) <= 1.0) p.min_bound = std::min(f_value, g_value);
  return p;
}

FunctionPair reflected_pair(std::string name, std::function<double(Complex)> log_abs, double type_bound,
                            double scale) {
  if (!(scale > 0.0)) throw PreconditionError("reflected_pair scale must be positive");
  FunctionPair p;
  p.name = std::move(name);
  const double ls = std::log(scale);
  p.log_abs_f = [log_abs, ls](Complex z) { return log_abs(z) - ls; };
  p.log_abs_g = [log_abs, ls](Complex z) { return log_abs(-z) - ls; };
  p.type_bound = type_bound;
  return p;
}

ArcSet scan_circle(const FunctionPair& pair, double radius, int n) {
  return scan_with_samples(pair, radius, n).arcs;
}

double longest_arc_fraction(const ArcSet& arcs, Member which) {
  const double len = which == Member::f ? longest_run(arcs.arcs, [](const Arc& a) { return a.f_in_v; })
                                        : longest_run(arcs.arcs, [](const Arc& a) { return a.g_in_v; });
  return std::isinf(len) ? kInf : len / kTwoPi;
}

double eta(double m) {
  if (std::isinf(m)) return 0.0;
  if (m <= 0.0) return kInf;
  return 1.0 / m;
}

GrowthProfile lemma1_profile(const FunctionPair& pair, double tau_max, int steps, int n) {
  if (!(tau_max >= 1.0)) throw PreconditionError("lemma1_profile needs tau_max >= 1");
  if (steps < 1) throw PreconditionError("lemma1_profile needs at least one step");
  GrowthProfile prof;
  const std::size_t count = static_cast<std::size_t>(steps) + 1;
  prof.tau = linear_grid(0.0, tau_max, static_cast<int>(count));
  prof.m_u.resize(count);
  prof.m_v.resize(count);
  prof.eta_u.resize(count);
  prof.eta_v.resize(count);
  prof.lhs.resize(count);
  parallel_for(count, [&](std::size_t i) {
    const Sampled s = scan_with_samples(pair, std::exp(prof.tau[i]), n);
    prof.m_u[i] = longest_arc_fraction(s.arcs, Member::f);
    prof.m_v[i] = longest_arc_fraction(s.arcs, Member::g);
    prof.eta_u[i] = eta(prof.m_u[i]);
    prof.eta_v[i] = eta(prof.m_v[i]);
    double sum = 0.0;
    for (double lf : s.log_f) {
      const double u = std::max(0.0, lf);
      sum += u * u;
    }
    prof.lhs[i] = sum * kTwoPi / n;
  });

  prof.rhs.assign(count, 0.0);
  prof.ratio.assign(count, kInf);
  double inner = 0.0;  // integral_0^tau eta_u
  double outer = 0.0;
  double prev_exp = 1.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (std::isinf(prof.eta_u[i]) && prof.applicable) {
      prof.applicable = false;
      prof.note = "super-level set of |f| empty at tau=" + std::to_string(prof.tau[i]);
    }
    if (i > 0) {
      const double h = prof.tau[i] - prof.tau[i - 1];
      inner += 0.5 * h * (prof.eta_u[i] + prof.eta_u[i - 1]);
      const double e = std::exp(inner);
      outer += 0.5 * h * (e + prev_exp);
      prev_exp = e;
    }
    prof.rhs[i] = outer;
    if (outer > 0.0) prof.ratio[i] = prof.lhs[i] / outer;
  }
  if (prof.applicable) {
    double inf = kInf;
    for (std::size_t i = 0; i < count; ++i) {
      if (prof.tau[i] >= 1.0 - 1e-12) inf = std::min(inf, prof.ratio[i]);
    }
    prof.witnessed_constant = inf;
  }
  return prof;
}

DefectIntegral defect_integral(const GrowthProfile& profile, double floor_tolerance) {
  const std::size_t count = profile.tau.size();
  if (count == 0 || profile.eta_u.size() != count || profile.eta_v.size() != count) {
    throw PreconditionError("defect_integral needs eta_u and eta_v on the whole grid");
  }
  std::size_t start = count;
  while (start > 0 && std::isfinite(profile.eta_u[start - 1]) && std::isfinite(profile.eta_v[start - 1])) --start;
  DefectIntegral out;
  if (start == count) {
    out.tau_start = profile.tau.back();
    return out;
  }
  out.tau_start = profile.tau[start];
  out.points = static_cast<int>(count - start);
  out.min_integrand = kInf;
  double prev = 0.0;
  for (std::size_t i = start; i < count; ++i) {
    const double v = 0.5 * (profile.eta_u[i] + profile.eta_v[i]) - 2.0;
    if (v < -floor_tolerance) {
      throw InvariantViolation("defect integrand " + std::to_string(v) + " below floor at tau=" +
                               std::to_string(profile.tau[i]));
    }
    out.min_integrand = std::min(out.min_integrand, v);
    if (i > start) out.value += 0.5 * (profile.tau[i] - profile.tau[i - 1]) * (v + prev);
    prev = v;
  }
  return out;
}

double defect_floor_for_resolution(int n) { return 1e-9 + 16.0 / 1024.0 / n; }

double lemma3_delta(double eps) {
  if (!(eps > 0.0) || eps > 0.5) throw PreconditionError("lemma3_delta needs 0 < eps <= 1/2");
  return std::min(4.0 / (1.0 - eps * eps) - 4.0, 4.0 / (1.0 - eps) - 4.0);
}

TwoArcsAtTau two_arcs_at(const ArcSet& arcs, double eps) {
  auto f_big_g_small = [](const Arc& a) { return !a.f_small && a.g_small; };
  auto g_big_f_small = [](const Arc& a) { return a.f_small && !a.g_small; };
  TwoArcsAtTau row;
  row.tau = std::log(arcs.radius);
  row.arc_i = std::min(kTwoPi, longest_run(arcs.arcs, f_big_g_small));
  row.arc_j = std::min(kTwoPi, longest_run(arcs.arcs, g_big_f_small));

  std::vector<double> candidates{0.0};
  for (const Arc& a : arcs.arcs) {
    for (double c : {a.begin, a.begin - kPi, a.begin + kPi}) {
      if (c >= 0.0 && c < kTwoPi) candidates.push_back(c);
    }
  }
  row.b_measure = kInf;
  for (double c : candidates) {
    // C = [c, c + pi) carries |f| <= 1 < |g|; -C carries the reverse.
    const double good = measure_in(arcs.arcs, c, g_big_f_small) + measure_in(arcs.arcs, c + kPi, f_big_g_small);
    const double b = std::max(0.0, kTwoPi - good);
    if (b < row.b_measure) {
      row.b_measure = b;
      row.semicircle_start = c;
    }
  }
  row.pass = row.arc_i >= kPi - eps && row.arc_j >= kPi - eps && row.b_measure <= eps;
  return row;
}

TwoArcsReport two_arcs_check(const FunctionPair& pair, const std::vector<double>& tau_grid, double eps, int n) {
  if (!(eps > 0.0) || !(eps < kPi / 2)) throw PreconditionError("two_arcs_check needs eps in (0, pi/2)");
  TwoArcsReport report;
  report.eps = eps;
  report.rows.resize(tau_grid.size());
  parallel_for(tau_grid.size(), [&](std::size_t i) {
    report.rows[i] = two_arcs_at(scan_circle(pair, std::exp(tau_grid[i]), n), eps);
    report.rows[i].tau = tau_grid[i];
  });
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (report.rows[i].pass) continue;
    report.failing_tau.push_back(tau_grid[i]);
    if (tau_grid.size() > 1) {
      const double lo = i > 0 ? tau_grid[i - 1] : tau_grid[i];
      const double hi = i + 1 < tau_grid.size() ? tau_grid[i + 1] : tau_grid[i];
      report.failing_measure += 0.5 * (hi - lo);
    }
  }
  return report;
}

double min_modulus_sup(const FunctionPair& pair, const AnnulusSpec& spec) {
  if (!(spec.r_inner > 0.0) || !(spec.r_outer > spec.r_inner) || spec.radial < 2 || spec.angular < 1) {
    throw PreconditionError("annulus spec must satisfy 0 < r_inner < r_outer with a non-trivial grid");
  }
  const auto radii = linear_grid(spec.r_inner, spec.r_outer, spec.radial);
  double best = -kInf;
  for (double r : radii) {
    for (int k = 0; k < spec.angular; ++k) {
      const Complex z = std::polar(r, kTwoPi * k / spec.angular);
      best = std::max(best, std::min(pair.log_abs_f(z), pair.log_abs_g(z)));
    }
  }
  return std::exp(best);
}

}  // namespace heins

#include "heins/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heins {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxLog = 700.0;
constexpr int kGaussOrder = 10;

double reduce_angle(double a) {
  a = std::remainder(a, kTwoPi);
  return a <= -kPi ? a + kTwoPi : a;
}

Complex from_log(double log_abs, double arg) {
  if (log_abs > kMaxLog) throw NumericError("integrand magnitude exp(" + std::to_string(log_abs) + ") overflows");
  return std::polar(std::exp(log_abs), arg);
}

// Contour pieces: the phi_- spiral outward, the phi_+ spiral inward, the inner arc clockwise.
enum Curve { kLower = 0, kUpper = 1, kArc = 2 };

struct Node {
  Complex w;
  Complex q;  // contribution q / (z - w) to the contour sum
};

struct Panel {
  Curve curve;
  double a, b;  // u-range for spirals, alpha-range for the arc
  std::size_t first;
  Complex center;
  double radius;
  int segment;  // -1 for arc panels
};

}  // namespace

struct ConstructedFunction::Impl {
  RotationFunction rotation;
  ConstructionOptions options;
  StripProfile profile;
  NumericStripMap map;
  double map_error = 0.0;
  double gauge = 0.0;
  double u_floor = 0.0;
  double u_cache = 0.0;
  double slope = 0.0;
  double l1 = 0.0;
  double log_excess = -kInf;
  GaussRule rule;
  std::vector<Node> nodes;
  std::vector<Panel> panels;
  std::vector<double> segment_radius;                // R_j
  std::vector<std::pair<std::size_t, std::size_t>> segment_panels;  // [first, last)
  std::vector<std::vector<Complex>> moments;         // sum q (R_j / w)^k / w

  double phi(Curve c, double u) const {
    return c == kLower ? profile.phi_minus(u).value : profile.phi_plus(u).value;
  }
  Jet phi_jet(Curve c, double u) const { return c == kLower ? profile.phi_minus(u) : profile.phi_plus(u); }

  LogValue b_at(Complex zeta) const {
    const Complex z = map.eval(zeta).z;
    const double ex = std::exp(z.real() + gauge);
    return {ex * std::cos(z.imag()), ex * std::sin(z.imag())};
  }

  // b on a spiral: Y = -+pi/2 exactly, so |b| = 1.
  double boundary_phase(Curve c, double u) const {
    const double ex = std::exp(map.boundary_x(u, c == kLower ? -1 : 1) + gauge);
    return c == kLower ? -ex : ex;
  }

  // q-density per unit parameter (without 1/(z - w)).
  Complex density(Curve c, double t, Complex& w) const {
    if (c == kArc) {
      const Complex zeta(u_floor, t);
      w = std::exp(zeta);
      const LogValue b = b_at(zeta);
      return -from_log(b.log_abs - u_floor, b.arg - t) * Complex(0.0, 1.0);
    }
    const Jet p = phi_jet(c, t);
    const Complex zeta(t, p.value);
    w = std::exp(zeta);
    const double orient = c == kLower ? 1.0 : -1.0;
    return orient * std::polar(std::exp(-t), boundary_phase(c, t) - p.value) * Complex(1.0, p.d1);
  }

  Complex integrate_piece(Curve c, double a, double b, Complex z, double& err) const {
    const auto r = integrate<Complex>(
        [&](double t) {
          Complex w;
          const Complex d = density(c, t, w);
          return d / (z - w);
        },
        a, b, 1e-12, 1e-17, 20000);
    err += r.error;
    return r.value;
  }

  void add_panel(Curve c, double a, double b, int segment) {
    Panel p;
    p.curve = c;
    p.a = a;
    p.b = b;
    p.segment = segment;
    p.first = nodes.size();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    Complex wa, wb, wm;
    for (int k = 0; k < kGaussOrder; ++k) {
      const double t = mid + half * rule.nodes[k];
      Node n;
      n.q = density(c, t, n.w) * (half * rule.weights[k]);
      nodes.push_back(n);
    }
    density(c, a, wa);
    density(c, b, wb);
    density(c, mid, wm);
    p.center = wm;
    p.radius = std::max({std::abs(wa - wm), std::abs(wb - wm)});
    panels.push_back(p);
  }

  struct Sum {
    Complex value{};
    double error = 0.0;
  };

  // Contour sum over spirals restricted to u in [u_lo, u_hi], the inner arc if requested,
  // skipping panels [skip_first, skip_last) of curve skip_curve.
  Sum contour_sum(Complex z, double u_lo, double u_hi, bool with_arc, int skip_curve = -1, std::size_t skip_first = 0,
                  std::size_t skip_last = 0) const {
    Sum s;
    const double az = std::abs(z);
    double abs_sum = 0.0;
    const auto direct = [&](const Panel& p) {
      if (std::abs(z - p.center) < 3.0 * p.radius) {
        s.value += integrate_piece(p.curve, p.a, p.b, z, s.error);
        return;
      }
      for (int k = 0; k < kGaussOrder; ++k) {
        const Node& n = nodes[p.first + k];
        const Complex term = n.q / (z - n.w);
        s.value += term;
        abs_sum += std::abs(term);
      }
    };
    for (std::size_t j = 0; j < segment_radius.size(); ++j) {
      const double lo = std::log(segment_radius[j]);
      const double hi = std::min(std::log(2.0 * segment_radius[j]), u_cache);
      if (lo >= u_hi) break;
      const auto [first, last] = segment_panels[j];
      const bool whole = lo >= u_lo - 1e-12 && hi <= u_hi + 1e-12;
      const bool skipped = skip_curve >= 0 && skip_first < last && skip_last > first;
      if (whole && !skipped && segment_radius[j] >= 8.0 * az) {
        const Complex t = z / segment_radius[j];
        Complex acc{};
        for (auto it = moments[j].rbegin(); it != moments[j].rend(); ++it) acc = acc * t + *it;
        s.value -= acc;
        continue;
      }
      for (std::size_t i = first; i < last; ++i) {
        const Panel& p = panels[i];
        if (skip_curve >= 0 && i >= skip_first && i < skip_last) continue;
        const double a = std::max(p.a, u_lo), b = std::min(p.b, u_hi);
        if (b <= a) continue;
        if (a > p.a || b < p.b) {
          s.value += integrate_piece(p.curve, a, b, z, s.error);
        } else {
          direct(p);
        }
      }
    }
    if (with_arc) {
      for (const Panel& p : panels) {
        if (p.curve == kArc) direct(p);
      }
    }
    s.error += 1e-14 * abs_sum;
    return s;
  }

  // Closest point of spiral c to zeta-branch of z; returns the distance in the log plane.
  double closest(Curve c, Complex z, double& u_best) const {
    const double uz = std::log(std::abs(z));
    const double target = phi(c, std::clamp(uz, u_floor, map.u_max()));
    const double v = std::arg(z) + kTwoPi * std::round((target - std::arg(z)) / kTwoPi);
    const Complex zeta(uz, v);
    auto dist2 = [&](double u) { return std::norm(zeta - Complex(u, phi(c, u))); };
    double a = std::max(u_floor, uz - 1.0), b = std::min(map.u_max(), uz + 1.0);
    if (b <= a) {
      u_best = a;
      return std::sqrt(dist2(a));
    }
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = dist2(x1), f2 = dist2(x2);
    for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = dist2(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = dist2(x2);
      }
    }
    u_best = 0.5 * (a + b);
    return std::sqrt(dist2(u_best));
  }

  bool in_omega(Complex z) const {
    const double r = std::abs(z);
    if (!(r > options.r_floor)) return false;
    const double u = std::log(r);
    const double lo = profile.phi_minus(u).value, hi = profile.phi_plus(u).value;
    const double a = std::arg(z) + kTwoPi * std::ceil((lo - std::arg(z)) / kTwoPi);
    return a > lo && a < hi;
  }

  LogValue g_at(Complex w, bool closed) const {
    const double r = std::abs(w);
    if (r < options.r_floor * (1.0 - 1e-12)) throw GeometryError("point lies inside the inner disk of Omega");
    const double u = std::max(std::log(r), u_floor);
    if (u > map.u_max()) throw GeometryError("point lies beyond the strip-map truncation; raise u_max");
    const double lo = profile.phi_minus(u).value, hi = profile.phi_plus(u).value;
    const double tol = closed ? 1e-12 : 0.0;
    double a = std::arg(w) + kTwoPi * std::ceil((lo - tol - std::arg(w)) / kTwoPi);
    if (a > hi + tol) throw GeometryError("point lies outside Omega");
    a = std::clamp(a, lo, hi);
    const LogValue b = b_at(Complex(u, a));
    return {b.log_abs - 2.0 * u, reduce_angle(b.arg - 2.0 * a)};
  }

  double tail(Complex z, double r_cut) const {
    const double az = std::abs(z);
    if (!(r_cut > az)) return kInf;
    return std::sqrt(1.0 + slope * slope) / (kPi * r_cut * (r_cut - az));
  }
};

LogValue eval_e(Complex z) {
  const double ex = std::exp(z.real());
  return {ex * std::cos(z.imag()), reduce_angle(ex * std::sin(z.imag()))};
}

ConstructedFunction ConstructedFunction::build(const RotationFunction& rotation, const ConstructionOptions& options) {
  if (!std::holds_alternative<ConstantFamily>(rotation.family()) &&
      classify(rotation).verdict != Verdict::constructible) {
    throw PreconditionError("rotation function does not classify as constructible");
  }
  if (!(options.r_floor > 1.0) || !(options.growth_scale > 0.0) || !(options.r_cache > 16.0 * options.r_floor)) {
    throw PreconditionError("construction options out of range");
  }
  auto impl = std::make_shared<Impl>();
  impl->rotation = rotation;
  impl->options = options;
  impl->u_floor = std::log(options.r_floor);
  impl->u_cache = std::log(options.r_cache);
  if (impl->u_cache + 5.0 > options.u_max) throw PreconditionError("u_max must exceed log(r_cache) + 5");
  impl->profile = StripProfile::construction(rotation, impl->u_floor);
  impl->map = solve_strip_map(impl->profile, options.u_max, {options.mesh});
  if (options.estimate_map_error && options.mesh / 2 >= 64) {
    const auto coarse = solve_strip_map(impl->profile, options.u_max, {options.mesh / 2});
    impl->map_error = map_difference(coarse, impl->map);
  }
  impl->gauge = impl->map.anchor_u() + std::log(options.growth_scale);
  impl->slope = max_boundary_slope(impl->profile, impl->u_floor, impl->u_cache, 20001);
  impl->rule = gauss_legendre(kGaussOrder);

  // Spiral panels per doubling segment, graded toward the corners at r_floor.
  for (double R = options.r_floor; R < options.r_cache; R *= 2.0) {
    const int j = static_cast<int>(impl->segment_radius.size());
    impl->segment_radius.push_back(R);
    const double lo = std::log(R), hi = std::min(std::log(2.0 * R), impl->u_cache);
    std::vector<double> cuts{lo};
    if (j == 0) {
      for (int k = 10; k >= 1; --k) cuts.push_back(lo + options.panel_du * std::ldexp(1.0, -k));
    }
    double u = cuts.back();
    while (u < hi - 1e-14) {
      const double rate = std::exp(impl->map.boundary_x(u, -1) + impl->gauge);
      const double du = std::min(options.panel_du, 0.8 * kPi / std::max(rate, 1e-300));
      u = std::min(hi, u + du);
      if (hi - u < 1e-3 * du) u = hi;
      cuts.push_back(u);
    }
    const std::size_t first = impl->panels.size();
    for (Curve c : {kLower, kUpper}) {
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) impl->add_panel(c, cuts[k], cuts[k + 1], j);
    }
    impl->segment_panels.emplace_back(first, impl->panels.size());
  }
  // Inner arc, graded toward both corners.
  {
    const double a = impl->profile.phi_minus(impl->u_floor).value;
    const double b = impl->profile.phi_plus(impl->u_floor).value;
    std::vector<double> cuts{a};
    const double span = b - a;
    for (int k = 12; k >= 3; --k) cuts.push_back(a + span * std::ldexp(1.0, -k));
    for (int k = 1; k < 4; ++k) cuts.push_back(a + span * k / 4.0);
    for (int k = 3; k <= 12; ++k) cuts.push_back(b - span * std::ldexp(1.0, -k));
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) impl->add_panel(kArc, cuts[k], cuts[k + 1], -1);
  }

  const int terms = options.multipole_terms;
  impl->moments.assign(impl->segment_radius.size(), std::vector<Complex>(terms));
  for (std::size_t j = 0; j < impl->segment_radius.size(); ++j) {
    const double R = impl->segment_radius[j];
    for (std::size_t i = impl->segment_panels[j].first; i < impl->segment_panels[j].second; ++i) {
      const Panel& p = impl->panels[i];
      for (int k = 0; k < kGaussOrder; ++k) {
        const Node& n = impl->nodes[p.first + k];
        const Complex t = R / n.w;
        Complex term = n.q / n.w;
        for (int m = 0; m < terms; ++m) {
          impl->moments[j][m] += term;
          term *= t;
        }
      }
    }
  }

  double l1 = 0.0;
  for (const Panel& p : impl->panels) {
    for (int k = 0; k < kGaussOrder; ++k) l1 += std::abs(impl->nodes[p.first + k].q);
    if (p.curve == kArc) {
      for (int k = 0; k < kGaussOrder; ++k) {
        const double t = 0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * impl->rule.nodes[k];
        impl->log_excess = std::max(impl->log_excess, impl->b_at(Complex(impl->u_floor, t)).log_abs);
      }
    } else {
      impl->log_excess = std::max(impl->log_excess, 0.0);
    }
  }
  impl->l1 = l1 + 2.0 * std::sqrt(1.0 + impl->slope * impl->slope) / options.r_cache;

  ConstructedFunction cf;
  cf.impl_ = std::move(impl);
  return cf;
}

const RotationFunction& ConstructedFunction::rotation() const noexcept { return impl_->rotation; }
const StripProfile& ConstructedFunction::profile() const noexcept { return impl_->profile; }
const NumericStripMap& ConstructedFunction::map() const noexcept { return impl_->map; }
const ConstructionOptions& ConstructedFunction::options() const noexcept { return impl_->options; }
double ConstructedFunction::map_error() const noexcept { return impl_->map_error; }
double ConstructedFunction::max_slope() const noexcept { return impl_->slope; }
std::size_t ConstructedFunction::node_count() const noexcept { return impl_->nodes.size(); }
bool ConstructedFunction::in_omega(Complex z) const { return impl_->in_omega(z); }
double ConstructedFunction::boundary_l1() const noexcept { return impl_->l1; }
double ConstructedFunction::boundary_log_excess() const noexcept { return impl_->log_excess; }

LogValue ConstructedFunction::eval_b(Complex zeta) const {
  const LogValue b = impl_->b_at(zeta);
  return {b.log_abs, reduce_angle(b.arg)};
}

LogValue ConstructedFunction::eval_g(Complex w) const { return impl_->g_at(w, true); }

double ConstructedFunction::tail_bound(Complex z, double r_cut) const { return impl_->tail(z, r_cut); }

FEvaluation ConstructedFunction::eval_f(Complex z) const { return eval_f(z, impl_->options.r_cache); }

FEvaluation ConstructedFunction::eval_f(Complex z, double r_cut) const {
  const Impl& m = *impl_;
  if (!(r_cut <= m.options.r_cache * (1.0 + 1e-12)) || !(r_cut > 2.0 * std::abs(z))) {
    throw PreconditionError("r_cut must lie in (2|z|, r_cache]");
  }
  const double u_cut = std::min(std::log(r_cut), m.u_cache);
  FEvaluation out;
  out.tail = m.tail(z, r_cut);
  const double az = std::abs(z);

  // Local bump through Omega when z is close to a spiral.
  if (az > m.options.r_floor * std::exp(-0.5)) {
    const double d_eff = std::min(m.options.d_near, 0.25 / (m.options.growth_scale * az));
    const double rho = 2.0 * d_eff;
    for (Curve c : {kLower, kUpper}) {
      double uc = 0.0;
      const double d = m.closest(c, z, uc);
      if (d >= d_eff || uc - rho < m.u_floor + rho || uc + rho > u_cut) continue;
      // Panels of curve c overlapping [uc - rho, uc + rho].
      std::size_t first = m.panels.size(), last = 0;
      for (std::size_t i = 0; i < m.panels.size(); ++i) {
        const Panel& p = m.panels[i];
        if (p.curve != c || p.b <= uc - rho || p.a >= uc + rho) continue;
        first = std::min(first, i);
        last = std::max(last, i + 1);
      }
      const double ua = m.panels[first].a, ub = m.panels[last - 1].b;
      const Complex A(ua, m.phi(c, ua)), B(ub, m.phi(c, ub));
      const Complex mid = 0.5 * (A + B), half = 0.5 * (A - B);
      const Complex normal = c == kLower ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
      const double orient = c == kLower ? 1.0 : -1.0;
      auto s = m.contour_sum(z, m.u_floor, u_cut, true, c, first, last);
      const auto bump = integrate<Complex>(
          [&](double t) {
            const Complex zeta = mid + half * std::cos(t) + normal * rho * std::sin(t);
            const Complex dzeta = -half * std::sin(t) + normal * rho * std::cos(t);
            const LogValue b = m.b_at(zeta);
            const Complex w = std::exp(zeta);
            return orient * from_log(b.log_abs - zeta.real(), b.arg - zeta.imag()) * dzeta / (z - w);
          },
          0.0, kPi, 1e-12, 1e-17, 20000);
      s.value += bump.value;
      s.error += bump.error;
      out.value = LogValue::from(s.value / Complex(0.0, kTwoPi));
      out.error = s.error / kTwoPi;
      out.branch = "bump";
      return out;
    }
  }

  const auto s = m.contour_sum(z, m.u_floor, u_cut, true);
  const Complex integral = s.value / Complex(0.0, kTwoPi);
  out.error = s.error / kTwoPi;
  if (m.in_omega(z)) {
    const LogValue g = m.g_at(z, false);
    if (g.log_abs < kMaxLog) {
      out.value = LogValue::from(g.value() + integral);
    } else {
      const Complex ratio = integral / std::polar(1.0, g.arg) * std::exp(-std::min(g.log_abs, 1e300));
      out.value = {g.log_abs + std::log(std::abs(1.0 + ratio)), reduce_angle(g.arg + std::arg(1.0 + ratio))};
    }
    out.branch = "inside";
  } else {
    out.value = LogValue::from(integral);
    out.branch = "outside";
  }
  return out;
}

FEvaluation ConstructedFunction::eval_f_deformed(Complex z, double radius) const {
  const Impl& m = *impl_;
  const double az = std::abs(z);
  if (!(radius > 1.5 * az) || !(radius >= m.options.r_floor) || !(std::log(radius) < m.u_cache - 1.0)) {
    throw PreconditionError("deformation radius must exceed 1.5|z| and stay inside the cached range");
  }
  const double ur = std::log(radius);
  FEvaluation out;
  out.tail = m.tail(z, m.options.r_cache);
  auto s = m.contour_sum(z, ur, m.u_cache, false);
  const double a = m.profile.phi_minus(ur).value, b = m.profile.phi_plus(ur).value;
  // Arc |w| = radius traversed clockwise from phi_+ to phi_-.
  const auto arc = integrate<Complex>(
      [&](double alpha) {
        const Complex zeta(ur, alpha);
        const LogValue bv = m.b_at(zeta);
        const Complex w = std::exp(zeta);
        return -from_log(bv.log_abs - ur, bv.arg - alpha) * Complex(0.0, 1.0) / (z - w);
      },
      a, b, 1e-12, 1e-17, 20000);
  s.value += arc.value;
  s.error += arc.error;
  out.value = LogValue::from(s.value / Complex(0.0, kTwoPi));
  out.error = s.error / kTwoPi;
  out.branch = "deformed";
  return out;
}

double ConstructedFunction::deformation_tolerance(Complex z, double r1, double r2) const {
  const Impl& m = *impl_;
  if (r1 > r2) std::swap(r1, r2);
  const double u1 = std::log(r1), u2 = std::log(r2);
  if (!(u1 >= m.u_floor) || !(u2 <= m.map.u_max() - 1.0)) {
    throw PreconditionError("deformation radii outside the meshed range");
  }
  // |dbar g| = |g| e^X |dbar_zeta Z| / |w|, dA_w = |w|^2 theta du deta.
  const double rate = m.options.growth_scale * r2;
  const int nu = std::max(200, static_cast<int>(std::ceil(20.0 * rate * (u2 - u1))));
  const int ne = 64;
  const double du = (u2 - u1) / nu, step = 1e-5;
  std::vector<double> rows(nu);
  parallel_for(nu, [&](std::size_t i) {
    const double u = u1 + du * (i + 0.5);
    const double lo = m.profile.phi_minus(u).value, th = m.profile.theta(u).value;
    double acc = 0.0;
    for (int j = 0; j < ne; ++j) {
      const Complex zeta(u, lo + th * (j + 0.5) / ne);
      const Complex zu = (m.map(zeta + step) - m.map(zeta - step)) / (2.0 * step);
      const Complex zv = (m.map(zeta + Complex(0.0, step)) - m.map(zeta - Complex(0.0, step))) / (2.0 * step);
      const double dbar = 0.5 * std::abs(zu + Complex(0.0, 1.0) * zv);
      const Complex zz = m.map(zeta);
      const double x = zz.real() + m.gauge;
      const double log_mag = std::exp(x) * std::cos(zz.imag()) - u + x;
      acc += std::exp(log_mag) * dbar * th / ne / std::abs(z - std::exp(zeta));
    }
    rows[i] = acc * du;
  });
  double area = 0.0;
  for (double r : rows) area += r;
  return 2.0 * m.tail(z, m.options.r_cache) + area / kPi;
}

double ConstructedFunction::max_annulus_arclength(int n_max) const {
  const Impl& m = *impl_;
  double worst = 0.0;
  for (int n = static_cast<int>(std::floor(m.options.r_floor)); n < n_max; ++n) {
    const double lo = std::log(std::max<double>(n, m.options.r_floor)), hi = std::log(n + 1.0);
    if (hi <= lo) continue;
    double len = 0.0;
    for (Curve c : {kLower, kUpper}) {
      len += integrate(
                 [&](double u) {
                   const double d = m.phi_jet(c, u).d1;
                   return std::exp(u) * std::sqrt(1.0 + d * d);
                 },
                 lo, hi, 1e-10)
                 .value;
    }
    worst = std::max(worst, len);
  }
  return worst;
}

DistanceReport dist_omega_to_omegas(const RotationFunction& rotation, double r_max, double r_floor) {
  if (!(r_max > r_floor) || !(r_floor > 1.0)) throw PreconditionError("need 1 < r_floor < r_max");
  const StripProfile prof = StripProfile::construction(rotation, std::log(r_floor));
  const RotatingHalfPlane half(rotation);
  std::vector<Complex> samples;
  for (double r : geometric_grid(r_floor, r_max, 4000)) {
    const double u = std::log(r);
    samples.push_back(std::polar(r, prof.phi_minus(u).value));
    samples.push_back(std::polar(r, prof.phi_plus(u).value));
  }
  const double u0 = std::log(r_floor);
  for (double a : linear_grid(prof.phi_minus(u0).value, prof.phi_plus(u0).value, 200)) {
    samples.push_back(std::polar(r_floor, a));
  }
  // Distance from p to the spiral {rho e^{i(s(rho) + shift)}}.
  const auto spiral_distance = [&](Complex p, double shift) {
    const double r0 = std::abs(p);
    const auto d2 = [&](double rho) {
      return rho <= 0.0 ? r0 * r0 : std::norm(p - std::polar(rho, rotation.s(rho) + shift));
    };
    double best = 0.0, best_val = d2(0.0);
    const int n = 200;
    for (int k = 1; k <= n; ++k) {
      const double rho = 2.0 * r0 * k / n;
      const double v = d2(rho);
      if (v < best_val) {
        best_val = v;
        best = rho;
      }
    }
    double a = std::max(0.0, best - 2.0 * r0 / n), b = best + 2.0 * r0 / n;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 100 && b - a > 1e-12 * r0; ++it) {
      const double x1 = b - g * (b - a), x2 = a + g * (b - a);
      if (d2(x1) < d2(x2)) {
        b = x2;
      } else {
        a = x1;
      }
    }
    return std::sqrt(std::min(best_val, d2(0.5 * (a + b))));
  };
  DistanceReport rep;
  rep.distance = kInf;
  rep.min_ratio = kInf;
  for (const Complex& p : samples) {
    if (half.contains(p)) rep.disjoint = false;
    const double d = std::min(spiral_distance(p, 0.0), spiral_distance(p, kPi));
    const double r0 = std::abs(p);
    const double bound = r0 / (20.0 * (std::log(r0) * std::log(r0) + 1.0));
    rep.min_ratio = std::min(rep.min_ratio, d / bound);
    if (d < rep.distance) {
      rep.distance = d;
      rep.at_radius = r0;
      rep.analytic_bound = bound;
    }
  }
  if (!(rep.distance > 0.0)) throw GeometryError("Omega and Omega_s touch: distance is not positive");
  return rep;
}

GammaCurve gamma_curve(const ConstructedFunction& cf, const std::vector<double>& r_grid) {
  const double lo = cf.options().r_floor * std::exp(1.0);
  const double hi = std::min(cf.options().r_cache, std::exp(cf.map().u_max())) / std::exp(1.0);
  std::vector<double> us;
  for (double r : r_grid) {
    if (r < lo * (1.0 - 1e-12) || r > hi * (1.0 + 1e-12)) {
      throw GeometryError("Gamma radius " + std::to_string(r) + " outside [r_floor e, r_cut / e]");
    }
    us.push_back(std::log(r));
  }
  const ImageCurve curve = image_curve_Xiii(cf.map(), 0.0, us);
  GammaCurve out;
  out.r = r_grid;
  out.t = curve.v;
  for (std::size_t k = 0; k < us.size(); ++k) {
    out.residual.push_back(curve.v[k] - cf.rotation().h(us[k]) - 1.5 * kPi);
  }
  return out;
}

double exp_type_estimate(const std::function<double(Complex)>& log_abs_f, const std::vector<double>& r_grid,
                         int samples) {
  if (r_grid.empty() || samples < 8) throw PreconditionError("exp_type_estimate needs a grid and >= 8 samples");
  if (!std::is_sorted(r_grid.begin(), r_grid.end())) throw PreconditionError("radius grid must be increasing");
  const std::size_t start = r_grid.size() / 2;
  double best = -kInf;
  for (std::size_t i = start; i < r_grid.size(); ++i) {
    const double r = r_grid[i];
    std::vector<double> vals(samples);
    parallel_for(samples, [&](std::size_t k) { vals[k] = log_abs_f(std::polar(r, kTwoPi * (k + 0.5) / samples)); });
    best = std::max(best, *std::max_element(vals.begin(), vals.end()) / r);
  }
  return best;
}

LineFit growth_fit(const std::vector<double>& radii, const std::vector<double>& log_values) {
  return fit_line(radii, log_values);
}

}  // namespace heins

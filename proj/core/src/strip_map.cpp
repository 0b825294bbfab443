#include "heins/strip_map.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <boost/math/tools/roots.hpp>

namespace heins {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lagrange weights (and derivative weights) at p for nodes 0, 1, 2, 3.
void lagrange4(double p, std::array<double, 4>& w, std::array<double, 4>& dw) {
  for (int k = 0; k < 4; ++k) {
    double denom = 1.0, value = 1.0, deriv = 0.0;
    for (int m = 0; m < 4; ++m) {
      if (m == k) continue;
      denom *= k - m;
      value *= p - m;
    }
    for (int m = 0; m < 4; ++m) {
      if (m == k) continue;
      double prod = 1.0;
      for (int l = 0; l < 4; ++l) {
        if (l != k && l != m) prod *= p - l;
      }
      deriv += prod;
    }
    w[k] = value / denom;
    dw[k] = deriv / denom;
  }
}

int stencil_start(double t, int intervals) {
  return std::clamp(static_cast<int>(std::floor(t)) - 1, 0, intervals - 3);
}

Jet reciprocal_bump(double u, double sign) {
  // sign / (u^2 + 1) with derivatives
  const double q = u * u + 1.0;
  return {sign / q, sign * (-2.0 * u / (q * q)), sign * (6.0 * u * u - 2.0) / (q * q * q)};
}

Jet add(Jet a, Jet b) { return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2}; }

// Fits log(values) against log(starts); returns the decay exponent, +inf if the tail vanishes.
double decay_exponent(const std::vector<double>& starts, const std::vector<double>& values) {
  if (values.back() < 1e-14) return kInf;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] <= 0.0) continue;
    lx.push_back(std::log(starts[k]));
    ly.push_back(std::log(values[k]));
  }
  if (lx.size() < 2) return 0.0;
  return -fit_line(lx, ly).slope;
}

}  // namespace

Jet StripProfile::theta(double u) const {
  const Jet lo = phi_minus(u), hi = phi_plus(u);
  return {hi.value - lo.value, hi.d1 - lo.d1, hi.d2 - lo.d2};
}

Jet StripProfile::psi(double u) const {
  const Jet lo = phi_minus(u), hi = phi_plus(u);
  return {0.5 * (hi.value + lo.value), 0.5 * (hi.d1 + lo.d1), 0.5 * (hi.d2 + lo.d2)};
}

StripProfile StripProfile::straight(double u_min, double half_width) {
  StripProfile p;
  p.name = "straight";
  p.u_min = u_min;
  p.phi_minus = [half_width](double) { return Jet{-half_width, 0.0, 0.0}; };
  p.phi_plus = [half_width](double) { return Jet{half_width, 0.0, 0.0}; };
  return p;
}

StripProfile StripProfile::from_center_width(std::string name, std::function<Jet(double)> psi,
                                             std::function<Jet(double)> theta, double u_min) {
  StripProfile p;
  p.name = std::move(name);
  p.u_min = u_min;
  p.phi_minus = [psi, theta](double u) {
    const Jet c = psi(u), w = theta(u);
    return Jet{c.value - 0.5 * w.value, c.d1 - 0.5 * w.d1, c.d2 - 0.5 * w.d2};
  };
  p.phi_plus = [psi, theta](double u) {
    const Jet c = psi(u), w = theta(u);
    return Jet{c.value + 0.5 * w.value, c.d1 + 0.5 * w.d1, c.d2 + 0.5 * w.d2};
  };
  return p;
}

StripProfile StripProfile::construction(const RotationFunction& rf, double u_min) {
  StripProfile p;
  p.name = "construction:" + rf.family_name();
  p.u_min = u_min;
  p.phi_minus = [rf](double u) { return add(add(rf.jet(u), {kPi, 0.0, 0.0}), reciprocal_bump(u, 1.0)); };
  p.phi_plus = [rf](double u) { return add(add(rf.jet(u), {2.0 * kPi, 0.0, 0.0}), reciprocal_bump(u, -1.0)); };
  return p;
}

StripProfile StripProfile::rotation_band(const RotationFunction& rf, double u_min) {
  StripProfile p;
  p.name = "band:" + rf.family_name();
  p.u_min = u_min;
  p.phi_minus = [rf](double u) { return add(rf.jet(u), {kPi, 0.0, 0.0}); };
  p.phi_plus = [rf](double u) { return add(rf.jet(u), {2.0 * kPi, 0.0, 0.0}); };
  return p;
}

void NumericStripMap::interpolate(const std::vector<double>& f, double u, double eta, double& value, double& du,
                                  double& deta) const {
  const double t = (u - profile_.u_min) / hu_;
  const double s = eta * mesh_;
  const int i0 = stencil_start(t, nu_);
  const int j0 = stencil_start(s, mesh_);
  std::array<double, 4> wu, dwu, we, dwe;
  lagrange4(t - i0, wu, dwu);
  lagrange4(s - j0, we, dwe);
  value = du = deta = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double fv = node(f, i0 + a, j0 + b);
      value += wu[a] * we[b] * fv;
      du += dwu[a] * we[b] * fv;
      deta += wu[a] * dwe[b] * fv;
    }
  }
  du /= hu_;
  deta *= mesh_;
}

NumericStripMap::Local NumericStripMap::eval_straight(double u, double eta) const {
  constexpr double slack = 1e-9;
  if (!(u >= profile_.u_min - slack && u <= u_max_ + slack) || !(eta >= -slack && eta <= 1.0 + slack)) {
    throw GeometryError("point (u=" + std::to_string(u) + ", eta=" + std::to_string(eta) + ") is outside the mesh");
  }
  u = std::clamp(u, profile_.u_min, u_max_);
  eta = std::clamp(eta, 0.0, 1.0);
  double x, xu, xe, y, yu, ye;
  interpolate(x_, u, eta, x, xu, xe);
  interpolate(y_, u, eta, y, yu, ye);
  const Jet lo = profile_.phi_minus(u);
  const Jet th = profile_.theta(u);
  const double b = (lo.d1 + eta * th.d1) / th.value;
  return {{x, y}, {xu - b * xe, yu - b * ye}};
}

NumericStripMap::Local NumericStripMap::eval(Complex w) const {
  const double u = w.real();
  if (!(u >= profile_.u_min - 1e-9 && u <= u_max_ + 1e-9)) {
    throw GeometryError("Re w = " + std::to_string(u) + " is outside the meshed range");
  }
  const double uc = std::clamp(u, profile_.u_min, u_max_);
  const double lo = profile_.phi_minus(uc).value;
  const double th = profile_.theta(uc).value;
  return eval_straight(uc, (w.imag() - lo) / th);
}

double NumericStripMap::core_x(double u) const { return eval_straight(u, 0.5).z.real(); }

double NumericStripMap::boundary_x(double u, int side) const {
  return eval_straight(u, side < 0 ? 0.0 : 1.0).z.real();
}

Complex NumericStripMap::inverse(Complex z) const {
  const double x = z.real();
  if (!(std::abs(z.imag()) <= kPi / 2) || x < core_.front() || x > core_.back()) {
    throw GeometryError("inverse map target outside the meshed image");
  }
  const auto it = std::upper_bound(core_.begin(), core_.end(), x);
  const int i = std::clamp(static_cast<int>(it - core_.begin()) - 1, 0, nu_ - 1);
  const double frac = (x - core_[i]) / (core_[i + 1] - core_[i]);
  const double u = profile_.u_min + hu_ * (i + frac);
  const double eta = (z.imag() + kPi / 2) / kPi;
  Complex w(u, profile_.phi_minus(u).value + profile_.theta(u).value * eta);
  for (int iter = 0; iter < 60; ++iter) {
    const Local loc = eval(w);
    const Complex err = loc.z - z;
    if (std::abs(err) < 1e-12) return w;
    Complex step = err / loc.dz;
    for (int halving = 0; halving < 30; ++halving) {
      const Complex trial = w - step;
      const double uc = trial.real();
      if (uc >= profile_.u_min && uc <= u_max_) {
        const double lo = profile_.phi_minus(uc).value;
        const double th = profile_.theta(uc).value;
        const double e = (trial.imag() - lo) / th;
        if (e >= 0.0 && e <= 1.0) break;
      }
      step *= 0.5;
    }
    w -= step;
  }
  const Complex err = eval(w).z - z;
  if (std::abs(err) > 1e-9) throw NumericError("inverse map did not converge");
  return w;
}

NumericStripMap solve_strip_map(const StripProfile& profile, double u_max, const StripSolveOptions& options) {
  const int mesh = options.mesh;
  if (mesh < 64 || mesh % 2 != 0) throw PreconditionError("strip mesh must be even and >= 64");
  if (!(u_max >= profile.u_min + 20.0)) throw PreconditionError("u_max must be at least u_min + 20");
  if (!(options.aspect > 0.0)) throw PreconditionError("aspect must be positive");

  NumericStripMap map;
  map.profile_ = profile;
  map.u_max_ = u_max;
  map.mesh_ = mesh;
  const double theta_ref = profile.theta(u_max).value;
  if (!(theta_ref > 0.0)) throw GeometryError("strip width is not positive at u_max");
  map.nu_ = std::max(8, static_cast<int>(std::ceil((u_max - profile.u_min) / (options.aspect * theta_ref / mesh))));
  const int nu = map.nu_;
  map.hu_ = (u_max - profile.u_min) / nu;
  const double hu = map.hu_;
  const double he = 1.0 / mesh;
  map.anchor_u_ = profile.u_min + options.anchor_offset;
  if (map.anchor_u_ > u_max) throw PreconditionError("anchor lies beyond u_max");

  std::vector<Jet> lo(nu + 1), th(nu + 1);
  for (int i = 0; i <= nu; ++i) {
    const double u = profile.u_min + hu * i;
    lo[i] = profile.phi_minus(u);
    th[i] = profile.theta(u);
    if (!(th[i].value > 0.0)) throw GeometryError("strip width not positive at u = " + std::to_string(u));
  }

  const int nj = mesh - 1;
  const auto index = [nj](int i, int j) { return static_cast<Eigen::Index>(i) * nj + (j - 1); };
  // Boundary values: -+pi/2 on the curves, the linear profile across u = u_max.
  const auto dirichlet = [mesh](int, int j) { return -kPi / 2 + kPi * j / mesh; };
  const Eigen::Index n_unknowns = static_cast<Eigen::Index>(nu) * nj;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n_unknowns) * 9);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_unknowns);

  for (int i = 0; i < nu; ++i) {
    for (int j = 1; j < mesh; ++j) {
      const Eigen::Index row = index(i, j);
      const auto put = [&](int ii, int jj, double c) {
        if (jj == 0 || jj == mesh || ii == nu) {
          rhs[row] -= c * dirichlet(ii, jj);
        } else {
          triplets.emplace_back(row, index(ii, jj), c);
        }
      };
      const double eta = j * he;
      const double t = th[i].value;
      const double b = (lo[i].d1 + eta * th[i].d1) / t;
      if (i == 0) {
        // Y_u - b Y_eta = 0 (normal derivative on u = u_min), scaled by hu.
        put(0, j, -1.5);
        put(1, j, 2.0);
        put(2, j, -0.5);
        put(0, j + 1, -b * hu / (2 * he));
        put(0, j - 1, b * hu / (2 * he));
        continue;
      }
      const double cuu = 1.0;
      const double cue = -2.0 * b;
      const double cee = b * b + 1.0 / (t * t);
      const double ce = -(lo[i].d2 + eta * th[i].d2) / t + 2.0 * b * th[i].d1 / t;
      const double s = hu * hu;
      put(i + 1, j, s * cuu / (hu * hu));
      put(i - 1, j, s * cuu / (hu * hu));
      put(i, j, s * (-2.0 * cuu / (hu * hu) - 2.0 * cee / (he * he)));
      put(i, j + 1, s * (cee / (he * he) + ce / (2 * he)));
      put(i, j - 1, s * (cee / (he * he) - ce / (2 * he)));
      const double cross = s * cue / (4 * hu * he);
      put(i + 1, j + 1, cross);
      put(i - 1, j - 1, cross);
      put(i + 1, j - 1, -cross);
      put(i - 1, j + 1, -cross);
    }
  }
  Eigen::SparseMatrix<double> a(n_unknowns, n_unknowns);
  a.setFromTriplets(triplets.begin(), triplets.end());
  triplets.clear();
  triplets.shrink_to_fit();
  a.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) throw NumericError("sparse LU factorization failed: " + lu.lastErrorMessage());
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw NumericError("sparse LU solve failed");
  const double rnorm = (a * sol - rhs).lpNorm<Eigen::Infinity>();
  map.solve_residual_ = rnorm / std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
  if (!(map.solve_residual_ <= options.max_solve_residual)) {
    throw NumericError("linear solve residual " + std::to_string(map.solve_residual_) + " above tolerance");
  }

  const std::size_t stride = static_cast<std::size_t>(mesh) + 1;
  map.y_.assign(static_cast<std::size_t>(nu + 1) * stride, 0.0);
  for (int i = 0; i <= nu; ++i) {
    for (int j = 0; j <= mesh; ++j) {
      const bool fixed = j == 0 || j == mesh || i == nu;
      map.y_[i * stride + j] = fixed ? dirichlet(i, j) : sol[index(i, j)];
    }
  }

  const auto& y = map.y_;
  const auto fu = [&](int i, int j) {
    const auto at = [&](int ii) { return y[ii * stride + j]; };
    if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2 * hu);
    if (i == nu) return (3.0 * at(nu) - 4.0 * at(nu - 1) + at(nu - 2)) / (2 * hu);
    return (at(i + 1) - at(i - 1)) / (2 * hu);
  };
  const auto fe = [&](int i, int j) {
    const auto at = [&](int jj) { return y[i * stride + jj]; };
    if (j == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2 * he);
    if (j == mesh) return (3.0 * at(mesh) - 4.0 * at(mesh - 1) + at(mesh - 2)) / (2 * he);
    return (at(j + 1) - at(j - 1)) / (2 * he);
  };

  // X along the core eta = 1/2, then transversally along each column.
  const int jc = mesh / 2;
  map.x_.assign(map.y_.size(), 0.0);
  const auto core_slope = [&](int i) {
    const double a_ = lo[i].d1 + 0.5 * th[i].d1;
    return fe(i, jc) * (1.0 + a_ * a_) / th[i].value - a_ * fu(i, jc);
  };
  double prev = core_slope(0);
  for (int i = 1; i <= nu; ++i) {
    const double cur = core_slope(i);
    map.x_[i * stride + jc] = map.x_[(i - 1) * stride + jc] + 0.5 * hu * (prev + cur);
    prev = cur;
  }
  for (int i = 0; i <= nu; ++i) {
    const auto col_slope = [&](int j) {
      const double a_ = lo[i].d1 + j * he * th[i].d1;
      return -th[i].value * fu(i, j) + a_ * fe(i, j);
    };
    for (int j = jc + 1; j <= mesh; ++j) {
      map.x_[i * stride + j] = map.x_[i * stride + j - 1] + 0.5 * he * (col_slope(j - 1) + col_slope(j));
    }
    for (int j = jc - 1; j >= 0; --j) {
      map.x_[i * stride + j] = map.x_[i * stride + j + 1] - 0.5 * he * (col_slope(j + 1) + col_slope(j));
    }
  }
  const double anchor = map.core_x(map.anchor_u_);
  for (double& v : map.x_) v -= anchor;
  map.core_.resize(nu + 1);
  for (int i = 0; i <= nu; ++i) map.core_[i] = map.x_[i * stride + jc];
  map.core_monotone_ = std::adjacent_find(map.core_.begin(), map.core_.end(), std::greater_equal<>()) ==
                       map.core_.end();

  // Discrete Cauchy-Riemann residual in physical coordinates, one unit away from
  // the corners where Y is singular.
  const auto& x = map.x_;
  double cr = 0.0;
  const int margin = std::max(1, static_cast<int>(std::ceil(1.0 / hu)));
  for (int i = margin; i < nu - margin; ++i) {
    for (int j = 1; j < mesh; ++j) {
      const double eta = j * he;
      const double b = (lo[i].d1 + eta * th[i].d1) / th[i].value;
      const double xu = (x[(i + 1) * stride + j] - x[(i - 1) * stride + j]) / (2 * hu);
      const double xe = (x[i * stride + j + 1] - x[i * stride + j - 1]) / (2 * he);
      const double yu = fu(i, j), ye = fe(i, j);
      const double r1 = (xu - b * xe) - ye / th[i].value;
      const double r2 = xe / th[i].value + (yu - b * ye);
      cr = std::max({cr, std::abs(r1), std::abs(r2)});
    }
  }
  map.cr_residual_ = cr;

  double berr = 0.0;
  for (int i = 0; i < nu; ++i) {
    const double u = profile.u_min + hu * (i + 0.5);
    berr = std::max(berr, std::abs(map.eval_straight(u, 0.0).z.imag() + kPi / 2));
    berr = std::max(berr, std::abs(map.eval_straight(u, 1.0).z.imag() - kPi / 2));
  }
  map.boundary_error_ = berr;
  return map;
}

double map_difference(const NumericStripMap& a, const NumericStripMap& b, int samples) {
  const double lo = std::max(a.u_min(), b.u_min()) + 1.0;
  const double hi = std::min(a.u_max(), b.u_max()) - 10.0;
  if (!(hi > lo)) throw PreconditionError("maps share no comparable region");
  const double g1 = 0.7548776662466927, g2 = 0.5698402909980532;  // R2 low-discrepancy sequence
  double worst = 0.0;
  for (int k = 1; k <= samples; ++k) {
    const double u = lo + std::fmod(0.5 + g1 * k, 1.0) * (hi - lo);
    const double eta = std::fmod(0.5 + g2 * k, 1.0);
    worst = std::max(worst, std::abs(a.eval_straight(u, eta).z - b.eval_straight(u, eta).z));
  }
  return worst;
}

double wars_IIIa_lower(const StripProfile& profile, double u1, double u2) {
  if (!(u1 >= profile.u_min && u1 <= u2)) throw PreconditionError("need u_min <= u1 <= u2");
  const auto r = integrate([&](double u) { return 1.0 / profile.theta(u).value; }, u1, u2, 1e-10);
  if (!r.converged) throw NumericError("quadrature of 1/theta did not converge");
  return kPi * r.value;
}

double max_boundary_slope(const StripProfile& profile, double u1, double u2, int samples) {
  double m = 0.0;
  for (double u : linear_grid(u1, u2, samples)) {
    m = std::max({m, std::abs(profile.phi_minus(u).d1), std::abs(profile.phi_plus(u).d1)});
  }
  return m;
}

namespace {

struct BandIntegrals {
  double main = 0.0;   // int (1 + psi'^2)/theta
  double shape = 0.0;  // int theta'^2/theta
};

BandIntegrals band_integrals(const StripProfile& profile, double u1, double u2) {
  const auto a = integrate(
      [&](double u) {
        const Jet p = profile.psi(u);
        return (1.0 + p.d1 * p.d1) / profile.theta(u).value;
      },
      u1, u2, 1e-10);
  const auto b = integrate(
      [&](double u) {
        const Jet t = profile.theta(u);
        return t.d1 * t.d1 / t.value;
      },
      u1, u2, 1e-10, 1e-14);
  if (!a.converged || !b.converged) throw NumericError("strip quadrature did not converge");
  return {a.value, b.value};
}

}  // namespace

double wars_IVa_upper(const StripProfile& profile, double u1, double u2, double m) {
  if (!(u1 >= profile.u_min && u1 <= u2)) throw PreconditionError("need u_min <= u1 <= u2");
  const double slope = max_boundary_slope(profile, u1, u2);
  if (slope > m) {
    throw PreconditionError("boundary slope " + std::to_string(slope) + " exceeds m = " + std::to_string(m));
  }
  const BandIntegrals bi = band_integrals(profile, u1, u2);
  return kPi * bi.main + kPi / 12.0 * bi.shape + 8.0 * kPi * (1.0 + 4.0 / 3.0 * m * m);
}

ViGate vi_gate(const StripProfile& profile, double first_window, int windows) {
  ViGate gate;
  const double first = std::max(first_window, profile.u_min + 1.0);
  std::vector<double> starts(windows), slopes(windows), curv(windows);
  for (int k = 0; k < windows; ++k) {
    const double x0 = first * std::ldexp(1.0, k);
    starts[k] = x0;
    double worst = 0.0;
    for (double u : linear_grid(x0, 2 * x0, 33)) {
      worst = std::max({worst, std::abs(profile.phi_minus(u).d1), std::abs(profile.phi_plus(u).d1)});
    }
    slopes[k] = worst;
    const auto r = integrate(
        [&](double u) { return std::abs(profile.phi_minus(u).d2) + std::abs(profile.phi_plus(u).d2); }, x0, 2 * x0,
        1e-8, 1e-300);
    curv[k] = r.value;
  }
  gate.derivative_at_end = slopes.back();
  gate.derivative_exponent = decay_exponent(starts, slopes);
  gate.curvature_exponent = decay_exponent(starts, curv);
  gate.derivative_decays = gate.derivative_at_end < 1e-3 && gate.derivative_exponent > 0.05;
  gate.curvature_integrable = gate.curvature_exponent > 0.05;
  return gate;
}

double wars_VI_lower(const StripProfile& profile, double u1, double u2) {
  if (!(u1 >= profile.u_min && u1 <= u2)) throw PreconditionError("need u_min <= u1 <= u2");
  const ViGate gate = vi_gate(profile);
  if (!gate.pass()) {
    throw PreconditionError(gate.derivative_decays ? "boundary curvature is not integrable on the tail"
                                                   : "boundary slope does not decay on the tail");
  }
  const BandIntegrals bi = band_integrals(profile, u1, u2);
  return kPi * bi.main - kPi / 4.0 * bi.shape;
}

ImageCurve image_curve_Xiii(const NumericStripMap& map, double y, const std::vector<double>& u_grid) {
  if (!(std::abs(y) < kPi / 2)) throw PreconditionError("level y must satisfy |y| < pi/2");
  ImageCurve curve;
  curve.y = y;
  for (double u : u_grid) {
    if (u < map.u_min() || u > map.u_max()) throw GeometryError("image curve column outside the mesh");
    const auto f = [&](double eta) { return map.eval_straight(u, eta).z.imag() - y; };
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(f, 0.0, 1.0, -kPi / 2 - y, kPi / 2 - y,
                                                          boost::math::tools::eps_tolerance<double>(50), iters);
    const double eta = 0.5 * (a + b);
    const StripProfile& p = map.profile();
    const double th = p.theta(u).value;
    const double v = p.phi_minus(u).value + th * eta;
    const double res = v - p.psi(u).value - th * y / kPi;
    curve.u.push_back(u);
    curve.v.push_back(v);
    curve.x.push_back(map.eval_straight(u, eta).z.real());
    curve.residual.push_back(res);
    curve.relative_residual.push_back(res / th);
  }
  return curve;
}

WindowReport check_windows(const NumericStripMap& map, const std::vector<std::pair<double, double>>& windows,
                           double vi_slack) {
  WindowReport report;
  if (windows.empty()) return report;
  const StripProfile& p = map.profile();
  double lo = kInf, hi = -kInf;
  for (const auto& [u1, u2] : windows) {
    lo = std::min(lo, u1);
    hi = std::max(hi, u2);
  }
  report.m = max_boundary_slope(p, lo, hi);
  report.vi_applicable = vi_gate(p).pass();
  report.iiia_slack = -kInf;
  for (const auto& [u1, u2] : windows) {
    WindowRow row;
    row.u1 = u1;
    row.u2 = u2;
    row.x1 = map.core_x(u1);
    row.x_diff = map.core_x(u2) - row.x1;
    row.iiia = wars_IIIa_lower(p, u1, u2);
    row.iva = wars_IVa_upper(p, u1, u2, report.m);
    row.iiia_ok = row.iiia <= row.x_diff + 4 * kPi;
    row.iva_ok = row.x_diff <= row.iva;
    if (report.vi_applicable) {
      row.vi = wars_VI_lower(p, u1, u2);
      row.vi_ok = row.x_diff >= row.vi - vi_slack;
      report.vi_slack = std::max(report.vi_slack, row.vi - row.x_diff);
    }
    report.iiia_slack = std::max(report.iiia_slack, row.iiia - row.x_diff);
    report.rows.push_back(row);
  }
  std::vector<const WindowRow*> order;
  for (const auto& r : report.rows) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const WindowRow* a, const WindowRow* b) { return a->x1 < b->x1; });
  report.x0 = kInf;
  for (auto it = order.rbegin(); it != order.rend() && (*it)->iva_ok; ++it) report.x0 = (*it)->x1;
  return report;
}

}  // namespace heins

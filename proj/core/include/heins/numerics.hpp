#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "heins/errors.hpp"

namespace heins {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Value with first and second derivative.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

template <typename T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
bool finite_value(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return std::isfinite(v);
  } else {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  }
}

template <typename T, typename F>
std::pair<T, double> gk15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  if (!finite_value(fc)) throw NumericError("non-finite integrand sample at " + std::to_string(center));
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    if (!finite_value(f1) || !finite_value(f2)) {
      throw NumericError("non-finite integrand sample near " + std::to_string(center));
    }
    kronrod += (f1 + f2) * kWgk[i];
    if (i % 2 == 1) gauss += (f1 + f2) * kWg[i / 2];
  }
  return {kronrod * half, std::abs(T((kronrod - gauss) * half))};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b].
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate drops below max(abs_tol, rel_tol * |integral|) or the interval
/// budget is exhausted; `converged` reports which happened. Throws
/// NumericError if the integrand returns a non-finite sample.
template <typename T = double, typename F>
QuadResult<T> integrate(const F& f, double a, double b, double rel_tol = 1e-10,
                        double abs_tol = 1e-300, int max_intervals = 4000) {
  struct Piece {
    double a, b;
    T value;
    double error;
    bool operator<(const Piece& other) const { return error < other.error; }
  };
  QuadResult<T> result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  std::priority_queue<Piece> heap;
  auto [v0, e0] = detail::gk15<T>(f, a, b);
  heap.push({a, b, v0, e0});
  T total = v0;
  double total_err = e0;
  int count = 1;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) && count < max_intervals) {
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto [vl, el] = detail::gk15<T>(f, worst.a, mid);
    auto [vr, er] = detail::gk15<T>(f, mid, worst.b);
    total += vl + vr - worst.value;
    total_err += el + er - worst.error;
    heap.push({worst.a, mid, vl, el});
    heap.push({mid, worst.b, vr, er});
    ++count;
  }
  // Re-sum to shed accumulated cancellation error in the running totals.
  total = T{};
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  result.value = total;
  result.error = total_err;
  result.intervals = count;
  result.converged = total_err <= std::max(abs_tol, rel_tol * std::abs(total));
  return result;
}

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre nodes and weights (Newton iteration on P_n).
inline GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Least-squares line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

inline LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) throw PreconditionError("fit_line needs at least two paired samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - fit.intercept - fit.slope * xs[i];
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

/// Geometric grid of `count` points from `first` to `last` inclusive.
inline std::vector<double> geometric_grid(double first, double last, int count) {
  std::vector<double> grid(count);
  const double ratio = std::log(last / first) / (count - 1);
  for (int i = 0; i < count; ++i) grid[i] = first * std::exp(ratio * i);
  grid.back() = last;
  return grid;
}

/// Uniform grid of `count` points from `first` to `last` inclusive.
inline std::vector<double> linear_grid(double first, double last, int count) {
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = first + (last - first) * i / (count - 1);
  grid.back() = last;
  return grid;
}

/// Number of worker threads: HEINS_LAB_THREADS if set, else hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, n) across worker_count() threads. Exceptions
/// thrown by the body are rethrown on the calling thread (first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace heins

#include "heins/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heins {

struct RotationFunction::Spline {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> m;  // second derivatives at knots; natural ends

  Jet eval(double t) const {
    const std::size_t n = x.size();
    if (t >= x.back()) {
      const double h = x[n - 1] - x[n - 2];
      const double slope = (y[n - 1] - y[n - 2]) / h + h * (2.0 * m[n - 1] + m[n - 2]) / 6.0;
      return {y.back() + slope * (t - x.back()), slope, 0.0};
    }
    const auto it = std::upper_bound(x.begin(), x.end(), t);
    const std::size_t i = std::max<std::size_t>(1, static_cast<std::size_t>(it - x.begin())) - 1;
    const double h = x[i + 1] - x[i];
    const double a = (x[i + 1] - t) / h;
    const double b = (t - x[i]) / h;
    Jet j;
    j.value = a * y[i] + b * y[i + 1] + ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) * h * h / 6.0;
    j.d1 = (y[i + 1] - y[i]) / h - (3.0 * a * a - 1.0) * h * m[i] / 6.0 + (3.0 * b * b - 1.0) * h * m[i + 1] / 6.0;
    j.d2 = a * m[i] + b * m[i + 1];
    return j;
  }
};

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw UsageError("rotation json: field '" + field + "' " + why);
}

double number_field(const nlohmann::json& j, const char* name, double fallback, bool required) {
  if (!j.contains(name)) {
    if (required) bad_field(name, "is required");
    return fallback;
  }
  if (!j[name].is_number()) bad_field(name, "must be a number");
  return j[name].get<double>();
}

}  // namespace

RotationFunction RotationFunction::power(double a, double p, double x_min, double offset) {
  if (!(p > 0.0) || !(a >= 0.0)) throw PreconditionError("power family needs a >= 0 and p > 0 (non-decreasing h)");
  if (!(x_min > 0.0)) throw PreconditionError("power family needs x_min > 0");
  RotationFunction rf;
  rf.family_ = Power{a, p};
  rf.x_min_ = x_min;
  rf.offset_ = offset;
  return rf;
}

RotationFunction RotationFunction::sqrt_log(double offset) {
  RotationFunction rf;
  rf.family_ = SqrtLog{};
  rf.x_min_ = 0.0;
  rf.offset_ = offset;
  return rf;
}

RotationFunction RotationFunction::constant(double c) {
  RotationFunction rf;
  rf.family_ = Constant{c};
  rf.x_min_ = 1.0;
  return rf;
}

RotationFunction RotationFunction::table(std::vector<std::array<double, 2>> knots) {
  const std::size_t n = knots.size();
  if (n < 3) throw PreconditionError("table family needs at least 3 knots");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(knots[i][0] > knots[i - 1][0])) throw PreconditionError("table knots must be strictly increasing in x");
    if (knots[i][1] < knots[i - 1][1]) throw PreconditionError("table knots must be non-decreasing in h");
  }
  auto spline = std::make_shared<Spline>();
  for (const auto& k : knots) {
    spline->x.push_back(k[0]);
    spline->y.push_back(k[1]);
  }
  // Natural spline: tridiagonal system for interior second derivatives.
  spline->m.assign(n, 0.0);
  std::vector<double> diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
  const auto& x = spline->x;
  const auto& y = spline->y;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    diag[i] = (h0 + h1) / 3.0;
    upper[i] = h1 / 6.0;
    rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
  }
  // Thomas algorithm on rows 1..n-2 (sub-diagonal entry of row i is h0/6).
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double lower = (x[i] - x[i - 1]) / 6.0;
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    spline->m[i] = (rhs[i] - upper[i] * spline->m[i + 1]) / diag[i];
    if (i == 1) break;
  }
  RotationFunction rf;
  rf.family_ = Table{std::move(knots)};
  rf.x_min_ = spline->x.front();
  rf.spline_ = spline;
  // Interpolant must stay non-decreasing.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (int k = 0; k <= 32; ++k) {
      const double t = x[i] + (x[i + 1] - x[i]) * k / 32.0;
      if (spline->eval(t).d1 < -1e-12) {
        throw PreconditionError("table knots produce a decreasing spline near x = " + std::to_string(t));
      }
    }
  }
  return rf;
}

RotationFunction RotationFunction::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("rotation json: expected an object");
  if (!j.contains("family") || !j["family"].is_string()) bad_field("family", "is required and must be a string");
  const auto family = j["family"].get<std::string>();
  const double offset = number_field(j, "offset", 0.0, false);
  try {
    if (family == "power") {
      return power(number_field(j, "a", 1.0, false), number_field(j, "p", 0.5, true),
                   number_field(j, "x_min", 1.0, false), offset);
    }
    if (family == "sqrt_log") return sqrt_log(offset);
    if (family == "constant") return constant(number_field(j, "c", 0.0, false) + offset);
    if (family == "table") {
      if (!j.contains("knots") || !j["knots"].is_array()) bad_field("knots", "must be an array of [x, h] pairs");
      std::vector<std::array<double, 2>> knots;
      for (const auto& k : j["knots"]) {
        if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
          bad_field("knots", "entries must be [x, h] number pairs");
        }
        knots.push_back({k[0].get<double>(), k[1].get<double>() + offset});
      }
      return table(std::move(knots));
    }
  } catch (const PreconditionError& e) {
    throw UsageError(std::string("rotation json: ") + e.what());
  }
  bad_field("family", "must be one of power | sqrt_log | constant | table");
}

nlohmann::json RotationFunction::to_json() const {
  nlohmann::json j;
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Power>) {
          j = {{"family", "power"}, {"a", f.a}, {"p", f.p}, {"x_min", x_min_}};
          if (offset_ != 0.0) j["offset"] = offset_;
        } else if constexpr (std::is_same_v<F, SqrtLog>) {
          j = {{"family", "sqrt_log"}};
          if (offset_ != 0.0) j["offset"] = offset_;
        } else if constexpr (std::is_same_v<F, Constant>) {
          j = {{"family", "constant"}, {"c", f.c}};
        } else {
          j = {{"family", "table"}, {"knots", f.knots}};
        }
      },
      family_);
  return j;
}

std::string RotationFunction::family_name() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Power>) return "power";
        else if constexpr (std::is_same_v<F, SqrtLog>) return "sqrt_log";
        else if constexpr (std::is_same_v<F, Constant>) return "constant";
        else return "table";
      },
      family_);
}

Jet RotationFunction::family_jet(double x) const {
  return std::visit(
      [&](const auto& f) -> Jet {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Power>) {
          const double v = f.a * std::pow(x, f.p);
          return {v + offset_, f.p * v / x, f.p * (f.p - 1.0) * v / (x * x)};
        } else if constexpr (std::is_same_v<F, SqrtLog>) {
          const double r = std::sqrt(x);
          if (x == 0.0) {
            return {offset_, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
          }
          return {r + offset_, 0.5 / r, -0.25 / (r * x)};
        } else if constexpr (std::is_same_v<F, Constant>) {
          return {f.c, 0.0, 0.0};
        } else {
          return spline_->eval(x);
        }
      },
      family_);
}

Jet RotationFunction::jet(double x) const {
  if (x < x_min_) return {family_jet(x_min_).value, 0.0, 0.0};
  return family_jet(x);
}

RotationFunction RotationFunction::shifted(double delta) const {
  RotationFunction rf = *this;
  if (auto* c = std::get_if<Constant>(&rf.family_)) {
    c->c += delta;
    return rf;
  }
  if (auto* t = std::get_if<Table>(&rf.family_)) {
    for (auto& k : t->knots) k[1] += delta;
    auto spline = std::make_shared<Spline>(*spline_);
    for (auto& y : spline->y) y += delta;
    rf.spline_ = spline;
    return rf;
  }
  rf.offset_ += delta;
  return rf;
}

bool RotatingHalfPlane::contains(Complex z) const {
  if (z == Complex(0.0, 0.0)) throw PreconditionError("the origin is not in any rotating half-plane");
  const double s = rotation_.s(std::abs(z));
  double alpha = std::arg(z);
  alpha += kTwoPi * std::ceil((s - kPi - alpha) / kTwoPi);
  if (alpha <= s - kPi) alpha += kTwoPi;
  return s < alpha && alpha < s + kPi;
}

namespace {

template <typename F>
double integrate_from_xmin(const RotationFunction& rf, double upper, const F& integrand) {
  const double lo = rf.x_min();
  if (!(upper > lo)) throw PreconditionError("integration bound must exceed x_min");
  if (!std::isfinite(integrand(lo)) || !std::isfinite(integrand(upper))) {
    throw NumericError("non-finite integrand sample at an endpoint of [x_min, X]");
  }
  // Break points: table knots, then geometric segments so each piece is well scaled.
  std::vector<double> cuts{lo};
  if (const auto* t = std::get_if<RotationFunction::Table>(&rf.family())) {
    for (const auto& k : t->knots) {
      if (k[0] > lo && k[0] < upper) cuts.push_back(k[0]);
    }
  }
  double next = std::max(lo, 1.0) * 4.0;
  while (next < upper) {
    cuts.push_back(next);
    next *= 4.0;
  }
  cuts.push_back(upper);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto r = integrate(integrand, cuts[i], cuts[i + 1], 1e-11, 1e-300, 2000);
    if (!r.converged && r.error > 1e-8 * std::abs(r.value) + 1e-300) {
      throw NumericError("quadrature did not reach 1e-8 relative accuracy on [" + std::to_string(cuts[i]) + ", " +
                         std::to_string(cuts[i + 1]) + "]");
    }
    total += r.value;
  }
  return total;
}

TailFit tail_fit(const RotationFunction& rf, const ClassifyOptions& opt, bool second_derivative) {
  auto integrand = [&](double x) {
    const Jet j = rf.jet(x);
    return second_derivative ? std::abs(j.d2) : j.d1 * j.d1;
  };
  TailFit fit;
  try {
    fit.head = integrate_from_xmin(rf, opt.first_window, integrand);
  } catch (const NumericError& e) {
    fit.head_finite = false;
    fit.head = std::numeric_limits<double>::infinity();
    fit.note = e.what();
  }
  double start = opt.first_window;
  bool all_zero = true;
  std::vector<double> lx, ly;
  for (int k = 0; k < opt.windows; ++k) {
    const auto r = integrate(integrand, start, 2.0 * start, 1e-11, 1e-300, 2000);
    fit.window_starts.push_back(start);
    fit.increments.push_back(r.value);
    if (r.value > 1e-300) {
      all_zero = false;
      lx.push_back(std::log(start));
      ly.push_back(std::log(r.value));
    }
    start *= 2.0;
  }
  if (all_zero) {
    fit.exponent = std::numeric_limits<double>::infinity();
    fit.residual = 0.0;
    fit.converges = fit.head_finite;
    fit.diverges = !fit.head_finite;
    return fit;
  }
  if (lx.size() < 3) {
    fit.note += (fit.note.empty() ? "" : "; ") + std::string("too few nonzero increments to fit");
    fit.diverges = !fit.head_finite;
    return fit;
  }
  const LineFit line = fit_line(lx, ly);
  fit.exponent = -line.slope;
  fit.residual = line.rms_residual;
  const bool clean = fit.residual < opt.fit_residual;
  fit.converges = fit.head_finite && clean && fit.exponent > opt.decay_exponent;
  fit.diverges = !fit.head_finite || (clean && fit.exponent <= opt.decay_exponent);
  return fit;
}

}  // namespace

double sqint(const RotationFunction& rf, double upper) {
  return integrate_from_xmin(rf, upper, [&](double x) {
    const double d = rf.jet(x).d1;
    return d * d;
  });
}

double habs2_int(const RotationFunction& rf, double upper) {
  return integrate_from_xmin(rf, upper, [&](double x) { return std::abs(rf.jet(x).d2); });
}

double sqrtlog_limsup_probe_log(const RotationFunction& rf, std::span<const double> x_grid) {
  if (x_grid.empty()) throw PreconditionError("probe grid is empty");
  for (std::size_t i = 1; i < x_grid.size(); ++i) {
    if (!(x_grid[i] > x_grid[i - 1])) throw PreconditionError("probe grid must be increasing");
  }
  double best = 0.0;
  for (std::size_t i = x_grid.size() / 2; i < x_grid.size(); ++i) {
    const double x = x_grid[i];
    if (x <= 0.0) continue;
    best = std::max(best, rf.h(x) / std::sqrt(x));
  }
  return best;
}

double sqrtlog_limsup_probe(const RotationFunction& rf, std::span<const double> r_grid) {
  if (r_grid.empty() || r_grid.back() < 1e6) throw PreconditionError("probe grid must reach r = 1e6");
  std::vector<double> xs;
  xs.reserve(r_grid.size());
  for (double r : r_grid) xs.push_back(std::log(r));
  return sqrtlog_limsup_probe_log(rf, xs);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::constructible: return "constructible";
    case Verdict::constant_only_regular: return "constant_only_regular";
    case Verdict::constant_only_sqrtlog: return "constant_only_sqrtlog";
    case Verdict::undetermined: return "undetermined";
  }
  return "undetermined";
}

Classification classify(const RotationFunction& rf, const ClassifyOptions& opt) {
  Classification out;
  auto& ev = out.evidence;
  ev.sqint_tail = tail_fit(rf, opt, false);
  ev.habs2_tail = tail_fit(rf, opt, true);
  ev.x_max = ev.sqint_tail.window_starts.back() * 2.0;
  ev.hprime_at_xmax = rf.dh(ev.x_max);
  ev.hprime_decreasing = true;
  double prev = std::numeric_limits<double>::infinity();
  for (double x : ev.sqint_tail.window_starts) {
    const double d = rf.dh(x);
    if (d > prev * (1.0 + 1e-12) + 1e-300) ev.hprime_decreasing = false;
    prev = d;
  }
  if (ev.hprime_at_xmax > prev * (1.0 + 1e-12) + 1e-300) ev.hprime_decreasing = false;
  const auto probe_grid = geometric_grid(opt.probe_x_first, opt.probe_x_last, opt.probe_points);
  ev.sqrtlog_probe = sqrtlog_limsup_probe_log(rf, probe_grid);

  ev.constructible_gate =
      ev.sqint_tail.converges && std::abs(ev.hprime_at_xmax) < opt.hprime_tolerance && ev.hprime_decreasing;
  ev.regular_gate = ev.sqint_tail.diverges && ev.habs2_tail.converges;
  ev.sqrtlog_gate = ev.sqrtlog_probe > opt.sqrtlog_threshold;

  if (ev.constructible_gate) {
    out.verdict = (ev.regular_gate || ev.sqrtlog_gate) ? Verdict::undetermined : Verdict::constructible;
  } else if (ev.regular_gate) {
    out.verdict = Verdict::constant_only_regular;
  } else if (ev.sqrtlog_gate) {
    out.verdict = Verdict::constant_only_sqrtlog;
  }
  return out;
}

namespace {
nlohmann::json tail_json(const TailFit& t) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
  };
  return {{"head", num(t.head)},       {"head_finite", t.head_finite}, {"exponent", num(t.exponent)},
          {"residual", t.residual},    {"converges", t.converges},     {"diverges", t.diverges},
          {"increments", t.increments}, {"window_starts", t.window_starts}, {"note", t.note}};
}
}  // namespace

nlohmann::json to_json(const Classification& c) {
  const auto& ev = c.evidence;
  return {{"verdict", to_string(c.verdict)},
          {"evidence",
           {{"sqint", tail_json(ev.sqint_tail)},
            {"habs2", tail_json(ev.habs2_tail)},
            {"x_max", ev.x_max},
            {"hprime_at_xmax", ev.hprime_at_xmax},
            {"hprime_decreasing", ev.hprime_decreasing},
            {"sqrtlog_probe", ev.sqrtlog_probe},
            {"constructible_gate", ev.constructible_gate},
            {"regular_gate", ev.regular_gate},
            {"sqrtlog_gate", ev.sqrtlog_gate}}}};
}

}  // namespace heins

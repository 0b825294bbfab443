#include "criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "heins/circle_scan.hpp"
#include "heins/construction.hpp"
#include "heins/harmonic_measure.hpp"
#include "heins/rotation.hpp"
#include "heins/strip_map.hpp"
#include "oracles.hpp"

namespace heins::acceptance {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

RotationFunction quarter_power() { return RotationFunction::power(1.0, 0.25); }
RotationFunction root_power() { return RotationFunction::power(1.0, 0.5, 1.0); }

// Criterion 1: two-arcs exactness on (e^z, e^{-z}).
bool two_arcs_exactness(json& d) {
  const FunctionPair pair = exp_pair();
  const int n = 4096;
  bool ok = true;
  for (double R : {1.0, 10.0, 100.0, 1000.0}) {
    const ArcSet arcs = scan_circle(pair, R, n);
    const double width = arcs.boundary_width();
    double err = 0.0;
    const auto expect = [&](const std::vector<double>& b) {
      if (b.size() != 2) return kInf;
      std::vector<double> s = b;
      std::sort(s.begin(), s.end());
      return std::max(std::abs(s[0] - kPi / 2), std::abs(s[1] - 1.5 * kPi));
    };
    err = std::max(expect(arcs.f_boundaries), expect(arcs.g_boundaries));
    const double mu = longest_arc_fraction(arcs, Member::f), mv = longest_arc_fraction(arcs, Member::g);
    const bool row_ok = err <= width && std::abs(mu - 0.5) <= 2.0 / n && std::abs(mv - 0.5) <= 2.0 / n;
    d["circles"].push_back({{"R", R}, {"boundary_error", err}, {"boundary_tolerance", width}, {"m_u", mu}, {"m_v", mv},
                            {"m_tolerance", 2.0 / n}, {"pass", row_ok}});
    ok = ok && row_ok;
  }
  const GrowthProfile prof = lemma1_profile(pair, 6.0, 120, n);
  double integral = 0.0;
  for (std::size_t i = 1; i < prof.tau.size(); ++i) {
    if (prof.tau[i - 1] < 0.05 - 1e-12) continue;
    const double a = 0.5 * (prof.eta_u[i - 1] + prof.eta_v[i - 1]) - 2.0;
    const double b = 0.5 * (prof.eta_u[i] + prof.eta_v[i]) - 2.0;
    integral += 0.5 * (prof.tau[i] - prof.tau[i - 1]) * (a + b);
  }
  const bool defect_ok = std::abs(integral) < 0.01;
  d["defect_integral"] = {{"tau_range", {0.05, 6.0}}, {"value", integral}, {"limit", 0.01}, {"pass", defect_ok}};
  return ok && defect_ok;
}

// Criterion 2: the reciprocal-sum constant delta(eps) and the random property test.
bool reciprocal_sum(json& d) {
  bool exact = true;
  for (double eps : {0.01, 0.1, 0.25, 0.4, 0.49, 0.5}) {
    const double expected = std::min(4.0 / (1.0 - eps * eps) - 4.0, 4.0 / (1.0 - eps) - 4.0);
    const double got = lemma3_delta(eps);
    exact = exact && got == expected;
    d["formula"].push_back({{"eps", eps}, {"delta", got}, {"expected", expected}});
  }
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int tested = 0, violations = 0;
  double worst_margin = kInf;
  while (tested < 10000) {
    const double eps = 0.5 * (1e-3 + (1.0 - 2e-3) * unit(rng));
    const double x = unit(rng), y = unit(rng) * (1.0 - x);
    if (!(x > 0.0 && y > 0.0) || !(std::abs(x - 0.5) > eps)) continue;
    ++tested;
    const double margin = 1.0 / x + 1.0 / y - 4.0 - lemma3_delta(eps);
    worst_margin = std::min(worst_margin, margin);
    if (!(margin > 0.0)) ++violations;
  }
  d["property"] = {{"samples", tested}, {"violations", violations}, {"min_margin", worst_margin}, {"seed", 20240501}};
  d["formula_exact"] = exact;
  return exact && violations == 0;
}

// Criterion 3: m_u + m_v <= 1 on the canonical and the constructed pair.
bool m_sum(json& d) {
  int circles = 0, violations = 0;
  double worst = -kInf;
  const auto scan = [&](const FunctionPair& pair, const std::vector<double>& radii, int n, const char* label) {
    std::vector<double> sums(radii.size());
    parallel_for(radii.size(), [&](std::size_t k) {
      const ArcSet arcs = scan_circle(pair, radii[k], n);
      const double mu = longest_arc_fraction(arcs, Member::f), mv = longest_arc_fraction(arcs, Member::g);
      sums[k] = mu + mv;
    });
    double local = -kInf;
    for (double s : sums) {
      ++circles;
      local = std::max(local, s);
      if (!(s <= 1.0 + 2.0 / n)) ++violations;
    }
    worst = std::max(worst, local);
    d["pairs"].push_back({{"pair", label}, {"circles", radii.size()}, {"n", n}, {"max_sum", local},
                          {"limit", 1.0 + 2.0 / n}});
  };
  scan(exp_pair(), geometric_grid(0.1, 1000.0, 100), 4096, "exp");
  const auto cf = ConstructedFunction::build(quarter_power());
  const auto pair = reflected_pair(
      "constructed", [&cf](Complex z) { return cf.eval_f(z).value.log_abs; }, 0.2);
  scan(pair, geometric_grid(1.0, 1000.0, 100), 512, "constructed");
  d["circles"] = circles;
  d["violations"] = violations;
  d["max_sum"] = worst;
  return circles >= 200 && violations == 0;
}

// Criterion 4: harmonic measure calibration.
bool hm_calibration(json& d) {
  bool ok = true;
  const auto disk = wos_disk(Complex(0.0, 0.0), 0.0, kPi, {100000, 1e-4, 7});
  const bool disk_ok = std::abs(disk.omega - 0.5) <= 0.01;
  d["disk"] = {{"omega", disk.omega}, {"stderr", disk.std_error}, {"walks", disk.walks}, {"tolerance", 0.01},
               {"pass", disk_ok}};
  ok = ok && disk_ok;

  const std::vector<std::tuple<double, double, double>> rects{
      {2.0, 1.0, kPi / 2}, {3.0, 2.0, 1.0}, {5.0, 4.0, 2.0}, {8.0, 7.0, kPi / 2}, {10.0, 9.0, 0.8}};
  std::uint64_t seed = 100;
  for (auto [L, x, y] : rects) {
    const auto w = wos_measure(LogDomain(RotationFunction::constant(0.0), L), Complex(x, y), {100000, 1e-4, ++seed});
    const double series = oracle::rectangle_series(L, x, y);
    const bool row_ok = std::abs(w.omega - series) <= 3.0 * w.std_error;
    d["rectangles"].push_back({{"L", L}, {"x0", x}, {"y0", y}, {"omega", w.omega}, {"stderr", w.std_error},
                               {"series", series}, {"seed", seed}, {"pass", row_ok}});
    ok = ok && row_ok;
  }

  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int failures = 0;
  for (int k = 0; k < 20; ++k) {
    const double a = 0.2 + 1.8 * unit(rng), p = 0.3 + 0.7 * unit(rng), t = 2.0 + 4.0 * unit(rng);
    const LogDomain cap(RotationFunction::power(a, p, 1.0), t);
    const double a0 = 0.3 + (t - 1.3) * unit(rng);
    const Complex z0(a0, cap.lower(a0) + kPi * (0.2 + 0.6 * unit(rng)));
    const auto r = hm_problem(cap, z0, {100000, 1e-4, 1000 + static_cast<std::uint64_t>(k)});
    if (!r.pass) ++failures;
    json row = to_json(r);
    row["a"] = a;
    row["p"] = p;
    row["t"] = t;
    row["z0"] = {z0.real(), z0.imag()};
    d["caps"].push_back(row);
  }
  d["cap_failures"] = failures;
  return ok && failures == 0;
}

// Criterion 5: decay bound for h(a) = sqrt(a), c = 1.
bool decay(json& d) {
  const auto rf = root_power();
  const auto tk = build_tk(rf, 1.0, 1e12, 1.0);
  bool valid = !tk.t.empty();
  for (std::size_t k = 0; k < tk.t.size(); ++k) {
    valid = valid && rf.h(tk.t[k]) >= std::sqrt(tk.t[k]) * (1.0 - 1e-12);
    if (k > 0) valid = valid && rf.h(tk.t[k]) / 2.0 > rf.h(tk.t[k - 1]) + kPi + 1.0 / 8.0;
  }
  d["t_k"] = tk.t;
  d["t_k_valid"] = valid;
  const double C = 1.0;
  const int n_star = decay_n_star(tk, C);
  const double at_star = decay_bound_sup(tk, C, n_star);
  d["n_star"] = n_star;
  d["bound_at_n_star"] = at_star;
  d["bound_before_n_star"] = n_star > 0 ? decay_bound_sup(tk, C, n_star - 1) : 8.0 / kPi;
  const int closed_n = static_cast<int>(std::ceil(8.0 * (tk.t.front() + std::log(1e6 * kPi / 8.0) / kTwoPi) / (tk.c * tk.c)));
  d["closed_form_n"] = {{"n", closed_n}, {"bound_sup", decay_bound_sup(tk, C, closed_n)}};
  bool decreasing = true;
  for (int n = 1; n <= n_star; ++n) decreasing = decreasing && decay_bound_sup(tk, C, n) < decay_bound_sup(tk, C, n - 1);
  d["decreasing_in_n"] = decreasing;

  std::vector<double> grid;
  for (double t = 2.0; t <= 20.0 + 1e-9; t += 2.0) grid.push_back(t);
  const Complex z0(1.0, rf.h(1.0) + kPi / 2);
  const auto rows = u_decay(rf, tk, C, grid, z0, {100000, 1e-4, 5});
  bool mc_ok = true;
  for (const auto& r : rows) {
    d["monte_carlo"].push_back(
        {{"t", r.t}, {"n", r.n}, {"bound", r.bound}, {"mc", r.mc}, {"mc_stderr", r.mc_stderr}, {"pass", r.ok}});
    mc_ok = mc_ok && r.ok;
  }
  return valid && at_star < 1e-6 && decreasing && mc_ok;
}

// Criterion 6: Warschawski window.
bool warschawski(json& d) {
  bool ok = true;
  const auto straight = solve_strip_map(StripProfile::straight(0.0), 40.0, {64});
  const std::vector<std::pair<double, double>> flat_windows{{1.0, 11.0}, {2.0, 25.0}, {5.0, 30.0}};
  const auto flat = check_windows(straight, flat_windows, 1e-6);
  for (const auto& r : flat.rows) {
    const double err = std::abs(r.x_diff - (r.u2 - r.u1));
    const bool row_ok = err < 1e-6 && r.iiia_ok && r.iva_ok && r.vi_ok;
    d["straight"].push_back({{"u1", r.u1}, {"u2", r.u2}, {"x_diff", r.x_diff}, {"error", err}, {"iiia", r.iiia},
                             {"iva", r.iva}, {"vi", r.vi}, {"pass", row_ok}});
    ok = ok && row_ok;
  }

  const auto profile = StripProfile::construction(quarter_power(), std::log(10.0));
  const std::vector<std::pair<double, double>> windows{{5.0, 15.0}, {5.0, 30.0}, {5.0, 60.0},  {10.0, 40.0},
                                                       {20.0, 60.0}, {30.0, 60.0}, {40.0, 60.0}};
  const double vi_slack = 1.0;
  for (int mesh : {64, 128, 256}) {
    const auto map = solve_strip_map(profile, 70.0, {mesh});
    const auto rep = check_windows(map, windows, vi_slack);
    bool mesh_ok = rep.vi_applicable && rep.iiia_slack <= 4.0 * kPi;
    json rows = json::array();
    for (const auto& r : rep.rows) {
      mesh_ok = mesh_ok && r.iva_ok && r.vi_ok && r.iiia_ok;
      rows.push_back({{"u1", r.u1}, {"u2", r.u2}, {"x_diff", r.x_diff}, {"iiia", r.iiia}, {"iva", r.iva},
                      {"vi", r.vi}, {"iiia_ok", r.iiia_ok}, {"iva_ok", r.iva_ok}, {"vi_ok", r.vi_ok}});
    }
    d["construction"].push_back({{"mesh", mesh}, {"m", rep.m}, {"iiia_slack", rep.iiia_slack},
                                 {"iiia_slack_limit", 4.0 * kPi}, {"vi_slack", rep.vi_slack},
                                 {"vi_allowance", vi_slack}, {"cr_residual", map.cr_residual()}, {"rows", rows},
                                 {"pass", mesh_ok}});
    ok = ok && mesh_ok;
  }
  return ok;
}

// Criterion 7: construction end-to-end for h(x) = x^{1/4}.
bool construction(json& d) {
  const auto rf = quarter_power();
  const auto cf = ConstructedFunction::build(rf);
  d["map_error"] = cf.map_error();
  d["nodes"] = cf.node_count();

  // (a) boundary smallness
  double head = -kInf, tail = -kInf;
  for (double r : geometric_grid(10.0, 1e5, 400)) {
    const double u = std::log(r);
    for (double a : {cf.profile().phi_minus(u).value, cf.profile().phi_plus(u).value}) {
      const double excess = cf.eval_g(std::polar(r, a)).log_abs + 2.0 * u;
      (r < 1e3 ? head : tail) = std::max(r < 1e3 ? head : tail, excess);
    }
  }
  const double u0 = std::log(10.0);
  for (double a : linear_grid(cf.profile().phi_minus(u0).value, cf.profile().phi_plus(u0).value, 200)) {
    head = std::max(head, cf.eval_g(std::polar(10.0, a)).log_abs + 2.0 * u0);
  }
  const double log_c2 = std::max(head, cf.boundary_log_excess());
  const bool a_ok = std::isfinite(log_c2) && tail <= log_c2 + 1e-9;
  d["a_boundary"] = {{"log_C2", log_c2}, {"max_excess_r_lt_1e3", head}, {"max_excess_r_ge_1e3", tail}, {"pass", a_ok}};

  // (b) deformation invariance
  bool b_ok = true;
  for (double r : {12.0, 20.0, 30.0, 40.0, 50.0}) {
    for (double a : {0.3, 2.0, 4.1, 5.5}) {
      const Complex z = std::polar(r, a);
      const auto e2 = cf.eval_f_deformed(z, 2.0 * r);
      const auto e4 = cf.eval_f_deformed(z, 4.0 * r);
      const double gap = std::abs(e2.value.value() - e4.value.value());
      const double tol = cf.deformation_tolerance(z, 2.0 * r, 4.0 * r) + e2.error + e4.error;
      const bool row_ok = gap <= tol;
      b_ok = b_ok && row_ok;
      d["b_deformation"].push_back({{"z", {z.real(), z.imag()}}, {"gap", gap}, {"tolerance", tol},
                                    {"tail", 2.0 * cf.tail_bound(z, cf.options().r_cache)}, {"pass", row_ok}});
    }
  }

  // (c) boundedness on Omega_s
  const auto dist = dist_omega_to_omegas(rf);
  const double l1 = cf.boundary_l1();
  const double bound = l1 / (kTwoPi * dist.distance);
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> pts(500);
  for (auto& z : pts) {
    const double r = std::exp(std::log(1e4) * unit(rng));
    z = std::polar(r, rf.s(r) + kPi * (0.01 + 0.98 * unit(rng)));
  }
  std::vector<double> mods(pts.size());
  parallel_for(pts.size(), [&](std::size_t k) { mods[k] = std::exp(cf.eval_f(pts[k]).value.log_abs); });
  const double sup = *std::max_element(mods.begin(), mods.end());
  const RotatingHalfPlane half(rf);
  bool inside = true;
  for (const auto& z : pts) inside = inside && half.contains(z);
  const bool c_ok = inside && dist.disjoint && sup <= bound;
  d["c_omega_s"] = {{"samples", pts.size()}, {"sup_abs_f", sup}, {"bound", bound}, {"epsilon", dist.distance},
                    {"epsilon_radius", dist.at_radius}, {"epsilon_analytic", dist.analytic_bound},
                    {"boundary_l1", l1}, {"seed", 777}, {"pass", c_ok}};

  // (d) growth along Gamma
  const std::vector<double> rs{50.0, 100.0, 200.0, 400.0};
  const auto gc = gamma_curve(cf, rs);
  std::vector<double> logs;
  for (std::size_t k = 0; k < rs.size(); ++k) logs.push_back(cf.eval_f(std::polar(rs[k], gc.t[k])).value.log_abs);
  bool increasing = true;
  for (std::size_t k = 1; k < logs.size(); ++k) increasing = increasing && logs[k] > logs[k - 1];
  const double slope = growth_fit(rs, logs).slope;
  const bool d_ok = increasing && slope > 0.0;
  d["d_gamma"] = {{"r", rs}, {"log_abs_f", logs}, {"t", gc.t}, {"residual", gc.residual}, {"slope", slope},
                  {"pass", d_ok}};

  // (e) exponential type
  const auto log_f = [&cf](Complex z) { return cf.eval_f(z).value.log_abs; };
  const double short_grid = exp_type_estimate(log_f, {200.0, 400.0, 800.0});
  const double long_grid = exp_type_estimate(log_f, {200.0, 400.0, 800.0, 1600.0});
  const double change = std::abs(long_grid - short_grid) / short_grid;
  const bool e_ok = std::isfinite(short_grid) && std::isfinite(long_grid) && change < 0.25;
  d["e_exp_type"] = {{"grid_short", short_grid}, {"grid_long", long_grid}, {"relative_change", change},
                     {"limit", 0.25}, {"pass", e_ok}};
  return a_ok && b_ok && c_ok && d_ok && e_ok;
}

// Criterion 8: classification table.
bool classification(json& d) {
  const std::vector<std::pair<RotationFunction, Verdict>> cases{
      {quarter_power(), Verdict::constructible},
      {RotationFunction::sqrt_log(), Verdict::constant_only_sqrtlog},
      {RotationFunction::power(1.0, 0.5), Verdict::constant_only_regular}};
  bool ok = true;
  for (const auto& [rf, expected] : cases) {
    const auto c = classify(rf);
    const bool row_ok = c.verdict == expected;
    d["rows"].push_back({{"rotation", rf.to_json()}, {"verdict", to_string(c.verdict)},
                         {"expected", to_string(expected)}, {"pass", row_ok}});
    ok = ok && row_ok;
  }
  return ok;
}

struct Entry {
  const char* name;
  double budget;
  bool (*run)(json&);
};

const Entry kEntries[kCriteria] = {
    {"two-arcs exactness", 10.0, two_arcs_exactness},
    {"reciprocal-sum constant", 60.0, reciprocal_sum},
    {"m-sum bound", 600.0, m_sum},
    {"harmonic measure calibration", 120.0, hm_calibration},
    {"decay bound", 120.0, decay},
    {"warschawski window", 300.0, warschawski},
    {"construction end-to-end", 600.0, construction},
    {"classification table", 5.0, classification},
};

}  // namespace

CriterionResult run_criterion(int id) {
  if (id < 1 || id > kCriteria) throw PreconditionError("criterion id out of range");
  const Entry& e = kEntries[id - 1];
  CriterionResult r;
  r.id = id;
  r.name = e.name;
  r.budget_seconds = e.budget;
  r.details = json::object();
  const auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = e.run(r.details);
  } catch (const std::exception& ex) {
    r.details["error"] = ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.pass = ok && r.seconds < r.budget_seconds;
  return r;
}

std::vector<CriterionResult> run_all() {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) out.push_back(run_criterion(id));
  return out;
}

nlohmann::json to_json(const CriterionResult& r) {
  return {{"id", r.id},
          {"name", r.name},
          {"pass", r.pass},
          {"runtime_budget_seconds", r.budget_seconds},
          {"details", r.details}};
}

}  // namespace heins::acceptance

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "acceptance/criteria.hpp"
#include "heins/circle_scan.hpp"
#include "heins/construction.hpp"
#include "heins/harmonic_measure.hpp"
#include "heins/rotation.hpp"
#include "heins/strip_map.hpp"
#include "svg.hpp"

#ifndef HEINS_VERSION
#define HEINS_VERSION "0.0.0"
#endif

using namespace heins;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json parse_json_arg(const std::string& text, const char* what) {
  std::string body = text;
  if (!text.empty() && text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw UsageError(std::string(what) + ": cannot read " + text.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string(what) + ": invalid JSON (" + e.what() + ")");
  }
}

RotationFunction rotation_arg(const std::string& text) { return RotationFunction::from_json(parse_json_arg(text, "--rotation")); }

Complex complex_arg(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError(std::string(what) + " expects a,b");
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + " expects two numbers a,b");
  }
}

std::vector<std::pair<double, double>> windows_arg(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("--windows expects u1:u2 pairs separated by commas");
    try {
      out.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw UsageError("--windows expects numeric u1:u2 pairs");
    }
    if (!(out.back().second > out.back().first)) throw UsageError("--windows needs u2 > u1");
  }
  return out;
}

void emit(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  return out;
}

// ---- classify ----
struct ClassifyArgs {
  std::string rotation;
};

void run_classify(const ClassifyArgs& a) {
  const auto rf = rotation_arg(a.rotation);
  json j = to_json(classify(rf));
  j["rotation"] = rf.to_json();
  emit(j, "");
}

// ---- scan ----
struct ScanArgs {
  std::string pair = "exp";
  std::string rotation = R"({"family":"power","a":1,"p":0.25})";
  double tau_max = 6.0;
  int steps = 120;
  int n = 1024;
  double eps = 0.2;
  std::string csv, svg;
};

void run_scan(const ScanArgs& a) {
  FunctionPair pair;
  std::unique_ptr<ConstructedFunction> cf;
  if (a.pair == "exp") {
    pair = exp_pair();
  } else if (a.pair == "same-exp") {
    pair = same_exp_pair();
  } else if (a.pair == "constant") {
    pair = constant_pair(0.5, 0.5);
  } else if (a.pair == "constructed") {
    cf = std::make_unique<ConstructedFunction>(ConstructedFunction::build(rotation_arg(a.rotation)));
    const ConstructedFunction* p = cf.get();
    pair = reflected_pair("constructed", [p](Complex z) { return p->eval_f(z).value.log_abs; }, 0.2);
  } else {
    throw UsageError("--pair must be exp | same-exp | constant | constructed");
  }
  const GrowthProfile prof = lemma1_profile(pair, a.tau_max, a.steps, a.n);
  const TwoArcsReport arcs = two_arcs_check(pair, prof.tau, a.eps, a.n);
  json summary{{"pair", pair.name},       {"n", a.n},
               {"tau_max", a.tau_max},    {"steps", a.steps},
               {"eps", a.eps},            {"applicable", prof.applicable},
               {"note", prof.note},       {"witnessed_constant", prof.witnessed_constant},
               {"failing_measure", arcs.failing_measure}};
  double worst_sum = 0.0;
  for (std::size_t i = 0; i < prof.tau.size(); ++i) {
    worst_sum = std::max(worst_sum, prof.m_u[i] + prof.m_v[i]);
  }
  summary["max_m_sum"] = worst_sum;
  summary["m_sum_limit"] = 1.0 + 2.0 / a.n;
  summary["m_sum_pass"] = worst_sum <= 1.0 + 2.0 / a.n;
  try {
    const auto d = defect_integral(prof, defect_floor_for_resolution(a.n));
    summary["defect_integral"] = {{"value", d.value}, {"tau_start", d.tau_start}, {"min_integrand", d.min_integrand}};
  } catch (const Error& e) {
    summary["defect_integral"] = {{"error", e.what()}};
  }
  if (!a.csv.empty()) {
    auto out = open_out(a.csv);
    out << "tau,m_u,m_v,eta_u,eta_v,lhs,rhs,two_arcs_pass,B_measure\n";
    for (std::size_t i = 0; i < prof.tau.size(); ++i) {
      out << fmt(prof.tau[i]) << ',' << fmt(prof.m_u[i]) << ',' << fmt(prof.m_v[i]) << ',' << fmt(prof.eta_u[i])
          << ',' << fmt(prof.eta_v[i]) << ',' << fmt(prof.lhs[i]) << ',' << fmt(prof.rhs[i]) << ','
          << (arcs.rows[i].pass ? 1 : 0) << ',' << fmt(arcs.rows[i].b_measure) << '\n';
    }
  }
  if (!a.svg.empty()) {
    svg::Plot plot("longest-arc fractions, " + pair.name, "tau", "m");
    std::vector<std::pair<double, double>> mu, mv, sum;
    for (std::size_t i = 0; i < prof.tau.size(); ++i) {
      const double u = std::isfinite(prof.m_u[i]) ? prof.m_u[i] : 1.0;
      const double v = std::isfinite(prof.m_v[i]) ? prof.m_v[i] : 1.0;
      mu.emplace_back(prof.tau[i], u);
      mv.emplace_back(prof.tau[i], v);
      sum.emplace_back(prof.tau[i], u + v);
    }
    plot.polyline(mu, "#1f77b4", "m_u");
    plot.polyline(mv, "#d62728", "m_v");
    plot.polyline(sum, "#2ca02c", "m_u + m_v");
    plot.include(0.0, 0.0);
    plot.include(0.0, 1.05);
    plot.write(a.svg);
  }
  emit(summary, "");
}

// ---- stripmap-check ----
struct StripArgs {
  std::string profile = "construction";
  std::string rotation = R"({"family":"power","a":1,"p":0.25})";
  double u_min = std::log(10.0);
  double u_max = 70.0;
  int mesh = 128;
  std::string windows = "5:15,5:30,5:60,10:40,20:60,30:60,40:60";
  double vi_slack = 1.0;
  std::string csv, svg;
};

void run_stripmap(const StripArgs& a) {
  StripProfile profile;
  if (a.profile == "straight") {
    profile = StripProfile::straight(a.u_min);
  } else if (a.profile == "construction") {
    profile = StripProfile::construction(rotation_arg(a.rotation), a.u_min);
  } else if (a.profile == "band") {
    profile = StripProfile::rotation_band(rotation_arg(a.rotation), a.u_min);
  } else {
    throw UsageError("--profile must be straight | construction | band");
  }
  const auto map = solve_strip_map(profile, a.u_max, {a.mesh});
  const auto rep = check_windows(map, windows_arg(a.windows), a.vi_slack);
  bool all_ok = true;
  for (const auto& r : rep.rows) all_ok = all_ok && r.iiia_ok && r.iva_ok && (!rep.vi_applicable || r.vi_ok);
  json summary{{"profile", profile.name},
               {"u_min", profile.u_min},
               {"u_max", a.u_max},
               {"mesh", a.mesh},
               {"m", rep.m},
               {"x0", std::isfinite(rep.x0) ? json(rep.x0) : json(nullptr)},
               {"iiia_slack", rep.iiia_slack},
               {"iiia_slack_limit", 4.0 * kPi},
               {"vi_applicable", rep.vi_applicable},
               {"vi_slack", rep.vi_slack},
               {"vi_allowance", a.vi_slack},
               {"cr_residual", map.cr_residual()},
               {"solve_residual", map.solve_residual()},
               {"core_monotone", map.core_monotone()},
               {"pass", all_ok}};
  if (!a.csv.empty()) {
    auto out = open_out(a.csv);
    out << "u1,u2,x_diff,IIIa,IVa,VI,IIIa_ok,IVa_ok,VI_ok\n";
    for (const auto& r : rep.rows) {
      out << fmt(r.u1) << ',' << fmt(r.u2) << ',' << fmt(r.x_diff) << ',' << fmt(r.iiia) << ',' << fmt(r.iva) << ','
          << (rep.vi_applicable ? fmt(r.vi) : std::string("nan")) << ',' << r.iiia_ok << ',' << r.iva_ok << ','
          << r.vi_ok << '\n';
    }
  }
  if (!a.svg.empty()) {
    svg::Plot plot("core curve of the strip map, " + profile.name, "u", "X(u + i psi(u)) - (u - u_min)");
    std::vector<std::pair<double, double>> core, lower, upper;
    for (double u : linear_grid(profile.u_min + 0.5, a.u_max - 0.5, 400)) {
      const double shift = u - profile.u_min;
      core.emplace_back(u, map.core_x(u) - shift);
      lower.emplace_back(u, map.boundary_x(u, -1) - shift);
      upper.emplace_back(u, map.boundary_x(u, 1) - shift);
    }
    plot.polyline(core, "#1f77b4", "core");
    plot.polyline(lower, "#d62728", "phi_- side");
    plot.polyline(upper, "#2ca02c", "phi_+ side");
    plot.write(a.svg);
  }
  emit(summary, "");
}

// ---- construct ----
struct ConstructArgs {
  std::string rotation = R"({"family":"power","a":1,"p":0.25})";
  double r_cache = 1e6;
  int mesh = 128;
  double u_max = 40.0;
  std::string z;
  std::string csv, svg;
  int samples = 500;
  std::uint64_t seed = 777;
};

ConstructedFunction build_from(const ConstructArgs& a) {
  ConstructionOptions o;
  o.r_cache = a.r_cache;
  o.mesh = a.mesh;
  o.u_max = a.u_max;
  return ConstructedFunction::build(rotation_arg(a.rotation), o);
}

json eval_json(const ConstructedFunction& cf, Complex z) {
  const auto f = cf.eval_f(z);
  json j{{"z", {z.real(), z.imag()}}, {"log_abs", f.value.log_abs}, {"arg", f.value.arg},
         {"error", f.error},          {"tail", f.tail},             {"branch", f.branch}};
  if (f.value.log_abs < 700.0) {
    const Complex v = f.value.value();
    j["value"] = {v.real(), v.imag()};
  }
  return j;
}

void run_construct_manifest(const ConstructArgs& a) {
  const auto cf = build_from(a);
  const auto dist = dist_omega_to_omegas(cf.rotation());
  const std::vector<double> rs{50.0, 100.0, 200.0, 400.0};
  const auto gc = gamma_curve(cf, rs);
  std::vector<double> logs;
  for (std::size_t k = 0; k < rs.size(); ++k) logs.push_back(cf.eval_f(std::polar(rs[k], gc.t[k])).value.log_abs);
  const double l1 = cf.boundary_l1();
  json j{{"rotation", cf.rotation().to_json()},
         {"R_cut", cf.options().r_cache},
         {"r_floor", cf.options().r_floor},
         {"growth_scale", cf.options().growth_scale},
         {"mesh", cf.options().mesh},
         {"u_max", cf.options().u_max},
         {"nodes", cf.node_count()},
         {"map_error", cf.map_error()},
         {"max_slope", cf.max_slope()},
         {"epsilon", dist.distance},
         {"epsilon_radius", dist.at_radius},
         {"epsilon_analytic", dist.analytic_bound},
         {"epsilon_ratio_min", dist.min_ratio},
         {"disjoint", dist.disjoint},
         {"boundary_l1", l1},
         {"C", l1 / (kTwoPi * dist.distance)},
         {"log_C2", cf.boundary_log_excess()},
         {"annulus_arclength_max", cf.max_annulus_arclength(1000)},
         {"gamma", {{"r", rs}, {"t", gc.t}, {"residual", gc.residual}, {"log_abs_f", logs}}},
         {"fitted_c", growth_fit(rs, logs).slope}};
  emit(j, "");
}

void run_construct_eval(const ConstructArgs& a) {
  const auto cf = build_from(a);
  emit(eval_json(cf, complex_arg(a.z, "--z")), "");
}

void run_construct_probe(const ConstructArgs& a) {
  const auto cf = build_from(a);
  const auto& rf = cf.rotation();
  const auto dist = dist_omega_to_omegas(rf);
  const double bound = cf.boundary_l1() / (kTwoPi * dist.distance);
  std::mt19937_64 rng(a.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> pts(static_cast<std::size_t>(a.samples));
  for (auto& z : pts) {
    const double r = std::exp(std::log(1e4) * unit(rng));
    z = std::polar(r, rf.s(r) + kPi * (0.01 + 0.98 * unit(rng)));
  }
  std::vector<double> logs(pts.size());
  parallel_for(pts.size(), [&](std::size_t k) { logs[k] = cf.eval_f(pts[k]).value.log_abs; });
  std::vector<double> rs;
  for (double r = 50.0; r <= 400.0 * (1 + 1e-12); r *= std::sqrt(2.0)) rs.push_back(r);
  const auto gc = gamma_curve(cf, rs);
  double sup = 0.0;
  for (double l : logs) sup = std::max(sup, std::exp(l));
  if (!a.csv.empty()) {
    auto out = open_out(a.csv);
    out << "kind,r,arg,log_abs_f,reference\n";
    for (std::size_t k = 0; k < pts.size(); ++k) {
      out << "omega_s," << fmt(std::abs(pts[k])) << ',' << fmt(std::arg(pts[k])) << ',' << fmt(logs[k]) << ','
          << fmt(std::log(bound)) << '\n';
    }
    for (std::size_t k = 0; k < rs.size(); ++k) {
      const Complex z = std::polar(rs[k], gc.t[k]);
      out << "gamma," << fmt(rs[k]) << ',' << fmt(gc.t[k]) << ',' << fmt(cf.eval_f(z).value.log_abs) << ','
          << fmt(cf.eval_g(z).log_abs) << '\n';
    }
  }
  if (!a.svg.empty()) {
    svg::Plot plot("Omega, Omega_s and Gamma in (log r, angle)", "log r", "angle");
    std::vector<std::pair<double, double>> lo, hi, s0, s1, gamma;
    for (double u : linear_grid(std::log(cf.options().r_floor), std::log(1e4), 300)) {
      lo.emplace_back(u, cf.profile().phi_minus(u).value);
      hi.emplace_back(u, cf.profile().phi_plus(u).value);
      s0.emplace_back(u, rf.h(u));
      s1.emplace_back(u, rf.h(u) + kPi);
    }
    for (std::size_t k = 0; k < rs.size(); ++k) gamma.emplace_back(std::log(rs[k]), gc.t[k]);
    plot.polyline(lo, "#d62728", "Omega boundary");
    plot.polyline(hi, "#d62728");
    plot.polyline(s0, "#1f77b4", "Omega_s boundary");
    plot.polyline(s1, "#1f77b4");
    plot.polyline(gamma, "#2ca02c", "Gamma");
    std::vector<std::pair<double, double>> dots;
    for (const auto& z : pts) {
      if (std::abs(z) >= cf.options().r_floor) {
        const double u = std::log(std::abs(z));
        const double a0 = rf.h(u);
        dots.emplace_back(u, a0 + std::remainder(std::arg(z) - a0 - kPi / 2, kTwoPi) + kPi / 2);
      }
    }
    plot.points(dots, "#7f7f7f", "Omega_s samples");
    plot.write(a.svg);
  }
  emit({{"samples", a.samples}, {"seed", a.seed}, {"sup_abs_f", sup}, {"bound", bound}, {"pass", sup <= bound}}, "");
}

// ---- hm ----
struct HmArgs {
  std::string rotation = R"({"family":"power","a":1,"p":0.5,"x_min":1})";
  double t = 6.0;
  std::string z0 = "1.5,2.8";
  std::int64_t walks = 100000;
  std::uint64_t seed = 1;
  double shell = 1e-4;
  bool disk_demo = false;
};

void run_hm(const HmArgs& a) {
  const WosOptions o{a.walks, a.shell, a.seed};
  if (a.disk_demo) {
    const auto r = wos_disk(Complex(0.0, 0.0), 0.0, kPi, o);
    emit({{"domain", "unit disk"},
          {"target", "upper semicircle"},
          {"omega", r.omega},
          {"stderr", r.std_error},
          {"censored", r.censored},
          {"walks", r.walks},
          {"seed", a.seed},
          {"expected", 0.5},
          {"pass", std::abs(r.omega - 0.5) <= 3.0 * r.std_error}},
         "");
    return;
  }
  const LogDomain dom(rotation_arg(a.rotation), a.t);
  const auto rep = hm_problem(dom, complex_arg(a.z0, "--z0"), o);
  json j = to_json(rep);
  j["seed"] = a.seed;
  j["t"] = a.t;
  j["area"] = dom.area();
  j["rotation"] = dom.rotation().to_json();
  emit(j, "");
}

// ---- report ----
struct ReportArgs {
  std::string out = ".";
  std::string criteria;
};

int run_report(const ReportArgs& a) {
  std::vector<int> ids;
  if (a.criteria.empty()) {
    for (int i = 1; i <= acceptance::kCriteria; ++i) ids.push_back(i);
  } else {
    std::stringstream ss(a.criteria);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        ids.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw UsageError("--criteria expects comma-separated integers");
      }
      if (ids.back() < 1 || ids.back() > acceptance::kCriteria) throw UsageError("--criteria ids must lie in 1..8");
    }
  }
  std::filesystem::create_directories(a.out);
  json manifest{{"tool", "heins"}, {"version", HEINS_VERSION}, {"criteria", json::array()}};
  json timings = json::object();
  bool all = true;
  for (int id : ids) {
    const auto r = acceptance::run_criterion(id);
    std::printf("%s criterion %d (%s) %.2fs\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
    std::fflush(stdout);
    manifest["criteria"].push_back(acceptance::to_json(r));
    timings[std::to_string(id)] = r.seconds;
    all = all && r.pass;
  }
  manifest["all_pass"] = all;
  emit(manifest, (std::filesystem::path(a.out) / "manifest.json").string());
  emit({{"threads", worker_count()}, {"seconds", timings}}, (std::filesystem::path(a.out) / "timings.json").string());
  return all ? 0 : static_cast<int>(ErrorKind::invariant);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for rotating half-planes, circle-arc growth, strip maps and harmonic measure"};
  app.require_subcommand(1);

  ClassifyArgs ca;
  auto* classify_cmd = app.add_subcommand("classify", "Classify a rotation function; prints JSON");
  classify_cmd->add_option("--rotation", ca.rotation, "Rotation JSON, inline or @file")->required();

  ScanArgs sa;
  auto* scan_cmd = app.add_subcommand(
      "scan",
      "Circle-arc scan of a function pair. CSV columns: tau,m_u,m_v,eta_u,eta_v,lhs,rhs,two_arcs_pass,B_measure");
  scan_cmd->add_option("--pair", sa.pair, "exp | same-exp | constant | constructed")->capture_default_str();
  scan_cmd->add_option("--rotation", sa.rotation, "Rotation JSON for --pair constructed")->capture_default_str();
  scan_cmd->add_option("--tau-max", sa.tau_max, "Largest tau = log R (>= 1)")->capture_default_str();
  scan_cmd->add_option("--steps", sa.steps, "Number of tau steps")->capture_default_str();
  scan_cmd->add_option("--n", sa.n, "Samples per circle (power of two)")->capture_default_str();
  scan_cmd->add_option("--eps", sa.eps, "Two-arcs angular slack")->capture_default_str();
  scan_cmd->add_option("--csv", sa.csv, "CSV output path");
  scan_cmd->add_option("--svg", sa.svg, "SVG output path");

  StripArgs st;
  auto* strip_cmd = app.add_subcommand(
      "stripmap-check", "Strip-map solve and Warschawski windows. CSV columns: u1,u2,x_diff,IIIa,IVa,VI,IIIa_ok,IVa_ok,VI_ok");
  strip_cmd->add_option("--profile", st.profile, "straight | construction | band")->capture_default_str();
  strip_cmd->add_option("--rotation", st.rotation, "Rotation JSON")->capture_default_str();
  strip_cmd->add_option("--u-min", st.u_min, "Left end of the strip")->capture_default_str();
  strip_cmd->add_option("--u-max", st.u_max, "Truncation")->capture_default_str();
  strip_cmd->add_option("--mesh", st.mesh, "Transverse mesh (even, >= 64)")->capture_default_str();
  strip_cmd->add_option("--windows", st.windows, "Windows u1:u2,...")->capture_default_str();
  strip_cmd->add_option("--vi-slack", st.vi_slack, "Allowance for the VI lower bound")->capture_default_str();
  strip_cmd->add_option("--csv", st.csv, "CSV output path");
  strip_cmd->add_option("--svg", st.svg, "SVG output path");

  ConstructArgs co;
  auto* construct_cmd = app.add_subcommand("construct", "Build the Cauchy-integral function; prints a JSON manifest");
  construct_cmd->add_option("--rotation", co.rotation, "Rotation JSON")->capture_default_str();
  construct_cmd->add_option("--r-cut", co.r_cache, "Contour truncation radius")->capture_default_str();
  construct_cmd->add_option("--mesh", co.mesh, "Strip-map mesh")->capture_default_str();
  construct_cmd->add_option("--u-max", co.u_max, "Strip-map truncation")->capture_default_str();
  construct_cmd->require_subcommand(0, 1);
  auto* eval_cmd = construct_cmd->add_subcommand("eval", "Evaluate f(z); prints JSON");
  eval_cmd->add_option("--z", co.z, "Point a,b")->required();
  auto* probe_cmd = construct_cmd->add_subcommand(
      "probe", "Sample |f| on Omega_s and along Gamma. CSV columns: kind,r,arg,log_abs_f,reference");
  probe_cmd->add_option("--csv", co.csv, "CSV output path");
  probe_cmd->add_option("--svg", co.svg, "SVG output path");
  probe_cmd->add_option("--samples", co.samples, "Omega_s samples")->capture_default_str();
  probe_cmd->add_option("--seed", co.seed, "Sampling seed")->capture_default_str();

  HmArgs hm;
  auto* hm_cmd = app.add_subcommand("hm", "Walk-on-spheres harmonic measure against the Beurling bound; prints JSON");
  hm_cmd->add_option("--rotation", hm.rotation, "Rotation JSON for the cap")->capture_default_str();
  hm_cmd->add_option("--t", hm.t, "Cap parameter")->capture_default_str();
  hm_cmd->add_option("--z0", hm.z0, "Start point a,b")->capture_default_str();
  hm_cmd->add_option("--walks", hm.walks, "Number of walks")->capture_default_str();
  hm_cmd->add_option("--seed", hm.seed, "Seed")->capture_default_str();
  hm_cmd->add_option("--shell", hm.shell, "Absorption shell")->capture_default_str();
  hm_cmd->add_flag("--disk-demo", hm.disk_demo, "Unit disk, upper semicircle, z0 = 0");

  ReportArgs ra;
  auto* report_cmd = app.add_subcommand("report", "Run the acceptance criteria; writes manifest.json and timings.json");
  report_cmd->add_option("--out", ra.out, "Output directory")->capture_default_str();
  report_cmd->add_option("--criteria", ra.criteria, "Subset, e.g. 1,2,8");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ErrorKind::usage);
  }

  try {
    if (*classify_cmd) run_classify(ca);
    if (*scan_cmd) run_scan(sa);
    if (*strip_cmd) run_stripmap(st);
    if (*construct_cmd) {
      if (*eval_cmd) {
        run_construct_eval(co);
      } else if (*probe_cmd) {
        run_construct_probe(co);
      } else {
        run_construct_manifest(co);
      }
    }
    if (*hm_cmd) run_hm(hm);
    if (*report_cmd) return run_report(ra);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::invariant);
  }
  return 0;
}

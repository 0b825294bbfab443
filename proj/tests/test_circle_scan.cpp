#include <doctest.h>

#include <cmath>
#include <random>

#include "heins/circle_scan.hpp"

using namespace heins;

namespace {

// Boundaries of {|e^z| >= 1} on any circle: the two points cos(theta) = 0.
void check_canonical_boundaries(const ArcSet& s) {
  REQUIRE(s.f_boundaries.size() == 2);
  REQUIRE(s.g_boundaries.size() == 2);
  const double w = s.boundary_width();
  CHECK(std::abs(s.f_boundaries[0] - kPi / 2) <= w);
  CHECK(std::abs(s.f_boundaries[1] - 3 * kPi / 2) <= w);
  CHECK(std::abs(s.g_boundaries[0] - kPi / 2) <= w);
  CHECK(std::abs(s.g_boundaries[1] - 3 * kPi / 2) <= w);
}

}  // namespace

TEST_SUITE("circle_scan") {
  TEST_CASE("canonical pair splits every circle into two semicircles") {
    const auto pair = exp_pair();
    for (double R : {1.0, 100.0}) {
      const ArcSet s = scan_circle(pair, R, 64);
      check_canonical_boundaries(s);
      double tiled = 0.0;
      for (const Arc& a : s.arcs) {
        tiled += a.length();
        const double mid = 0.5 * (a.begin + a.end);
        CHECK(a.f_small == (std::cos(mid) <= 0.0));
        CHECK(a.g_small == (std::cos(mid) >= 0.0));
      }
      CHECK(tiled == doctest::Approx(kTwoPi).epsilon(1e-15));
      CHECK(longest_arc_fraction(s, Member::f) == doctest::Approx(0.5).epsilon(2.0 / 64));
      CHECK(longest_arc_fraction(s, Member::g) == doctest::Approx(0.5).epsilon(2.0 / 64));
    }
  }

  TEST_CASE("constant pairs") {
    const ArcSet big = scan_circle(constant_pair(2.0, 2.0), 3.0, 32);
    REQUIRE(big.arcs.size() == 1);
    CHECK_FALSE(big.arcs[0].f_small);
    CHECK_FALSE(big.arcs[0].g_small);
    CHECK(std::isinf(longest_arc_fraction(big, Member::f)));
    const ArcSet small = scan_circle(constant_pair(0.5, 0.5), 3.0, 32);
    CHECK(longest_arc_fraction(small, Member::f) == 0.0);
  }

  TEST_CASE("scan preconditions and NaN") {
    CHECK_THROWS_AS(scan_circle(exp_pair(), 1.0, 48), PreconditionError);
    CHECK_THROWS_AS(scan_circle(exp_pair(), 0.0, 64), PreconditionError);
    FunctionPair bad = exp_pair();
    bad.log_abs_f = [](Complex) { return std::nan(""); };
    CHECK_THROWS_AS(scan_circle(bad, 1.0, 64), NumericError);
  }

  TEST_CASE("overflowing samples count as large") {
    FunctionPair p = exp_pair();
    p.log_abs_f = [](Complex z) { return z.real() > 0 ? std::numeric_limits<double>::infinity() : -1.0; };
    const ArcSet s = scan_circle(p, 5.0, 64);
    CHECK(longest_arc_fraction(s, Member::f) == doctest::Approx(0.5).epsilon(2.0 / 64));
  }

  TEST_CASE("eta conventions") {
    CHECK(eta(0.5) == 2.0);
    CHECK(eta(0.25) == 4.0);
    CHECK(eta(std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(std::isinf(eta(0.0)));
  }

  TEST_CASE("growth profile of e^z") {
    // lhs = (pi/2) e^{2 tau}, rhs = (e^{2 tau} - 1)/2, ratio -> pi.
    const auto prof = lemma1_profile(exp_pair(), 6.0, 120, 1024);
    CHECK(prof.applicable);
    for (std::size_t i = 1; i < prof.tau.size(); i += 17) {
      const double e2 = std::exp(2 * prof.tau[i]);
      CHECK(prof.lhs[i] == doctest::Approx(kPi / 2 * e2).epsilon(1e-6));
      CHECK(prof.rhs[i] == doctest::Approx((e2 - 1) / 2).epsilon(3e-3));
    }
    CHECK(prof.ratio.back() == doctest::Approx(kPi).epsilon(3e-3));
    CHECK(prof.witnessed_constant > 0.0);
  }

  TEST_CASE("growth profile of a large constant") {
    const auto prof = lemma1_profile(constant_pair(2.0, 0.5), 4.0, 80, 64);
    const double lhs = kTwoPi * std::log(2.0) * std::log(2.0);
    for (std::size_t i = 1; i < prof.tau.size(); ++i) {
      CHECK(prof.eta_u[i] == 0.0);
      CHECK(prof.rhs[i] == doctest::Approx(prof.tau[i]));
      CHECK(prof.lhs[i] == doctest::Approx(lhs));
      CHECK(prof.ratio[i] < prof.ratio[i - 1]);
    }
    CHECK(prof.witnessed_constant > 0.0);
  }

  TEST_CASE("growth profile is non-applicable when |f| < 1") {
    const auto prof = lemma1_profile(constant_pair(0.5, 2.0), 2.0, 10, 64);
    CHECK_FALSE(prof.applicable);
    CHECK(std::isinf(prof.eta_u[0]));
  }

  TEST_CASE("defect integral") {
    const auto prof = lemma1_profile(exp_pair(), 3.0, 60, 256);
    CHECK(std::abs(defect_integral(prof, defect_floor_for_resolution(256)).value) < 1e-6);

    GrowthProfile slab;
    slab.tau = {0.0, 1.0};
    slab.eta_u = {4.0, 4.0};
    slab.eta_v = {4.0, 4.0};
    CHECK(defect_integral(slab).value == doctest::Approx(2.0));

    slab.eta_u = {1.0, 1.0};
    slab.eta_v = {2.0, 2.0};
    CHECK_THROWS_AS(defect_integral(slab), InvariantViolation);
  }

  TEST_CASE("reciprocal-sum gap delta(eps)") {
    CHECK(lemma3_delta(0.5) == doctest::Approx(4.0 / 3.0));
    CHECK(lemma3_delta(0.25) == doctest::Approx(4.0 / 15.0));
    CHECK(lemma3_delta(1e-9) < 1e-8);
    CHECK_THROWS_AS(lemma3_delta(0.0), PreconditionError);
  }

  TEST_CASE("reciprocal-sum gap on random pairs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double eps : {0.05, 0.1, 0.25, 0.4}) {
      const double d = lemma3_delta(eps);
      for (int i = 0; i < 2000; ++i) {
        const double x = unit(rng);
        const double y = unit(rng) * (1.0 - x);
        if (x <= 0.0 || y <= 0.0 || std::abs(x - 0.5) <= eps) continue;
        CHECK(1.0 / x + 1.0 / y > 4.0 + d);
      }
    }
  }

  TEST_CASE("two arcs on the canonical pair") {
    const auto report = two_arcs_check(exp_pair(), linear_grid(0.0, 5.0, 11), 0.1, 256);
    CHECK(report.failing_tau.empty());
    for (const auto& row : report.rows) {
      CHECK(row.b_measure <= 4 * kTwoPi / 256 / 1024);
      CHECK(row.arc_i == doctest::Approx(kPi).epsilon(1e-3));
    }
  }

  TEST_CASE("two arcs fail for a pair with coincident sets") {
    const auto grid = linear_grid(0.0, 5.0, 11);
    const auto report = two_arcs_check(same_exp_pair(), grid, 0.1, 256);
    CHECK(report.failing_tau.size() == grid.size());
    CHECK(report.failing_measure == doctest::Approx(5.0));
  }

  TEST_CASE("m-sum bound on the canonical pair") {
    const double tol = 4 * kPi / 1024 / 1024;
    for (double R : geometric_grid(0.5, 500.0, 25)) {
      const ArcSet s = scan_circle(exp_pair(), R, 1024);
      CHECK(longest_arc_fraction(s, Member::f) + longest_arc_fraction(s, Member::g) <= 1.0 + tol);
    }
  }

  TEST_CASE("min modulus sup") {
    const AnnulusSpec spec{0.1, 3.0, 400, 512};
    CHECK(min_modulus_sup(exp_pair(), spec) == doctest::Approx(1.0).epsilon(1e-12));
    // max_a min(e^a, 2 e^-a) = sqrt 2 at a = log(2)/2
    CHECK(min_modulus_sup(exp_pair(1.0, 1.0, 2.0), spec) == doctest::Approx(std::sqrt(2.0)).epsilon(5e-3));
    CHECK(min_modulus_sup(exp_pair(1.0, 1.0, 2.0), spec) <= std::sqrt(2.0) + 1e-12);
  }
}

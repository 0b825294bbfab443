#include <doctest.h>

#include <cmath>

#include "heins/strip_map.hpp"

using namespace heins;

namespace {

std::function<Jet(double)> constant_jet(double c) {
  return [c](double) { return Jet{c, 0.0, 0.0}; };
}

}  // namespace

TEST_SUITE("strip_map") {
  TEST_CASE("straight strip maps by translation") {
    const auto map = solve_strip_map(StripProfile::straight(0.0), 30.0, {64});
    CHECK(map.core_monotone());
    for (auto [u1, u2] : {std::pair{1.0, 11.0}, std::pair{2.3, 24.7}}) {
      CHECK(std::abs(map.core_x(u2) - map.core_x(u1) - (u2 - u1)) < 1e-8);
    }
    const Complex w(12.37, 0.9);
    CHECK(std::abs(map(w) - (w - map.anchor_u())) < 1e-8);
    CHECK(std::abs(map.inverse(map(w)) - w) < 1e-10);
    CHECK(map.boundary_error() < 1e-12);
  }

  TEST_CASE("IIIa integral") {
    const auto straight = StripProfile::straight();
    CHECK(wars_IIIa_lower(straight, 3.0, 13.0) == doctest::Approx(10.0).epsilon(1e-12));
    const auto narrow = StripProfile::from_center_width("narrow", constant_jet(0.0), constant_jet(kPi / 2), 0.0);
    CHECK(wars_IIIa_lower(narrow, 3.0, 13.0) == doctest::Approx(20.0).epsilon(1e-12));
  }

  TEST_CASE("IVa bound") {
    const auto straight = StripProfile::straight();
    CHECK(wars_IVa_upper(straight, 0.0, 10.0, 0.0) == doctest::Approx(10.0 + 8 * kPi).epsilon(1e-12));
    const auto tilted = StripProfile::from_center_width(
        "tilted", [](double u) { return Jet{0.1 * u, 0.1, 0.0}; }, constant_jet(kPi), 0.0);
    CHECK(wars_IVa_upper(tilted, 0.0, 100.0, 0.1) ==
          doctest::Approx(100.0 * 1.01 + 8 * kPi * (1.0 + 4.0 / 3.0 * 0.01)).epsilon(1e-12));
    CHECK_THROWS_AS(wars_IVa_upper(tilted, 0.0, 100.0, 0.05), PreconditionError);
  }

  TEST_CASE("VI bound") {
    CHECK(wars_VI_lower(StripProfile::straight(), 2.0, 12.0) == doctest::Approx(10.0).epsilon(1e-12));
    // theta = pi, psi = u^{1/4}: (u2 - u1) + (1/16) int u^{-3/2} du
    const auto band = StripProfile::from_center_width(
        "quarter", [](double u) { return Jet{std::pow(u, 0.25), 0.25 * std::pow(u, -0.75), -0.1875 * std::pow(u, -1.75)}; },
        constant_jet(kPi), 1.0);
    const double expected = 90.0 + (1.0 / 8.0) * (1.0 / std::sqrt(10.0) - 0.1);
    CHECK(wars_VI_lower(band, 10.0, 100.0) == doctest::Approx(expected).epsilon(1e-10));
  }

  TEST_CASE("VI gate rejects a non-decaying slope") {
    const auto linear = StripProfile::from_center_width(
        "linear", [](double u) { return Jet{u, 1.0, 0.0}; }, constant_jet(kPi), 0.0);
    CHECK_FALSE(vi_gate(linear).pass());
    CHECK_THROWS_AS(wars_VI_lower(linear, 1.0, 5.0), PreconditionError);
    CHECK(vi_gate(StripProfile::construction(RotationFunction::power(1.0, 0.5), std::log(10.0))).pass());
  }

  TEST_CASE("image curves of the straight strip") {
    const auto map = solve_strip_map(StripProfile::straight(0.0), 30.0, {64});
    const auto grid = linear_grid(2.0, 25.0, 12);
    for (double y : {0.0, kPi / 4}) {
      const auto curve = image_curve_Xiii(map, y, grid);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(curve.v[k] == doctest::Approx(y).scale(1.0).epsilon(1e-9));
        CHECK(std::abs(curve.residual[k]) < 1e-9);
      }
    }
  }

  TEST_CASE("non-positive width is a geometry error") {
    const auto pinched = StripProfile::from_center_width(
        "pinched", constant_jet(0.0), [](double u) { return Jet{10.0 - u, -1.0, 0.0}; }, 0.0);
    CHECK_THROWS_AS(solve_strip_map(pinched, 25.0, {64}), GeometryError);
  }

  TEST_CASE("construction profile: refinement, bounds, and the core curve") {
    const auto profile = StripProfile::construction(RotationFunction::power(1.0, 0.25), std::log(10.0));
    const auto coarse = solve_strip_map(profile, 45.0, {64});
    const auto fine = solve_strip_map(profile, 45.0, {128});
    CHECK(coarse.core_monotone());
    CHECK(fine.core_monotone());
    CHECK(fine.cr_residual() < coarse.cr_residual() / 3.0);
    CHECK(map_difference(coarse, fine) < 1e-3);

    const auto report = check_windows(fine, {{5.0, 15.0}, {5.0, 30.0}, {10.0, 35.0}, {20.0, 35.0}});
    CHECK(report.vi_applicable);
    for (const auto& row : report.rows) {
      CHECK(row.iiia_ok);
      CHECK(row.iva_ok);
      CHECK(row.vi_ok);
    }

    const auto curve = image_curve_Xiii(fine, 0.0, linear_grid(6.0, 34.0, 15));
    for (std::size_t k = 1; k < curve.x.size(); ++k) CHECK(curve.x[k] > curve.x[k - 1]);
    CHECK(std::abs(curve.residual.back()) < std::abs(curve.residual.front()));
  }

  TEST_CASE("tilted midline stays inside the Warschawski window") {
    const auto profile = StripProfile::from_center_width(
        "tilt", [](double u) { return Jet{1.0 / (1.0 + u), -1.0 / ((1 + u) * (1 + u)), 2.0 / std::pow(1 + u, 3)}; },
        constant_jet(kPi), 0.0);
    const auto map = solve_strip_map(profile, 40.0, {64});
    const double diff = map.core_x(25.0) - map.core_x(5.0);
    const double m = max_boundary_slope(profile, 5.0, 25.0);
    CHECK(diff <= wars_IVa_upper(profile, 5.0, 25.0, m));
    CHECK(diff >= wars_VI_lower(profile, 5.0, 25.0) - 1e-3);
    CHECK(diff == doctest::Approx(20.0).epsilon(1e-3));
  }
}

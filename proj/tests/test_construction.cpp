#include <doctest.h>

#include <cmath>

#include "heins/circle_scan.hpp"
#include "heins/construction.hpp"

using namespace heins;

namespace {

const ConstructedFunction& quarter() {
  static const ConstructedFunction cf = ConstructedFunction::build(RotationFunction::power(1.0, 0.25));
  return cf;
}

double deformation_gap(const ConstructedFunction& cf, Complex z, double& tol) {
  const double r = std::abs(z);
  const auto a = cf.eval_f_deformed(z, 2.0 * r);
  const auto b = cf.eval_f_deformed(z, 4.0 * r);
  tol = cf.deformation_tolerance(z, 2.0 * r, 4.0 * r) + a.error + b.error;
  return std::abs(a.value.value() - b.value.value());
}

}  // namespace

TEST_SUITE("construction") {
  TEST_CASE("e(z) in log form") {
    CHECK(eval_e(Complex(0.0, 0.0)).log_abs == doctest::Approx(1.0));
    for (double x : {-3.0, 0.0, 4.0, 40.0}) CHECK(std::abs(eval_e(Complex(x, kPi / 2)).log_abs) < 1e-12 * std::exp(x) + 1e-15);
    CHECK(eval_e(Complex(5.0, 0.0)).log_abs == doctest::Approx(std::exp(5.0)).epsilon(1e-14));
    const LogValue big = eval_e(Complex(50.0, 0.3));
    CHECK(std::isfinite(big.log_abs));
    CHECK(std::abs(big.arg) <= kPi);
  }

  TEST_CASE("profile identities") {
    const auto& cf = quarter();
    for (double u : {2.4, 3.0, 7.5, 20.0}) {
      CHECK(cf.profile().theta(u).value == doctest::Approx(kPi - 2.0 / (u * u + 1.0)).epsilon(1e-14));
      CHECK(cf.profile().psi(u).value == doctest::Approx(std::pow(u, 0.25) + 1.5 * kPi).epsilon(1e-14));
    }
  }

  TEST_CASE("build rejects non-constructible rotations") {
    CHECK_THROWS_AS(ConstructedFunction::build(RotationFunction::power(1.0, 0.5)), PreconditionError);
    CHECK_THROWS_AS(ConstructedFunction::build(RotationFunction::sqrt_log()), PreconditionError);
  }

  TEST_CASE("g is O(1/|w|^2) on the boundary") {
    const auto& cf = quarter();
    CHECK(cf.boundary_log_excess() < 2.0);
    for (double r : {12.0, 100.0, 1e3, 1e5}) {
      const double u = std::log(r);
      for (double a : {cf.profile().phi_minus(u).value, cf.profile().phi_plus(u).value}) {
        const LogValue g = cf.eval_g(std::polar(r, a));
        CHECK(std::abs(g.log_abs + 2.0 * u) < 1e-6);
      }
    }
    CHECK_THROWS_AS(cf.eval_g(Complex(5.0, 0.0)), GeometryError);
    const double u = std::log(50.0);
    CHECK_THROWS_AS(cf.eval_g(std::polar(50.0, cf.profile().phi_minus(u).value - 0.5)), GeometryError);
    CHECK(cf.max_annulus_arclength(2000) < 4.0);
  }

  TEST_CASE("straight profile: log|g| on the central ray is linear in r") {
    const auto cf = ConstructedFunction::build(RotationFunction::constant(0.0));
    for (double r : {100.0, 300.0, 1000.0}) {
      const LogValue g = cf.eval_g(std::polar(r, 1.5 * kPi));
      const double ratio = (g.log_abs + 2.0 * std::log(r)) / (cf.options().growth_scale * r);
      CHECK(ratio > 0.5);
      CHECK(ratio < 2.0);
    }
  }

  TEST_CASE("contour deformation invariance") {
    const auto& cf = quarter();
    for (double r : {12.0, 25.0, 45.0}) {
      for (double a : {0.3, 2.0, 4.1, 5.5}) {
        double tol = 0.0;
        const double gap = deformation_gap(cf, std::polar(r, a), tol);
        CHECK(gap <= tol);
      }
    }
    const Complex near_disk(3.0, -1.0);
    CHECK(cf.eval_f(near_disk).branch == "outside");
  }

  TEST_CASE("boundary evaluation matches the deformed contour") {
    const auto& cf = quarter();
    const double r = 30.0, u = std::log(r);
    for (double off : {-0.01, 0.01}) {
      const Complex z = std::polar(r, cf.profile().phi_minus(u).value + off);
      const auto near = cf.eval_f(z);
      CHECK(near.branch == "bump");
      const auto far = cf.eval_f_deformed(z, 2.0 * r);
      CHECK(std::abs(near.value.value() - far.value.value()) < 1e-5 * std::abs(far.value.value()) + 1e-6);
    }
  }

  TEST_CASE("truncation radius") {
    const auto& cf = quarter();
    const Complex z(-20.0, 7.0);
    const auto a = cf.eval_f(z, 1e5);
    const auto b = cf.eval_f(z, 2e5);
    CHECK(std::abs(a.value.value() - b.value.value()) <= a.tail + b.tail + a.error + b.error);
    CHECK_THROWS_AS(cf.eval_f(z, 30.0), PreconditionError);
  }

  TEST_CASE("distance between Omega and Omega_s") {
    const auto rep = dist_omega_to_omegas(RotationFunction::power(1.0, 0.25));
    CHECK(rep.disjoint);
    CHECK(rep.distance > 0.0);
    CHECK(rep.min_ratio >= 1.0);
    const auto flat = dist_omega_to_omegas(RotationFunction::constant(0.0));
    CHECK(flat.distance > 0.0);
    CHECK(flat.at_radius < 11.0);
  }

  TEST_CASE("f is bounded on Omega_s by the a-priori constant") {
    const auto& cf = quarter();
    const auto rep = dist_omega_to_omegas(cf.rotation());
    const double bound = cf.boundary_l1() / (kTwoPi * rep.distance);
    const RotatingHalfPlane half(cf.rotation());
    double worst = 0.0;
    for (double r : geometric_grid(1.0, 1e4, 24)) {
      for (double d : {-1.4, 0.0, 1.4}) {
        const Complex z = std::polar(r, cf.rotation().s(r) + kPi / 2 + d);
        REQUIRE(half.contains(z));
        worst = std::max(worst, std::exp(cf.eval_f(z).value.log_abs));
      }
    }
    CHECK(worst <= bound);
  }

  TEST_CASE("min-pair of the constructed function is bounded") {
    const auto& cf = quarter();
    const auto pair = reflected_pair(
        "constructed", [&cf](Complex z) { return cf.eval_f(z).value.log_abs; }, 0.2);
    const double sup = min_modulus_sup(pair, {1.0, 60.0, 12, 32});
    CHECK(std::isfinite(sup));
    CHECK(sup < 1.0);
  }

  TEST_CASE("growth along Gamma") {
    const auto& cf = quarter();
    const std::vector<double> rs{50.0, 100.0, 200.0, 400.0};
    const auto gc = gamma_curve(cf, rs);
    std::vector<double> logs;
    for (std::size_t k = 0; k < rs.size(); ++k) {
      const Complex z = std::polar(rs[k], gc.t[k]);
      const auto f = cf.eval_f(z);
      logs.push_back(f.value.log_abs);
      CHECK(std::exp(f.value.log_abs) >= std::exp(cf.eval_g(z).log_abs) - cf.boundary_l1());
    }
    for (std::size_t k = 1; k < logs.size(); ++k) CHECK(logs[k] > logs[k - 1]);
    CHECK(growth_fit(rs, logs).slope > 0.0);

    std::vector<double> tail;
    for (double r = 800.0; r <= 2.1e5; r *= 2.0) tail.push_back(r);
    const auto far = gamma_curve(cf, tail);
    for (std::size_t k = 1; k < tail.size(); ++k) CHECK(std::abs(far.residual[k]) < std::abs(far.residual[k - 1]));
    CHECK_THROWS_AS(gamma_curve(cf, {20.0}), GeometryError);
  }

  TEST_CASE("flat rotation: Gamma is the central ray") {
    const auto cf = ConstructedFunction::build(RotationFunction::constant(0.0));
    const auto gc = gamma_curve(cf, {100.0, 1000.0, 1e4});
    for (double res : gc.residual) CHECK(std::abs(res) < 1e-6);
  }

  TEST_CASE("exponential type estimates") {
    const auto grid = geometric_grid(10.0, 1000.0, 9);
    CHECK(exp_type_estimate([](Complex z) { return z.real(); }, grid) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::abs(exp_type_estimate([](Complex) { return std::log(5.0); }, {1e3, 1e4, 1e5})) < 1e-3);
    CHECK_THROWS_AS(exp_type_estimate([](Complex) { return 0.0; }, {3.0, 2.0}), PreconditionError);

    const auto& cf = quarter();
    const auto log_f = [&cf](Complex z) { return cf.eval_f(z).value.log_abs; };
    const double short_grid = exp_type_estimate(log_f, {200.0, 400.0, 800.0});
    const double long_grid = exp_type_estimate(log_f, {200.0, 400.0, 800.0, 1600.0});
    CHECK(std::isfinite(short_grid));
    CHECK(short_grid > 0.0);
    CHECK(std::abs(long_grid - short_grid) < 0.25 * short_grid);
  }
}

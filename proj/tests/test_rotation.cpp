#include <doctest.h>

#include <cmath>

#include "heins/errors.hpp"
#include "heins/rotation.hpp"

using namespace heins;

TEST_SUITE("rotation") {
  TEST_CASE("constant rotation is the upper half-plane") {
    RotatingHalfPlane hp(RotationFunction::constant(0.0));
    CHECK(hp.contains({0.0, 1.0}));
    CHECK_FALSE(hp.contains({0.0, -1.0}));
    CHECK_THROWS_AS(hp.contains({0.0, 0.0}), PreconditionError);
  }

  TEST_CASE("midline of a power rotation is inside") {
    RotatingHalfPlane hp(RotationFunction::power(1.0, 0.25));
    const double s = std::pow(std::log(100.0), 0.25);
    CHECK(hp.contains(std::polar(100.0, kPi / 2 + s)));
    CHECK_FALSE(hp.contains(std::polar(100.0, s - kPi / 2)));
  }

  TEST_CASE("half-plane and complement are disjoint") {
    RotatingHalfPlane hp(RotationFunction::power(1.0, 0.25));
    const auto comp = hp.complement();
    for (int i = 1; i <= 40; ++i) {
      for (int k = 0; k < 64; ++k) {
        const Complex z = std::polar(std::exp(0.3 * i), kTwoPi * k / 64.0);
        CHECK_FALSE((hp.contains(z) && comp.contains(z)));
      }
    }
  }

  TEST_CASE("sqint closed forms") {
    const auto quarter = RotationFunction::power(1.0, 0.25);
    // integral_1^X x^{-3/2}/16 dx = (1 - X^{-1/2})/8
    for (double X : {10.0, 1e4, 1e8}) {
      CHECK(sqint(quarter, X) == doctest::Approx((1.0 - 1.0 / std::sqrt(X)) / 8.0).epsilon(1e-8));
    }
    const auto half = RotationFunction::power(1.0, 0.5);
    for (double X : {10.0, 1e6}) CHECK(sqint(half, X) == doctest::Approx(std::log(X) / 4.0).epsilon(1e-8));
    CHECK(sqint(RotationFunction::constant(1.3), 50.0) == doctest::Approx(0.0));
  }

  TEST_CASE("habs2 closed forms") {
    // |h''| = (3/16) x^{-7/4}  ->  (1/4)(1 - X^{-3/4})
    const auto quarter = RotationFunction::power(1.0, 0.25);
    CHECK(habs2_int(quarter, 1e8) == doctest::Approx(0.25 * (1.0 - std::pow(1e8, -0.75))).epsilon(1e-8));
    // |h''| = (1/4) x^{-3/2}  ->  (1/2)(1 - X^{-1/2})
    const auto half = RotationFunction::power(1.0, 0.5);
    CHECK(habs2_int(half, 1e8) == doctest::Approx(0.5 * (1.0 - 1e-4)).epsilon(1e-8));
    CHECK(habs2_int(RotationFunction::power(2.0, 1.0), 30.0) == doctest::Approx(0.0));
  }

  TEST_CASE("sqint rejects a singular integrand") {
    CHECK_THROWS_AS(sqint(RotationFunction::sqrt_log(), 100.0), NumericError);
  }

  TEST_CASE("sqrt-log probe") {
    const auto grid = geometric_grid(10.0, 1e8, 60);
    CHECK(sqrtlog_limsup_probe(RotationFunction::sqrt_log(), grid) == doctest::Approx(1.0).epsilon(1e-12));
    const double quarter = sqrtlog_limsup_probe(RotationFunction::power(1.0, 0.25), grid);
    CHECK(quarter <= std::pow(std::log(grid[grid.size() / 2 - 1]), -0.25) + 1e-12);
    CHECK(quarter < sqrtlog_limsup_probe(RotationFunction::power(1.0, 0.25), geometric_grid(10.0, 1e6, 60)));
    CHECK(sqrtlog_limsup_probe(RotationFunction::constant(0.0), grid) == doctest::Approx(0.0));
    CHECK_THROWS_AS(sqrtlog_limsup_probe(RotationFunction::constant(0.0), geometric_grid(10.0, 1e5, 10)),
                    PreconditionError);
  }

  TEST_CASE("finite-difference derivative matches the analytic one") {
    const std::vector<RotationFunction> families{
        RotationFunction::power(1.0, 0.25), RotationFunction::power(0.7, 0.5), RotationFunction::sqrt_log(),
        RotationFunction::table({{{1.0, 1.0}, {4.0, 2.0}, {9.0, 3.0}, {16.0, 4.0}, {25.0, 5.0}, {100.0, 10.0}}})};
    for (const auto& rf : families) {
      for (double x = rf.x_min() + 1.0; x <= rf.x_min() + 100.0; x += 0.731) {
        const double h = 1e-5 * std::max(1.0, x);
        const double fd = (rf.h(x + h) - rf.h(x - h)) / (2 * h);
        CHECK(fd == doctest::Approx(rf.dh(x)).epsilon(1e-6).scale(1.0));
      }
    }
  }

  TEST_CASE("table spline rejects non-monotone data") {
    CHECK_THROWS(RotationFunction::table({{{0.0, 0.0}, {1.0, 2.0}, {2.0, 1.0}}}));
  }

  TEST_CASE("json round trip and field errors") {
    const auto rf = RotationFunction::from_json({{"family", "power"}, {"a", 1.0}, {"p", 0.25}, {"x_min", 1.0}});
    CHECK(rf.family_name() == "power");
    const auto back = RotationFunction::from_json(rf.to_json());
    CHECK(back.h(7.0) == doctest::Approx(rf.h(7.0)));
    CHECK_THROWS_AS(RotationFunction::from_json({{"family", "power"}, {"p", "x"}}), UsageError);
    CHECK_THROWS_AS(RotationFunction::from_json({{"family", "spiral"}}), UsageError);
  }

  TEST_CASE("classification of the three canonical families") {
    CHECK(classify(RotationFunction::power(1.0, 0.25)).verdict == Verdict::constructible);
    CHECK(classify(RotationFunction::sqrt_log()).verdict == Verdict::constant_only_sqrtlog);
    CHECK(classify(RotationFunction::power(1.0, 0.5)).verdict == Verdict::constant_only_regular);
  }

  TEST_CASE("classification is invariant under a constant shift") {
    for (const auto& rf : {RotationFunction::power(1.0, 0.25), RotationFunction::power(1.0, 0.5)}) {
      CHECK(classify(rf.shifted(2.5)).verdict == classify(rf).verdict);
    }
  }
}

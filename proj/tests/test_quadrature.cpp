#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stimwave/optimize.hpp"
#include "stimwave/quadrature.hpp"
#include "stimwave/special.hpp"

using namespace stimwave;

TEST_CASE("adaptive Gauss-Kronrod on known integrals") {
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 40.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::cos(10.0 * x) * std::exp(-x); }, 0.0,
                    50.0) == doctest::Approx(1.0 / 101.0).epsilon(1e-10));
    // oscillatory with slow decay
    CHECK(integrate([](double x) { return std::sin(x) * std::exp(-0.1 * x); }, 0.0,
                    300.0) == doctest::Approx(1.0 / 1.01).epsilon(1e-9));
}

TEST_CASE("composite Gauss-Legendre") {
    CHECK(integrate_gl([](double x) { return std::exp(-x * x); }, -6.0, 6.0, 12) ==
          doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("stable phi functions against direct evaluation") {
    for (double mag : {1e-8, 1e-5, 1e-2, 0.5, 3.0}) {
        const cplx z(mag, 0.7 * mag);
        const cplx direct1 = mag < 1e-4 ? 1.0 + z / 2.0 : (std::exp(z) - 1.0) / z;
        CHECK(std::abs(detail::phi1(z) - direct1) < 1e-10);
        // moments tie back to closed forms
        CHECK(detail::exp_moment0(2.0, 3.0) ==
              doctest::Approx((1.0 - std::exp(-6.0)) / 2.0).epsilon(1e-13));
        CHECK(detail::exp_moment1(2.0, 3.0) ==
              doctest::Approx((1.0 - std::exp(-6.0) * 7.0) / 4.0).epsilon(1e-12));
        CHECK(detail::exp_moment2(2.0, 3.0) ==
              doctest::Approx((2.0 - std::exp(-6.0) * (36.0 + 12.0 + 2.0)) / 8.0)
                  .epsilon(1e-12));
    }
}

TEST_CASE("golden section and newton") {
    const auto [x, fx] =
        golden_section_min([](double t) { return (t - 2.0) * (t - 2.0) + 1.0; }, 0.0,
                           5.0, 1e-10);
    CHECK(x == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(fx == doctest::Approx(1.0).epsilon(1e-10));

    const double root = newton_root([](double t) { return t * t - 2.0; },
                                    [](double t) { return 2.0 * t; }, 1.0);
    CHECK(root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("log-slope fit recovers a decay rate") {
    std::vector<double> xs, ys;
    for (int i = 0; i < 30; ++i) {
        xs.push_back(0.1 * i);
        ys.push_back(7.0 * std::exp(-3.0 * 0.1 * i));
    }
    CHECK(fit_log_slope(xs, ys) == doctest::Approx(-3.0).epsilon(1e-12));
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "kompakton/errors.hpp"
#include "kompakton/regression.hpp"
#include "support.hpp"

using namespace kompakton;
using namespace testing_support;

TEST_CASE("exact lines are recovered") {
    auto rng = make_rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = uniform(rng, -5.0, 5.0), b = uniform(rng, -5.0, 5.0);
        std::vector<double> x, y;
        for (int i = 0; i < 10; ++i) {
            x.push_back(uniform(rng, 0.0, 10.0));
            y.push_back(a * x.back() + b);
        }
        const RegressionFit fit = linear_fit(x, y);
        CHECK(fit.slope == doctest::Approx(a).epsilon(1e-12));
        CHECK(fit.intercept == doctest::Approx(b).epsilon(1e-12));
        CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fit.points == 10);
    }
}

TEST_CASE("regression errors") {
    std::vector<double> one{1.0}, two{1.0, 2.0}, same{3.0, 3.0};
    CHECK_THROWS_AS((void)linear_fit(one, one), InsufficientDataError);
    CHECK_THROWS_AS((void)linear_fit(same, two), InsufficientDataError);
    CHECK_THROWS_AS((void)linear_fit(two, one), ParameterError);
    CHECK_THROWS_AS((void)convergence_exponent(two, one), ParameterError);
}

TEST_CASE("noisy data lowers r squared") {
    std::vector<double> x{0, 1, 2, 3, 4, 5}, y{0, 1.5, 1.7, 3.6, 3.9, 5.2};
    const RegressionFit fit = linear_fit(x, y);
    CHECK(fit.r_squared < 1.0);
    CHECK(fit.r_squared > 0.9);
}

TEST_CASE("front velocity") {
    std::vector<double> t{0, 5, 10, 15}, x{100, 112.5, 125, 137.5};
    CHECK(front_velocity(x, t).slope == doctest::Approx(2.5));
}

TEST_CASE("power law decay exponent") {
    auto rng = make_rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const double rho = uniform(rng, 0.1, 2.0), amp = uniform(rng, 1e-8, 1e-3);
        std::vector<double> t, a;
        for (int k = 1; k <= 60; ++k) {
            t.push_back(5.0 * k);
            a.push_back(amp * std::pow(t.back(), -rho));
        }
        const RegressionFit fit = scaling_exponent(a, t);
        CHECK(fit.slope == doctest::Approx(rho).epsilon(1e-12));
        CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("discard window drops early samples") {
    // Early samples follow a different law; only the tail should count.
    std::vector<double> t, a;
    for (int k = 1; k <= 40; ++k) {
        t.push_back(static_cast<double>(k));
        a.push_back(k <= 10 ? 1.0 : std::pow(t.back(), -0.5));
    }
    const RegressionFit tail = scaling_exponent(a, t, 0.3);
    CHECK(tail.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tail.points == 28);
    const RegressionFit all = scaling_exponent(a, t, 0.0);
    CHECK(all.points == 40);
    CHECK(std::abs(all.slope - 0.5) > 0.01);

    CHECK_THROWS_AS((void)scaling_exponent(a, t, 1.0), ParameterError);
    std::vector<double> short_t{1, 2, 3}, short_a{1, 1, 1};
    CHECK_THROWS_AS((void)scaling_exponent(short_a, short_t), InsufficientDataError);
    a.back() = 0.0;
    CHECK_THROWS_AS((void)scaling_exponent(a, t), ParameterError);
}

TEST_CASE("convergence exponent") {
    std::vector<double> dx{0.2, 0.1, 0.05, 0.025}, u;
    for (double h : dx) u.push_back(3e-3 * std::pow(h, 2.4));
    const RegressionFit fit = convergence_exponent(u, dx);
    CHECK(fit.slope == doctest::Approx(2.4).epsilon(1e-12));
}

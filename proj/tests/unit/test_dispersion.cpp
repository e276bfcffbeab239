#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kompakton/dispersion.hpp"
#include "kompakton/errors.hpp"

using namespace kompakton;

TEST_CASE("group velocity at the grid cutoff") {
    for (double dx : {0.05, 0.1, 0.5}) {
        for (double c0 : {0.5, 1.0, 2.0}) {
            const double k = max_wavenumber(dx);
            CHECK(group_velocity(SchemeId::Ismail, k, dx, c0) == doctest::Approx(c0));
            CHECK(group_velocity(SchemeId::DeFrutos, k, dx, c0) == doctest::Approx(5.0 * c0));
            CHECK(group_velocity(SchemeId::Pade6, k, dx, c0) == doctest::Approx(10.0 * c0));
            CHECK(group_velocity(SchemeId::Pade8, k, dx, c0) == doctest::Approx(55.0 / 9.0 * c0));
        }
    }
    CHECK(max_wavenumber(0.1) == doctest::Approx(10.0 * std::numbers::pi));
}

TEST_CASE("long waves move backward with the frame") {
    for (SchemeId s : kAllSchemes) {
        CHECK(group_velocity(s, 1e-6, 0.1, 1.5) == doctest::Approx(-1.5).epsilon(1e-9));
    }
}

TEST_CASE("closed form matches the derivative of the frequency") {
    for (SchemeId s : kAllSchemes) {
        for (double frac : {0.1, 0.3, 0.55, 0.8, 0.95}) {
            const double dx = 0.1, c0 = 1.3;
            const double k = frac * max_wavenumber(dx), h = 1e-5;
            const double fd = (radiation_frequency(s, k + h, dx, c0) -
                               radiation_frequency(s, k - h, dx, c0)) / (2 * h);
            CHECK(group_velocity(s, k, dx, c0) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("group velocity is linear in c0") {
    for (SchemeId s : kAllSchemes) {
        const double k = 0.7 * max_wavenumber(0.2);
        const double one = group_velocity(s, k, 0.2, 1.0);
        CHECK(group_velocity(s, k, 0.2, 3.5) == doctest::Approx(3.5 * one));
    }
}

TEST_CASE("predicted fronts and curves") {
    const auto pred = predicted_front_velocities(SchemeId::DeFrutos, 0.5, 0.1);
    CHECK(pred.forward == doctest::Approx(2.5));
    CHECK(pred.backward < 0.0);
    CHECK(pred.backward == doctest::Approx(-0.5).epsilon(0.05));
    CHECK_THROWS_AS((void)predicted_front_velocities(SchemeId::DeFrutos, 0.5, 0.1, 0.0), ParameterError);
    CHECK_THROWS_AS((void)predicted_front_velocities(SchemeId::DeFrutos, 0.5, 0.0), ParameterError);

    const DispersionCurve curve = dispersion_curve(SchemeId::Pade6, 0.1, 1.0, 50);
    REQUIRE(curve.group_velocities.size() == 50);
    CHECK(curve.normalized_wavenumbers.front() == doctest::Approx(0.02));
    CHECK(curve.normalized_wavenumbers.back() == 1.0);
    CHECK(curve.group_velocities.back() == doctest::Approx(10.0));
    CHECK_THROWS_AS((void)dispersion_curve(SchemeId::Pade6, 0.1, 1.0, 1), ParameterError);
}

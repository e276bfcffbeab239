#include "kompakton/dispersion.hpp"

#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "kompakton/errors.hpp"

namespace kompakton {

namespace {

// (B/A)(e^{i theta}) = i N(theta) / (D(theta) dx) with
//   N = s1 sin(theta) + s2 sin(2 theta),  D = d0 + d1 cos(theta) + d2 cos(2 theta).
struct SymbolRatio {
    double s1, s2;
    double d0, d1, d2;
};

SymbolRatio ratio_for(SchemeId scheme) {
    switch (scheme) {
        case SchemeId::Ismail: return {1.0, 0.0, 1.0, 0.0, 0.0};
        case SchemeId::DeFrutos: return {50.0, 5.0, 33.0, 26.0, 1.0};
        case SchemeId::Pade6: return {100.0, 10.0, 63.0, 56.0, 1.0};
        case SchemeId::Pade8: return {160.0, 25.0, 108.0, 96.0, 6.0};
    }
    throw ParameterError("unknown scheme");
}

void require_spacing(double dx) {
    if (!(dx > 0.0) || !std::isfinite(dx)) {
        throw ParameterError(fmt::format("grid spacing must be positive, got {}", dx));
    }
}

}  // namespace

double radiation_frequency(SchemeId scheme, double k, double dx, double c0) {
    require_spacing(dx);
    const auto r = ratio_for(scheme);
    const double th = k * dx;
    const double num = r.s1 * std::sin(th) + r.s2 * std::sin(2.0 * th);
    const double den = r.d0 + r.d1 * std::cos(th) + r.d2 * std::cos(2.0 * th);
    return -c0 * num / (den * dx);
}

double group_velocity(SchemeId scheme, double k, double dx, double c0) {
    require_spacing(dx);
    const auto r = ratio_for(scheme);
    const double th = k * dx;
    const double num = r.s1 * std::sin(th) + r.s2 * std::sin(2.0 * th);
    const double dnum = r.s1 * std::cos(th) + 2.0 * r.s2 * std::cos(2.0 * th);
    const double den = r.d0 + r.d1 * std::cos(th) + r.d2 * std::cos(2.0 * th);
    const double dden = -r.d1 * std::sin(th) - 2.0 * r.d2 * std::sin(2.0 * th);
    // d/dk [N(k dx) / (D(k dx) dx)] = (N' D - N D') / D^2; the dx factors cancel.
    return -c0 * (dnum * den - num * dden) / (den * den);
}

double max_wavenumber(double dx) {
    require_spacing(dx);
    return std::numbers::pi / dx;
}

FrontVelocityPrediction predicted_front_velocities(SchemeId scheme, double c0, double dx,
                                                   double probe_fraction) {
    if (!(probe_fraction > 0.0 && probe_fraction <= 1.0)) {
        throw ParameterError(fmt::format("probe fraction must lie in (0, 1], got {}", probe_fraction));
    }
    const double k_max = max_wavenumber(dx);
    return {group_velocity(scheme, k_max, dx, c0),
            group_velocity(scheme, probe_fraction * k_max, dx, c0)};
}

DispersionCurve dispersion_curve(SchemeId scheme, double dx, double c0, std::size_t samples) {
    if (samples < 2) throw ParameterError(fmt::format("need >= 2 samples, got {}", samples));
    const double k_max = max_wavenumber(dx);
    DispersionCurve curve{scheme, dx, c0, {}, {}};
    curve.normalized_wavenumbers.reserve(samples);
    curve.group_velocities.reserve(samples);
    for (std::size_t i = 1; i <= samples; ++i) {
        const double a = static_cast<double>(i) / static_cast<double>(samples);
        curve.normalized_wavenumbers.push_back(a);
        curve.group_velocities.push_back(group_velocity(scheme, a * k_max, dx, c0));
    }
    return curve;
}

}  // namespace kompakton

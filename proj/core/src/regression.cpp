#include "kompakton/regression.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/core.h>

#include "kompakton/errors.hpp"

namespace kompakton {

RegressionFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ParameterError(fmt::format("regression: {} abscissae but {} ordinates", x.size(), y.size()));
    }
    const std::size_t n = x.size();
    if (n < 2) throw InsufficientDataError(fmt::format("regression needs >= 2 points, got {}", n));

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw InsufficientDataError("regression: all abscissae are equal");

    RegressionFit fit;
    fit.points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

RegressionFit front_velocity(std::span<const double> positions, std::span<const double> times) {
    return linear_fit(times, positions);
}

RegressionFit scaling_exponent(std::span<const double> mean_amplitudes,
                               std::span<const double> times, double discard_fraction) {
    if (mean_amplitudes.size() != times.size()) {
        throw ParameterError("scaling exponent: series lengths differ");
    }
    if (!(discard_fraction >= 0.0 && discard_fraction < 1.0)) {
        throw ParameterError(fmt::format("discard fraction must lie in [0, 1), got {}", discard_fraction));
    }
    if (times.empty()) throw InsufficientDataError("scaling exponent: empty series");

    const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
    const double start = *lo + discard_fraction * (*hi - *lo);
    std::vector<double> log_t, log_a;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < start - 1e-12 * std::abs(*hi)) continue;
        if (!(times[i] > 0.0) || !(mean_amplitudes[i] > 0.0)) {
            throw ParameterError(fmt::format(
                "scaling exponent: non-positive sample (t = {}, amplitude = {})", times[i],
                mean_amplitudes[i]));
        }
        log_t.push_back(std::log(times[i]));
        log_a.push_back(std::log(mean_amplitudes[i]));
    }
    if (log_t.size() < 4) {
        throw InsufficientDataError(
            fmt::format("scaling exponent needs >= 4 samples after discard, got {}", log_t.size()));
    }
    RegressionFit fit = linear_fit(log_t, log_a);
    fit.slope = -fit.slope;
    return fit;
}

RegressionFit convergence_exponent(std::span<const double> amplitudes,
                                   std::span<const double> steps) {
    if (amplitudes.size() != steps.size()) {
        throw ParameterError("convergence exponent: series lengths differ");
    }
    std::vector<double> log_h, log_a;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i] > 0.0) || !(amplitudes[i] > 0.0) || !std::isfinite(amplitudes[i])) continue;
        log_h.push_back(std::log(steps[i]));
        log_a.push_back(std::log(amplitudes[i]));
    }
    if (log_h.size() < 2) {
        throw InsufficientDataError(
            fmt::format("convergence exponent needs >= 2 valid pairs, got {}", log_h.size()));
    }
    return linear_fit(log_h, log_a);
}

}  // namespace kompakton

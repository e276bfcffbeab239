#pragma once

#include <cstddef>
#include <span>

namespace kompakton {

/// Ordinary least-squares line y = slope * x + intercept.
struct RegressionFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;  ///< coefficient of determination in [0, 1]
    std::size_t points = 0;
};

/// Throws InsufficientDataError for fewer than two points or zero x-spread.
[[nodiscard]] RegressionFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Slope of front position against time.
[[nodiscard]] RegressionFit front_velocity(std::span<const double> positions,
                                           std::span<const double> times);

/// Fits log(amplitude) = -rho log(t) + b over the samples with
/// t >= t_0 + discard_fraction (t_last - t_0). The returned slope is rho (the
/// sign is flipped so a decaying envelope has rho > 0). Throws ParameterError
/// for non-positive amplitudes or times inside the window, and
/// InsufficientDataError if fewer than four samples remain.
[[nodiscard]] RegressionFit scaling_exponent(std::span<const double> mean_amplitudes,
                                             std::span<const double> times,
                                             double discard_fraction = 0.25);

/// Fits log(amplitude) = q log(step) + b; the slope is q.
[[nodiscard]] RegressionFit convergence_exponent(std::span<const double> amplitudes,
                                                 std::span<const double> steps);

}  // namespace kompakton

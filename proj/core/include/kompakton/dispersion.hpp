#pragma once

#include <cstddef>
#include <vector>

#include "kompakton/stencil.hpp"

namespace kompakton {

/// Frequency w(k) of the linear radiation equation u_t - c0 (B/A) u = 0 for
/// plane waves exp(i(kx - w t)).
[[nodiscard]] double radiation_frequency(SchemeId scheme, double k, double dx, double c0);

/// Group velocity dw/dk, in closed form.
[[nodiscard]] double group_velocity(SchemeId scheme, double k, double dx, double c0);

/// Highest grid wavenumber pi/dx.
[[nodiscard]] double max_wavenumber(double dx);

struct FrontVelocityPrediction {
    double forward;   ///< group velocity at k_max
    double backward;  ///< group velocity at probe_fraction * k_max
};

/// Predicted front speeds relative to the stopped compacton. Throws
/// ParameterError unless dx > 0 and probe_fraction lies in (0, 1].
[[nodiscard]] FrontVelocityPrediction predicted_front_velocities(SchemeId scheme, double c0,
                                                                 double dx,
                                                                 double probe_fraction = 0.1);

struct DispersionCurve {
    SchemeId scheme;
    double dx;
    double c0;
    std::vector<double> normalized_wavenumbers;  ///< k / k_max in (0, 1]
    std::vector<double> group_velocities;
};

/// Samples the group velocity at k/k_max = i/samples, i = 1..samples.
[[nodiscard]] DispersionCurve dispersion_curve(SchemeId scheme, double dx, double c0,
                                               std::size_t samples);

}  // namespace kompakton

#include "kompakton/radiation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "kompakton/dispersion.hpp"
#include "kompakton/errors.hpp"

namespace kompakton {

std::string_view side_name(WavepacketSide side) noexcept {
    return side == WavepacketSide::Forward ? "forward" : "backward";
}

void AnalysisSettings::validate() const {
    if (!(forward_share > 0.0 && forward_share < 1.0)) {
        throw ParameterError(fmt::format("forward_share must lie in (0, 1), got {}", forward_share));
    }
    if (!(threshold_fraction > 0.0 && threshold_fraction <= 1.0)) {
        throw ParameterError(
            fmt::format("threshold_fraction must lie in (0, 1], got {}", threshold_fraction));
    }
    if (!(noise_fraction >= 0.0 && noise_fraction < 1.0)) {
        throw ParameterError(fmt::format("noise_fraction must lie in [0, 1), got {}", noise_fraction));
    }
    if (!(discard_fraction >= 0.0 && discard_fraction < 1.0)) {
        throw ParameterError(
            fmt::format("discard_fraction must lie in [0, 1), got {}", discard_fraction));
    }
}

AnalysisSettings default_analysis_settings(SchemeId scheme) {
    const auto prediction = predicted_front_velocities(scheme, 1.0, 1.0);
    AnalysisSettings settings;
    const double f = std::abs(prediction.forward);
    const double b = std::abs(prediction.backward);
    settings.forward_share = f / (f + b);
    return settings;
}

double SideProfile::max_magnitude() const noexcept {
    double m = 0.0;
    for (double v : magnitudes) m = std::max(m, v);
    return m;
}

SideProfile side_profile(const FieldState& field, WavepacketSide side, const CompactonSpec& spec,
                         const GridSpec& grid, const AnalysisSettings& settings) {
    settings.validate();
    if (field.values.size() != grid.nodes()) {
        throw ParameterError(fmt::format("field has {} values, grid has {} nodes",
                                         field.values.size(), grid.nodes()));
    }
    const double dx = grid.dx();
    const double centre = spec.center(field.t);
    const double half = spec.half_width();
    const double free_space = grid.length() - 2.0 * half;
    const auto guard = static_cast<std::ptrdiff_t>(settings.guard_nodes);

    SideProfile profile{side, centre, {}, {}};
    auto push = [&](std::ptrdiff_t idx) {
        profile.positions.push_back(static_cast<double>(idx) * dx);
        profile.magnitudes.push_back(std::abs(field.values[grid.wrap(idx)]));
    };

    if (side == WavepacketSide::Forward) {
        const auto inner = static_cast<std::ptrdiff_t>(std::floor((centre + half) / dx)) + 1 + guard;
        const auto outer = static_cast<std::ptrdiff_t>(
            std::floor((centre + half + settings.forward_share * free_space) / dx));
        for (std::ptrdiff_t idx = outer; idx >= inner; --idx) push(idx);
    } else {
        const auto inner = static_cast<std::ptrdiff_t>(std::ceil((centre - half) / dx)) - 1 - guard;
        const auto outer = static_cast<std::ptrdiff_t>(
            std::ceil((centre - half - (1.0 - settings.forward_share) * free_space) / dx));
        for (std::ptrdiff_t idx = outer; idx <= inner; ++idx) push(idx);
    }
    return profile;
}

std::optional<double> detect_amplitude(const SideProfile& profile,
                                       const AnalysisSettings& settings) {
    const auto& v = profile.magnitudes;
    const double peak = profile.max_magnitude();
    if (!(peak > 0.0) || v.size() < 5) return std::nullopt;

    const double floor = settings.noise_fraction * peak;
    std::size_t start = 0;
    while (start < v.size() && v[start] < floor) ++start;
    for (std::size_t i = start; i + 4 < v.size(); ++i) {
        if (v[i] < v[i + 1] && v[i + 1] < v[i + 2] && v[i + 2] > v[i + 3] && v[i + 3] > v[i + 4]) {
            return v[i + 2];
        }
    }
    return std::nullopt;
}

std::optional<double> detect_amplitude(const FieldState& field, WavepacketSide side,
                                       const CompactonSpec& spec, const GridSpec& grid,
                                       const AnalysisSettings& settings) {
    return detect_amplitude(side_profile(field, side, spec, grid, settings), settings);
}

std::optional<double> front_position(const SideProfile& profile, double threshold) {
    if (!(threshold > 0.0)) {
        throw ParameterError(fmt::format("front threshold must be positive, got {}", threshold));
    }
    const auto& v = profile.magnitudes;
    const auto& x = profile.positions;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < threshold) continue;
        if (i == 0) return x[0];
        const double w = (threshold - v[i - 1]) / (v[i] - v[i - 1]);
        return x[i - 1] + w * (x[i] - x[i - 1]);
    }
    return std::nullopt;
}

std::optional<double> front_position(const FieldState& field, WavepacketSide side,
                                     double threshold, const CompactonSpec& spec,
                                     const GridSpec& grid, const AnalysisSettings& settings) {
    return front_position(side_profile(field, side, spec, grid, settings), threshold);
}

std::optional<double> mean_envelope_amplitude(const SideProfile& profile, double front) {
    const double reach = std::abs(front - profile.compacton_center);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < profile.positions.size(); ++i) {
        if (std::abs(profile.positions[i] - profile.compacton_center) < reach) {
            sum += profile.magnitudes[i];
            ++count;
        }
    }
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

std::optional<double> mean_envelope_amplitude(const FieldState& field, WavepacketSide side,
                                              const CompactonSpec& spec, const GridSpec& grid,
                                              double front, const AnalysisSettings& settings) {
    return mean_envelope_amplitude(side_profile(field, side, spec, grid, settings), front);
}

bool packet_contained(const SideProfile& profile, const AnalysisSettings& settings) {
    const double peak = profile.max_magnitude();
    if (peak == 0.0) return true;
    const std::size_t edge =
        std::min(std::max<std::size_t>(settings.guard_nodes, 1), profile.magnitudes.size());
    for (std::size_t i = 0; i < edge; ++i) {
        if (profile.magnitudes[i] > settings.noise_fraction * peak) return false;
    }
    return true;
}

namespace {

SideReport analyze_side(std::span<const FieldState> snapshots, WavepacketSide side,
                        const CompactonSpec& spec, const GridSpec& grid,
                        const AnalysisSettings& settings) {
    SideReport report;
    report.side = side;
    const std::size_t n = snapshots.size();
    report.amplitudes.resize(n);
    report.fronts.resize(n);
    report.front_offsets.resize(n);
    report.means.resize(n);

    std::vector<SideProfile> profiles;
    profiles.reserve(n);
    for (const auto& snap : snapshots) profiles.push_back(side_profile(snap, side, spec, grid, settings));

    // Once radiation reaches the outer end of the side (it has wrapped through
    // the periodic boundary, or the other packet has arrived), later snapshots
    // no longer show this packet alone.
    std::size_t usable = 0;
    while (usable < n && packet_contained(profiles[usable], settings)) ++usable;
    if (usable < n) {
        report.contained_until = snapshots[usable].t;
        report.velocity_note = report.scaling_note =
            fmt::format("radiation reaches the outer end of the side at t = {}", snapshots[usable].t);
    }

    if (usable > 0) {
        const double last_peak = profiles[usable - 1].max_magnitude();
        if (last_peak > 0.0) report.threshold = settings.threshold_fraction * last_peak;
    }

    for (std::size_t k = 0; k < usable; ++k) {
        report.amplitudes[k] = detect_amplitude(profiles[k], settings);
        if (!report.threshold) continue;
        report.fronts[k] = front_position(profiles[k], *report.threshold);
        if (!report.fronts[k]) continue;
        report.front_offsets[k] = *report.fronts[k] - profiles[k].compacton_center;
        report.means[k] = mean_envelope_amplitude(profiles[k], *report.fronts[k]);
    }

    // Computational frame: the radiation speed does not depend on how fast the
    // compacton itself drifts when c0 != c.
    std::vector<double> t, position;
    for (std::size_t k = 0; k < n; ++k) {
        if (report.fronts[k]) {
            t.push_back(snapshots[k].t);
            position.push_back(*report.fronts[k]);
        }
    }
    try {
        report.velocity = front_velocity(position, t);
    } catch (const Error& e) {
        report.velocity_note += (report.velocity_note.empty() ? "" : "; ") + std::string(e.what());
    }

    // The discard window is measured on the full snapshot time axis, so
    // snapshots without a detected packet do not shift it.
    const double t_first = snapshots.front().t;
    const double t_last = snapshots.back().t;
    const double start = t_first + settings.discard_fraction * (t_last - t_first);
    std::vector<double> fit_t, fit_mean;
    for (std::size_t k = 0; k < n; ++k) {
        if (snapshots[k].t + 1e-9 < start || !report.means[k]) continue;
        fit_t.push_back(snapshots[k].t);
        fit_mean.push_back(*report.means[k]);
    }
    try {
        report.scaling = scaling_exponent(fit_mean, fit_t, 0.0);
    } catch (const Error& e) {
        report.scaling_note += (report.scaling_note.empty() ? "" : "; ") + std::string(e.what());
    }
    return report;
}

}  // namespace

RadiationReport analyze(std::span<const FieldState> snapshots, const CompactonSpec& spec,
                        const GridSpec& grid, const AnalysisSettings& settings) {
    settings.validate();
    if (snapshots.empty()) throw InsufficientDataError("analysis needs at least one snapshot");
    RadiationReport report;
    for (const auto& snap : snapshots) report.times.push_back(snap.t);
    report.forward = analyze_side(snapshots, WavepacketSide::Forward, spec, grid, settings);
    report.backward = analyze_side(snapshots, WavepacketSide::Backward, spec, grid, settings);
    return report;
}

}  // namespace kompakton

#include "kompakton/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "kompakton/errors.hpp"

namespace kompakton {

GridSpec::GridSpec(double length, std::size_t nodes)
    : length_(length), nodes_(nodes), dx_(length / static_cast<double>(nodes)) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ParameterError(fmt::format("domain length must be positive, got {}", length));
    }
    if (nodes < kMinNodes) {
        throw ParameterError(fmt::format("grid needs at least {} nodes, got {}", kMinNodes, nodes));
    }
}

GridSpec GridSpec::from_spacing(double length, double dx) {
    if (!(dx > 0.0)) throw ParameterError(fmt::format("dx must be positive, got {}", dx));
    const double ratio = length / dx;
    const double nodes = std::round(ratio);
    if (std::abs(ratio - nodes) > 1e-9 * ratio) {
        throw ConfigurationError(
            fmt::format("L = {} is not an integer multiple of dx = {}", length, dx));
    }
    return GridSpec(length, static_cast<std::size_t>(nodes));
}

TimeSpec TimeSpec::uniform(double dt, double t_end, double snapshot_interval) {
    if (!(snapshot_interval > 0.0)) {
        throw ParameterError(
            fmt::format("snapshot interval must be positive, got {}", snapshot_interval));
    }
    TimeSpec spec{dt, t_end, {}};
    spec.validate();
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * snapshot_interval;
        if (t > t_end * (1.0 + 1e-12)) break;
        spec.snapshot_times.push_back(std::min(t, t_end));
    }
    if (spec.snapshot_times.back() < t_end * (1.0 - 1e-12)) spec.snapshot_times.push_back(t_end);
    return spec;
}

void TimeSpec::validate() const {
    if (!(dt > 0.0)) throw ParameterError(fmt::format("dt must be positive, got {}", dt));
    if (!(t_end >= 0.0)) throw ParameterError(fmt::format("t_end must be >= 0, got {}", t_end));
    for (double t : snapshot_times) {
        if (t < 0.0 || t > t_end * (1.0 + 1e-12)) {
            throw ParameterError(fmt::format("snapshot time {} outside [0, {}]", t, t_end));
        }
    }
}

std::size_t TimeSpec::step_count() const {
    return static_cast<std::size_t>(std::llround(t_end / dt));
}

CompactonSpec::CompactonSpec(Rational p, double c, double x0, double c0)
    : p_(p), c_(c), x0_(x0), c0_(c0) {
    if (p.numerator() <= p.denominator()) {
        throw ParameterError(fmt::format("compactons need p > 1, got p = {}", p.to_string()));
    }
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw ParameterError(fmt::format("compacton velocity must be positive, got c = {}", c));
    }
    if (!std::isfinite(x0) || !std::isfinite(c0)) {
        throw ParameterError("x0 and c0 must be finite");
    }
    const double pv = p.value();
    alpha_ = 2.0 * c * pv / (pv + 1.0);
    beta_ = (pv - 1.0) / (2.0 * pv);
    mu_ = 1.0 / (pv - 1.0);
    peak_ = std::pow(alpha_, mu_);
}

double CompactonSpec::half_width() const noexcept { return std::numbers::pi / (2.0 * beta_); }

bool FieldState::all_finite() const noexcept {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double FieldState::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double compacton_value(const CompactonSpec& spec, double x, double t) {
    const double xi = x - spec.center(t);
    if (std::abs(xi) >= spec.half_width()) return 0.0;
    const double cosine = std::cos(spec.beta() * xi);
    return spec.peak() * std::pow(cosine * cosine, spec.mu());
}

FieldState sample_initial(const CompactonSpec& spec, const GridSpec& grid) {
    const auto [left, right] = support_edges(spec, 0.0);
    if (left <= 0.0 || right >= grid.length()) {
        throw ConfigurationError(fmt::format(
            "compacton support [{}, {}] is not inside the domain (0, {})", left, right,
            grid.length()));
    }
    FieldState state;
    state.values.resize(grid.nodes());
    for (std::size_t m = 0; m < grid.nodes(); ++m) {
        state.values[m] = compacton_value(spec, grid.x(m), 0.0);
    }
    return state;
}

std::pair<double, double> support_edges(const CompactonSpec& spec, double t) {
    const double centre = spec.center(t);
    return {centre - spec.half_width(), centre + spec.half_width()};
}

}  // namespace kompakton

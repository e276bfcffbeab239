#include "kompakton/stencil.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/core.h>

#include "kompakton/banded.hpp"
#include "kompakton/errors.hpp"

namespace kompakton {

namespace {

using Coefficients = std::array<Rational, StencilOperator::kWidth>;

Coefficients scaled(std::array<std::int64_t, 5> numerators, std::int64_t denominator) {
    Coefficients out;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = Rational(numerators[i], denominator);
    return out;
}

void require_spacing(double dx) {
    if (!(dx > 0.0) || !std::isfinite(dx)) {
        throw ParameterError(fmt::format("grid spacing must be positive, got {}", dx));
    }
}

}  // namespace

OrderPair truncation_orders(SchemeId scheme) noexcept {
    switch (scheme) {
        case SchemeId::Ismail: return {2, 2};
        case SchemeId::DeFrutos: return {6, 4};
        case SchemeId::Pade6: return {4, 6};
        case SchemeId::Pade8: return {8, 2};
    }
    return {0, 0};
}

std::string_view scheme_name(SchemeId scheme) noexcept {
    switch (scheme) {
        case SchemeId::Ismail: return "ismail";
        case SchemeId::DeFrutos: return "de_frutos";
        case SchemeId::Pade6: return "pade6";
        case SchemeId::Pade8: return "pade8";
    }
    return "unknown";
}

SchemeId parse_scheme(std::string_view text) {
    std::string key;
    for (char ch : text) {
        if (ch == '-' || ch == '_' || std::isspace(static_cast<unsigned char>(ch))) continue;
        key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    if (key == "ismail" || key == "1") return SchemeId::Ismail;
    if (key == "defrutos" || key == "2") return SchemeId::DeFrutos;
    if (key == "pade6" || key == "3") return SchemeId::Pade6;
    if (key == "pade8" || key == "4") return SchemeId::Pade8;
    throw ParameterError(fmt::format(
        "unknown scheme '{}' (expected ismail, de_frutos, pade6 or pade8)", text));
}

StencilOperator::StencilOperator(std::array<Rational, kWidth> coefficients, int dx_power,
                                 double dx)
    : exact_(coefficients), dx_power_(dx_power), dx_(dx) {
    if (dx_power < 0) throw ParameterError("stencil dx power must be non-negative");
    require_spacing(dx);
    const double scale = std::pow(dx, dx_power);
    for (std::size_t i = 0; i < kWidth; ++i) weights_[i] = exact_[i].value() / scale;
}

Rational StencilOperator::coefficient(int offset) const {
    if (offset < -kRadius || offset > kRadius) {
        throw ParameterError(fmt::format("stencil offset {} outside [-2, 2]", offset));
    }
    return exact_[static_cast<std::size_t>(offset + kRadius)];
}

void StencilOperator::apply(std::span<const double> in, std::span<double> out) const {
    const std::size_t n = in.size();
    if (n < kWidth) {
        throw ParameterError(fmt::format("stencil needs at least {} nodes, got {}", kWidth, n));
    }
    if (out.size() != n) throw ParameterError("stencil output size mismatch");
    const auto [wm2, wm1, w0, wp1, wp2] = weights_;
    auto row = [&](std::size_t m, std::size_t im2, std::size_t im1, std::size_t ip1,
                   std::size_t ip2) {
        out[m] = wm2 * in[im2] + wm1 * in[im1] + w0 * in[m] + wp1 * in[ip1] + wp2 * in[ip2];
    };
    row(0, n - 2, n - 1, 1, 2);
    row(1, n - 1, 0, 2, 3);
    for (std::size_t m = 2; m + 2 < n; ++m) row(m, m - 2, m - 1, m + 1, m + 2);
    row(n - 2, n - 4, n - 3, n - 1, 0);
    row(n - 1, n - 3, n - 2, 0, 1);
}

FieldState StencilOperator::apply(const FieldState& field) const {
    FieldState out{field.t, std::vector<double>(field.values.size())};
    apply(field.values, out.values);
    return out;
}

StencilOperator operator_A(SchemeId scheme) {
    switch (scheme) {
        case SchemeId::Ismail: return {scaled({0, 0, 1, 0, 0}, 1), 0, 1.0};
        case SchemeId::DeFrutos: return {scaled({1, 26, 66, 26, 1}, 120), 0, 1.0};
        case SchemeId::Pade6: return {scaled({1, 56, 126, 56, 1}, 240), 0, 1.0};
        case SchemeId::Pade8: return {scaled({1, 16, 36, 16, 1}, 70), 0, 1.0};
    }
    throw ParameterError("unknown scheme");
}

StencilOperator operator_B(SchemeId scheme, double dx) {
    require_spacing(dx);
    switch (scheme) {
        case SchemeId::Ismail: return {scaled({0, -1, 0, 1, 0}, 2), 1, dx};
        case SchemeId::DeFrutos:
        case SchemeId::Pade6: return {scaled({-1, -10, 0, 10, 1}, 24), 1, dx};
        case SchemeId::Pade8: return {scaled({-5, -32, 0, 32, 5}, 84), 1, dx};
    }
    throw ParameterError("unknown scheme");
}

StencilOperator operator_C(SchemeId /*scheme*/, double dx) {
    require_spacing(dx);
    return {scaled({-1, 2, 0, -2, 1}, 2), 3, dx};
}

std::vector<double> apply_rational(const StencilOperator& mass, const StencilOperator& numerator,
                                   std::span<const double> u) {
    std::vector<double> rhs(u.size());
    numerator.apply(u, rhs);
    PeriodicBandedMatrix a(u.size());
    for (std::size_t m = 0; m < u.size(); ++m) {
        for (int d = -2; d <= 2; ++d) a.at(m, d) = mass.weight(d);
    }
    return PeriodicBandedLU(a).solve(rhs);
}

OrderEstimate empirical_order(SchemeId scheme, int derivative,
                              std::span<const std::size_t> grid_sizes) {
    if (derivative != 1 && derivative != 3) {
        throw ParameterError(fmt::format("derivative must be 1 or 3, got {}", derivative));
    }
    if (grid_sizes.size() < 2) throw InsufficientDataError("order estimate needs two grids");

    constexpr double kWave = 4.0;
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    OrderEstimate estimate;
    std::vector<bool> above_floor;
    for (std::size_t m_count : grid_sizes) {
        const GridSpec grid(2.0 * std::numbers::pi, m_count);
        std::vector<double> u(m_count);
        for (std::size_t m = 0; m < m_count; ++m) u[m] = std::sin(kWave * grid.x(m));

        const StencilOperator a = operator_A(scheme);
        const StencilOperator numerator =
            derivative == 1 ? operator_B(scheme, grid.dx()) : operator_C(scheme, grid.dx());
        const std::vector<double> approx = apply_rational(a, numerator, u);

        const double amplitude = derivative == 1 ? kWave : kWave * kWave * kWave;
        double error = 0.0;
        for (std::size_t m = 0; m < m_count; ++m) {
            const double c = std::cos(kWave * grid.x(m));
            const double exact = derivative == 1 ? amplitude * c : -amplitude * c;
            error = std::max(error, std::abs(approx[m] - exact));
        }
        double weight_sum = 0.0;
        for (double w : numerator.weights()) weight_sum += std::abs(w);

        estimate.grid_sizes.push_back(m_count);
        estimate.errors.push_back(error / amplitude);
        // Rounding in the stencil sum alone is about eps * sum|w|, and the
        // solve with A amplifies it by another order of magnitude or so.
        // Pairs closer than that to the floor give garbage ratios.
        above_floor.push_back(error > 100.0 * kEps * weight_sum);
    }
    for (std::size_t k = 0; k + 1 < estimate.errors.size(); ++k) {
        const double ratio = estimate.errors[k] / estimate.errors[k + 1];
        const double h_ratio = static_cast<double>(estimate.grid_sizes[k + 1]) /
                               static_cast<double>(estimate.grid_sizes[k]);
        estimate.pairwise_orders.push_back(std::log(ratio) / std::log(h_ratio));
        if (above_floor[k] && above_floor[k + 1]) estimate.order = estimate.pairwise_orders.back();
    }
    return estimate;
}

OrderEstimate empirical_order(SchemeId scheme, int derivative) {
    static constexpr std::array<std::size_t, 3> kGrids = {64, 128, 256};
    return empirical_order(scheme, derivative, kGrids);
}

}  // namespace kompakton

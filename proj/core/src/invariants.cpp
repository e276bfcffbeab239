#include "kompakton/invariants.hpp"

#include <cmath>

#include <fmt/core.h>

#include "kompakton/errors.hpp"
#include "kompakton/stepper.hpp"

namespace kompakton {

namespace {

void check_index(int j) {
    if (j < 1 || j > 4) throw ParameterError(fmt::format("invariant index must be 1..4, got {}", j));
}

}  // namespace

std::array<double, 4> invariants(const FieldState& field, Rational p, const GridSpec& grid) {
    if (field.values.size() != grid.nodes()) {
        throw ParameterError(fmt::format("field has {} values, grid has {} nodes",
                                         field.values.size(), grid.nodes()));
    }
    const Rational exponent = p + Rational(1);
    std::array<double, 4> sums{};
    for (std::size_t m = 0; m < field.values.size(); ++m) {
        const double u = field.values[m];
        const double x = grid.x(m);
        sums[0] += u;
        sums[1] += signed_power(u, exponent);
        sums[2] += u * std::cos(x);
        sums[3] += u * std::sin(x);
    }
    for (double& s : sums) s *= grid.dx();
    return sums;
}

double invariant(const FieldState& field, int j, Rational p, const GridSpec& grid) {
    check_index(j);
    return invariants(field, p, grid)[static_cast<std::size_t>(j - 1)];
}

void InvariantSeries::record(const FieldState& field) {
    times_.push_back(field.t);
    values_.push_back(invariants(field, p_, grid_));
}

double InvariantSeries::relative_drift(std::size_t k, int j) const {
    check_index(j);
    if (k >= values_.size()) throw ParameterError("invariant sample index out of range");
    const auto idx = static_cast<std::size_t>(j - 1);
    const double base = values_.front()[idx];
    const double diff = values_[k][idx] - base;
    return base == 0.0 ? diff : diff / std::abs(base);
}

double InvariantSeries::max_relative_drift(int j) const {
    double worst = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        worst = std::max(worst, std::abs(relative_drift(k, j)));
    }
    return worst;
}

}  // namespace kompakton

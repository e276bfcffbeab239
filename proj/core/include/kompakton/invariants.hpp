#pragma once

#include <array>
#include <vector>

#include "kompakton/grid.hpp"
#include "kompakton/rational.hpp"

namespace kompakton {

/// I_j = dx * sum_m phi_j(U_m) on the periodic grid, with phi_1 = u,
/// phi_2 = u^{p+1} (signed power), phi_3 = u cos(x), phi_4 = u sin(x).
[[nodiscard]] double invariant(const FieldState& field, int j, Rational p, const GridSpec& grid);

/// All four invariants at once.
[[nodiscard]] std::array<double, 4> invariants(const FieldState& field, Rational p,
                                               const GridSpec& grid);

/// I_1..I_4 sampled at the snapshot times of a run.
class InvariantSeries {
public:
    InvariantSeries() = default;
    InvariantSeries(Rational p, GridSpec grid) : p_(p), grid_(grid) {}

    void record(const FieldState& field);

    [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
    [[nodiscard]] const std::vector<std::array<double, 4>>& values() const noexcept {
        return values_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }

    /// (I_j(t_k) - I_j(t_0)) / |I_j(t_0)|; absolute difference when I_j(t_0) is 0.
    [[nodiscard]] double relative_drift(std::size_t k, int j) const;
    /// Largest |relative_drift| of invariant j over the series.
    [[nodiscard]] double max_relative_drift(int j) const;

private:
    Rational p_{2};
    GridSpec grid_{1.0, GridSpec::kMinNodes};
    std::vector<double> times_;
    std::vector<std::array<double, 4>> values_;
};

}  // namespace kompakton

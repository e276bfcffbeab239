#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kompakton/grid.hpp"
#include "kompakton/rational.hpp"

namespace kompakton {

/// The four spatial discretizations of the K(p,p) equation.
enum class SchemeId { Ismail, DeFrutos, Pade6, Pade8 };

inline constexpr std::array<SchemeId, 4> kAllSchemes = {
    SchemeId::Ismail, SchemeId::DeFrutos, SchemeId::Pade6, SchemeId::Pade8};

/// Truncation orders of B/A (first derivative) and C/A (third derivative).
struct OrderPair {
    int first_derivative;
    int third_derivative;
};

[[nodiscard]] OrderPair truncation_orders(SchemeId scheme) noexcept;

/// Stable identifiers: "ismail", "de_frutos", "pade6", "pade8".
[[nodiscard]] std::string_view scheme_name(SchemeId scheme) noexcept;
/// Inverse of scheme_name; also accepts "defrutos", "pade-6", "pade-8" and 1..4.
[[nodiscard]] SchemeId parse_scheme(std::string_view text);

/// Periodic five-point operator sum_j w_j E^j, j = -2..2, with
/// w_j = coefficient_j / dx^dx_power.
class StencilOperator {
public:
    static constexpr int kRadius = 2;
    static constexpr std::size_t kWidth = 2 * kRadius + 1;

    StencilOperator(std::array<Rational, kWidth> coefficients, int dx_power, double dx);

    /// Exact coefficient at offset -2..2 (before the dx scaling).
    [[nodiscard]] Rational coefficient(int offset) const;
    [[nodiscard]] const std::array<Rational, kWidth>& coefficients() const noexcept {
        return exact_;
    }
    /// Floating-point weights indexed by offset + 2, dx scaling included.
    [[nodiscard]] const std::array<double, kWidth>& weights() const noexcept { return weights_; }
    [[nodiscard]] double weight(int offset) const noexcept { return weights_[offset + kRadius]; }
    [[nodiscard]] int dx_power() const noexcept { return dx_power_; }
    [[nodiscard]] double dx() const noexcept { return dx_; }

    /// out_m = sum_j w_j in_{(m+j) mod M}. `in` and `out` must not alias.
    void apply(std::span<const double> in, std::span<double> out) const;
    [[nodiscard]] FieldState apply(const FieldState& field) const;

private:
    std::array<Rational, kWidth> exact_;
    int dx_power_;
    double dx_;
    std::array<double, kWidth> weights_{};
};

/// Mass operator A_i (dx_power 0).
[[nodiscard]] StencilOperator operator_A(SchemeId scheme);
/// First-derivative numerator B_i (dx_power 1).
[[nodiscard]] StencilOperator operator_B(SchemeId scheme, double dx);
/// Third-derivative numerator C_i (dx_power 3), shared by all four schemes.
[[nodiscard]] StencilOperator operator_C(SchemeId scheme, double dx);

/// Result of a grid-refinement order measurement.
struct OrderEstimate {
    std::vector<std::size_t> grid_sizes;
    std::vector<double> errors;  ///< relative max-norm error per grid
    /// log2(e_k / e_{k+1}) for each consecutive pair.
    std::vector<double> pairwise_orders;
    /// Order from the finest pair whose errors sit above the rounding floor;
    /// empty when every pair is at the floor.
    std::optional<double> order;
};

/// Applies B/A (derivative 1) or C/A (derivative 3), evaluated by solving
/// A y = B u on the periodic grid, to u(x) = sin(4x) on [0, 2 pi] for each
/// grid size and measures the convergence order.
[[nodiscard]] OrderEstimate empirical_order(SchemeId scheme, int derivative,
                                            std::span<const std::size_t> grid_sizes);
[[nodiscard]] OrderEstimate empirical_order(SchemeId scheme, int derivative);

/// Evaluates (numerator / A) u for a periodic field: solves A y = numerator u.
[[nodiscard]] std::vector<double> apply_rational(const StencilOperator& mass,
                                                 const StencilOperator& numerator,
                                                 std::span<const double> u);

}  // namespace kompakton

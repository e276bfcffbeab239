#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kompakton {

/// Square M x M matrix whose nonzeros lie on the five periodic diagonals
/// j - i in {-2, ..., 2} (mod M). Entries with a wrapped column form the
/// corner blocks coupling rows {0, 1} with columns {M-2, M-1} and vice versa.
class PeriodicBandedMatrix {
public:
    static constexpr int kHalfBandwidth = 2;
    static constexpr std::size_t kDiagonals = 2 * kHalfBandwidth + 1;
    static constexpr std::size_t kMinSize = 8;

    explicit PeriodicBandedMatrix(std::size_t size);

    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }

    /// Entry in `row` at column (row + offset) mod M, offset in [-2, 2].
    [[nodiscard]] double& at(std::size_t row, int offset) {
        return rows_[row][static_cast<std::size_t>(offset + kHalfBandwidth)];
    }
    [[nodiscard]] double at(std::size_t row, int offset) const {
        return rows_[row][static_cast<std::size_t>(offset + kHalfBandwidth)];
    }

    /// Offsets -2..2 of one row.
    [[nodiscard]] const std::array<double, kDiagonals>& row(std::size_t row) const {
        return rows_[row];
    }

    /// Dense access; zero outside the periodic band.
    [[nodiscard]] double operator()(std::size_t row, std::size_t col) const;

    /// y = A x.
    void multiply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

    [[nodiscard]] double max_abs() const noexcept;

private:
    std::vector<std::array<double, kDiagonals>> rows_;
};

/// LU factorization of a PeriodicBandedMatrix.
///
/// The last two unknowns are treated as a border: the leading (M-2) x (M-2)
/// block is a plain (non-periodic) band matrix, factorized by Gaussian
/// elimination with partial pivoting (the upper factor widens to four
/// superdiagonals). The wrapped corner entries only couple the border, so the
/// periodic part reduces to a 2 x 2 Schur complement. Throws LinearSolveError
/// when the matrix is singular to working precision.
class PeriodicBandedLU {
public:
    PeriodicBandedLU() = default;
    explicit PeriodicBandedLU(const PeriodicBandedMatrix& matrix);

    /// Refactorizes in place, reusing storage when the size is unchanged.
    void factor(const PeriodicBandedMatrix& matrix);

    [[nodiscard]] std::size_t size() const noexcept { return size_; }

    /// Overwrites `rhs` with the solution.
    void solve_in_place(std::span<double> rhs) const;
    [[nodiscard]] std::vector<double> solve(std::span<const double> rhs) const;

private:
    static constexpr std::size_t kRowWidth = 7;  // columns i-2 .. i+4
    static constexpr std::size_t kBorder = 2;

    void factor_band(const PeriodicBandedMatrix& matrix);
    void band_solve(double* rhs) const;
    void factor_border(const PeriodicBandedMatrix& matrix);

    std::size_t size_ = 0;
    std::size_t inner_ = 0;                        // size_ - kBorder
    std::vector<double> lu_;                       // row-major, kRowWidth per row
    std::vector<double> lower_;                    // two multipliers per elimination step
    std::vector<std::uint32_t> pivots_;
    // Border rows restricted to the inner block: nonzero only at columns
    // 0, 1, inner-2, inner-1, stored in that order.
    std::array<std::array<double, 4>, kBorder> border_rows_{};
    std::vector<std::array<double, kBorder>> border_solution_;  // inner^{-1} * border columns
    std::array<std::array<double, kBorder>, kBorder> schur_inverse_{};
    std::vector<double> column_scratch_;
};

/// Solves mat * x = rhs. Throws LinearSolveError if mat is singular.
[[nodiscard]] std::vector<double> solve_periodic_banded(const PeriodicBandedMatrix& mat,
                                                        std::span<const double> rhs);

}  // namespace kompakton

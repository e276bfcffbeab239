#include "kompakton/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "kompakton/errors.hpp"

namespace kompakton {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

PeriodicBandedMatrix::PeriodicBandedMatrix(std::size_t size) : rows_(size) {
    if (size < kMinSize) {
        throw ParameterError(
            fmt::format("periodic banded matrix needs size >= {}, got {}", kMinSize, size));
    }
    for (auto& row : rows_) row.fill(0.0);
}

double PeriodicBandedMatrix::operator()(std::size_t row, std::size_t col) const {
    const auto n = static_cast<std::ptrdiff_t>(size());
    std::ptrdiff_t d = static_cast<std::ptrdiff_t>(col) - static_cast<std::ptrdiff_t>(row);
    if (d > n / 2) d -= n;
    if (d < -n / 2) d += n;
    if (d < -kHalfBandwidth || d > kHalfBandwidth) return 0.0;
    return at(row, static_cast<int>(d));
}

void PeriodicBandedMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int d = -kHalfBandwidth; d <= kHalfBandwidth; ++d) {
            const std::size_t j =
                static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i + n) + d) % n;
            acc += at(i, d) * x[j];
        }
        y[i] = acc;
    }
}

std::vector<double> PeriodicBandedMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(size());
    multiply(x, y);
    return y;
}

double PeriodicBandedMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& row : rows_) {
        for (double v : row) m = std::max(m, std::abs(v));
    }
    return m;
}

PeriodicBandedLU::PeriodicBandedLU(const PeriodicBandedMatrix& matrix) { factor(matrix); }

void PeriodicBandedLU::factor(const PeriodicBandedMatrix& matrix) {
    size_ = matrix.size();
    inner_ = size_ - kBorder;
    factor_band(matrix);
    factor_border(matrix);
}

// Gaussian elimination with partial pivoting on the leading inner block. Row i
// stores columns i-2 .. i+4; after a row swap the upper factor has at most four
// superdiagonals, so every touched entry stays inside that window.
void PeriodicBandedLU::factor_band(const PeriodicBandedMatrix& matrix) {
    const std::size_t n = inner_;
    lu_.assign(n * kRowWidth, 0.0);
    lower_.assign(2 * n, 0.0);
    pivots_.resize(n);

    // Row r, column c lives at lu_[r * kRowWidth + c - r + 2] = q[6 r + c].
    double* q = lu_.data() + 2;
    for (std::size_t i = 0; i < n; ++i) {
        double* row = q + 6 * i + i;  // row[c] is column i + c
        const auto& band = matrix.row(i);
        for (int d = -2; d <= 2; ++d) {
            const auto col = static_cast<std::ptrdiff_t>(i) + d;
            if (col < 0 || col >= static_cast<std::ptrdiff_t>(n)) continue;
            row[d] = band[static_cast<std::size_t>(d + 2)];
        }
    }

    const double tiny = 64.0 * kEps * std::max(matrix.max_abs(), std::numeric_limits<double>::min());
    auto zero_pivot = [&](std::size_t k) {
        return LinearSolveError(
            fmt::format("banded factorization: zero pivot in column {} of {}", k, size_));
    };
    // Interior columns: two rows below, five columns to the right of the pivot.
    const std::size_t interior_end = n >= 4 ? n - 4 : 0;
    for (std::size_t k = 0; k < interior_end; ++k) {
        double* r0 = q + 6 * k + k;
        double* r1 = r0 + 6;
        double* r2 = r0 + 12;
        const double a0 = std::abs(r0[0]), a1 = std::abs(r1[0]), a2 = std::abs(r2[0]);
        std::uint32_t p = 0;
        double best = a0;
        if (a1 > best) {
            best = a1;
            p = 1;
        }
        if (a2 > best) {
            best = a2;
            p = 2;
        }
        if (!(best > tiny)) throw zero_pivot(k);
        pivots_[k] = static_cast<std::uint32_t>(k) + p;
        if (p != 0) {
            double* rp = p == 1 ? r1 : r2;
            for (int c = 0; c <= 4; ++c) std::swap(r0[c], rp[c]);
        }
        const double inv_pivot = 1.0 / r0[0];
        const double l1 = r1[0] * inv_pivot;
        const double l2 = r2[0] * inv_pivot;
        lower_[2 * k] = l1;
        lower_[2 * k + 1] = l2;
        r1[0] = 0.0;
        r2[0] = 0.0;
        for (int c = 1; c <= 4; ++c) {
            r1[c] -= l1 * r0[c];
            r2[c] -= l2 * r0[c];
        }
    }
    for (std::size_t k = interior_end; k < n; ++k) {
        const std::size_t rows_below = std::min<std::size_t>(2, n - 1 - k);
        const std::size_t last_col = std::min(k + 4, n - 1);
        double* rk = q + 6 * k;

        std::size_t p = 0;
        double best = std::abs(rk[k]);
        for (std::size_t r = 1; r <= rows_below; ++r) {
            const double v = std::abs(q[6 * (k + r) + k]);
            if (v > best) {
                best = v;
                p = r;
            }
        }
        if (!(best > tiny)) throw zero_pivot(k);
        pivots_[k] = static_cast<std::uint32_t>(k + p);
        if (p != 0) {
            double* rp = q + 6 * (k + p);
            for (std::size_t col = k; col <= last_col; ++col) std::swap(rk[col], rp[col]);
        }
        const double inv_pivot = 1.0 / rk[k];
        for (std::size_t r = 1; r <= rows_below; ++r) {
            double* rr = q + 6 * (k + r);
            const double l = rr[k] * inv_pivot;
            lower_[2 * k + r - 1] = l;
            rr[k] = 0.0;
            for (std::size_t col = k + 1; col <= last_col; ++col) rr[col] -= l * rk[col];
        }
    }
}

void PeriodicBandedLU::band_solve(double* rhs) const {
    const std::size_t n = inner_;
    const double* lower = lower_.data();
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t p = pivots_[k];
        if (p != k) std::swap(rhs[k], rhs[p]);
        const double yk = rhs[k];
        rhs[k + 1] -= lower[2 * k] * yk;
        rhs[k + 2] -= lower[2 * k + 1] * yk;
    }
    for (std::size_t k = n >= 2 ? n - 2 : 0; k < n; ++k) {
        const std::size_t p = pivots_[k];
        if (p != k) std::swap(rhs[k], rhs[p]);
        if (k + 1 < n) rhs[k + 1] -= lower[2 * k] * rhs[k];
    }

    const double* a = lu_.data();
    for (std::size_t k = n; k-- > 0;) {
        const double* row = a + k * kRowWidth;
        double acc = rhs[k];
        if (k + 4 < n) {
            acc -= row[3] * rhs[k + 1] + row[4] * rhs[k + 2] + row[5] * rhs[k + 3] +
                   row[6] * rhs[k + 4];
        } else {
            for (std::size_t col = k + 1; col < n; ++col) acc -= row[col + 2 - k] * rhs[col];
        }
        rhs[k] = acc / row[2];
    }
}

void PeriodicBandedLU::factor_border(const PeriodicBandedMatrix& matrix) {
    const std::size_t n = size_;
    const std::size_t m = inner_;
    const std::array<std::size_t, 4> inner_cols = {0, 1, m - 2, m - 1};

    // Columns n-2, n-1 restricted to the inner rows, then solved in place.
    border_solution_.assign(m, {0.0, 0.0});
    std::vector<double>& column = column_scratch_;
    column.resize(m);
    for (std::size_t s = 0; s < kBorder; ++s) {
        std::fill(column.begin(), column.end(), 0.0);
        for (std::size_t i : inner_cols) column[i] = matrix(i, n - 2 + s);
        band_solve(column.data());
        for (std::size_t i = 0; i < m; ++i) border_solution_[i][s] = column[i];
    }

    for (std::size_t r = 0; r < kBorder; ++r) {
        for (std::size_t k = 0; k < inner_cols.size(); ++k) {
            border_rows_[r][k] = matrix(n - 2 + r, inner_cols[k]);
        }
    }

    // Schur complement S = D - L * Q^{-1} G.
    std::array<std::array<double, kBorder>, kBorder> schur{};
    for (std::size_t r = 0; r < kBorder; ++r) {
        for (std::size_t s = 0; s < kBorder; ++s) {
            double acc = matrix(n - 2 + r, n - 2 + s);
            for (std::size_t k = 0; k < inner_cols.size(); ++k) {
                acc -= border_rows_[r][k] * border_solution_[inner_cols[k]][s];
            }
            schur[r][s] = acc;
        }
    }
    const double det = schur[0][0] * schur[1][1] - schur[0][1] * schur[1][0];
    const double det_scale =
        std::abs(schur[0][0] * schur[1][1]) + std::abs(schur[0][1] * schur[1][0]);
    if (!(std::abs(det) > 1e-11 * det_scale) || !std::isfinite(det)) {
        throw LinearSolveError("periodic banded matrix is singular (corner block)");
    }
    schur_inverse_[0][0] = schur[1][1] / det;
    schur_inverse_[0][1] = -schur[0][1] / det;
    schur_inverse_[1][0] = -schur[1][0] / det;
    schur_inverse_[1][1] = schur[0][0] / det;
}

void PeriodicBandedLU::solve_in_place(std::span<double> rhs) const {
    if (rhs.size() != size_) {
        throw ParameterError(
            fmt::format("right-hand side has {} entries, matrix is {}", rhs.size(), size_));
    }
    const std::size_t m = inner_;
    band_solve(rhs.data());

    const std::array<std::size_t, 4> inner_cols = {0, 1, m - 2, m - 1};
    std::array<double, kBorder> reduced{};
    for (std::size_t r = 0; r < kBorder; ++r) {
        double acc = rhs[m + r];
        for (std::size_t k = 0; k < inner_cols.size(); ++k) acc -= border_rows_[r][k] * rhs[inner_cols[k]];
        reduced[r] = acc;
    }
    const double x0 = schur_inverse_[0][0] * reduced[0] + schur_inverse_[0][1] * reduced[1];
    const double x1 = schur_inverse_[1][0] * reduced[0] + schur_inverse_[1][1] * reduced[1];
    for (std::size_t i = 0; i < m; ++i) {
        rhs[i] -= border_solution_[i][0] * x0 + border_solution_[i][1] * x1;
    }
    rhs[m] = x0;
    rhs[m + 1] = x1;
}

std::vector<double> PeriodicBandedLU::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.begin(), rhs.end());
    solve_in_place(x);
    return x;
}

std::vector<double> solve_periodic_banded(const PeriodicBandedMatrix& mat,
                                          std::span<const double> rhs) {
    return PeriodicBandedLU(mat).solve(rhs);
}

}  // namespace kompakton

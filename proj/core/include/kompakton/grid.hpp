#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "kompakton/rational.hpp"

namespace kompakton {

/// Uniform periodic grid on [0, L): nodes x_m = m * dx, m = 0..M-1, with node
/// M identified with node 0.
class GridSpec {
public:
    static constexpr std::size_t kMinNodes = 8;

    GridSpec(double length, std::size_t nodes);

    /// Grid with M = L/dx nodes. Throws ConfigurationError unless L/dx is an
    /// integer (to 1e-9 relative).
    static GridSpec from_spacing(double length, double dx);

    [[nodiscard]] double length() const noexcept { return length_; }
    [[nodiscard]] std::size_t nodes() const noexcept { return nodes_; }
    [[nodiscard]] double dx() const noexcept { return dx_; }
    [[nodiscard]] double x(std::size_t m) const noexcept { return static_cast<double>(m) * dx_; }

    /// Index m + offset reduced modulo M.
    [[nodiscard]] std::size_t wrap(std::ptrdiff_t index) const noexcept {
        const auto n = static_cast<std::ptrdiff_t>(nodes_);
        std::ptrdiff_t r = index % n;
        return static_cast<std::size_t>(r < 0 ? r + n : r);
    }

private:
    double length_;
    std::size_t nodes_;
    double dx_;
};

/// Fixed time step, final time and the instants at which the field is kept.
struct TimeSpec {
    double dt;
    double t_end;
    std::vector<double> snapshot_times;

    /// Snapshots at 0, interval, 2*interval, ... and always at t_end.
    static TimeSpec uniform(double dt, double t_end, double snapshot_interval);

    /// Throws ParameterError unless dt > 0, t_end >= 0 and every snapshot lies
    /// in [0, t_end].
    void validate() const;

    /// Number of fixed steps needed to reach t_end.
    [[nodiscard]] std::size_t step_count() const;
};

/// Parameters of a single K(p,p) compacton and the drift c0 of the frame.
class CompactonSpec {
public:
    CompactonSpec(Rational p, double c, double x0, double c0);

    [[nodiscard]] Rational p() const noexcept { return p_; }
    [[nodiscard]] double c() const noexcept { return c_; }
    [[nodiscard]] double x0() const noexcept { return x0_; }
    [[nodiscard]] double c0() const noexcept { return c0_; }

    /// alpha = 2cp/(p+1)
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    /// beta = (p-1)/(2p)
    [[nodiscard]] double beta() const noexcept { return beta_; }
    /// mu = 1/(p-1)
    [[nodiscard]] double mu() const noexcept { return mu_; }
    /// Peak amplitude alpha^mu.
    [[nodiscard]] double peak() const noexcept { return peak_; }
    /// Half width of the support, pi/(2 beta).
    [[nodiscard]] double half_width() const noexcept;
    /// Velocity of the compacton in the computational frame, c - c0.
    [[nodiscard]] double frame_velocity() const noexcept { return c_ - c0_; }
    /// Position of the maximum at time t (not reduced modulo L).
    [[nodiscard]] double center(double t) const noexcept { return x0_ + frame_velocity() * t; }

private:
    Rational p_;
    double c_;
    double x0_;
    double c0_;
    double alpha_;
    double beta_;
    double mu_;
    double peak_;
};

/// Discrete solution U_m at one time level.
struct FieldState {
    double t = 0.0;
    std::vector<double> values;

    [[nodiscard]] bool all_finite() const noexcept;
    [[nodiscard]] double max_abs() const noexcept;
};

/// Closed-form compacton alpha^mu cos^{2mu}(beta xi), xi = x - x0 - (c - c0) t,
/// on |xi| <= pi/(2 beta) and zero elsewhere. Evaluated on the real line (no
/// periodic wrap).
[[nodiscard]] double compacton_value(const CompactonSpec& spec, double x, double t);

/// Samples the compacton at t = 0 on the grid nodes. Throws ConfigurationError
/// when the support is not strictly inside (0, L).
[[nodiscard]] FieldState sample_initial(const CompactonSpec& spec, const GridSpec& grid);

/// Support edges (x_b, x_f) at time t, translated with the frame velocity.
[[nodiscard]] std::pair<double, double> support_edges(const CompactonSpec& spec, double t);

}  // namespace kompakton

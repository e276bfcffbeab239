#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kompakton/banded.hpp"
#include "kompakton/errors.hpp"
#include "kompakton/grid.hpp"
#include "kompakton/invariants.hpp"
#include "kompakton/stencil.hpp"

namespace kompakton {

enum class TimeRule { Trapezoidal, Midpoint };

[[nodiscard]] std::string_view rule_name(TimeRule rule) noexcept;
[[nodiscard]] TimeRule parse_rule(std::string_view text);

struct StepperConfig {
    TimeRule rule = TimeRule::Midpoint;
    /// Bound on the scaled residual dt * max|F| (amplitude units).
    double newton_abs_tol = 1e-12;
    int newton_max_iters = 20;
    /// max|U| above this is a blow-up; defaults to 1e3 times the compacton peak.
    std::optional<double> blowup_threshold;

    void validate() const;
};

struct NewtonReport {
    int iterations = 0;
    /// dt * max_m |F_m| at the returned iterate.
    double final_residual = 0.0;
    /// Effective tolerance: newton_abs_tol, raised to the rounding floor of the
    /// residual evaluation when that floor is larger.
    double tolerance = 0.0;
    bool converged = false;
};

/// A time step that did not produce an acceptable new level.
class StepFailure : public Error {
public:
    enum class Kind { NonFinite, AmplitudeBound, IterationCap, LinearSolve };

    StepFailure(Kind kind, NewtonReport report, const std::string& what)
        : Error(what), kind_(kind), report_(report) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] const NewtonReport& report() const noexcept { return report_; }
    /// Everything except a singular linear system counts as blow-up.
    [[nodiscard]] bool is_blowup() const noexcept { return kind_ != Kind::LinearSolve; }

private:
    Kind kind_;
    NewtonReport report_;
};

/// u -> u^p with the sign convention below, with the exponent decoded once.
class PowerLaw {
public:
    explicit PowerLaw(Rational p);

    [[nodiscard]] double value(double u) const noexcept;
    [[nodiscard]] double derivative(double u) const noexcept;

private:
    static double integer_power(double u, std::int64_t n) noexcept;

    bool integer_;
    std::int64_t integer_exponent_;
    double exponent_;
};

/// Literal power for integer p; sign(u) |u|^p otherwise.
[[nodiscard]] double signed_power(double u, Rational p) noexcept;
/// d/du of signed_power: p u^{p-1} for integer p, p |u|^{p-1} otherwise.
[[nodiscard]] double signed_power_derivative(double u, Rational p) noexcept;

/// One implicit step of the semi-discrete K(p,p) system
///
///   A (U+ - U)/dt - c0 B (U+ + U)/2 + (B + C) N(U, U+) = 0,
///
/// with N = (pw(U+) + pw(U))/2 (trapezoidal) or pw((U+ + U)/2) (midpoint),
/// solved by Newton's method on the periodic banded Jacobian.
class ImplicitStepper {
public:
    ImplicitStepper(SchemeId scheme, StepperConfig config, CompactonSpec spec, GridSpec grid);

    [[nodiscard]] SchemeId scheme() const noexcept { return scheme_; }
    [[nodiscard]] const StepperConfig& config() const noexcept { return config_; }
    [[nodiscard]] const CompactonSpec& compacton() const noexcept { return spec_; }
    [[nodiscard]] const GridSpec& grid() const noexcept { return grid_; }
    [[nodiscard]] double blowup_threshold() const noexcept { return blowup_threshold_; }

    /// F(U_n, U_next) as written above (not scaled by dt). Throws BlowupError on
    /// non-finite input.
    [[nodiscard]] std::vector<double> residual(std::span<const double> current,
                                               std::span<const double> next, double dt) const;

    /// dF/dU_next.
    [[nodiscard]] PeriodicBandedMatrix jacobian(std::span<const double> current,
                                                std::span<const double> next, double dt) const;

    /// Newton iteration from U_next = U_n. Throws StepFailure. Reuses internal
    /// scratch storage, so one stepper must not step from two threads at once.
    [[nodiscard]] std::pair<FieldState, NewtonReport> step(const FieldState& current,
                                                           double dt) const;

private:
    struct Workspace {
        explicit Workspace(std::size_t n)
            : rate(n), average(n), nonlinear(n), scratch{std::vector<double>(n), std::vector<double>(n),
                                                         std::vector<double>(n), std::vector<double>(n)},
              jacobian(n) {}
        std::vector<double> rate;
        std::vector<double> average;
        std::vector<double> nonlinear;
        std::array<std::vector<double>, 4> scratch;
        PeriodicBandedMatrix jacobian;
        PeriodicBandedLU lu;
    };

    void residual_into(std::span<const double> current, std::span<const double> next, double dt,
                       Workspace& work, std::span<double> out) const;
    void nonlinear_term(std::span<const double> current, std::span<const double> next,
                        std::span<double> out) const;
    void jacobian_into(std::span<const double> current, std::span<const double> next, double dt,
                       std::span<double> slope, PeriodicBandedMatrix& jac) const;
    double rounding_floor(std::span<const double> current, std::span<const double> next,
                          std::span<const double> nonlinear, double dt, Workspace& work) const;

    SchemeId scheme_;
    StepperConfig config_;
    CompactonSpec spec_;
    GridSpec grid_;
    StencilOperator mass_;
    StencilOperator first_;
    StencilOperator third_;
    std::array<double, 5> dispersive_{};  // weights of B + C
    PowerLaw power_;
    double blowup_threshold_;
    mutable std::unique_ptr<Workspace> workspace_;
};

enum class RunStatus { Completed, BlownUp, SolverFailure };

[[nodiscard]] std::string_view status_name(RunStatus status) noexcept;

/// Output of a full integration.
struct Trajectory {
    std::vector<FieldState> snapshots;
    std::vector<NewtonReport> reports;  ///< one per completed step
    InvariantSeries invariants;         ///< one entry per snapshot
    RunStatus status = RunStatus::Completed;
    double final_time = 0.0;            ///< last time level reached
    std::string message;                ///< failure description, empty on success

    [[nodiscard]] bool blown_up() const noexcept { return status == RunStatus::BlownUp; }
};

/// Called after every completed step with the new level.
using StepObserver = std::function<void(const FieldState&, const NewtonReport&)>;

/// Integrates the sampled compacton to time.t_end with fixed dt, keeping the
/// field at each snapshot time. Step failures end the run early and are
/// reported through Trajectory::status rather than thrown.
[[nodiscard]] Trajectory run(SchemeId scheme, const StepperConfig& config,
                             const CompactonSpec& spec, const GridSpec& grid,
                             const TimeSpec& time, const StepObserver& observer = {});

}  // namespace kompakton

#include "kompakton/stepper.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include <fmt/core.h>

namespace kompakton {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// out_m = sum_j sum_k w_k[j] x_k[m + j] for periodic data, j = -2..2.
template <std::size_t K>
void periodic_stencil_sum(const std::array<const std::array<double, 5>*, K>& weights,
                          const std::array<std::span<const double>, K>& inputs,
                          std::span<double> out) {
    const std::size_t n = out.size();
    auto wrapped_row = [&](std::size_t m) {
        double acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t j = 0; j < 5; ++j) {
                acc += (*weights[k])[j] * inputs[k][(m + n + j - 2) % n];
            }
        }
        out[m] = acc;
    };
    wrapped_row(0);
    wrapped_row(1);
    for (std::size_t k = 0; k < K; ++k) {
        const auto& w = *weights[k];
        const double* x = inputs[k].data();
        double* o = out.data();
        if (k == 0) {
            for (std::size_t m = 2; m + 2 < n; ++m) {
                o[m] = w[0] * x[m - 2] + w[1] * x[m - 1] + w[2] * x[m] + w[3] * x[m + 1] +
                       w[4] * x[m + 2];
            }
        } else {
            for (std::size_t m = 2; m + 2 < n; ++m) {
                o[m] += w[0] * x[m - 2] + w[1] * x[m - 1] + w[2] * x[m] + w[3] * x[m + 1] +
                        w[4] * x[m + 2];
            }
        }
    }
    wrapped_row(n - 2);
    wrapped_row(n - 1);
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::string_view rule_name(TimeRule rule) noexcept {
    return rule == TimeRule::Trapezoidal ? "trapezoidal" : "midpoint";
}

TimeRule parse_rule(std::string_view text) {
    std::string key;
    for (char ch : text) key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (key == "trapezoidal" || key == "trapezoid") return TimeRule::Trapezoidal;
    if (key == "midpoint" || key == "implicit_midpoint") return TimeRule::Midpoint;
    throw ParameterError(fmt::format("unknown time rule '{}' (expected trapezoidal or midpoint)", text));
}

std::string_view status_name(RunStatus status) noexcept {
    switch (status) {
        case RunStatus::Completed: return "completed";
        case RunStatus::BlownUp: return "blowup";
        case RunStatus::SolverFailure: return "solver_failure";
    }
    return "unknown";
}

void StepperConfig::validate() const {
    if (!(newton_abs_tol > 0.0)) {
        throw ParameterError(fmt::format("newton_abs_tol must be positive, got {}", newton_abs_tol));
    }
    if (newton_max_iters < 1) {
        throw ParameterError(fmt::format("newton_max_iters must be >= 1, got {}", newton_max_iters));
    }
    if (blowup_threshold && !(*blowup_threshold > 0.0)) {
        throw ParameterError(fmt::format("blowup_threshold must be positive, got {}", *blowup_threshold));
    }
}

PowerLaw::PowerLaw(Rational p)
    : integer_(p.is_integer()),
      integer_exponent_(p.is_integer() ? p.numerator() : 0),
      exponent_(p.value()) {}

double PowerLaw::integer_power(double u, std::int64_t n) noexcept {
    if (n >= 0 && n <= 8) {
        double r = 1.0;
        for (std::int64_t k = 0; k < n; ++k) r *= u;
        return r;
    }
    return std::pow(u, static_cast<double>(n));
}

double PowerLaw::value(double u) const noexcept {
    if (integer_) return integer_power(u, integer_exponent_);
    return std::copysign(std::pow(std::abs(u), exponent_), u);
}

double PowerLaw::derivative(double u) const noexcept {
    if (integer_) return exponent_ * integer_power(u, integer_exponent_ - 1);
    if (u == 0.0) return exponent_ > 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return exponent_ * std::pow(std::abs(u), exponent_ - 1.0);
}

double signed_power(double u, Rational p) noexcept { return PowerLaw(p).value(u); }

double signed_power_derivative(double u, Rational p) noexcept { return PowerLaw(p).derivative(u); }

ImplicitStepper::ImplicitStepper(SchemeId scheme, StepperConfig config, CompactonSpec spec,
                                 GridSpec grid)
    : scheme_(scheme),
      config_(std::move(config)),
      spec_(spec),
      grid_(grid),
      mass_(operator_A(scheme)),
      first_(operator_B(scheme, grid.dx())),
      third_(operator_C(scheme, grid.dx())),
      power_(spec.p()),
      blowup_threshold_(config_.blowup_threshold.value_or(1e3 * spec.peak())) {
    config_.validate();
    for (std::size_t j = 0; j < dispersive_.size(); ++j) {
        dispersive_[j] = first_.weights()[j] + third_.weights()[j];
    }
}

void ImplicitStepper::nonlinear_term(std::span<const double> current,
                                     std::span<const double> next, std::span<double> out) const {
    if (config_.rule == TimeRule::Trapezoidal) {
        for (std::size_t m = 0; m < out.size(); ++m) {
            out[m] = 0.5 * (power_.value(next[m]) + power_.value(current[m]));
        }
    } else {
        for (std::size_t m = 0; m < out.size(); ++m) {
            out[m] = power_.value(0.5 * (next[m] + current[m]));
        }
    }
}

std::vector<double> ImplicitStepper::residual(std::span<const double> current,
                                              std::span<const double> next, double dt) const {
    const std::size_t n = grid_.nodes();
    if (current.size() != n || next.size() != n) {
        throw ParameterError(fmt::format("residual: expected {} values, got {} and {}", n,
                                         current.size(), next.size()));
    }
    if (!(dt > 0.0)) throw ParameterError(fmt::format("dt must be positive, got {}", dt));
    if (!all_finite(current) || !all_finite(next)) {
        throw BlowupError("residual: non-finite field values");
    }
    Workspace work(n);
    std::vector<double> out(n);
    residual_into(current, next, dt, work, out);
    return out;
}

void ImplicitStepper::residual_into(std::span<const double> current, std::span<const double> next,
                                    double dt, Workspace& work, std::span<double> out) const {
    const std::size_t n = grid_.nodes();
    for (std::size_t m = 0; m < n; ++m) {
        work.rate[m] = (next[m] - current[m]) / dt;
        work.average[m] = 0.5 * (next[m] + current[m]);
    }
    nonlinear_term(current, next, work.nonlinear);

    std::array<double, 5> drift{};
    for (std::size_t j = 0; j < 5; ++j) drift[j] = -spec_.c0() * first_.weights()[j];
    periodic_stencil_sum<3>({&mass_.weights(), &drift, &dispersive_},
                            {std::span<const double>(work.rate),
                             std::span<const double>(work.average),
                             std::span<const double>(work.nonlinear)},
                            out);
}

PeriodicBandedMatrix ImplicitStepper::jacobian(std::span<const double> current,
                                               std::span<const double> next, double dt) const {
    const std::size_t n = grid_.nodes();
    if (current.size() != n || next.size() != n) {
        throw ParameterError("jacobian: field size does not match the grid");
    }
    if (!(dt > 0.0)) throw ParameterError(fmt::format("dt must be positive, got {}", dt));
    PeriodicBandedMatrix jac(n);
    std::vector<double> slope(n);
    jacobian_into(current, next, dt, slope, jac);
    return jac;
}

void ImplicitStepper::jacobian_into(std::span<const double> current, std::span<const double> next,
                                    double dt, std::span<double> slope,
                                    PeriodicBandedMatrix& jac) const {
    const std::size_t n = grid_.nodes();
    // Diagonal scaling of the nonlinear column: d N_k / d next_k.
    for (std::size_t m = 0; m < n; ++m) {
        const double arg =
            config_.rule == TimeRule::Trapezoidal ? next[m] : 0.5 * (next[m] + current[m]);
        slope[m] = 0.5 * power_.derivative(arg);
    }

    const double c0 = spec_.c0();
    std::array<double, 5> fixed{};
    for (std::size_t j = 0; j < 5; ++j) {
        fixed[j] = mass_.weights()[j] / dt - 0.5 * c0 * first_.weights()[j];
    }
    for (std::size_t m = 0; m < n; ++m) {
        const bool interior = m >= 2 && m + 2 < n;
        for (int d = -2; d <= 2; ++d) {
            const auto j = static_cast<std::size_t>(d + 2);
            const std::size_t col = interior ? static_cast<std::size_t>(static_cast<std::ptrdiff_t>(m) + d)
                                             : grid_.wrap(static_cast<std::ptrdiff_t>(m) + d);
            jac.at(m, d) = fixed[j] + dispersive_[j] * slope[col];
        }
    }
}

double ImplicitStepper::rounding_floor(std::span<const double> current,
                                       std::span<const double> next,
                                       std::span<const double> nonlinear, double dt,
                                       Workspace& work) const {
    const std::size_t n = grid_.nodes();
    std::span<double> size_rate = work.scratch[0], size_avg = work.scratch[1],
                      size_nl = work.scratch[2], bound = work.scratch[3];
    for (std::size_t m = 0; m < n; ++m) {
        const double s = std::abs(next[m]) + std::abs(current[m]);
        size_rate[m] = s / dt;
        size_avg[m] = 0.5 * s;
        size_nl[m] = std::abs(nonlinear[m]);
    }
    std::array<double, 5> abs_mass{}, abs_drift{}, abs_disp{};
    for (std::size_t j = 0; j < 5; ++j) {
        abs_mass[j] = std::abs(mass_.weights()[j]);
        abs_drift[j] = std::abs(spec_.c0() * first_.weights()[j]);
        abs_disp[j] = std::abs(first_.weights()[j]) + std::abs(third_.weights()[j]);
    }
    periodic_stencil_sum<3>({&abs_mass, &abs_drift, &abs_disp},
                            {std::span<const double>(size_rate), std::span<const double>(size_avg),
                             std::span<const double>(size_nl)},
                            bound);
    return 16.0 * kEps * dt * max_abs(bound);
}

std::pair<FieldState, NewtonReport> ImplicitStepper::step(const FieldState& current,
                                                          double dt) const {
    const std::size_t n = grid_.nodes();
    if (current.values.size() != n) {
        throw ParameterError(fmt::format("step: field has {} values, grid has {} nodes",
                                         current.values.size(), n));
    }
    if (!(dt > 0.0)) throw ParameterError(fmt::format("dt must be positive, got {}", dt));
    NewtonReport report;
    if (!current.all_finite()) {
        throw StepFailure(StepFailure::Kind::NonFinite, report, "step: input field is not finite");
    }

    if (!workspace_) workspace_ = std::make_unique<Workspace>(n);
    Workspace& work = *workspace_;
    std::vector<double> next = current.values;
    std::vector<double> f(n);
    // The rounding floor barely moves between iterates; evaluate it once.
    std::optional<double> floor;
    for (int iter = 0;; ++iter) {
        residual_into(current.values, next, dt, work, f);
        report.iterations = iter;
        report.final_residual = dt * max_abs(f);
        if (!std::isfinite(report.final_residual)) {
            throw StepFailure(StepFailure::Kind::NonFinite, report,
                              fmt::format("step at t = {}: non-finite residual", current.t));
        }
        report.tolerance = config_.newton_abs_tol;
        if (report.final_residual > report.tolerance) {
            if (!floor) floor = rounding_floor(current.values, next, work.nonlinear, dt, work);
            report.tolerance = std::max(report.tolerance, *floor);
        }
        if (report.final_residual <= report.tolerance) {
            report.converged = true;
            break;
        }
        if (iter == config_.newton_max_iters) {
            throw StepFailure(
                StepFailure::Kind::IterationCap, report,
                fmt::format("step at t = {}: Newton did not converge in {} iterations "
                            "(residual {:.3e}, tolerance {:.3e})",
                            current.t, iter, report.final_residual, report.tolerance));
        }

        try {
            jacobian_into(current.values, next, dt, work.scratch[0], work.jacobian);
            work.lu.factor(work.jacobian);
            work.lu.solve_in_place(f);
        } catch (const LinearSolveError& e) {
            throw StepFailure(StepFailure::Kind::LinearSolve, report,
                              fmt::format("step at t = {}: {}", current.t, e.what()));
        }
        for (std::size_t m = 0; m < n; ++m) next[m] -= f[m];

        if (!all_finite(next)) {
            throw StepFailure(StepFailure::Kind::NonFinite, report,
                              fmt::format("step at t = {}: non-finite Newton iterate", current.t));
        }
        if (const double peak = max_abs(next); peak > blowup_threshold_) {
            throw StepFailure(StepFailure::Kind::AmplitudeBound, report,
                              fmt::format("step at t = {}: max|U| = {:.3e} exceeds {:.3e}",
                                          current.t, peak, blowup_threshold_));
        }
    }
    return {FieldState{current.t + dt, std::move(next)}, report};
}

Trajectory run(SchemeId scheme, const StepperConfig& config, const CompactonSpec& spec,
               const GridSpec& grid, const TimeSpec& time, const StepObserver& observer) {
    time.validate();
    const ImplicitStepper stepper(scheme, config, spec, grid);

    std::vector<std::size_t> snapshot_steps;
    for (double t : time.snapshot_times) {
        snapshot_steps.push_back(static_cast<std::size_t>(std::llround(t / time.dt)));
    }
    std::sort(snapshot_steps.begin(), snapshot_steps.end());
    snapshot_steps.erase(std::unique(snapshot_steps.begin(), snapshot_steps.end()),
                         snapshot_steps.end());

    Trajectory out;
    out.invariants = InvariantSeries(spec.p(), grid);
    FieldState state = sample_initial(spec, grid);
    std::size_t next_snapshot = 0;
    auto keep_if_snapshot = [&](std::size_t step_index) {
        if (next_snapshot < snapshot_steps.size() && snapshot_steps[next_snapshot] == step_index) {
            out.snapshots.push_back(state);
            out.invariants.record(state);
            ++next_snapshot;
        }
    };
    keep_if_snapshot(0);

    const std::size_t steps = time.step_count();
    out.reports.reserve(steps);
    for (std::size_t k = 1; k <= steps; ++k) {
        try {
            auto [advanced, report] = stepper.step(state, time.dt);
            // Time levels are n * dt, not an accumulated sum.
            advanced.t = static_cast<double>(k) * time.dt;
            state = std::move(advanced);
            out.reports.push_back(report);
            if (observer) observer(state, report);
        } catch (const StepFailure& failure) {
            out.reports.push_back(failure.report());
            out.status = failure.is_blowup() ? RunStatus::BlownUp : RunStatus::SolverFailure;
            out.message = failure.what();
            break;
        }
        keep_if_snapshot(k);
    }
    out.final_time = state.t;
    return out;
}

}  // namespace kompakton

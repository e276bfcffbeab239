// Acceptance runs. `acceptance <n>` checks one criterion, `acceptance all`
// checks every one; each prints a single "criterion N: PASS|FAIL ..." line.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <CLI11.hpp>

#include "kompakton/campaign.hpp"
#include "kompakton/config.hpp"
#include "kompakton/dispersion.hpp"
#include "kompakton/persistence.hpp"
#include "kompakton/regression.hpp"
#include "kompakton/stencil.hpp"
#include "kompakton/stepper.hpp"

namespace fs = std::filesystem;
using namespace kompakton;

namespace {

struct Context {
    fs::path cli;
    fs::path work;
};

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "!") + what;
    }
};

std::string num(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

// Compacton held at rest: p = 2, c = c0 = 1.
ExperimentConfig stationary(const std::string& scheme, double length, double dx, double dt,
                            double t_end, double x0) {
    std::ostringstream text;
    text << "scheme = " << scheme << "\np = 2\nc = 1\nc0 = 1\nL = " << length << "\ndx = " << dx
         << "\ndt = " << dt << "\nt_end = " << t_end << "\nx0 = " << x0 << "\n";
    return parse_config(text.str());
}

int run_cli(const Context& ctx, const std::string& args) {
    const std::string cmd = "'" + ctx.cli.string() + "' " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    if (raw == -1 || !WIFEXITED(raw)) return -1;
    return WEXITSTATUS(raw);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// 1. measured operator orders on M = 64, 128, 256
Verdict operator_orders(const Context&) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    for (SchemeId s : kAllSchemes) {
        const OrderPair want = truncation_orders(s);
        const auto first = empirical_order(s, 1);
        const auto third = empirical_order(s, 3);
        const bool ok = first.order && third.order &&
                        std::abs(*first.order - want.first_derivative) <= 0.3 &&
                        std::abs(*third.order - want.third_derivative) <= 0.3;
        v.require(ok, std::string(scheme_name(s)) + " (" + (first.order ? num(*first.order, 3) : "nd") +
                          ", " + (third.order ? num(*third.order, 3) : "nd") + ")");
    }
    const double secs = seconds_since(start);
    v.require(secs < 1.0, "runtime " + num(secs, 2) + " s");
    return v;
}

// 2. analytic Jacobian against a full central-difference Jacobian
Verdict jacobian_check(const Context&) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> state(0.2, 1.5);
    constexpr std::size_t n = 64;
    const GridSpec grid(6.4, n);
    double worst = 0.0;
    int cases = 0;
    for (SchemeId scheme : kAllSchemes) {
        for (TimeRule rule : {TimeRule::Trapezoidal, TimeRule::Midpoint}) {
            for (Rational p : {Rational(2), Rational(3), Rational(5, 3)}) {
                StepperConfig cfg;
                cfg.rule = rule;
                const ImplicitStepper stepper(scheme, cfg, CompactonSpec(p, 1.0, 3.2, 0.7), grid);
                std::vector<double> cur(n), next(n);
                for (auto& x : cur) x = state(rng);
                for (auto& x : next) x = state(rng);
                const double dt = 0.05;
                const PeriodicBandedMatrix jac = stepper.jacobian(cur, next, dt);
                double diff = 0.0, scale = 0.0;
                for (std::size_t col = 0; col < n; ++col) {
                    const double h = 1e-6 * std::max(1.0, std::abs(next[col]));
                    std::vector<double> plus(next), minus(next);
                    plus[col] += h;
                    minus[col] -= h;
                    const auto fp = stepper.residual(cur, plus, dt);
                    const auto fm = stepper.residual(cur, minus, dt);
                    for (std::size_t row = 0; row < n; ++row) {
                        const double fd = (fp[row] - fm[row]) / (2.0 * h);
                        diff = std::max(diff, std::abs(jac(row, col) - fd));
                        scale = std::max(scale, std::abs(fd));
                    }
                }
                worst = std::max(worst, diff / scale);
                ++cases;
            }
        }
    }
    const double secs = seconds_since(start);
    v.require(worst <= 1e-5, std::to_string(cases) + " cases, worst relative " + num(worst, 2));
    v.require(secs < 5.0, "runtime " + num(secs, 2) + " s");
    return v;
}

// 3. invariants on the stationary de Frutos run cut to L = 600, t = 100
Verdict mass_conservation(const Context&) {
    Verdict v;
    const ExperimentConfig cfg = stationary("de_frutos", 600.0, 0.05, 0.1, 100.0, 120.0);
    const Trajectory traj = run(cfg.scheme, cfg.stepper(), cfg.compacton(), cfg.grid(), cfg.time());
    v.require(traj.status == RunStatus::Completed, std::string("status ") + std::string(status_name(traj.status)));
    const double i1 = traj.invariants.max_relative_drift(1);
    const double i2 = traj.invariants.max_relative_drift(2);
    v.require(i1 <= 1e-9, "I1 drift " + num(i1, 3));
    v.require(i2 <= 1e-3, "I2 drift " + num(i2, 3));
    return v;
}

// 4. de Frutos peak amplitudes at t = 150 for dx = 0.2, 0.1, 0.05
Verdict peak_amplitudes(const Context&) {
    Verdict v;
    const std::array<double, 3> dxs = {0.2, 0.1, 0.05};
    std::vector<double> forward, steps;
    std::array<double, 2> finest{};
    for (double dx : dxs) {
        const ExperimentConfig cfg = stationary("de_frutos", 2500.0, dx, 0.05, 150.0, 500.0);
        const PointOutcome out = evaluate_point(TableId::AmplitudesDx, cfg);
        if (!out.cells[0].has_value() || !out.cells[1].has_value()) {
            v.require(false, "dx=" + num(dx) + ": " + out.cells[0].to_string() + " " +
                                 out.cells[1].to_string() + " " + out.note);
            continue;
        }
        forward.push_back(out.cells[0].value);
        steps.push_back(dx);
        finest = {out.cells[0].value, out.cells[1].value};
    }
    if (!v.pass) return v;
    v.require(within(finest[0], 1.61e-7, 0.25), "u_f " + num(finest[0], 3));
    v.require(within(finest[1], 2.60e-7, 0.25), "u_b " + num(finest[1], 3));
    const double q = convergence_exponent(forward, steps).slope;
    v.require(std::abs(q - 2.4) <= 0.5, "q_f " + num(q, 3));
    return v;
}

// 5. front velocities at dx = 0.1, dt = 0.05, c0 = c = 1
Verdict front_speeds(const Context&) {
    Verdict v;
    ExperimentConfig cfg = stationary("de_frutos", 2500.0, 0.1, 0.05, 100.0, 500.0);
    const PointOutcome dfr = evaluate_point(TableId::FrontVelocities, cfg);
    cfg.scheme = SchemeId::Pade6;
    cfg.forward_share.reset();
    const PointOutcome pade = evaluate_point(TableId::FrontVelocities, cfg);
    auto check = [&](const CampaignCell& cell, double target, const std::string& label) {
        v.require(cell.has_value() && within(cell.value, target, 0.05), label + " " + cell.to_string().substr(0, 7));
    };
    check(dfr.cells[0], 5.07, "de_frutos c_f");
    check(dfr.cells[1], -1.01, "de_frutos c_b");
    check(pade.cells[0], 10.1, "pade6 c_f");
    return v;
}

// 6. group velocities at k_max and as k -> 0
Verdict dispersion_limits(const Context&) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    const std::array<double, 3> factors = {1.0, 5.0, 10.0};
    double worst_exact = 0.0, worst_long = 0.0, worst_pade8 = 0.0;
    for (double dx : {0.05, 0.1, 0.5}) {
        for (double c0 : {0.5, 1.0, 2.0}) {
            const double kmax = max_wavenumber(dx);
            for (std::size_t i = 0; i < 3; ++i) {
                const double g = group_velocity(kAllSchemes[i], kmax, dx, c0);
                worst_exact = std::max(worst_exact, std::abs(g - factors[i] * c0) / (factors[i] * c0));
            }
            const double g8 = group_velocity(SchemeId::Pade8, kmax, dx, c0) / c0;
            worst_pade8 = std::max(worst_pade8, std::abs(g8 - 6.11));
            for (SchemeId s : kAllSchemes) {
                const double g0 = group_velocity(s, 1e-6 / dx, dx, c0);
                worst_long = std::max(worst_long, std::abs(g0 + c0) / c0);
            }
        }
    }
    v.require(worst_exact <= 1e-10, "methods 1-3 at k_max " + num(worst_exact, 2));
    v.require(worst_pade8 < 0.005, "method 4 at k_max off 6.11 c0 by " + num(worst_pade8, 2));
    v.require(worst_long <= 1e-8, "k -> 0 " + num(worst_long, 2));
    const double secs = seconds_since(start);
    v.require(secs < 1.0, "runtime " + num(secs, 2) + " s");
    return v;
}

// 7. scaling exponents over the last three quarters of the run
Verdict scaling_exponents(const Context&) {
    Verdict v;
    struct Case {
        const char* scheme;
        double length, t_end;
        double lo_f, hi_f, lo_b, hi_b;
    };
    const std::array<Case, 4> cases = {{
        {"de_frutos", 2500.0, 300.0, 0.40, 0.60, 0.40, 0.62},
        {"pade6", 2500.0, 300.0, 0.40, 0.62, 0.40, 0.62},
        {"de_frutos", 1000.0, 200.0, 0.35, 0.70, 0.35, 0.70},
        {"pade6", 1000.0, 200.0, 0.35, 0.70, 0.35, 0.70},
    }};
    for (const Case& c : cases) {
        const ExperimentConfig cfg = stationary(c.scheme, c.length, 0.05, 0.05, c.t_end, c.length / 5.0);
        const PointOutcome out = evaluate_point(TableId::ScalingDx, cfg);
        const std::string tag = std::string(c.scheme) + " L=" + num(c.length);
        const bool f = out.cells[0].has_value() && out.cells[0].value >= c.lo_f && out.cells[0].value <= c.hi_f;
        const bool b = out.cells[1].has_value() && out.cells[1].value >= c.lo_b && out.cells[1].value <= c.hi_b;
        v.require(f && b, tag + " rho " + out.cells[0].to_string().substr(0, 5) + "/" +
                              out.cells[1].to_string().substr(0, 5));
    }
    return v;
}

// 8. Ismail at dx = 0.0125 blows up, through the CLI and in the table
Verdict ismail_blowup(const Context& ctx) {
    Verdict v;
    const fs::path dir = ctx.work / "c8";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string base = "scheme = ismail\np = 2\nc = 1\nc0 = 1\nL = 2500\ndt = 0.05\nt_end = 150\nx0 = 500\n";
    write_text_file(dir / "run.cfg", base + "dx = 0.0125\n");
    const int code = run_cli(ctx, "simulate --quiet --config '" + (dir / "run.cfg").string() + "' --out '" +
                                      (dir / "run").string() + "'");
    const StoredTrajectory stored = load_trajectory(dir / "run");
    v.require(code == 3 && stored.final_time < 150.0,
              "simulate exit " + std::to_string(code) + " at t = " + num(stored.final_time));

    write_text_file(dir / "table.cfg", base + "dx = 0.05\n");
    const int table_code = run_cli(ctx, "table --quiet --table amplitudes_dx --config '" +
                                            (dir / "table.cfg").string() + "' --out '" + (dir / "table").string() + "'");
    const std::string csv = slurp(dir / "table" / "amplitudes_dx.csv");
    // header then u_f and u_b rows; the 0.0125 column is the last before q
    bool marked = table_code == 0;
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::stringstream row(line);
        for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
        marked = marked && cells.size() == 8 && cells[6] == "blowup";
        ++rows;
    }
    v.require(marked && rows == 2, "amplitudes_dx cell at dx=0.0125: " +
                                       (rows ? std::string(marked ? "blowup" : "not marked") : "missing"));
    return v;
}

// 9. regression oracles
Verdict regression_oracles(const Context&) {
    Verdict v;
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    double worst_rho = 0.0, worst_q = 0.0, worst_r2 = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double rho = u(rng), q = 1.0 + 3.0 * u(rng), speed = 10.0 * u(rng) - 10.0;
        std::vector<double> t, a, x;
        for (int k = 1; k <= 60; ++k) {
            t.push_back(5.0 * k);
            a.push_back(2e-5 * std::pow(t.back(), -rho));
            x.push_back(400.0 + speed * t.back());
        }
        worst_rho = std::max(worst_rho, std::abs(scaling_exponent(a, t).slope - rho) / rho);
        worst_r2 = std::max(worst_r2, std::abs(front_velocity(x, t).r_squared - 1.0));
        std::vector<double> dx, amp;
        for (double h : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
            dx.push_back(h);
            amp.push_back(3e-4 * std::pow(h, q));
        }
        worst_q = std::max(worst_q, std::abs(convergence_exponent(amp, dx).slope - q) / q);
    }
    v.require(worst_rho <= 1e-12, "rho " + num(worst_rho, 2));
    v.require(worst_q <= 1e-12, "q " + num(worst_q, 2));
    v.require(worst_r2 <= 1e-12, "1 - R^2 " + num(worst_r2, 2));
    return v;
}

// 10. two front_velocities tables from one config are byte-identical
Verdict determinism(const Context& ctx) {
    Verdict v;
    const fs::path dir = ctx.work / "c10";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_text_file(dir / "base.cfg",
                    "scheme = de_frutos\np = 2\nc = 1\nL = 100\ndx = 0.1\ndt = 0.05\nt_end = 1\nx0 = 50\n");
    for (const char* name : {"a", "b"}) {
        const int code = run_cli(ctx, "table --quiet --table front_velocities --config '" + (dir / "base.cfg").string() +
                                          "' --out '" + (dir / name).string() + "'");
        v.require(code == 0, std::string("run ") + name + " exit " + std::to_string(code));
    }
    for (const char* file : {"front_velocities.csv", "front_velocities_long.csv"}) {
        const std::string a = slurp(dir / "a" / file), b = slurp(dir / "b" / file);
        v.require(!a.empty() && a == b, std::string(file) + (a == b ? " identical" : " differs"));
    }
    return v;
}

const std::array<std::function<Verdict(const Context&)>, 10> kCriteria = {
    operator_orders, jacobian_check,     mass_conservation, peak_amplitudes,          front_speeds,
    dispersion_limits, scaling_exponents, ismail_blowup,    regression_oracles, determinism,
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    std::string which = "all";
    Context ctx;
    std::string cli, work = "acceptance_work";
    app.add_option("criterion", which, "1..10 or all");
    app.add_option("--cli", cli, "kompakton executable (criteria 8 and 10)");
    app.add_option("--work", work, "scratch directory");
    CLI11_PARSE(app, argc, argv);
    ctx.cli = cli;
    ctx.work = work;
    fs::create_directories(ctx.work);

    std::vector<int> ids;
    if (which == "all") {
        for (int i = 1; i <= 10; ++i) ids.push_back(i);
    } else {
        try {
            ids.push_back(std::stoi(which));
        } catch (const std::exception&) {
            ids.push_back(0);
        }
        if (ids[0] < 1 || ids[0] > 10) {
            std::fprintf(stderr, "criterion must be 1..10 or all\n");
            return 2;
        }
    }

    bool all_pass = true;
    for (int id : ids) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = kCriteria[static_cast<std::size_t>(id - 1)](ctx);
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        all_pass = all_pass && v.pass;
        std::printf("criterion %d: %s  %s  [%.1f s]\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str(),
                    seconds_since(start));
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}

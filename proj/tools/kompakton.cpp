// kompakton: run, analyze and tabulate compacton radiation experiments.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "kompakton/campaign.hpp"
#include "kompakton/config.hpp"
#include "kompakton/dispersion.hpp"
#include "kompakton/errors.hpp"
#include "kompakton/persistence.hpp"
#include "kompakton/radiation.hpp"
#include "kompakton/stepper.hpp"

namespace fs = std::filesystem;
using namespace kompakton;

namespace {

enum ExitCode : int {
    kSuccess = 0,
    kParseFailure = 2,
    kBlowup = 3,
    kSolverFailure = 4,
    kIoFailure = 5,
};

struct Options {
    std::string config;
    std::string out;
    std::string table;
    bool quiet = false;

    // dispersion
    std::string scheme;
    std::optional<double> dx;
    std::optional<double> c0;
    std::size_t samples = 200;
    std::optional<double> probe;
};

fs::path output_dir(const Options& opt, const ExperimentConfig& cfg) {
    return opt.out.empty() ? fs::path(cfg.output_dir) : fs::path(opt.out);
}

int exit_code(RunStatus status) {
    switch (status) {
        case RunStatus::Completed: return kSuccess;
        case RunStatus::BlownUp: return kBlowup;
        case RunStatus::SolverFailure: return kSolverFailure;
    }
    return kSolverFailure;
}

int cmd_simulate(const Options& opt) {
    const ExperimentConfig cfg = load_config(opt.config);
    const fs::path dir = output_dir(opt, cfg);
    const TimeSpec time = cfg.time();
    const std::size_t steps = time.step_count();
    const std::size_t every = std::max<std::size_t>(1, steps / 10);
    std::size_t done = 0;
    const auto start = std::chrono::steady_clock::now();

    StepObserver observer;
    if (!opt.quiet) {
        observer = [&](const FieldState& state, const NewtonReport& report) {
            if (++done % every != 0 && done != steps) return;
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            fmt::print(stderr, "  t = {:<10.4g} step {}/{}  newton {}  {:.1f} s\n", state.t, done, steps,
                       report.iterations, secs);
        };
    }
    if (!opt.quiet) {
        fmt::print(stderr, "simulate {} p={} dx={} dt={} t_end={} (M = {})\n", scheme_name(cfg.scheme),
                   cfg.p.to_string(), cfg.dx(), cfg.dt, cfg.t_end, cfg.nodes);
    }
    const Trajectory traj =
        run(cfg.scheme, cfg.stepper(), cfg.compacton(), cfg.grid(), time, observer);
    save_trajectory(dir, cfg, traj);

    fmt::print("status {}\nfinal_time {}\nsnapshots {}\n", status_name(traj.status), traj.final_time,
               traj.snapshots.size());
    if (traj.invariants.size() > 0) {
        fmt::print("I1_drift {:.3e}\nI2_drift {:.3e}\n", traj.invariants.max_relative_drift(1),
                   traj.invariants.max_relative_drift(2));
    }
    if (!traj.message.empty()) fmt::print(stderr, "{}\n", traj.message);
    fmt::print("output {}\n", dir.string());
    return exit_code(traj.status);
}

int cmd_analyze(const Options& opt) {
    if (opt.out.empty()) throw ParameterError("analyze needs the trajectory directory (--out)");
    const fs::path dir(opt.out);
    const StoredTrajectory stored = load_trajectory(dir);
    if (stored.snapshots.size() < 3) {
        throw InsufficientDataError(fmt::format("'{}' has {} snapshot(s); analysis needs at least 3",
                                                dir.string(), stored.snapshots.size()));
    }
    const ExperimentConfig& cfg = stored.config;
    const RadiationReport report =
        analyze(stored.snapshots, cfg.compacton(), cfg.grid(), cfg.analysis());
    save_analysis(dir, report);

    for (WavepacketSide side : {WavepacketSide::Forward, WavepacketSide::Backward}) {
        const SideReport& s = report.side(side);
        fmt::print("{}: velocity {} rho {}\n", side_name(side),
                   s.velocity ? format_number(s.velocity->slope) : "nd",
                   s.scaling ? format_number(s.scaling->slope) : "nd");
        if (!opt.quiet) {
            if (!s.velocity_note.empty()) fmt::print(stderr, "  {} velocity: {}\n", side_name(side), s.velocity_note);
            if (!s.scaling_note.empty()) fmt::print(stderr, "  {} scaling: {}\n", side_name(side), s.scaling_note);
        }
    }
    fmt::print("output {}\n", dir.string());
    return kSuccess;
}

int cmd_dispersion(const Options& opt) {
    SchemeId scheme = SchemeId::DeFrutos;
    double dx = 0.0, c0 = 1.0, probe = 0.1;
    fs::path dir = opt.out.empty() ? fs::path("out") : fs::path(opt.out);
    if (!opt.config.empty()) {
        const ExperimentConfig cfg = load_config(opt.config);
        scheme = cfg.scheme;
        dx = cfg.dx();
        c0 = cfg.c0;
        probe = cfg.probe_fraction;
        dir = output_dir(opt, cfg);
    }
    if (!opt.scheme.empty()) scheme = parse_scheme(opt.scheme);
    if (opt.dx) dx = *opt.dx;
    if (opt.c0) c0 = *opt.c0;
    if (opt.probe) probe = *opt.probe;
    if (!(dx > 0.0)) throw ParameterError("dispersion needs dx > 0 (--dx or --config)");

    const DispersionCurve curve = dispersion_curve(scheme, dx, c0, opt.samples);
    const FrontVelocityPrediction pred = predicted_front_velocities(scheme, c0, dx, probe);
    const std::string stem = fmt::format("dispersion_{}", scheme_name(scheme));
    write_text_file(dir / (stem + ".csv"), format_dispersion_curve(curve));
    write_text_file(dir / (stem + "_fronts.csv"), format_front_speeds(scheme, dx, c0, probe, pred));
    fmt::print("forward {}\nbackward {}\noutput {}\n", format_number(pred.forward),
               format_number(pred.backward), dir.string());
    return kSuccess;
}

int cmd_table(const Options& opt) {
    const TableId table = parse_table(opt.table);
    const ExperimentConfig base = load_config(opt.config);
    const fs::path dir = output_dir(opt, base);

    PointCallback progress;
    if (!opt.quiet) {
        fmt::print(stderr, "table {}: {} runs on {} thread(s)\n", table_name(table),
                   campaign_points(table, base).size(),
                   campaign_threads(campaign_points(table, base).size()));
        progress = [](const CampaignPoint& p, const PointOutcome& o) {
            fmt::print(stderr, "  {} dx={} dt={} c={} c0={}: {} {}{}\n", scheme_name(p.scheme), p.dx,
                       p.dt, p.c, p.c0, o.cells[0].to_string(), o.cells[1].to_string(),
                       o.note.empty() ? "" : "  (" + o.note + ")");
        };
    }
    const CampaignResult result = run_campaign(table, base, progress);

    const std::string name(table_name(table));
    write_text_file(dir / (name + ".csv"), format_campaign_table(result));
    write_text_file(dir / (name + "_long.csv"), format_campaign_long(result));
    if (const std::string fits = format_campaign_fits(result); !fits.empty()) {
        write_text_file(dir / (name + "_fits.csv"), fits);
    }
    fmt::print("{}", format_campaign_table(result));
    fmt::print("output {}\n", dir.string());
    return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compacton radiation experiments: simulate, analyze, dispersion, table"};
    app.require_subcommand(1);
    Options opt;

    auto* simulate = app.add_subcommand("simulate", "Run one simulation and store its trajectory");
    simulate->add_option("--config", opt.config, "Experiment config file")->required();
    simulate->add_option("--out", opt.out, "Output directory (default: output_dir from the config)");
    simulate->add_flag("--quiet", opt.quiet, "No progress output");

    auto* analyze_cmd = app.add_subcommand("analyze", "Measure radiation in a stored trajectory");
    analyze_cmd->add_option("--out", opt.out, "Trajectory directory written by simulate")->required();
    analyze_cmd->add_flag("--quiet", opt.quiet, "No diagnostics");

    auto* dispersion = app.add_subcommand("dispersion", "Group velocity curve and front speeds");
    dispersion->add_option("--config", opt.config, "Take scheme, dx, c0 from a config file");
    dispersion->add_option("--scheme", opt.scheme, "ismail | de_frutos | pade6 | pade8");
    dispersion->add_option("--dx", opt.dx, "Grid spacing");
    dispersion->add_option("--c0", opt.c0, "Frame drift velocity (default 1)");
    dispersion->add_option("--samples", opt.samples, "Number of wavenumbers in (0, k_max]");
    dispersion->add_option("--probe", opt.probe, "Backward probe wavenumber as a fraction of k_max");
    dispersion->add_option("--out", opt.out, "Output directory");
    dispersion->add_flag("--quiet", opt.quiet, "Accepted for symmetry");

    auto* table = app.add_subcommand("table", "Run a table campaign");
    table->add_option("--table", opt.table,
                      "amplitudes_dx | amplitudes_dt | front_velocities | scaling_dx | scaling_c")
        ->required();
    table->add_option("--config", opt.config, "Base experiment config")->required();
    table->add_option("--out", opt.out, "Output directory (default: output_dir from the config)");
    table->add_flag("--quiet", opt.quiet, "No progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParseFailure;
    }

    try {
        if (*simulate) return cmd_simulate(opt);
        if (*analyze_cmd) return cmd_analyze(opt);
        if (*dispersion) return cmd_dispersion(opt);
        if (*table) return cmd_table(opt);
    } catch (const IoError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kIoFailure;
    } catch (const LinearSolveError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kSolverFailure;
    } catch (const BlowupError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kBlowup;
    } catch (const Error& e) {
        // ParseError, ParameterError, ConfigurationError, InsufficientDataError
        fmt::print(stderr, "error: {}\n", e.what());
        return kParseFailure;
    } catch (const fs::filesystem_error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kIoFailure;
    }
    return kParseFailure;
}

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kompakton/grid.hpp"
#include "kompakton/radiation.hpp"
#include "kompakton/rational.hpp"
#include "kompakton/stencil.hpp"
#include "kompakton/stepper.hpp"

namespace kompakton {

/// A (dx, dt) pair used by the front-velocity campaign.
struct GridPair {
    double dx;
    double dt;

    friend bool operator==(const GridPair&, const GridPair&) = default;
};

/// Everything needed to run and analyze one simulation, plus the campaign
/// knobs. Built by parse_config, which applies defaults and validates.
struct ExperimentConfig {
    SchemeId scheme = SchemeId::DeFrutos;
    TimeRule rule = TimeRule::Midpoint;
    Rational p{2};
    double c = 1.0;
    double c0 = 1.0;  ///< defaults to c
    double x0 = 0.0;  ///< defaults to L/5
    double length = 0.0;
    std::size_t nodes = 0;
    double dt = 0.0;
    double t_end = 0.0;
    double snapshot_interval = 5.0;

    double newton_abs_tol = 1e-12;
    int newton_max_iters = 20;
    /// Blow-up bound as a multiple of the compacton peak.
    double blowup_factor = 1e3;

    std::size_t guard_nodes = 5;
    double threshold_fraction = 0.5;
    double noise_fraction = 1e-3;
    double discard_fraction = 0.25;
    double probe_fraction = 0.1;
    /// Forward share of the free space; from the predicted front speeds when unset.
    std::optional<double> forward_share;

    std::string output_dir = "out";
    /// Methods swept by `table`; the single `scheme` when empty.
    std::vector<SchemeId> table_schemes;
    /// (dx, dt) groups of the front-velocity table.
    std::vector<GridPair> velocity_grids = {{0.1, 0.025}, {0.1, 0.05}, {0.5, 0.05}};

    [[nodiscard]] GridSpec grid() const { return GridSpec(length, nodes); }
    [[nodiscard]] double dx() const { return length / static_cast<double>(nodes); }
    [[nodiscard]] CompactonSpec compacton() const { return CompactonSpec(p, c, x0, c0); }
    [[nodiscard]] TimeSpec time() const { return TimeSpec::uniform(dt, t_end, snapshot_interval); }
    [[nodiscard]] StepperConfig stepper() const;
    [[nodiscard]] AnalysisSettings analysis() const;

    /// Throws ParseError (line 0) on any constraint violation.
    void validate() const;
};

/// Parses line-oriented `key = value` text. '#' starts a comment, keys are
/// case-sensitive. Required: scheme, p, c, L, dx or M, dt, t_end. Throws
/// ParseError naming the key and line.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text);

/// Reads and parses a file; IoError when it cannot be read.
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

/// Canonical text form; parse_config(to_config_text(c)) reproduces c.
[[nodiscard]] std::string to_config_text(const ExperimentConfig& config);

/// Names accepted by parse_config, in canonical output order.
[[nodiscard]] const std::vector<std::string_view>& config_keys();

}  // namespace kompakton

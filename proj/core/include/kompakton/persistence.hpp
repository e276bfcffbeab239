#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kompakton/config.hpp"
#include "kompakton/dispersion.hpp"
#include "kompakton/grid.hpp"
#include "kompakton/invariants.hpp"
#include "kompakton/radiation.hpp"
#include "kompakton/stepper.hpp"

namespace kompakton {

/// 17 significant digits, enough to read back the same double.
[[nodiscard]] std::string format_number(double v);
/// A finite number, or "nd" when empty. Non-finite values also become "nd".
[[nodiscard]] std::string format_cell(const std::optional<double>& v);

/// Writes `content` to `path`, creating parent directories. IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);
[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

/// One snapshot file: "# t=<t> scheme=<id> p=<p> dx=<dx>" then "x,value" lines.
struct SnapshotFile {
    double t = 0.0;
    SchemeId scheme = SchemeId::DeFrutos;
    Rational p{2};
    double dx = 0.0;
    std::vector<double> x;
    std::vector<double> values;

    [[nodiscard]] FieldState field() const { return FieldState{t, values}; }
};

[[nodiscard]] std::string format_snapshot(const FieldState& field, SchemeId scheme, Rational p,
                                          const GridSpec& grid);
/// Throws IoError (with `origin` in the message) on malformed content.
[[nodiscard]] SnapshotFile parse_snapshot(const std::string& text, const std::string& origin = "snapshot");
void write_snapshot(const std::filesystem::path& path, const FieldState& field, SchemeId scheme,
                    Rational p, const GridSpec& grid);
[[nodiscard]] SnapshotFile read_snapshot(const std::filesystem::path& path);

/// "t,I1,I2,I3,I4" rows.
[[nodiscard]] std::string format_invariants(const InvariantSeries& series);

/// File names inside a trajectory directory.
namespace layout {
inline constexpr const char* kConfig = "config.txt";
inline constexpr const char* kStatus = "status.csv";
inline constexpr const char* kInvariants = "invariants.csv";
inline constexpr const char* kNewton = "newton.csv";
inline constexpr const char* kSnapshots = "snapshots";
inline constexpr const char* kAnalysisSummary = "analysis_summary.csv";
[[nodiscard]] std::string snapshot_name(std::size_t index);
[[nodiscard]] std::string analysis_side_name(WavepacketSide side);
}  // namespace layout

/// Writes config.txt, status.csv, invariants.csv, newton.csv and one file per
/// snapshot under `dir`.
void save_trajectory(const std::filesystem::path& dir, const ExperimentConfig& config,
                     const Trajectory& trajectory);

struct StoredTrajectory {
    ExperimentConfig config;
    std::vector<FieldState> snapshots;  ///< sorted by time
    RunStatus status = RunStatus::Completed;
    double final_time = 0.0;
};

/// Reads back what save_trajectory wrote. IoError when files are missing or
/// malformed, ParseError when config.txt is invalid.
[[nodiscard]] StoredTrajectory load_trajectory(const std::filesystem::path& dir);

/// Per-side tables (t, amplitude, front, front_offset, mean) and the summary.
[[nodiscard]] std::string format_side_table(const RadiationReport& report, WavepacketSide side);
[[nodiscard]] std::string format_analysis_summary(const RadiationReport& report);
void save_analysis(const std::filesystem::path& dir, const RadiationReport& report);

/// (alpha, group velocity) rows; the predicted front speeds go to a separate file.
[[nodiscard]] std::string format_dispersion_curve(const DispersionCurve& curve);
[[nodiscard]] std::string format_front_speeds(SchemeId scheme, double dx, double c0,
                                              double probe_fraction,
                                              const FrontVelocityPrediction& prediction);

}  // namespace kompakton

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kompakton/config.hpp"
#include "kompakton/regression.hpp"

namespace kompakton {

enum class TableId { AmplitudesDx, AmplitudesDt, FrontVelocities, ScalingDx, ScalingC };

inline constexpr std::array<TableId, 5> kAllTables = {TableId::AmplitudesDx, TableId::AmplitudesDt,
                                                      TableId::FrontVelocities, TableId::ScalingDx,
                                                      TableId::ScalingC};

/// "amplitudes_dx", "amplitudes_dt", "front_velocities", "scaling_dx", "scaling_c".
[[nodiscard]] std::string_view table_name(TableId table) noexcept;
/// Throws ParameterError for an unknown name.
[[nodiscard]] TableId parse_table(std::string_view text);

/// A measured number, or an explicit marker.
struct CampaignCell {
    enum class Kind { Value, Blowup, NotDetected };
    Kind kind = Kind::NotDetected;
    double value = 0.0;

    static CampaignCell number(double v);
    static CampaignCell blowup() { return {Kind::Blowup, 0.0}; }
    static CampaignCell not_detected() { return {Kind::NotDetected, 0.0}; }

    [[nodiscard]] bool has_value() const noexcept { return kind == Kind::Value; }
    /// The number with 17 significant digits, "blowup" or "nd".
    [[nodiscard]] std::string to_string() const;
};

/// One run of a sweep.
struct CampaignPoint {
    SchemeId scheme = SchemeId::DeFrutos;
    std::size_t column = 0;  ///< index into CampaignResult::columns
    double dx = 0.0;
    double dt = 0.0;
    double c = 1.0;
    double c0 = 1.0;
    double t_end = 0.0;
};

/// The two numbers a run contributes to its table (forward first).
struct PointOutcome {
    RunStatus status = RunStatus::Completed;
    std::array<CampaignCell, 2> cells{};
    std::string note;  ///< failure message or why a side was not detected
};

struct ExponentFit {
    SchemeId scheme;
    std::string quantity;
    std::optional<RegressionFit> fit;  ///< empty when fewer than two usable cells
};

struct CampaignResult {
    TableId table = TableId::AmplitudesDx;
    std::vector<std::string> columns;     ///< swept parameter labels
    std::array<std::string, 2> quantities;  ///< e.g. {"u_f", "u_b"}
    std::string fit_label;                ///< "q" for the amplitude tables, empty otherwise
    std::vector<CampaignPoint> points;    ///< scheme-major, then column
    std::vector<PointOutcome> outcomes;   ///< parallel to points
    std::vector<ExponentFit> fits;        ///< per scheme and quantity when fit_label is set

    [[nodiscard]] std::vector<SchemeId> schemes() const;
};

/// Sweep points of a table for the base configuration. Parameters not swept
/// by the table (L, x0, p, rule, Newton and analysis settings) come from `base`.
[[nodiscard]] std::vector<CampaignPoint> campaign_points(TableId table, const ExperimentConfig& base,
                                                         std::vector<std::string>* columns = nullptr);

/// `base` with the point's scheme, grid, step, velocities and final time.
[[nodiscard]] ExperimentConfig point_config(const ExperimentConfig& base, const CampaignPoint& point);

/// Runs one sweep point and measures the table's quantities. A blow-up or
/// solver failure yields "blowup" cells rather than an exception.
[[nodiscard]] PointOutcome evaluate_point(TableId table, const ExperimentConfig& config);

/// Worker count: KOMPAKTON_THREADS when set to a positive integer, else the
/// hardware concurrency; never more than `points`, never less than 1.
[[nodiscard]] std::size_t campaign_threads(std::size_t points);

using PointCallback = std::function<void(const CampaignPoint&, const PointOutcome&)>;

/// Runs every point (concurrently up to campaign_threads) and fits q where the
/// table has one. `on_done` is called once per point, serialized.
[[nodiscard]] CampaignResult run_campaign(TableId table, const ExperimentConfig& base,
                                          const PointCallback& on_done = {});

/// Methods as row groups, swept parameter as columns, plus the fit column.
[[nodiscard]] std::string format_campaign_table(const CampaignResult& result);
/// One row per (method, quantity, sweep point).
[[nodiscard]] std::string format_campaign_long(const CampaignResult& result);
/// method,quantity,exponent,r_squared,points; empty string when the table has no fit.
[[nodiscard]] std::string format_campaign_fits(const CampaignResult& result);

}  // namespace kompakton

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kompakton/grid.hpp"
#include "kompakton/regression.hpp"
#include "kompakton/stencil.hpp"

namespace kompakton {

/// Forward radiation travels ahead of (to the right of) the compacton,
/// backward radiation behind it.
enum class WavepacketSide { Forward, Backward };

[[nodiscard]] std::string_view side_name(WavepacketSide side) noexcept;

struct AnalysisSettings {
    /// Nodes skipped beyond each compacton edge before a side region begins.
    std::size_t guard_nodes = 5;
    /// Fraction of the free space (L minus the compacton support) assigned to
    /// the forward side; the rest belongs to the backward side.
    double forward_share = 0.5;
    /// Front threshold as a fraction of the side maximum at the last snapshot.
    double threshold_fraction = 0.5;
    /// The five-point amplitude scan starts at the outermost node whose |U|
    /// reaches this fraction of the side maximum.
    double noise_fraction = 1e-3;
    /// Leading fraction of the time axis excluded from the scaling fit.
    double discard_fraction = 0.25;

    void validate() const;
};

/// Settings whose forward_share follows the predicted front speeds of the
/// scheme (|C(k_max)| : |C(k_max/10)|), so both packets fit in the domain.
[[nodiscard]] AnalysisSettings default_analysis_settings(SchemeId scheme);

/// |U| along one side of the compacton, ordered from the outer end of the side
/// toward the compacton. Positions are unwrapped coordinates (they may fall
/// outside [0, L) when a side region crosses the periodic boundary).
struct SideProfile {
    WavepacketSide side;
    double compacton_center;
    std::vector<double> positions;
    std::vector<double> magnitudes;

    [[nodiscard]] double max_magnitude() const noexcept;
};

[[nodiscard]] SideProfile side_profile(const FieldState& field, WavepacketSide side,
                                       const CompactonSpec& spec, const GridSpec& grid,
                                       const AnalysisSettings& settings = {});

/// First five-point local maximum (three increasing |U| then two decreasing)
/// scanning inward from the packet front. Empty when no such pattern exists.
[[nodiscard]] std::optional<double> detect_amplitude(const SideProfile& profile,
                                                     const AnalysisSettings& settings = {});
[[nodiscard]] std::optional<double> detect_amplitude(const FieldState& field,
                                                     WavepacketSide side,
                                                     const CompactonSpec& spec,
                                                     const GridSpec& grid,
                                                     const AnalysisSettings& settings = {});

/// Linearly interpolated position where |U| first reaches `threshold`
/// scanning from the outer end. Empty when |U| never reaches it. Throws
/// ParameterError unless threshold > 0.
[[nodiscard]] std::optional<double> front_position(const SideProfile& profile, double threshold);
[[nodiscard]] std::optional<double> front_position(const FieldState& field, WavepacketSide side,
                                                   double threshold, const CompactonSpec& spec,
                                                   const GridSpec& grid,
                                                   const AnalysisSettings& settings = {});

/// Mean |U| over profile nodes strictly between the compacton side of the
/// region and the front. Empty if no node lies in between.
[[nodiscard]] std::optional<double> mean_envelope_amplitude(const SideProfile& profile,
                                                            double front);
[[nodiscard]] std::optional<double> mean_envelope_amplitude(const FieldState& field,
                                                            WavepacketSide side,
                                                            const CompactonSpec& spec,
                                                            const GridSpec& grid, double front,
                                                            const AnalysisSettings& settings = {});

/// True while |U| on the outermost guard_nodes of the side stays at or below
/// noise_fraction of the side maximum, i.e. the packet has not reached the
/// far end of its region.
[[nodiscard]] bool packet_contained(const SideProfile& profile, const AnalysisSettings& settings = {});

struct SideReport {
    WavepacketSide side = WavepacketSide::Forward;
    /// Front threshold; empty when the last snapshot has no radiation there.
    std::optional<double> threshold;
    std::vector<std::optional<double>> amplitudes;
    std::vector<std::optional<double>> fronts;        ///< unwrapped positions
    std::vector<std::optional<double>> front_offsets;  ///< front - compacton centre
    std::vector<std::optional<double>> means;
    std::optional<RegressionFit> velocity;  ///< slope of fronts vs t (computational frame)
    std::optional<RegressionFit> scaling;   ///< rho from the mean envelope
    /// First snapshot time at which the packet was no longer contained; that
    /// snapshot and later ones are left unmeasured.
    std::optional<double> contained_until;
    std::string velocity_note;              ///< why velocity is missing
    std::string scaling_note;               ///< why scaling is missing
};

struct RadiationReport {
    std::vector<double> times;
    SideReport forward;
    SideReport backward;

    [[nodiscard]] const SideReport& side(WavepacketSide s) const noexcept {
        return s == WavepacketSide::Forward ? forward : backward;
    }
};

/// Two-pass measurement: the front thresholds come from the last snapshot in
/// which the packet is still contained, then amplitudes, fronts and mean
/// envelopes are tracked over the contained snapshots and regressed.
[[nodiscard]] RadiationReport analyze(std::span<const FieldState> snapshots,
                                      const CompactonSpec& spec, const GridSpec& grid,
                                      const AnalysisSettings& settings = {});

}  // namespace kompakton

#include "kompakton/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/core.h>

#include "kompakton/errors.hpp"
#include "kompakton/persistence.hpp"
#include "kompakton/radiation.hpp"

namespace kompakton {

namespace {

constexpr std::array<double, 5> kDxSweep = {0.2, 0.1, 0.05, 0.025, 0.0125};
constexpr std::array<double, 5> kDtSweep = {0.1, 0.05, 0.025, 0.0125, 0.00625};
constexpr std::array<double, 7> kVelocitySweep = {0.1, 0.2, 0.5, 1.0, 1.5, 2.0, 5.0};

constexpr double kAmplitudeTime = 150.0;
constexpr double kFrontTime = 100.0;
constexpr double kScalingTime = 300.0;
constexpr double kTableDt = 0.05;
constexpr double kTableDx = 0.05;

bool is_amplitude_table(TableId t) { return t == TableId::AmplitudesDx || t == TableId::AmplitudesDt; }

std::array<std::string, 2> quantities_of(TableId table) {
    switch (table) {
        case TableId::AmplitudesDx:
        case TableId::AmplitudesDt:
            return {"u_f", "u_b"};
        case TableId::FrontVelocities:
            return {"c_f", "c_b"};
        case TableId::ScalingDx:
        case TableId::ScalingC:
            return {"rho_f", "rho_b"};
    }
    return {"", ""};
}

std::vector<SchemeId> table_schemes(const ExperimentConfig& base) {
    if (base.table_schemes.empty()) return {base.scheme};
    return base.table_schemes;
}

std::string label(double v) { return fmt::format("{}", v); }

}  // namespace

std::string_view table_name(TableId table) noexcept {
    switch (table) {
        case TableId::AmplitudesDx: return "amplitudes_dx";
        case TableId::AmplitudesDt: return "amplitudes_dt";
        case TableId::FrontVelocities: return "front_velocities";
        case TableId::ScalingDx: return "scaling_dx";
        case TableId::ScalingC: return "scaling_c";
    }
    return "unknown";
}

TableId parse_table(std::string_view text) {
    for (TableId t : kAllTables) {
        if (table_name(t) == text) return t;
    }
    throw ParameterError(fmt::format(
        "unknown table '{}' (expected amplitudes_dx, amplitudes_dt, front_velocities, scaling_dx "
        "or scaling_c)",
        text));
}

CampaignCell CampaignCell::number(double v) {
    if (!std::isfinite(v)) return not_detected();
    return {Kind::Value, v};
}

std::string CampaignCell::to_string() const {
    switch (kind) {
        case Kind::Value: return format_number(value);
        case Kind::Blowup: return "blowup";
        case Kind::NotDetected: return "nd";
    }
    return "nd";
}

std::vector<SchemeId> CampaignResult::schemes() const {
    std::vector<SchemeId> out;
    for (const auto& p : points) {
        if (std::find(out.begin(), out.end(), p.scheme) == out.end()) out.push_back(p.scheme);
    }
    return out;
}

std::vector<CampaignPoint> campaign_points(TableId table, const ExperimentConfig& base,
                                           std::vector<std::string>* columns) {
    std::vector<CampaignPoint> templates;
    std::vector<std::string> labels;
    const double c = base.c;
    switch (table) {
        case TableId::AmplitudesDx:
            for (double dx : kDxSweep) {
                templates.push_back({SchemeId::DeFrutos, 0, dx, kTableDt, c, c, kAmplitudeTime});
                labels.push_back(label(dx));
            }
            break;
        case TableId::AmplitudesDt:
            for (double dt : kDtSweep) {
                templates.push_back({SchemeId::DeFrutos, 0, kTableDx, dt, c, c, kAmplitudeTime});
                labels.push_back(label(dt));
            }
            break;
        case TableId::FrontVelocities:
            for (const GridPair& g : base.velocity_grids) {
                for (double factor : {0.5, 1.0, 2.0}) {
                    const double c0 = factor * c;
                    templates.push_back({SchemeId::DeFrutos, 0, g.dx, g.dt, c, c0, kFrontTime});
                    labels.push_back(fmt::format("dx={} dt={} c0={}", g.dx, g.dt, c0));
                }
            }
            break;
        case TableId::ScalingDx:
            for (double dx : kDxSweep) {
                templates.push_back({SchemeId::DeFrutos, 0, dx, kTableDt, c, c, kScalingTime});
                labels.push_back(label(dx));
            }
            break;
        case TableId::ScalingC:
            for (double v : kVelocitySweep) {
                templates.push_back({SchemeId::DeFrutos, 0, kTableDx, kTableDt, v, v, kScalingTime});
                labels.push_back(label(v));
            }
            break;
    }
    std::vector<CampaignPoint> points;
    for (SchemeId scheme : table_schemes(base)) {
        for (std::size_t i = 0; i < templates.size(); ++i) {
            CampaignPoint p = templates[i];
            p.scheme = scheme;
            p.column = i;
            points.push_back(p);
        }
    }
    if (columns) *columns = std::move(labels);
    return points;
}

ExperimentConfig point_config(const ExperimentConfig& base, const CampaignPoint& point) {
    ExperimentConfig cfg = base;
    cfg.scheme = point.scheme;
    cfg.table_schemes.clear();
    cfg.c = point.c;
    cfg.c0 = point.c0;
    cfg.dt = point.dt;
    cfg.t_end = point.t_end;
    const double ratio = cfg.length / point.dx;
    const double nodes = std::round(ratio);
    if (std::abs(ratio - nodes) > 1e-9 * ratio) {
        throw ConfigurationError(
            fmt::format("L = {} is not an integer multiple of dx = {}", cfg.length, point.dx));
    }
    cfg.nodes = static_cast<std::size_t>(nodes);
    cfg.validate();
    return cfg;
}

PointOutcome evaluate_point(TableId table, const ExperimentConfig& config) {
    config.validate();
    TimeSpec time = is_amplitude_table(table) ? TimeSpec{config.dt, config.t_end, {config.t_end}}
                                              : config.time();
    const CompactonSpec spec = config.compacton();
    const GridSpec grid = config.grid();
    const Trajectory traj = run(config.scheme, config.stepper(), spec, grid, time);

    PointOutcome out;
    out.status = traj.status;
    if (traj.status != RunStatus::Completed) {
        out.cells = {CampaignCell::blowup(), CampaignCell::blowup()};
        out.note = traj.message;
        return out;
    }

    const RadiationReport report = analyze(traj.snapshots, spec, grid, config.analysis());
    const std::array<const SideReport*, 2> sides = {&report.forward, &report.backward};
    std::vector<std::string> notes;
    for (std::size_t j = 0; j < 2; ++j) {
        const SideReport& s = *sides[j];
        std::optional<double> v;
        std::string why;
        switch (table) {
            case TableId::AmplitudesDx:
            case TableId::AmplitudesDt:
                if (!s.amplitudes.empty()) v = s.amplitudes.back();
                if (!v) why = "no five-point maximum at the final time";
                break;
            case TableId::FrontVelocities:
                if (s.velocity) v = s.velocity->slope;
                why = s.velocity_note;
                break;
            case TableId::ScalingDx:
            case TableId::ScalingC:
                if (s.scaling) v = s.scaling->slope;
                why = s.scaling_note;
                break;
        }
        out.cells[j] = v ? CampaignCell::number(*v) : CampaignCell::not_detected();
        if (!out.cells[j].has_value()) notes.push_back(fmt::format("{}: {}", side_name(s.side), why));
    }
    for (const auto& n : notes) out.note += out.note.empty() ? n : "; " + n;
    return out;
}

std::size_t campaign_threads(std::size_t points) {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("KOMPAKTON_THREADS"); env && *env) {
        const std::string_view s(env);
        unsigned long long v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
            throw ParameterError(fmt::format("KOMPAKTON_THREADS must be a positive integer, got '{}'", s));
        }
        n = static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::min(n, points));
}

CampaignResult run_campaign(TableId table, const ExperimentConfig& base, const PointCallback& on_done) {
    CampaignResult result;
    result.table = table;
    result.quantities = quantities_of(table);
    result.points = campaign_points(table, base, &result.columns);
    if (is_amplitude_table(table)) result.fit_label = "q";

    const std::size_t n = result.points.size();
    std::vector<ExperimentConfig> configs;
    configs.reserve(n);
    for (const auto& p : result.points) configs.push_back(point_config(base, p));

    result.outcomes.resize(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    std::mutex callback_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                result.outcomes[i] = evaluate_point(table, configs[i]);
                if (on_done) {
                    const std::lock_guard lock(callback_mutex);
                    on_done(result.points[i], result.outcomes[i]);
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = campaign_threads(n);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    if (!result.fit_label.empty()) {
        for (SchemeId scheme : result.schemes()) {
            for (std::size_t j = 0; j < 2; ++j) {
                std::vector<double> values, steps;
                for (std::size_t i = 0; i < n; ++i) {
                    const auto& p = result.points[i];
                    const auto& cell = result.outcomes[i].cells[j];
                    if (p.scheme != scheme || !cell.has_value() || !(cell.value > 0.0)) continue;
                    values.push_back(cell.value);
                    steps.push_back(table == TableId::AmplitudesDx ? p.dx : p.dt);
                }
                ExponentFit fit{scheme, result.quantities[j], std::nullopt};
                try {
                    fit.fit = convergence_exponent(values, steps);
                } catch (const InsufficientDataError&) {
                }
                result.fits.push_back(fit);
            }
        }
    }
    return result;
}

std::string format_campaign_table(const CampaignResult& result) {
    std::string out = "method,quantity";
    for (const auto& col : result.columns) out += "," + col;
    if (!result.fit_label.empty()) out += "," + result.fit_label;
    out += '\n';
    for (SchemeId scheme : result.schemes()) {
        for (std::size_t j = 0; j < 2; ++j) {
            std::vector<std::string> row(result.columns.size(), "nd");
            for (std::size_t i = 0; i < result.points.size(); ++i) {
                if (result.points[i].scheme != scheme) continue;
                row[result.points[i].column] = result.outcomes[i].cells[j].to_string();
            }
            out += fmt::format("{},{}", scheme_name(scheme), result.quantities[j]);
            for (const auto& cell : row) out += "," + cell;
            if (!result.fit_label.empty()) {
                std::string fit_cell = "nd";
                for (const auto& f : result.fits) {
                    if (f.scheme == scheme && f.quantity == result.quantities[j] && f.fit) {
                        fit_cell = format_number(f.fit->slope);
                    }
                }
                out += "," + fit_cell;
            }
            out += '\n';
        }
    }
    return out;
}

std::string format_campaign_long(const CampaignResult& result) {
    std::string out = "table,method,quantity,dx,dt,c,c0,t_end,value\n";
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const auto& p = result.points[i];
        for (std::size_t j = 0; j < 2; ++j) {
            out += fmt::format("{},{},{},{},{},{},{},{},{}\n", table_name(result.table),
                               scheme_name(p.scheme), result.quantities[j], format_number(p.dx),
                               format_number(p.dt), format_number(p.c), format_number(p.c0),
                               format_number(p.t_end), result.outcomes[i].cells[j].to_string());
        }
    }
    return out;
}

std::string format_campaign_fits(const CampaignResult& result) {
    if (result.fit_label.empty()) return {};
    std::string out = "method,quantity,exponent,r_squared,points\n";
    for (const auto& f : result.fits) {
        if (f.fit) {
            out += fmt::format("{},{},{},{},{}\n", scheme_name(f.scheme), f.quantity,
                               format_number(f.fit->slope), format_number(f.fit->r_squared),
                               f.fit->points);
        } else {
            out += fmt::format("{},{},nd,nd,0\n", scheme_name(f.scheme), f.quantity);
        }
    }
    return out;
}

}  // namespace kompakton

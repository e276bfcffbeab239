#include "kompakton/persistence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "kompakton/errors.hpp"

namespace kompakton {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool read_double(std::string_view text, double& out) {
    text = trim(text);
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return !text.empty() && ec == std::errc() && ptr == end;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

std::string fit_cell(const std::optional<RegressionFit>& fit) {
    return fit ? format_number(fit->slope) : "nd";
}

}  // namespace

std::string format_number(double v) {
    if (v == 0.0) return "0";  // also folds -0
    return fmt::format("{:.17g}", v);
}

std::string format_cell(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return "nd";
    return format_number(*v);
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError(fmt::format("cannot create directory '{}': {}", path.parent_path().string(),
                                      ec.message()));
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError(fmt::format("failed reading '{}'", path.string()));
    return buffer.str();
}

std::string format_snapshot(const FieldState& field, SchemeId scheme, Rational p,
                            const GridSpec& grid) {
    if (field.values.size() != grid.nodes()) {
        throw ParameterError(fmt::format("snapshot has {} values, grid has {} nodes",
                                         field.values.size(), grid.nodes()));
    }
    std::string out = fmt::format("# t={} scheme={} p={} dx={}\n", format_number(field.t),
                                  scheme_name(scheme), p.to_string(), format_number(grid.dx()));
    out.reserve(out.size() + field.values.size() * 48);
    for (std::size_t m = 0; m < field.values.size(); ++m) {
        out += format_number(grid.x(m));
        out += ',';
        out += format_number(field.values[m]);
        out += '\n';
    }
    return out;
}

SnapshotFile parse_snapshot(const std::string& text, const std::string& origin) {
    const auto lines = lines_of(text);
    if (lines.empty() || !trim(lines[0]).starts_with("#")) {
        throw IoError(fmt::format("{}: missing '# t=... scheme=... p=... dx=...' header", origin));
    }
    SnapshotFile snap;
    bool have_t = false, have_scheme = false, have_p = false, have_dx = false;
    std::istringstream header(std::string(trim(lines[0]).substr(1)));
    std::string token;
    while (header >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        try {
            if (key == "t") {
                have_t = read_double(value, snap.t);
            } else if (key == "scheme") {
                snap.scheme = parse_scheme(value);
                have_scheme = true;
            } else if (key == "p") {
                snap.p = Rational::parse(value);
                have_p = true;
            } else if (key == "dx") {
                have_dx = read_double(value, snap.dx);
            }
        } catch (const Error& e) {
            throw IoError(fmt::format("{}: bad header field '{}': {}", origin, token, e.what()));
        }
    }
    if (!(have_t && have_scheme && have_p && have_dx)) {
        throw IoError(fmt::format("{}: incomplete header '{}'", origin, trim(lines[0])));
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        double x = 0.0, v = 0.0;
        if (comma == std::string_view::npos || !read_double(line.substr(0, comma), x) ||
            !read_double(line.substr(comma + 1), v)) {
            throw IoError(fmt::format("{}:{}: expected 'x,value', got '{}'", origin, i + 1, line));
        }
        snap.x.push_back(x);
        snap.values.push_back(v);
    }
    return snap;
}

void write_snapshot(const fs::path& path, const FieldState& field, SchemeId scheme, Rational p,
                    const GridSpec& grid) {
    write_text_file(path, format_snapshot(field, scheme, p, grid));
}

SnapshotFile read_snapshot(const fs::path& path) {
    return parse_snapshot(read_text_file(path), path.string());
}

std::string format_invariants(const InvariantSeries& series) {
    std::string out = "t,I1,I2,I3,I4\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& v = series.values()[k];
        out += fmt::format("{},{},{},{},{}\n", format_number(series.times()[k]), format_number(v[0]),
                           format_number(v[1]), format_number(v[2]), format_number(v[3]));
    }
    return out;
}

namespace layout {

std::string snapshot_name(std::size_t index) { return fmt::format("snapshot_{:05d}.txt", index); }

std::string analysis_side_name(WavepacketSide side) {
    return fmt::format("analysis_{}.csv", side_name(side));
}

}  // namespace layout

void save_trajectory(const fs::path& dir, const ExperimentConfig& config,
                     const Trajectory& trajectory) {
    const GridSpec grid = config.grid();
    write_text_file(dir / layout::kConfig, to_config_text(config));
    write_text_file(dir / layout::kStatus,
                    fmt::format("status,final_time,steps\n{},{},{}\n", status_name(trajectory.status),
                                format_number(trajectory.final_time), trajectory.reports.size()));
    write_text_file(dir / layout::kInvariants, format_invariants(trajectory.invariants));

    std::string newton = "step,t,iterations,residual,tolerance\n";
    for (std::size_t k = 0; k < trajectory.reports.size(); ++k) {
        const auto& r = trajectory.reports[k];
        newton += fmt::format("{},{},{},{},{}\n", k + 1,
                              format_number(static_cast<double>(k + 1) * config.dt), r.iterations,
                              format_number(r.final_residual), format_number(r.tolerance));
    }
    write_text_file(dir / layout::kNewton, newton);

    // Drop stale snapshots from an earlier run in the same directory.
    const fs::path snap_dir = dir / layout::kSnapshots;
    std::error_code ec;
    fs::remove_all(snap_dir, ec);
    if (ec) throw IoError(fmt::format("cannot clear '{}': {}", snap_dir.string(), ec.message()));
    for (std::size_t k = 0; k < trajectory.snapshots.size(); ++k) {
        write_snapshot(snap_dir / layout::snapshot_name(k), trajectory.snapshots[k], config.scheme,
                       config.p, grid);
    }
}

StoredTrajectory load_trajectory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError(fmt::format("'{}' is not a directory", dir.string()));
    StoredTrajectory out;
    out.config = parse_config(read_text_file(dir / layout::kConfig));

    const auto status_lines = lines_of(read_text_file(dir / layout::kStatus));
    if (status_lines.size() < 2) {
        throw IoError(fmt::format("'{}': missing status row", (dir / layout::kStatus).string()));
    }
    {
        const auto row = trim(status_lines[1]);
        const auto c1 = row.find(',');
        const auto c2 = row.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
        const auto status = row.substr(0, c1);
        bool known = false;
        for (RunStatus s : {RunStatus::Completed, RunStatus::BlownUp, RunStatus::SolverFailure}) {
            if (status == status_name(s)) {
                out.status = s;
                known = true;
            }
        }
        if (!known || c1 == std::string_view::npos ||
            !read_double(row.substr(c1 + 1, c2 == std::string_view::npos ? c2 : c2 - c1 - 1),
                         out.final_time)) {
            throw IoError(fmt::format("'{}': malformed status row '{}'",
                                      (dir / layout::kStatus).string(), row));
        }
    }

    const fs::path snap_dir = dir / layout::kSnapshots;
    if (!fs::is_directory(snap_dir)) {
        throw IoError(fmt::format("'{}' has no snapshot directory", dir.string()));
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(snap_dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    const GridSpec grid = out.config.grid();
    for (const auto& f : files) {
        SnapshotFile snap = read_snapshot(f);
        if (snap.values.size() != grid.nodes()) {
            throw IoError(fmt::format("'{}': {} values, config expects {}", f.string(),
                                      snap.values.size(), grid.nodes()));
        }
        out.snapshots.push_back(snap.field());
    }
    std::stable_sort(out.snapshots.begin(), out.snapshots.end(),
                     [](const FieldState& a, const FieldState& b) { return a.t < b.t; });
    return out;
}

std::string format_side_table(const RadiationReport& report, WavepacketSide side) {
    const SideReport& s = report.side(side);
    std::string out = "t,amplitude,front,front_offset,mean_envelope\n";
    for (std::size_t k = 0; k < report.times.size(); ++k) {
        out += fmt::format("{},{},{},{},{}\n", format_number(report.times[k]),
                           format_cell(s.amplitudes[k]), format_cell(s.fronts[k]),
                           format_cell(s.front_offsets[k]), format_cell(s.means[k]));
    }
    return out;
}

std::string format_analysis_summary(const RadiationReport& report) {
    std::string out =
        "side,detected,threshold,final_amplitude,velocity,velocity_r2,rho,rho_r2\n";
    for (WavepacketSide side : {WavepacketSide::Forward, WavepacketSide::Backward}) {
        const SideReport& s = report.side(side);
        const std::string last = s.amplitudes.empty() ? "nd" : format_cell(s.amplitudes.back());
        out += fmt::format(
            "{},{},{},{},{},{},{},{}\n", side_name(side), s.threshold ? "detected" : "nd",
            format_cell(s.threshold), last, fit_cell(s.velocity),
            s.velocity ? format_number(s.velocity->r_squared) : "nd", fit_cell(s.scaling),
            s.scaling ? format_number(s.scaling->r_squared) : "nd");
    }
    return out;
}

void save_analysis(const fs::path& dir, const RadiationReport& report) {
    for (WavepacketSide side : {WavepacketSide::Forward, WavepacketSide::Backward}) {
        write_text_file(dir / layout::analysis_side_name(side), format_side_table(report, side));
    }
    write_text_file(dir / layout::kAnalysisSummary, format_analysis_summary(report));
}

std::string format_dispersion_curve(const DispersionCurve& curve) {
    std::string out = "alpha,k,group_velocity\n";
    const double kmax = max_wavenumber(curve.dx);
    for (std::size_t i = 0; i < curve.normalized_wavenumbers.size(); ++i) {
        const double a = curve.normalized_wavenumbers[i];
        out += fmt::format("{},{},{}\n", format_number(a), format_number(a * kmax),
                           format_number(curve.group_velocities[i]));
    }
    return out;
}

std::string format_front_speeds(SchemeId scheme, double dx, double c0, double probe_fraction,
                                const FrontVelocityPrediction& prediction) {
    return fmt::format("scheme,dx,c0,probe_fraction,forward,backward\n{},{},{},{},{},{}\n",
                       scheme_name(scheme), format_number(dx), format_number(c0),
                       format_number(probe_fraction), format_number(prediction.forward),
                       format_number(prediction.backward));
}

}  // namespace kompakton

#include "kompakton/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/core.h>
#include <fmt/format.h>

#include "kompakton/dispersion.hpp"
#include "kompakton/errors.hpp"

namespace kompakton {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ParameterError(fmt::format("'{}' is not a finite number", text));
    }
    return value;
}

long long parse_integer(std::string_view text) {
    long long value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end) {
        throw ParameterError(fmt::format("'{}' is not an integer", text));
    }
    return value;
}

struct Entry {
    std::string value;
    std::size_t line;
};

class EntryTable {
public:
    explicit EntryTable(std::string_view text) {
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto end = text.find('\n', start);
            std::string_view line = text.substr(start, end == std::string_view::npos ? end : end - start);
            ++line_no;
            start = end == std::string_view::npos ? text.size() + 1 : end + 1;

            if (const auto hash = line.find('#'); hash != std::string_view::npos) {
                line = line.substr(0, hash);
            }
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw ParseError(fmt::format("line {}: expected 'key = value', got '{}'", line_no, line),
                                 std::string(line), line_no);
            }
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            const auto& known = config_keys();
            if (std::find(known.begin(), known.end(), key) == known.end()) {
                throw ParseError(fmt::format("line {}: unknown key '{}'", line_no, key), key, line_no);
            }
            if (value.empty()) {
                throw ParseError(fmt::format("line {}: key '{}' has no value", line_no, key), key,
                                 line_no);
            }
            if (const auto it = entries_.find(key); it != entries_.end()) {
                throw ParseError(fmt::format("line {}: key '{}' already set on line {}", line_no, key,
                                             it->second.line),
                                 key, line_no);
            }
            entries_.emplace(key, Entry{value, line_no});
        }
    }

    [[nodiscard]] bool has(const std::string& key) const { return entries_.count(key) != 0; }
    [[nodiscard]] std::size_t line(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    // Converts the value of `key` with `convert`, wrapping failures in ParseError.
    template <class F>
    auto get(const std::string& key, F convert) const {
        const Entry& e = entries_.at(key);
        try {
            return convert(std::string_view(e.value));
        } catch (const ParseError&) {
            throw;
        } catch (const Error& err) {
            throw ParseError(fmt::format("line {}: invalid value for '{}': {}", e.line, key, err.what()),
                             key, e.line);
        }
    }

private:
    std::map<std::string, Entry> entries_;
};

[[noreturn]] void fail(const std::string& key, std::size_t line, const std::string& what) {
    if (line == 0) throw ParseError(fmt::format("'{}': {}", key, what), key, 0);
    throw ParseError(fmt::format("line {}: '{}': {}", line, key, what), key, line);
}

std::string format_double(double v) { return fmt::format("{}", v); }

}  // namespace

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys = {
        "scheme",          "rule",           "p",
        "c",               "c0",             "x0",
        "L",               "M",              "dx",
        "dt",              "t_end",          "snapshot_interval",
        "newton_abs_tol",  "newton_max_iters", "blowup_factor",
        "guard_nodes",     "threshold_fraction", "noise_fraction",
        "discard_fraction", "probe_fraction", "forward_share",
        "output_dir",      "table_schemes",  "velocity_grids",
    };
    return keys;
}

StepperConfig ExperimentConfig::stepper() const {
    StepperConfig cfg;
    cfg.rule = rule;
    cfg.newton_abs_tol = newton_abs_tol;
    cfg.newton_max_iters = newton_max_iters;
    cfg.blowup_threshold = blowup_factor * compacton().peak();
    return cfg;
}

AnalysisSettings ExperimentConfig::analysis() const {
    AnalysisSettings settings;
    settings.guard_nodes = guard_nodes;
    settings.threshold_fraction = threshold_fraction;
    settings.noise_fraction = noise_fraction;
    settings.discard_fraction = discard_fraction;
    if (forward_share) {
        settings.forward_share = *forward_share;
    } else {
        const auto v = predicted_front_velocities(scheme, c0, dx(), probe_fraction);
        const double f = std::abs(v.forward);
        const double b = std::abs(v.backward);
        settings.forward_share = f / (f + b);
    }
    return settings;
}

namespace {

// Validation with the line of each key, so errors point at the input.
void validate_with_lines(const ExperimentConfig& cfg, const EntryTable* table) {
    auto line = [&](const char* key) { return table ? table->line(key) : std::size_t{0}; };
    auto check = [&](bool ok, const char* key, const std::string& what) {
        if (!ok) fail(key, line(key), what);
    };

    check(cfg.p.value() > 1.0, "p", fmt::format("p must exceed 1, got {}", cfg.p.to_string()));
    check(std::isfinite(cfg.c) && cfg.c > 0.0, "c", fmt::format("c must be positive, got {}", cfg.c));
    check(std::isfinite(cfg.c0) && cfg.c0 > 0.0, "c0",
          fmt::format("c0 must be positive, got {}", cfg.c0));
    check(std::isfinite(cfg.length) && cfg.length > 0.0, "L",
          fmt::format("L must be positive, got {}", cfg.length));
    const char* grid_key = table && table->has("dx") ? "dx" : "M";
    check(cfg.nodes >= GridSpec::kMinNodes, grid_key,
          fmt::format("the grid needs at least {} nodes, got {}", GridSpec::kMinNodes, cfg.nodes));
    check(std::isfinite(cfg.dt) && cfg.dt > 0.0, "dt", fmt::format("dt must be positive, got {}", cfg.dt));
    check(std::isfinite(cfg.t_end) && cfg.t_end >= 0.0, "t_end",
          fmt::format("t_end must be non-negative, got {}", cfg.t_end));
    const double steps = cfg.t_end / cfg.dt;
    check(std::abs(steps - std::round(steps)) <= 1e-9 * std::max(1.0, steps), "t_end",
          fmt::format("t_end = {} is not a multiple of dt = {}", cfg.t_end, cfg.dt));
    check(std::isfinite(cfg.snapshot_interval) && cfg.snapshot_interval > 0.0, "snapshot_interval",
          fmt::format("snapshot_interval must be positive, got {}", cfg.snapshot_interval));
    check(std::isfinite(cfg.newton_abs_tol) && cfg.newton_abs_tol > 0.0, "newton_abs_tol",
          fmt::format("newton_abs_tol must be positive, got {}", cfg.newton_abs_tol));
    check(cfg.newton_max_iters >= 1, "newton_max_iters",
          fmt::format("newton_max_iters must be >= 1, got {}", cfg.newton_max_iters));
    check(std::isfinite(cfg.blowup_factor) && cfg.blowup_factor > 1.0, "blowup_factor",
          fmt::format("blowup_factor must exceed 1, got {}", cfg.blowup_factor));
    check(cfg.threshold_fraction > 0.0 && cfg.threshold_fraction <= 1.0, "threshold_fraction",
          fmt::format("threshold_fraction must lie in (0, 1], got {}", cfg.threshold_fraction));
    check(cfg.noise_fraction >= 0.0 && cfg.noise_fraction < 1.0, "noise_fraction",
          fmt::format("noise_fraction must lie in [0, 1), got {}", cfg.noise_fraction));
    check(cfg.discard_fraction >= 0.0 && cfg.discard_fraction < 1.0, "discard_fraction",
          fmt::format("discard_fraction must lie in [0, 1), got {}", cfg.discard_fraction));
    check(cfg.probe_fraction > 0.0 && cfg.probe_fraction < 1.0, "probe_fraction",
          fmt::format("probe_fraction must lie in (0, 1), got {}", cfg.probe_fraction));
    if (cfg.forward_share) {
        check(*cfg.forward_share > 0.0 && *cfg.forward_share < 1.0, "forward_share",
              fmt::format("forward_share must lie in (0, 1), got {}", *cfg.forward_share));
    }
    check(!cfg.output_dir.empty(), "output_dir", "output_dir must not be empty");
    for (const auto& g : cfg.velocity_grids) {
        check(g.dx > 0.0 && g.dt > 0.0, "velocity_grids",
              fmt::format("grid pair {}:{} must have positive entries", g.dx, g.dt));
    }

    const CompactonSpec spec = cfg.compacton();
    const auto [left, right] = support_edges(spec, 0.0);
    const char* place_key = table && table->has("x0") ? "x0" : "L";
    check(left > 0.0 && right < cfg.length, place_key,
          fmt::format("compacton support [{}, {}] is not inside (0, {})", left, right, cfg.length));
}

}  // namespace

void ExperimentConfig::validate() const { validate_with_lines(*this, nullptr); }

ExperimentConfig parse_config(std::string_view text) {
    const EntryTable table(text);

    std::vector<std::string> missing;
    for (const char* key : {"scheme", "p", "c", "L", "dt", "t_end"}) {
        if (!table.has(key)) missing.emplace_back(key);
    }
    if (!table.has("dx") && !table.has("M")) missing.emplace_back("dx or M");
    if (!missing.empty()) {
        throw ParseError(fmt::format("missing required key(s): {}", fmt::join(missing, ", ")),
                         missing.front(), 0);
    }

    ExperimentConfig cfg;
    auto number = [](std::string_view s) { return parse_double(s); };
    auto count = [](std::string_view s) {
        const long long v = parse_integer(s);
        if (v < 0) throw ParameterError(fmt::format("'{}' must not be negative", s));
        return static_cast<std::size_t>(v);
    };

    cfg.scheme = table.get("scheme", [](std::string_view s) { return parse_scheme(s); });
    if (table.has("rule")) cfg.rule = table.get("rule", [](std::string_view s) { return parse_rule(s); });
    cfg.p = table.get("p", [](std::string_view s) { return Rational::parse(s); });
    cfg.c = table.get("c", number);
    cfg.c0 = table.has("c0") ? table.get("c0", number) : cfg.c;
    cfg.length = table.get("L", number);
    cfg.dt = table.get("dt", number);
    cfg.t_end = table.get("t_end", number);

    if (table.has("M")) cfg.nodes = table.get("M", count);
    if (table.has("dx")) {
        const double dx = table.get("dx", number);
        if (!(dx > 0.0)) fail("dx", table.line("dx"), fmt::format("dx must be positive, got {}", dx));
        const double ratio = cfg.length / dx;
        const double rounded = std::round(ratio);
        if (!(cfg.length > 0.0) || std::abs(ratio - rounded) > 1e-9 * ratio) {
            fail("dx", table.line("dx"),
                 fmt::format("L = {} is not an integer multiple of dx = {}", cfg.length, dx));
        }
        const auto from_dx = static_cast<std::size_t>(rounded);
        if (table.has("M") && cfg.nodes != from_dx) {
            fail("M", table.line("M"),
                 fmt::format("M = {} disagrees with L/dx = {}", cfg.nodes, from_dx));
        }
        cfg.nodes = from_dx;
    }
    cfg.x0 = table.has("x0") ? table.get("x0", number) : cfg.length / 5.0;

    if (table.has("snapshot_interval")) cfg.snapshot_interval = table.get("snapshot_interval", number);
    if (table.has("newton_abs_tol")) cfg.newton_abs_tol = table.get("newton_abs_tol", number);
    if (table.has("newton_max_iters")) {
        cfg.newton_max_iters = static_cast<int>(table.get("newton_max_iters", [](std::string_view s) {
            const long long v = parse_integer(s);
            if (v < 1 || v > 1000) throw ParameterError(fmt::format("{} is outside [1, 1000]", v));
            return v;
        }));
    }
    if (table.has("blowup_factor")) cfg.blowup_factor = table.get("blowup_factor", number);
    if (table.has("guard_nodes")) cfg.guard_nodes = table.get("guard_nodes", count);
    if (table.has("threshold_fraction")) cfg.threshold_fraction = table.get("threshold_fraction", number);
    if (table.has("noise_fraction")) cfg.noise_fraction = table.get("noise_fraction", number);
    if (table.has("discard_fraction")) cfg.discard_fraction = table.get("discard_fraction", number);
    if (table.has("probe_fraction")) cfg.probe_fraction = table.get("probe_fraction", number);
    if (table.has("forward_share")) cfg.forward_share = table.get("forward_share", number);
    if (table.has("output_dir")) cfg.output_dir = table.get("output_dir", [](std::string_view s) {
        return std::string(s);
    });
    if (table.has("table_schemes")) {
        cfg.table_schemes = table.get("table_schemes", [](std::string_view s) {
            if (s == "all") return std::vector<SchemeId>(kAllSchemes.begin(), kAllSchemes.end());
            std::vector<SchemeId> out;
            for (auto part : split(s, ',')) {
                const SchemeId id = parse_scheme(part);
                if (std::find(out.begin(), out.end(), id) != out.end()) {
                    throw ParameterError(fmt::format("scheme '{}' listed twice", part));
                }
                out.push_back(id);
            }
            return out;
        });
    }
    if (table.has("velocity_grids")) {
        cfg.velocity_grids = table.get("velocity_grids", [](std::string_view s) {
            std::vector<GridPair> out;
            for (auto part : split(s, ',')) {
                const auto colon = part.find(':');
                if (colon == std::string_view::npos) {
                    throw ParameterError(fmt::format("expected dx:dt, got '{}'", part));
                }
                out.push_back({parse_double(trim(part.substr(0, colon))),
                               parse_double(trim(part.substr(colon + 1)))});
            }
            return out;
        });
    }

    validate_with_lines(cfg, &table);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open config file '{}'", path));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError(fmt::format("cannot read config file '{}'", path));
    try {
        return parse_config(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(fmt::format("{}: {}", path, e.what()), e.key(), e.line());
    }
}

std::string to_config_text(const ExperimentConfig& cfg) {
    std::string out;
    auto put = [&](std::string_view key, const std::string& value) {
        out += fmt::format("{} = {}\n", key, value);
    };
    put("scheme", std::string(scheme_name(cfg.scheme)));
    put("rule", std::string(rule_name(cfg.rule)));
    put("p", cfg.p.to_string());
    put("c", format_double(cfg.c));
    put("c0", format_double(cfg.c0));
    put("x0", format_double(cfg.x0));
    put("L", format_double(cfg.length));
    put("M", fmt::format("{}", cfg.nodes));
    put("dt", format_double(cfg.dt));
    put("t_end", format_double(cfg.t_end));
    put("snapshot_interval", format_double(cfg.snapshot_interval));
    put("newton_abs_tol", format_double(cfg.newton_abs_tol));
    put("newton_max_iters", fmt::format("{}", cfg.newton_max_iters));
    put("blowup_factor", format_double(cfg.blowup_factor));
    put("guard_nodes", fmt::format("{}", cfg.guard_nodes));
    put("threshold_fraction", format_double(cfg.threshold_fraction));
    put("noise_fraction", format_double(cfg.noise_fraction));
    put("discard_fraction", format_double(cfg.discard_fraction));
    put("probe_fraction", format_double(cfg.probe_fraction));
    if (cfg.forward_share) put("forward_share", format_double(*cfg.forward_share));
    put("output_dir", cfg.output_dir);
    if (!cfg.table_schemes.empty()) {
        std::vector<std::string_view> names;
        for (SchemeId s : cfg.table_schemes) names.push_back(scheme_name(s));
        put("table_schemes", fmt::format("{}", fmt::join(names, ", ")));
    }
    std::vector<std::string> pairs;
    for (const auto& g : cfg.velocity_grids) pairs.push_back(fmt::format("{}:{}", g.dx, g.dt));
    put("velocity_grids", fmt::format("{}", fmt::join(pairs, ", ")));
    return out;
}

}  // namespace kompakton

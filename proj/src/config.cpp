#include "ionmem/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ionmem/errors.hpp"
#include "ionmem/report.hpp"

namespace ionmem {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, const std::string& field) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ConfigError(field, "expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

std::uint64_t parse_u64(std::string_view text, const std::string& field) {
    std::uint64_t value = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ConfigError(field, "expected an unsigned 64-bit integer, got '" + std::string(text) + "'");
    }
    return value;
}

struct NumericField {
    const char* key;
    double PhysicalConfig::*member;
};

constexpr NumericField kPhysicalFields[] = {
    {"n_photons", &PhysicalConfig::n_photons},
    {"n_atoms", &PhysicalConfig::n_atoms},
    {"wavelength", &PhysicalConfig::wavelength},
    {"linewidth", &PhysicalConfig::linewidth},
    {"detuning", &PhysicalConfig::detuning},
    {"beam_area", &PhysicalConfig::beam_area},
    {"loss_in", &PhysicalConfig::loss_in},
    {"loss_det", &PhysicalConfig::loss_det},
    {"collision_time", &PhysicalConfig::collision_time},
    {"temperature", &PhysicalConfig::temperature},
    {"ion_mass", &PhysicalConfig::ion_mass},
    {"mirror_transmission", &PhysicalConfig::mirror_transmission},
    {"fiber_attenuation", &PhysicalConfig::fiber_attenuation},
    {"fiber_index", &PhysicalConfig::fiber_index},
};

void apply_params_choice(RunConfig& config, std::string_view value) {
    if (value == "derive") {
        config.params_source = ParamsSource::derived;
    } else if (value == "fixture:ion" || value == "fixture") {
        config.params_source = ParamsSource::fixture;
        config.fixture = Fixture::ion_cloud;
    } else if (value == "fixture:polzik") {
        config.params_source = ParamsSource::fixture;
        config.fixture = Fixture::polzik;
    } else {
        throw ConfigError("params", "expected derive, fixture:ion or fixture:polzik");
    }
}

// Shared by the flat and JSON front ends.
RunConfig build_config(const std::vector<KeyValue>& entries) {
    if (entries.empty()) throw ParseError("configuration is empty", 1);

    RunConfig config;
    std::set<std::string> seen;
    std::optional<double> detuning_ratio;
    bool detuning_given = false;

    for (const auto& e : entries) {
        if (e.key != "sweep" && !seen.insert(e.key).second) throw ConfigError(e.key, "given more than once");

        if (e.key == "params") {
            apply_params_choice(config, e.value);
        } else if (e.key == "format") {
            config.format = parse_format(e.value);
        } else if (e.key == "seed") {
            config.seed = parse_u64(e.value, e.key);
        } else if (e.key == "sweep") {
            config.sweep.push_back(parse_sweep_axis(e.value));
        } else if (e.key == "detuning_ratio") {
            detuning_ratio = parse_number(e.value, e.key);
        } else {
            const auto& keys = numeric_config_keys();
            if (std::find(keys.begin(), keys.end(), e.key) == keys.end()) {
                throw ConfigError(e.key, "unknown key");
            }
            if (e.key == "detuning") detuning_given = true;
            set_numeric(config, e.key, parse_number(e.value, e.key));
        }
    }
    if (detuning_ratio) {
        if (detuning_given) throw ConfigError("detuning_ratio", "conflicts with detuning; give one of them");
        set_numeric(config, "detuning_ratio", *detuning_ratio);
    }
    validate(config);
    return config;
}

int line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::vector<KeyValue> json_entries(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), line_of_offset(text, e.byte));
    }
    if (!doc.is_object()) throw ParseError("JSON configuration must be an object", 1);

    std::vector<KeyValue> entries;
    for (const auto& [key, value] : doc.items()) {
        if (key == "sweep" && value.is_array()) {
            for (const auto& axis : value) {
                if (!axis.is_string()) throw ConfigError("sweep", "entries must be strings");
                entries.push_back({key, axis.get<std::string>(), 0});
            }
        } else if (value.is_number_unsigned()) {
            entries.push_back({key, std::to_string(value.get<std::uint64_t>()), 0});
        } else if (value.is_number_integer()) {
            entries.push_back({key, std::to_string(value.get<std::int64_t>()), 0});
        } else if (value.is_number()) {
            entries.push_back({key, format_number(value.get<double>()), 0});
        } else if (value.is_string()) {
            entries.push_back({key, value.get<std::string>(), 0});
        } else {
            throw ConfigError(key, "expected a number or a string");
        }
    }
    return entries;
}

}  // namespace

std::vector<double> SweepAxis::values() const {
    std::vector<double> out(steps);
    if (steps == 1) {
        out[0] = start;
        return out;
    }
    const double span = static_cast<double>(steps - 1);
    for (std::size_t i = 0; i < steps; ++i) {
        const double f = static_cast<double>(i) / span;
        out[i] = spacing == Spacing::linear ? start + (stop - start) * f : start * std::pow(stop / start, f);
    }
    out.back() = stop;
    return out;
}

std::vector<KeyValue> parse_key_values(std::string_view text) {
    std::vector<KeyValue> entries;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
            const auto key = trim(line.substr(0, eq));
            const auto value = trim(line.substr(eq + 1));
            if (key.empty()) throw ParseError("empty key", line_no);
            if (value.empty()) throw ParseError("empty value for '" + std::string(key) + "'", line_no);
            entries.push_back({std::string(key), std::string(value), line_no});
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return entries;
}

RunConfig parse_config(std::string_view text) {
    const auto body = trim(text);
    if (body.empty()) throw ParseError("configuration is empty", 1);
    if (body.front() == '{') return build_config(json_entries(text));
    return build_config(parse_key_values(text));
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

SweepAxis parse_sweep_axis(std::string_view spec) {
    const std::string field = "sweep";
    const auto eq = spec.find('=');
    if (eq == std::string_view::npos) throw ConfigError(field, "expected PATH=START:STOP:N[:log]");

    SweepAxis axis;
    axis.path = std::string(trim(spec.substr(0, eq)));
    const auto& keys = numeric_config_keys();
    if (std::find(keys.begin(), keys.end(), axis.path) == keys.end()) {
        throw ConfigError(field, "'" + axis.path + "' is not a numeric configuration field");
    }

    std::vector<std::string_view> parts;
    std::string_view rest = spec.substr(eq + 1);
    while (true) {
        const auto colon = rest.find(':');
        parts.push_back(trim(rest.substr(0, colon)));
        if (colon == std::string_view::npos) break;
        rest = rest.substr(colon + 1);
    }
    if (parts.size() < 3 || parts.size() > 4) throw ConfigError(field, "expected PATH=START:STOP:N[:log]");

    axis.start = parse_number(parts[0], field + " start");
    axis.stop = parse_number(parts[1], field + " stop");
    const auto steps = parse_u64(parts[2], field + " N");
    axis.steps = static_cast<std::size_t>(steps);
    if (parts.size() == 4) {
        if (parts[3] == "log") {
            axis.spacing = Spacing::log;
        } else if (parts[3] != "lin") {
            throw ConfigError(field, "spacing must be 'log' or 'lin'");
        }
    }

    if (axis.steps == 1) {
        if (axis.start != axis.stop) throw ConfigError(field, "a single-point axis needs START == STOP");
    } else {
        if (axis.steps < 2) throw ConfigError(field, "N must be >= 2");
        if (!(axis.start < axis.stop)) throw ConfigError(field, "START must be < STOP");
    }
    if (axis.spacing == Spacing::log && !(axis.start > 0.0)) {
        throw ConfigError(field, "log spacing needs START > 0");
    }
    return axis;
}

const std::vector<std::string>& numeric_config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& f : kPhysicalFields) k.emplace_back(f.key);
        k.emplace_back("detuning_ratio");
        k.emplace_back("normalization");
        k.emplace_back("storage_time");
        return k;
    }();
    return keys;
}

void set_numeric(RunConfig& config, std::string_view path, double value) {
    for (const auto& f : kPhysicalFields) {
        if (path == f.key) {
            config.physical.*f.member = value;
            return;
        }
    }
    if (path == "detuning_ratio") {
        config.physical.detuning = value * config.physical.linewidth;
    } else if (path == "normalization") {
        config.normalization = value;
    } else if (path == "storage_time") {
        config.storage_time = value;
    } else {
        throw ConfigError(std::string(path), "unknown numeric field");
    }
}

double get_numeric(const RunConfig& config, std::string_view path) {
    for (const auto& f : kPhysicalFields) {
        if (path == f.key) return config.physical.*f.member;
    }
    if (path == "detuning_ratio") return config.physical.detuning / config.physical.linewidth;
    if (path == "normalization") return config.normalization;
    if (path == "storage_time") return config.storage_time;
    throw ConfigError(std::string(path), "unknown numeric field");
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& config) {
    std::vector<std::pair<std::string, std::string>> echo;
    std::string params = "derive";
    if (config.params_source == ParamsSource::fixture) {
        params = "fixture:" + std::string(fixture_name(config.fixture));
    }
    echo.emplace_back("params", params);
    for (const auto& key : numeric_config_keys()) {
        echo.emplace_back(key, format_number(get_numeric(config, key)));
    }
    for (const auto& axis : config.sweep) {
        echo.emplace_back("sweep", axis.path + "=" + format_number(axis.start) + ":" + format_number(axis.stop) +
                                       ":" + std::to_string(axis.steps) +
                                       (axis.spacing == Spacing::log ? ":log" : ""));
    }
    echo.emplace_back("seed", std::to_string(config.seed));
    return echo;
}

void validate(const RunConfig& config) {
    config.physical.validate();
    if (!(config.normalization > 0.0) || !std::isfinite(config.normalization)) {
        throw ConfigError("normalization", "must be finite and > 0");
    }
    if (!(config.storage_time >= 0.0) || !std::isfinite(config.storage_time)) {
        throw ConfigError("storage_time", "must be finite and >= 0");
    }
}

OutputFormat parse_format(std::string_view name) {
    if (name == "table") return OutputFormat::table;
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("format", "expected table, csv or json");
}

}  // namespace ionmem

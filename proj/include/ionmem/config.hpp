#pragma once

// Run configuration: flat `key = value` text with `#` comments, or a JSON
// object with the same keys when the input starts with `{`. SI units
// throughout, except fiber_attenuation (dB/km).

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ionmem/physics.hpp"
#include "ionmem/protocol.hpp"

namespace ionmem {

enum class OutputFormat { table, csv, json };
enum class Spacing { linear, log };

struct SweepAxis {
    std::string path;
    double start = 0.0;
    double stop = 0.0;
    std::size_t steps = 0;
    Spacing spacing = Spacing::linear;

    std::vector<double> values() const;
};

struct RunConfig {
    PhysicalConfig physical = fixture_config(Fixture::ion_cloud);
    ParamsSource params_source = ParamsSource::fixture;
    Fixture fixture = Fixture::ion_cloud;
    double normalization = 1.0;
    double storage_time = 0.0;
    std::vector<SweepAxis> sweep;
    OutputFormat format = OutputFormat::table;
    std::uint64_t seed = 20070101;

    LossBudget losses() const { return {physical.loss_in, physical.loss_det}; }
    double tau() const { return physical.collision_time; }
};

struct KeyValue {
    std::string key;
    std::string value;
    int line;
};

// Lexer for the flat format. Throws ParseError on a line without '=' or
// with an empty key.
std::vector<KeyValue> parse_key_values(std::string_view text);

// Throws ParseError on malformed syntax (including empty input) and
// ConfigError naming the field on unknown keys or range violations.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

// PATH=START:STOP:N[:log|:lin]
SweepAxis parse_sweep_axis(std::string_view spec);

// Keys accepted by parse_config and, for the numeric ones, as sweep paths.
const std::vector<std::string>& numeric_config_keys();

// Sets a numeric field by its config key. Throws ConfigError for unknown
// paths. Does not re-validate.
void set_numeric(RunConfig& config, std::string_view path, double value);
double get_numeric(const RunConfig& config, std::string_view path);

// Canonical key/value listing of the effective configuration.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& config);

void validate(const RunConfig& config);

OutputFormat parse_format(std::string_view name);

}  // namespace ionmem

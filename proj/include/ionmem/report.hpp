#pragma once

// Report records shared by every command and their three renderings: an
// aligned text table, RFC-4180 CSV and a JSON document
// {schema_version, command, config_echo, rows, records}.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ionmem/criteria.hpp"
#include "ionmem/protocol.hpp"

namespace ionmem {

inline constexpr int kReportSchemaVersion = 1;

// Shortest decimal string that parses back to the same double ("inf",
// "-inf", "nan" for non-finite values).
std::string format_number(double value);

struct ReferenceValues {
    double gain;
    double noise;
    double figure;  // N/G
    std::string note;

    bool operator==(const ReferenceValues&) const = default;
};

struct Deviation {
    double gain;
    double noise;
    double figure;
};

struct ReportRow {
    std::string label;
    std::vector<std::pair<std::string, double>> axes;  // sweep coordinates
    std::optional<double> kappa;
    std::optional<double> eps_a;
    std::optional<double> eps_p;
    double gain_q = 0.0;
    double gain_p = 0.0;
    double noise_q = 0.0;
    double noise_p = 0.0;
    double gain = 0.0;
    double noise = 0.0;
    double figure = 0.0;  // N/G, +inf for an erased memory
    bool idqm_pass = false;
    bool dmqm_pass = false;
    std::optional<ReferenceValues> reference;

    // model - reference; present iff a reference is.
    std::optional<Deviation> deviation() const;

    bool operator==(const ReportRow&) const = default;
};

ReportRow make_row(std::string label, const MemoryChannel& mem, const CouplingParams* params = nullptr,
                   double idqm_gain_tolerance = 0.02);

using FieldValue = std::variant<double, std::string, bool>;

struct Field {
    std::string name;
    FieldValue value;

    bool operator==(const Field&) const = default;
};

struct Record {
    std::string label;
    std::vector<Field> fields;

    bool operator==(const Record&) const = default;
};

struct Report {
    int schema_version = kReportSchemaVersion;
    std::string command;
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::vector<ReportRow> rows;
    std::vector<Record> records;

    bool operator==(const Report&) const = default;
};

// Fixed column order of the row table, after any sweep axis columns.
const std::vector<std::string>& row_columns();

std::string render_table(const Report& report);
std::string render_csv(const Report& report);
std::string render_json(const Report& report);
Report parse_json_report(const std::string& text);

}  // namespace ionmem

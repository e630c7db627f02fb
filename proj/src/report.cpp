#include "ionmem/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace ionmem {

namespace {

using Json = nlohmann::ordered_json;

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string text_number(double v) { return fmt::format("{:.4g}", v); }

std::string text_optional(const std::optional<double>& v) { return v ? text_number(*v) : std::string("-"); }

std::string bool_text(bool b) { return b ? "true" : "false"; }

// Cells of one row in row_columns() order, after the axis values.
std::vector<std::string> row_cells(const ReportRow& row, bool for_csv) {
    const auto num = [&](double v) { return for_csv ? format_number(v) : text_number(v); };
    const auto opt = [&](const std::optional<double>& v) { return for_csv ? csv_optional(v) : text_optional(v); };
    const auto dev = row.deviation();
    const auto from_reference = [&](auto member) -> std::optional<double> {
        if (!row.reference) return std::nullopt;
        return (*row.reference).*member;
    };
    const auto from_dev = [&](auto member) -> std::optional<double> {
        if (!dev) return std::nullopt;
        return (*dev).*member;
    };
    return {
        opt(row.kappa),
        opt(row.eps_a),
        opt(row.eps_p),
        num(row.gain_q),
        num(row.gain_p),
        num(row.noise_q),
        num(row.noise_p),
        num(row.gain),
        num(row.noise),
        num(row.figure),
        bool_text(row.idqm_pass),
        bool_text(row.dmqm_pass),
        opt(from_reference(&ReferenceValues::gain)),
        opt(from_reference(&ReferenceValues::noise)),
        opt(from_reference(&ReferenceValues::figure)),
        opt(from_dev(&Deviation::gain)),
        opt(from_dev(&Deviation::noise)),
        opt(from_dev(&Deviation::figure)),
        row.reference ? row.reference->note : std::string(),
    };
}

std::string field_text(const FieldValue& value, bool for_csv) {
    if (const auto* d = std::get_if<double>(&value)) return for_csv ? format_number(*d) : fmt::format("{:.6g}", *d);
    if (const auto* b = std::get_if<bool>(&value)) return bool_text(*b);
    return std::get<std::string>(value);
}

std::string join_csv(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += csv_escape(cells[i]);
    }
    return line + "\r\n";
}

Json number_json(double v) {
    if (std::isfinite(v)) return v;
    return Json{{"non_finite", format_number(v)}};
}

double number_from_json(const Json& j) {
    if (j.is_object()) {
        const auto s = j.at("non_finite").get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        return std::numeric_limits<double>::quiet_NaN();
    }
    return j.get<double>();
}

Json optional_json(const std::optional<double>& v) { return v ? number_json(*v) : Json(nullptr); }

std::optional<double> optional_from_json(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return number_from_json(j);
}

Json field_json(const FieldValue& value) {
    if (const auto* d = std::get_if<double>(&value)) return number_json(*d);
    if (const auto* b = std::get_if<bool>(&value)) return *b;
    return std::get<std::string>(value);
}

FieldValue field_from_json(const Json& j) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_string()) return j.get<std::string>();
    return number_from_json(j);
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
    return std::string(buffer, ptr);
}

std::optional<Deviation> ReportRow::deviation() const {
    if (!reference) return std::nullopt;
    return Deviation{gain - reference->gain, noise - reference->noise, figure - reference->figure};
}

ReportRow make_row(std::string label, const MemoryChannel& mem, const CouplingParams* params,
                   double idqm_gain_tolerance) {
    ReportRow row;
    row.label = std::move(label);
    if (params) {
        row.kappa = params->kappa;
        row.eps_a = params->eps_a;
        row.eps_p = params->eps_p;
    }
    row.gain_q = mem.gain_q();
    row.gain_p = mem.gain_p();
    row.noise_q = mem.noise_q();
    row.noise_p = mem.noise_p();
    row.gain = mem.gain();
    row.noise = mem.noise();
    row.idqm_pass = idqm_verdict(mem, idqm_gain_tolerance).passes;
    if (mem.gain() > 0.0) {
        const Verdict dmqm = dmqm_verdict(mem);
        row.figure = dmqm.figure;
        row.dmqm_pass = dmqm.passes;
    } else {
        row.figure = std::numeric_limits<double>::infinity();
        row.dmqm_pass = false;
    }
    return row;
}

const std::vector<std::string>& row_columns() {
    static const std::vector<std::string> columns = {
        "kappa",   "eps_a",   "eps_p",         "G_Q",   "G_P",   "N_Q",           "N_P",
        "G",       "N",       "N_over_G",      "idqm",  "dmqm",  "ref_G",       "ref_N",
        "ref_N_over_G",     "dev_G",         "dev_N", "dev_N_over_G", "note",
    };
    return columns;
}

namespace {

// Sweep axis names over all rows, in order of first appearance.
std::vector<std::string> axis_columns(const Report& report) {
    std::vector<std::string> names;
    for (const auto& row : report.rows) {
        for (const auto& [name, value] : row.axes) {
            if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
        }
    }
    return names;
}

std::vector<std::string> axis_cells(const ReportRow& row, const std::vector<std::string>& names,
                                    std::string (*format)(double)) {
    std::vector<std::string> cells;
    for (const auto& name : names) {
        const auto it = std::find_if(row.axes.begin(), row.axes.end(), [&](const auto& a) { return a.first == name; });
        cells.push_back(it == row.axes.end() ? std::string() : format(it->second));
    }
    return cells;
}

}  // namespace

std::string render_csv(const Report& report) {
    std::string out;
    if (!report.records.empty()) {
        out += join_csv({"record", "field", "value"});
        for (const auto& rec : report.records) {
            for (const auto& f : rec.fields) out += join_csv({rec.label, f.name, field_text(f.value, true)});
        }
    }
    if (!report.rows.empty()) {
        if (!out.empty()) out += "\r\n";
        const auto axes = axis_columns(report);
        std::vector<std::string> header = {"label"};
        header.insert(header.end(), axes.begin(), axes.end());
        header.insert(header.end(), row_columns().begin(), row_columns().end());
        out += join_csv(header);
        for (const auto& row : report.rows) {
            std::vector<std::string> cells = {row.label};
            const auto coords = axis_cells(row, axes, format_number);
            cells.insert(cells.end(), coords.begin(), coords.end());
            const auto rest = row_cells(row, true);
            cells.insert(cells.end(), rest.begin(), rest.end());
            out += join_csv(cells);
        }
    }
    return out;
}

std::string render_table(const Report& report) {
    std::string out;
    for (const auto& rec : report.records) {
        out += fmt::format("[{}]\n", rec.label);
        std::size_t width = 0;
        for (const auto& f : rec.fields) width = std::max(width, f.name.size());
        for (const auto& f : rec.fields) {
            out += fmt::format("  {:<{}}  {}\n", f.name, width, field_text(f.value, false));
        }
        out += '\n';
    }
    if (report.rows.empty()) return out;

    std::vector<std::vector<std::string>> grid;
    const auto axes = axis_columns(report);
    std::vector<std::string> header = {"label"};
    header.insert(header.end(), axes.begin(), axes.end());
    header.insert(header.end(), row_columns().begin(), row_columns().end());
    grid.push_back(header);
    for (const auto& row : report.rows) {
        std::vector<std::string> cells = {row.label};
        const auto coords = axis_cells(row, axes, text_number);
        cells.insert(cells.end(), coords.begin(), coords.end());
        const auto rest = row_cells(row, false);
        cells.insert(cells.end(), rest.begin(), rest.end());
        grid.push_back(std::move(cells));
    }
    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& line : grid) {
        for (std::size_t c = 0; c < line.size(); ++c) widths[c] = std::max(widths[c], line[c].size());
    }
    for (const auto& line : grid) {
        std::string text;
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (c) text += "  ";
            text += c == 0 ? fmt::format("{:<{}}", line[c], widths[c]) : fmt::format("{:>{}}", line[c], widths[c]);
        }
        while (!text.empty() && text.back() == ' ') text.pop_back();
        out += text + '\n';
    }
    return out;
}

std::string render_json(const Report& report) {
    Json doc;
    doc["schema_version"] = report.schema_version;
    doc["command"] = report.command;
    Json echo = Json::array();
    for (const auto& [key, value] : report.config_echo) echo.push_back(Json::array({key, value}));
    doc["config_echo"] = echo;

    Json rows = Json::array();
    for (const auto& row : report.rows) {
        Json r;
        r["label"] = row.label;
        Json axes = Json::array();
        for (const auto& [name, value] : row.axes) axes.push_back(Json::array({name, number_json(value)}));
        r["axes"] = axes;
        r["kappa"] = optional_json(row.kappa);
        r["eps_a"] = optional_json(row.eps_a);
        r["eps_p"] = optional_json(row.eps_p);
        r["G_Q"] = number_json(row.gain_q);
        r["G_P"] = number_json(row.gain_p);
        r["N_Q"] = number_json(row.noise_q);
        r["N_P"] = number_json(row.noise_p);
        r["G"] = number_json(row.gain);
        r["N"] = number_json(row.noise);
        r["N_over_G"] = number_json(row.figure);
        r["idqm"] = row.idqm_pass;
        r["dmqm"] = row.dmqm_pass;
        if (row.reference) {
            const auto dev = *row.deviation();
            r["reference"] = {{"G", number_json(row.reference->gain)},
                          {"N", number_json(row.reference->noise)},
                          {"N_over_G", number_json(row.reference->figure)},
                          {"note", row.reference->note}};
            r["deviation"] = {{"G", number_json(dev.gain)},
                              {"N", number_json(dev.noise)},
                              {"N_over_G", number_json(dev.figure)}};
        } else {
            r["reference"] = nullptr;
            r["deviation"] = nullptr;
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = rows;

    Json records = Json::array();
    for (const auto& rec : report.records) {
        Json fields = Json::array();
        for (const auto& f : rec.fields) fields.push_back(Json::array({f.name, field_json(f.value)}));
        records.push_back({{"label", rec.label}, {"fields", fields}});
    }
    doc["records"] = records;
    return doc.dump(2) + "\n";
}

Report parse_json_report(const std::string& text) {
    const Json doc = Json::parse(text);
    Report report;
    report.schema_version = doc.at("schema_version").get<int>();
    report.command = doc.at("command").get<std::string>();
    for (const auto& pair : doc.at("config_echo")) {
        report.config_echo.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
    }
    for (const auto& r : doc.at("rows")) {
        ReportRow row;
        row.label = r.at("label").get<std::string>();
        for (const auto& axis : r.at("axes")) {
            row.axes.emplace_back(axis.at(0).get<std::string>(), number_from_json(axis.at(1)));
        }
        row.kappa = optional_from_json(r.at("kappa"));
        row.eps_a = optional_from_json(r.at("eps_a"));
        row.eps_p = optional_from_json(r.at("eps_p"));
        row.gain_q = number_from_json(r.at("G_Q"));
        row.gain_p = number_from_json(r.at("G_P"));
        row.noise_q = number_from_json(r.at("N_Q"));
        row.noise_p = number_from_json(r.at("N_P"));
        row.gain = number_from_json(r.at("G"));
        row.noise = number_from_json(r.at("N"));
        row.figure = number_from_json(r.at("N_over_G"));
        row.idqm_pass = r.at("idqm").get<bool>();
        row.dmqm_pass = r.at("dmqm").get<bool>();
        if (const auto& p = r.at("reference"); !p.is_null()) {
            row.reference = ReferenceValues{number_from_json(p.at("G")), number_from_json(p.at("N")),
                                       number_from_json(p.at("N_over_G")), p.at("note").get<std::string>()};
        }
        report.rows.push_back(std::move(row));
    }
    for (const auto& rec : doc.at("records")) {
        Record record{rec.at("label").get<std::string>(), {}};
        for (const auto& f : rec.at("fields")) {
            record.fields.push_back({f.at(0).get<std::string>(), field_from_json(f.at(1))});
        }
        report.records.push_back(std::move(record));
    }
    return report;
}

}  // namespace ionmem

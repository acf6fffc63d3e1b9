#include "cli.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace rydfloq::cli {

namespace {

std::string csv_cell(const Cell& c) {
    if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* s = std::get_if<std::string>(&c)) {
        if (s->find_first_of(",\"\n") == std::string::npos) return *s;
        std::string q = "\"";
        for (char ch : *s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + '"';
    }
    return {};
}

nlohmann::ordered_json json_cell(const Cell& c) {
    if (const auto* l = std::get_if<long>(&c)) return *l;
    if (const auto* d = std::get_if<double>(&c)) {
        if (!std::isfinite(*d)) return nullptr;
        // Round through the 12-digit text so both formats carry equal values.
        return std::stod(format_number(*d));
    }
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return nullptr;
}

std::string render_csv(const Report& r, const Table& t) {
    std::ostringstream out;
    for (const auto& [k, v] : r.metadata) out << "# " << k << ": " << v << '\n';
    out << "# table: " << t.name << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
        out << '\n';
    }
    return out.str();
}

std::string render_json(const Report& r, const Table& t) {
    nlohmann::ordered_json doc;
    auto meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.metadata) meta[k] = v;
    doc["metadata"] = meta;
    doc["table"] = t.name;
    doc["columns"] = t.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        auto jr = nlohmann::ordered_json::array();
        for (const auto& c : row) jr.push_back(json_cell(c));
        rows.push_back(std::move(jr));
    }
    doc["rows"] = std::move(rows);
    return doc.dump() + '\n';
}

}  // namespace

Format parse_format(std::string_view s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw UsageError("unknown format '" + std::string(s) + "' (csv|json)");
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";  // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string render(const Report& r, const Table& t, Format f) {
    return f == Format::csv ? render_csv(r, t) : render_json(r, t);
}

}  // namespace rydfloq::cli

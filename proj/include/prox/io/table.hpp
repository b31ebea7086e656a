// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prox/core/error.hpp"

/// Result tables with a metadata header block, written as CSV or JSON.
///
/// CSV: the header block is one `# {json}` line, then a header row and RFC-4180 records.
/// Strings are always quoted; numbers, booleans and nulls (empty fields) are not, so a
/// CSV table reads back to the same cell types. Floats are finite and use 17 significant digits.
namespace prox::io {

using json = nlohmann::ordered_json;

struct Table {
    json meta = json::object();
    std::vector<std::string> columns;
    /// One json scalar per column.
    std::vector<std::vector<json>> rows;

    void add_row(std::vector<json> row)
    {
        if (row.size() != columns.size()) throw PreconditionError("table: row width does not match the header");
        for (const auto& v : row) {
            if (v.is_number_float() && !std::isfinite(v.get<double>())) {
                throw PreconditionError("table: non-finite value; use null for a missing entry");
            }
        }
        rows.push_back(std::move(row));
    }
};

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string quote_csv(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string csv_cell(const json& v)
{
    switch (v.type()) {
    case json::value_t::null: return "";
    case json::value_t::boolean: return v.get<bool>() ? "true" : "false";
    case json::value_t::number_integer: return std::to_string(v.get<long long>());
    case json::value_t::number_unsigned: return std::to_string(v.get<unsigned long long>());
    case json::value_t::number_float: return format_double(v.get<double>());
    case json::value_t::string: return quote_csv(v.get<std::string>());
    default: throw PreconditionError("table: cells must be scalars");
    }
}

/// Header row and records only.
inline std::string csv_data(const Table& t)
{
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + quote_csv(t.columns[i]);
    out += "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
        out += "\r\n";
    }
    return out;
}

inline std::string to_csv(const Table& t) { return "# " + t.meta.dump() + "\r\n" + csv_data(t); }

inline json data_json(const Table& t)
{
    json data = json::array();
    for (const auto& row : t.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = row[i];
        data.push_back(std::move(obj));
    }
    return data;
}

inline std::string to_json(const Table& t)
{
    json doc = json::object();
    doc["meta"] = t.meta;
    doc["columns"] = t.columns;
    doc["data"] = data_json(t);
    return doc.dump(2) + "\n";
}

inline json from_csv_cell(const std::string& s, bool quoted)
{
    if (quoted) return s;
    if (s.empty()) return nullptr;
    if (s == "true") return true;
    if (s == "false") return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (s.find_first_of(".eE") == std::string::npos && s != "-0") {
        long long v = 0;
        const auto r = std::from_chars(first, last, v);
        if (r.ec == std::errc() && r.ptr == last) return v;
    }
    double v = 0.0;
    const auto r = std::from_chars(first, last, v);
    if (r.ec == std::errc() && r.ptr == last) return v;
    throw PreconditionError("csv: unquoted field '" + s + "' is not a number");
}

/// Parses the output of to_csv (or plain RFC-4180 CSV with a header row).
inline Table from_csv(const std::string& text)
{
    Table t;
    std::size_t pos = 0;
    while (pos < text.size() && text[pos] == '#') {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos + 1, eol - pos - 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (t.meta.empty()) t.meta = json::parse(line);
        pos = eol + 1;
    }
    std::vector<std::vector<std::pair<std::string, bool>>> records;
    std::vector<std::pair<std::string, bool>> rec;
    std::string field;
    bool quoted = false, in_quotes = false, any = false;
    auto end_field = [&] {
        rec.emplace_back(field, quoted);
        field.clear();
        quoted = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(rec));
        rec.clear();
        any = false;
    };
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (in_quotes) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    field += '"';
                    ++pos;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        any = true;
        if (c == '"') {
            if (!field.empty()) throw PreconditionError("csv: quote inside an unquoted field");
            in_quotes = quoted = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') {
            continue;
        } else if (c == '\n') {
            end_record();
        } else {
            field += c;
        }
    }
    if (in_quotes) throw PreconditionError("csv: unterminated quoted field");
    if (any) end_record();
    if (records.empty()) throw PreconditionError("csv: missing header row");
    for (const auto& f : records.front()) t.columns.push_back(f.first);
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != t.columns.size()) {
            throw PreconditionError("csv: record " + std::to_string(r) + " has " + std::to_string(records[r].size()) +
                                    " fields, header has " + std::to_string(t.columns.size()));
        }
        std::vector<json> row;
        for (const auto& f : records[r]) row.push_back(from_csv_cell(f.first, f.second));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline Table from_json(const std::string& text)
{
    const json doc = json::parse(text);
    Table t;
    t.meta = doc.at("meta");
    t.columns = doc.at("columns").get<std::vector<std::string>>();
    for (const auto& obj : doc.at("data")) {
        std::vector<json> row;
        for (const auto& c : t.columns) row.push_back(obj.at(c));
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// Cell-wise equality; numbers compare exactly as doubles.
inline bool same_data(const Table& x, const Table& y)
{
    if (x.columns != y.columns || x.rows.size() != y.rows.size()) return false;
    for (std::size_t r = 0; r < x.rows.size(); ++r) {
        for (std::size_t c = 0; c < x.columns.size(); ++c) {
            const json& u = x.rows[r][c];
            const json& v = y.rows[r][c];
            if (u.is_number() && v.is_number()) {
                const double a = u.get<double>(), b = v.get<double>();
                if (!(a == b)) return false;
            } else if (u != v) {
                return false;
            }
        }
    }
    return true;
}

} // namespace prox::io

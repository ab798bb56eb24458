// Copyright 2026 The coarse-metrology Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace coarse_metrology::cli {

using Cell = std::variant<std::string, double, std::int64_t, bool>;

/// 17 significant digits: every binary64 value survives a text round trip.
inline std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

inline std::string to_text(const Cell &cell) {
    struct Visitor {
        std::string operator()(const std::string &s) const { return s; }
        std::string operator()(double x) const { return format_real(x); }
        std::string operator()(std::int64_t x) const { return std::to_string(x); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(Visitor{}, cell);
}

inline void write_csv(std::ostream &out, const Table &table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << to_text(row[i]);
        }
        out << '\n';
    }
}

/// Array of row objects keyed by column name. Non-finite reals become
/// strings ("inf", "nan") since JSON has no literal for them.
inline void write_json(std::ostream &out, const Table &table) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto &row : table.rows) {
        nlohmann::ordered_json record = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
            const auto &cell = row[i];
            if (const auto *x = std::get_if<double>(&cell); x && !std::isfinite(*x)) {
                record[table.columns[i]] = format_real(*x);
            } else {
                std::visit([&](const auto &v) { record[table.columns[i]] = v; }, cell);
            }
        }
        doc.push_back(std::move(record));
    }
    out << doc.dump(2) << '\n';
}

enum class OutputFormat { Csv, Json };

inline void write_table(std::ostream &out, const Table &table, OutputFormat format) {
    if (format == OutputFormat::Json) {
        write_json(out, table);
    } else {
        write_csv(out, table);
    }
}

} // namespace coarse_metrology::cli

// Copyright 2026 The xduce Authors
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

#ifndef XDUCE_CLI_REPORT_H
#define XDUCE_CLI_REPORT_H

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "xduce/cli/run_config.h"
#include "xduce/sweep.h"

namespace xduce::cli {

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

using FieldValue = std::variant<std::monostate, double, uint64_t, bool, std::string>;

struct Field {
    std::string name;
    FieldValue value;
};

using Record = std::vector<Field>;

inline FieldValue optional_value(const std::optional<double> &v) {
    if (v.has_value()) {
        return *v;
    }
    return std::monostate{};
}

inline std::string csv_cell(const FieldValue &value) {
    struct Visitor {
        std::string operator()(std::monostate) const {
            return "";
        }
        std::string operator()(double v) const {
            return format_double(v);
        }
        std::string operator()(uint64_t v) const {
            return std::to_string(v);
        }
        std::string operator()(bool v) const {
            return v ? "true" : "false";
        }
        std::string operator()(const std::string &v) const {
            return v;
        }
    };
    return std::visit(Visitor{}, value);
}

inline nlohmann::ordered_json json_value(const FieldValue &value) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const {
            return nullptr;
        }
        nlohmann::ordered_json operator()(double v) const {
            if (!std::isfinite(v)) {
                return format_double(v);
            }
            return v;
        }
        nlohmann::ordered_json operator()(uint64_t v) const {
            return v;
        }
        nlohmann::ordered_json operator()(bool v) const {
            return v;
        }
        nlohmann::ordered_json operator()(const std::string &v) const {
            return v;
        }
    };
    return std::visit(Visitor{}, value);
}

/// Writes records sharing one schema: CSV (header + rows) or one JSON object per line.
inline void write_records(std::ostream &out, const std::vector<Record> &records, Format format) {
    if (records.empty()) {
        return;
    }
    if (format == Format::Csv) {
        const Record &first = records.front();
        for (size_t k = 0; k < first.size(); ++k) {
            out << (k ? "," : "") << first[k].name;
        }
        out << '\n';
        for (const Record &r : records) {
            for (size_t k = 0; k < r.size(); ++k) {
                out << (k ? "," : "") << csv_cell(r[k].value);
            }
            out << '\n';
        }
        return;
    }
    for (const Record &r : records) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (const Field &f : r) {
            obj[f.name] = json_value(f.value);
        }
        out << obj.dump() << '\n';
    }
}

inline void write_record(std::ostream &out, const Record &record, Format format) {
    write_records(out, std::vector<Record>{record}, format);
}

/// Column order of the sweep table.
inline Record sweep_record(const SweepRow &row) {
    return {
        {"pump_power_w", row.pump_power},
        {"q_b", row.q_b},
        {"n_p", row.n_p},
        {"cooperativity", row.cooperativity},
        {"eta_internal", row.eta_internal},
        {"eta", row.eta},
        {"infidelity", optional_value(row.infidelity)},
    };
}

inline constexpr const char *SWEEP_CSV_HEADER = "pump_power_w,q_b,n_p,cooperativity,eta_internal,eta,infidelity";

}  // namespace xduce::cli

#endif

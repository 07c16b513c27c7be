#pragma once

// Table serialization. CSV files open with `# yulefam v<version>`, carry the
// full run configuration as `# key=value` lines, then a column-name row and
// data rows with doubles at 17 significant digits (lossless round-trip).
// JSON files mirror the same content. Headers never record runtime-only
// knobs (thread count), so re-runs with any parallelism are byte-identical.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "yulefam/version.hpp"

namespace yulefam {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using HeaderKvs = std::vector<std::pair<std::string, std::string>>;

struct Table {
    HeaderKvs config;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline void write_csv(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "# yulefam v" << version << "\n";
    for (const auto& [key, value] : table.config) out << "# " << key << "=" << value << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_g17(row[c]);
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

inline void write_json(const std::string& path, const Table& table) {
    nlohmann::ordered_json j;
    j["yulefam"] = version;
    nlohmann::ordered_json cfg;
    for (const auto& [key, value] : table.config) cfg[key] = value;
    j["config"] = std::move(cfg);
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

inline void write_table(const std::string& path, const Table& table, const std::string& format) {
    if (format == "csv")
        write_csv(path, table);
    else if (format == "json")
        write_json(path, table);
    else
        throw std::domain_error("unknown output format: " + format);
}

// Re-read a table (either format). The config map is exactly what was
// written, so a run can be reproduced from its own output.
inline Table read_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    Table table;
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty file: " + path);
    if (!line.empty() && line.front() == '{') {
        in.seekg(0);
        nlohmann::ordered_json j;
        in >> j;
        for (auto it = j.at("config").begin(); it != j.at("config").end(); ++it)
            table.config.emplace_back(it.key(), it.value().get<std::string>());
        table.columns = j.at("columns").get<std::vector<std::string>>();
        table.rows = j.at("rows").get<std::vector<std::vector<double>>>();
        return table;
    }
    if (line.rfind("# yulefam v", 0) != 0) throw IoError("missing yulefam signature: " + path);
    bool have_columns = false;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw IoError("malformed header line: " + line);
            table.config.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!have_columns) {
            while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
            have_columns = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!row.empty()) table.rows.push_back(std::move(row));
    }
    return table;
}

inline std::map<std::string, std::string> config_map(const Table& table) {
    return {table.config.begin(), table.config.end()};
}

}  // namespace yulefam

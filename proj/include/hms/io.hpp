#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hms/errors.hpp"

// Deterministic text output: CSV cells are formatted to 6 significant
// digits so repeated runs are byte-identical; JSON documents are dumped
// with sorted keys (nlohmann's default object ordering).

namespace hms {

inline std::string format_g6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw ConfigError("cannot open output file: " + path);
    }

    void header(const std::vector<std::string>& columns) { line(columns); }

    void row(const std::vector<std::string>& cells) { line(cells); }

private:
    void line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ofstream out_;
};

inline void write_json_file(const std::string& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << doc.dump(2) << '\n';
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(detail::str("config file ", path, " is not valid JSON: ", e.what()));
    }
}

}  // namespace hms

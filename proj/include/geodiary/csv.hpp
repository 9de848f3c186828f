#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "geodiary/errors.hpp"

namespace geodiary {

// Delimited-text helpers. Fields are comma-separated and unquoted;
// none of the formats used here embed commas in values.

inline std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Checks the header row of a delimited file; throws SchemaViolation if
/// it does not match the expected column list exactly.
inline void require_header(const std::vector<std::string>& lines, const std::string& expected,
                           const std::string& path) {
    if (lines.empty()) throw SchemaViolation("missing header in " + path, 1, "header");
    if (lines[0] != expected)
        throw SchemaViolation("unexpected header in " + path + ": got '" + lines[0] + "', want '" + expected +
                                  "'",
                              1, "header");
}

}  // namespace geodiary

#pragma once

#include <fstream>
#include <functional>
#include <istream>
#include <string>
#include <vector>

#include "prognet/types.hpp"

namespace prognet {

// Minimal RFC-4180-style CSV: comma separator, double-quote quoting with
// doubled quotes inside quoted fields. Sector names like
// "Image Recognition, Visual Search" need this; nothing fancier does.

inline std::string csv_escape(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline std::string csv_join(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    return out;
}

inline std::vector<std::string> csv_split(const std::string& line, size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            if (!cur.empty())
                throw Error(ErrorClass::Data, "MalformedRow",
                            "stray quote on line " + std::to_string(line_no));
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw Error(ErrorClass::Data, "MalformedRow",
                    "unterminated quote on line " + std::to_string(line_no));
    fields.push_back(cur);
    return fields;
}

// Streams rows to `fn(fields, line_no)`. Returns the number of data rows.
// The header row is validated against `expect_header` (exact match).
inline size_t for_each_csv_row(std::istream& in, const std::string& expect_header,
                               const std::function<void(const std::vector<std::string>&, size_t)>& fn) {
    std::string line;
    size_t line_no = 0;
    size_t rows = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != expect_header)
                throw Error(ErrorClass::Data, "MalformedRow",
                            "expected header '" + expect_header + "', got '" + line + "'");
            saw_header = true;
            continue;
        }
        fn(csv_split(line, line_no), line_no);
        ++rows;
    }
    return rows;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorClass::Io, "IoError", "cannot open file: " + path);
    return in;
}

}  // namespace prognet

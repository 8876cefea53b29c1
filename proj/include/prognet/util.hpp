#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <system_error>

#include "prognet/types.hpp"

namespace prognet {

// Shortest round-trip decimal form, locale independent. All numeric CSV/JSON
// output goes through here so re-parsing reproduces the exact double.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const char* what) {
    double v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw Error(ErrorClass::Data, "MalformedRow",
                    std::string("bad ") + what + ": '" + s + "'");
    return v;
}

inline long long parse_int(const std::string& s, const char* what) {
    long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(ErrorClass::Data, "MalformedRow",
                    std::string("bad ") + what + ": '" + s + "'");
    return v;
}

// Write-then-rename: the target path either keeps its old content or gets the
// complete new content, never a partial file.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::function<void(std::ostream&)>& writer) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw Error(ErrorClass::Io, "IoError", "cannot open for writing: " + tmp.string());
        writer(out);
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error(ErrorClass::Io, "IoError", "write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorClass::Io, "IoError", "rename failed: " + path.string());
    }
}

}  // namespace prognet

#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "fswkb/errors.hpp"

namespace fswkb {

using json = nlohmann::json;

/// Shortest round-trip decimal representation (locale-independent).
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace io {

/// Writes content to path atomically: temp file in the same directory, then
/// rename. No partial files survive a failure.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw numeric_error("io: cannot open " + tmp.string() + " for writing");
        out.write(content.data(), std::streamsize(content.size()));
        if (!out) throw numeric_error("io: short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw numeric_error("io: rename to " + path.string() + " failed: " + ec.message());
}

/// Row-oriented CSV builder with LF endings and fixed column order.
class CsvBuilder {
public:
    explicit CsvBuilder(const std::vector<std::string>& columns) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) buf_ += ',';
            buf_ += columns[i];
        }
        buf_ += '\n';
        width_ = columns.size();
    }

    void row(const std::vector<double>& values) {
        if (values.size() != width_) throw validation_error("CsvBuilder: column count mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) buf_ += ',';
            buf_ += format_double(values[i]);
        }
        buf_ += '\n';
    }

    void raw_row(const std::vector<std::string>& cells) {
        if (cells.size() != width_) throw validation_error("CsvBuilder: column count mismatch");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) buf_ += ',';
            buf_ += cells[i];
        }
        buf_ += '\n';
    }

    void save(const std::filesystem::path& path) const { write_file_atomic(path, buf_); }

private:
    std::string buf_;
    std::size_t width_ = 0;
};

/// JSON written with sorted keys (nlohmann's default object ordering), two
/// space indent, LF endings.
inline void write_json_atomic(const std::filesystem::path& path, const json& j) {
    write_file_atomic(path, j.dump(2) + "\n");
}

} // namespace io
} // namespace fswkb

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "transitmesh/core.hpp"

namespace transitmesh {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

// Line-oriented reader for the comma-separated artifact files. Ids are
// restricted to an unquoted alphabet, so no quoting rules apply. Keeps
// the current line number for error messages.
class CsvReader {
public:
    CsvReader(const std::string& path, const std::vector<std::string>& header)
        : path_(path), stream_(path) {
        if (!stream_) throw IoError("cannot open " + path);
        std::string line;
        if (!std::getline(stream_, line))
            throw ValidationError(path + ": missing header row");
        ++line_no_;
        if (split_csv_line(line) != header) {
            std::string want;
            for (std::size_t i = 0; i < header.size(); ++i) {
                if (i) want += ',';
                want += header[i];
            }
            throw ValidationError(path + ":1: expected header '" + want + "'");
        }
        column_count_ = header.size();
    }

    // Reads the next data row. Blank lines are skipped. Returns false at EOF.
    bool next(std::vector<std::string>& fields) {
        std::string line;
        while (std::getline(stream_, line)) {
            ++line_no_;
            if (line.empty() || line == "\r") continue;
            fields = split_csv_line(line);
            if (fields.size() != column_count_) {
                throw ValidationError(location() + ": expected " +
                                      std::to_string(column_count_) + " fields, got " +
                                      std::to_string(fields.size()));
            }
            return true;
        }
        return false;
    }

    std::string location() const { return path_ + ":" + std::to_string(line_no_); }
    std::size_t line() const { return line_no_; }

    // Parses a whole-number minutes field, rejecting junk like "12x" or "".
    Minutes parse_minutes(const std::string& field, const char* column) const {
        std::size_t pos = 0;
        long value = 0;
        try {
            value = std::stol(field, &pos);
        } catch (const std::exception&) {
            throw ValidationError(location() + ": bad integer in column '" +
                                  column + "': '" + field + "'");
        }
        if (pos != field.size())
            throw ValidationError(location() + ": bad integer in column '" +
                                  std::string(column) + "': '" + field + "'");
        return static_cast<Minutes>(value);
    }

    std::string parse_id(const std::string& field, const char* column) const {
        if (!valid_id(field))
            throw ValidationError(location() + ": invalid id in column '" +
                                  std::string(column) + "': '" + field + "'");
        return field;
    }

private:
    std::string path_;
    std::ifstream stream_;
    std::size_t line_no_ = 0;
    std::size_t column_count_ = 0;
};

// Writes content to a temp file in the target directory and renames it
// into place, so readers never observe a half-written artifact.
inline void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path dir = target.parent_path();
    if (dir.empty()) dir = ".";
    std::error_code ec;
    fs::create_directories(dir, ec);

    fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("short write to " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

}  // namespace transitmesh

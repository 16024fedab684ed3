#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vclod/error.hpp"
#include "vclod/version.hpp"

namespace vclod {

namespace detail {

// Shortest text that round-trips the double exactly; locale-free.
inline std::string format_double(double v) {
    char buf[48];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double_or_throw(std::string_view token, const std::string& context) {
    double out = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), out);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        throw ValidationError(context + ": malformed number '" + std::string(token) + "'");
    return out;
}

inline long parse_long_or_throw(std::string_view token, const std::string& context) {
    long out = 0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), out);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        throw ValidationError(context + ": malformed integer '" + std::string(token) + "'");
    return out;
}

} // namespace detail

// Byte-deterministic CSV writer. Leading '#' comment lines carry the
// tool version and the seed, so every artifact names its provenance.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns,
              std::uint64_t seed)
        : path_(path) {
        out_ << "# " << kToolName << " " << kVersion << " seed=" << seed << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
        out_ << "\n";
        width_ = columns.size();
    }

    void row(const std::vector<std::string>& fields) {
        if (fields.size() != width_)
            throw ValidationError("CsvWriter: row width mismatch for " + path_.string());
        for (std::size_t i = 0; i < fields.size(); ++i)
            out_ << fields[i] << (i + 1 < fields.size() ? "," : "");
        out_ << "\n";
    }

    void close() {
        std::ofstream file(path_, std::ios::binary);
        if (!file) throw IoError("cannot write " + path_.string());
        const std::string text = out_.str();
        file.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!file) throw IoError("write failed for " + path_.string());
        closed_ = true;
    }

    ~CsvWriter() {
        if (!closed_) {
            try {
                close();
            } catch (...) {
            }
        }
    }

    static std::string num(double v) { return detail::format_double(v); }
    static std::string num(int v) { return std::to_string(v); }

private:
    std::filesystem::path path_;
    std::ostringstream out_;
    std::size_t width_ = 0;
    bool closed_ = false;
};

struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw ValidationError("CSV column '" + name + "' not found");
    }
};

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    CsvTable table;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            table.comments.push_back(line);
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!header_seen) {
            table.columns = std::move(fields);
            header_seen = true;
        } else {
            if (fields.size() != table.columns.size())
                throw ValidationError(path.string() + ": ragged CSV row");
            table.rows.push_back(std::move(fields));
        }
    }
    if (!header_seen) throw ValidationError(path.string() + ": missing CSV header");
    return table;
}

} // namespace vclod

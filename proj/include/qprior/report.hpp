#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qprior {

using CsvCell = std::variant<std::string, double, long>;
using CsvRow = std::vector<CsvCell>;

inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string to_csv(const std::vector<std::string>& header, const std::vector<CsvRow>& rows) {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_escape(header[i]);
    out << "\r\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            if (std::holds_alternative<std::string>(row[i]))
                out << csv_escape(std::get<std::string>(row[i]));
            else if (std::holds_alternative<double>(row[i]))
                out << format_full(std::get<double>(row[i]));
            else
                out << std::get<long>(row[i]);
        }
        out << "\r\n";
    }
    return out.str();
}

/// Writes via a temp file in the same directory, then renames into place.
inline void atomic_write(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path dir = path.parent_path().empty() ? "." : path.parent_path();
    std::filesystem::create_directories(dir);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out << contents;
        if (!out.flush()) throw std::runtime_error("atomic_write: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<CsvRow>& rows) {
    atomic_write(path, to_csv(header, rows));
}

/// Minimal fixed-width markdown table.
inline std::string markdown_table(const std::vector<std::string>& header,
                                  const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    out << '|';
    for (const auto& h : header) out << ' ' << h << " |";
    out << "\n|";
    for (std::size_t i = 0; i < header.size(); ++i) out << "---|";
    out << '\n';
    for (const auto& row : rows) {
        out << '|';
        for (const auto& c : row) out << ' ' << c << " |";
        out << '\n';
    }
    return out.str();
}

}  // namespace qprior

#pragma once

// CSV artifacts: '#'-prefixed comment lines (units, conventions), one header row, data rows.
// Floating-point cells use 17 significant digits so values round-trip and files are reproducible.

#include "polariton/energy.hpp"
#include "polariton/error.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace polariton::io {

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Cell
{
    std::string text;

    Cell(double v) : text(format_double(v)) {}
    Cell(int v) : text(std::to_string(v)) {}
    Cell(long v) : text(std::to_string(v)) {}
    Cell(unsigned long v) : text(std::to_string(v)) {}
    Cell(unsigned long long v) : text(std::to_string(v)) {}
    Cell(const char *s) : text(s) {}
    Cell(std::string s) : text(std::move(s)) {}
};

struct CsvTable
{
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<Cell> cells)
    {
        if (cells.size() != columns.size())
            fail(Errc::invalid_argument, "row width does not match the header");
        std::vector<std::string> r;
        r.reserve(cells.size());
        for (auto &c : cells)
            r.push_back(std::move(c.text));
        rows.push_back(std::move(r));
    }
};

inline std::string to_csv(const CsvTable &t)
{
    std::ostringstream os;
    for (const auto &c : t.comments)
        os << "# " << c << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto &r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            os << (i ? "," : "") << r[i];
        os << '\n';
    }
    return os.str();
}

inline void write_text(const std::filesystem::path &path, const std::string &text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(Errc::config_error, "cannot write " + path.string());
    out << text;
}

inline void write_csv(const std::filesystem::path &path, const CsvTable &t) { write_text(path, to_csv(t)); }

// Numeric rows of a CSV file; comment lines and a non-numeric header row are skipped.
inline std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        fail(Errc::config_error, "cannot read " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<double> values;
        std::stringstream ss(line);
        std::string field;
        bool numeric = true;
        while (std::getline(ss, field, ',')) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(field, &used));
                while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used])))
                    ++used;
                if (used != field.size())
                    numeric = false;
            } catch (const std::exception &) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (rows.empty())
                continue;  // header row
            fail(Errc::config_error, path.string() + ": non-numeric value on line " + std::to_string(line_no));
        }
        rows.push_back(std::move(values));
    }
    return rows;
}

// Spectrum file with columns omega_rad_s, I_A (J s/m^3 per unit d-bar omega).
inline SpectralDensity read_spectrum_csv(const std::filesystem::path &path)
{
    SpectralDensity s;
    for (const auto &r : read_numeric_csv(path)) {
        if (r.size() < 2)
            fail(Errc::config_error, path.string() + ": spectrum rows need omega_rad_s and I_A");
        s.samples.emplace_back(r[0], r[1]);
    }
    return s;
}

} // namespace polariton::io

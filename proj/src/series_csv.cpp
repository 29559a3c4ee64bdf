// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#include "landpatch/series_csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <system_error>

#include "landpatch/errors.hpp"

namespace landpatch {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_area(const std::string& cell, int line_no) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value) ||
        value < 0) {
        throw InvalidInputError("series CSV line " + std::to_string(line_no) +
                                ": bad area value '" + cell + "'");
    }
    return value;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    (void)ec;
    return std::string(buf, ptr);
}

std::array<ClassAreaSeries, kNumClasses> SeriesTable::to_class_series() const {
    std::array<ClassAreaSeries, kNumClasses> out;
    for (int k = 0; k < kNumClasses; ++k) {
        out[std::size_t(k)].class_index = k;
        out[std::size_t(k)].points.reserve(quarters.size());
        for (std::size_t i = 0; i < quarters.size(); ++i) {
            out[std::size_t(k)].points.push_back({quarters[i], rows[i][std::size_t(k)]});
        }
    }
    return out;
}

SeriesTable read_series_csv(std::istream& in, const Palette& palette) {
    SeriesTable table;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = strip(line);
        if (text.empty() || text[0] == '#') continue;

        std::vector<std::string> cells = split_csv_line(text);
        if (cells.size() != std::size_t(kNumClasses) + 1) {
            throw InvalidInputError("series CSV line " + std::to_string(line_no) + ": expected " +
                                    std::to_string(kNumClasses + 1) + " columns, got " +
                                    std::to_string(cells.size()));
        }
        for (std::string& cell : cells) cell = strip(cell);

        if (!header_seen) {
            if (cells[0] != "quarter") {
                throw InvalidInputError("series CSV must start with a 'quarter,...' header");
            }
            for (int k = 0; k < kNumClasses; ++k) {
                const std::string& expected = palette.class_at(k).name;
                if (cells[std::size_t(k) + 1] != expected) {
                    throw InvalidInputError("series CSV header column " + std::to_string(k + 1) +
                                            " is '" + cells[std::size_t(k) + 1] + "', expected '" +
                                            expected + "'");
                }
                table.class_names.push_back(expected);
            }
            header_seen = true;
            continue;
        }

        std::optional<Quarter> quarter = Quarter::parse(cells[0]);
        if (!quarter) {
            throw InvalidInputError("series CSV line " + std::to_string(line_no) +
                                    ": bad quarter '" + cells[0] + "'");
        }
        if (!table.quarters.empty() && quarter->index() <= table.quarters.back().index()) {
            throw InvalidInputError("series CSV line " + std::to_string(line_no) +
                                    ": quarters must be strictly increasing");
        }
        std::array<std::optional<double>, kNumClasses> row;
        for (int k = 0; k < kNumClasses; ++k) {
            const std::string& cell = cells[std::size_t(k) + 1];
            if (!cell.empty()) row[std::size_t(k)] = parse_area(cell, line_no);
        }
        table.quarters.push_back(*quarter);
        table.rows.push_back(row);
    }
    if (!header_seen) throw InvalidInputError("series CSV has no header row");
    return table;
}

SeriesTable read_series_csv(const std::string& path, const Palette& palette) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open series CSV: " + path);
    try {
        return read_series_csv(in, palette);
    } catch (const InvalidInputError& e) {
        throw InvalidInputError(std::string(e.what()) + " (" + path + ")");
    }
}

void write_series_csv(const SeriesTable& table, std::ostream& out) {
    if (table.class_names.size() != std::size_t(kNumClasses) ||
        table.rows.size() != table.quarters.size()) {
        throw InvalidInputError("series table is malformed");
    }
    out << "quarter";
    for (const std::string& name : table.class_names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < table.quarters.size(); ++i) {
        out << table.quarters[i].to_string();
        for (int k = 0; k < kNumClasses; ++k) {
            out << ',';
            if (table.rows[i][std::size_t(k)]) out << format_double(*table.rows[i][std::size_t(k)]);
        }
        out << '\n';
    }
}

void write_series_csv(const SeriesTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_series_csv(table, out);
    out.flush();
    if (!out) throw IoError("failed to write series CSV: " + path);
}

}  // namespace landpatch

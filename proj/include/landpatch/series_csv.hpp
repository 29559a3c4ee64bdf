// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "landpatch/forecast.hpp"
#include "landpatch/palette.hpp"

namespace landpatch {

/// In-memory form of the per-class area CSV. Header row is
/// "quarter,<name0>,...,<name9>" in palette order; one row per quarter,
/// strictly increasing; an empty cell is a missing observation.
struct SeriesTable {
    std::vector<std::string> class_names;
    std::vector<Quarter> quarters;
    std::vector<std::array<std::optional<double>, kNumClasses>> rows;

    std::array<ClassAreaSeries, kNumClasses> to_class_series() const;
};

/// Parses a series CSV. Lines whose first non-space character is '#' are
/// skipped. The header must name all 10 classes of `palette` in order.
/// Throws InvalidInputError on malformed content, IoError on read failure.
SeriesTable read_series_csv(const std::string& path, const Palette& palette);
SeriesTable read_series_csv(std::istream& in, const Palette& palette);

/// Writes the table back out. Values use shortest round-trip formatting.
void write_series_csv(const SeriesTable& table, std::ostream& out);
void write_series_csv(const SeriesTable& table, const std::string& path);

/// Shortest decimal form that parses back to exactly the same double; the
/// number format used in series and forecast CSV cells.
std::string format_double(double value);

}  // namespace landpatch

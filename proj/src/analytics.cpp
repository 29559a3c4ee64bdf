// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#include "landpatch/analytics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "landpatch/errors.hpp"

namespace landpatch {

namespace {

// Tables print three decimals; infinities become the literal "inf".
std::string fixed3(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", value);
    return buf;
}

void check_area(double value, const char* what) {
    if (!(value >= 0) || !std::isfinite(value)) {
        throw InvalidInputError(std::string(what) + " must be a non-negative finite area");
    }
}

}  // namespace

AreaReport AreaReport::from_counts(const std::array<std::uint64_t, kNumClasses>& counts,
                                   double resolution_m) {
    if (!(resolution_m > 0) || !std::isfinite(resolution_m)) {
        throw InvalidInputError("resolution must be positive");
    }
    AreaReport report;
    report.pixel_counts = counts;
    report.resolution_m = resolution_m;
    for (int k = 0; k < kNumClasses; ++k) {
        report.area_km2[std::size_t(k)] = pixels_to_area_km2(counts[std::size_t(k)], resolution_m);
    }
    return report;
}

double pixels_to_area_km2(std::uint64_t count, double resolution_m) {
    if (!(resolution_m > 0) || !std::isfinite(resolution_m)) {
        throw InvalidInputError("resolution must be positive");
    }
    return double(count) * (resolution_m * resolution_m) / 1e6;
}

double percent_change(double before_km2, double after_km2) {
    check_area(before_km2, "area before");
    check_area(after_km2, "area after");
    if (before_km2 == 0) {
        return after_km2 > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return (after_km2 - before_km2) / before_km2 * 100.0;
}

double built_up_index(const std::array<double, kNumClasses>& areas_km2, const Palette& palette) {
    double built = 0;
    double total = 0;
    for (int k = 0; k < kNumClasses; ++k) {
        double area = areas_km2[std::size_t(k)];
        check_area(area, "class area");
        total += area;
        if (palette.class_at(k).built_up) built += area;
    }
    if (total == 0) {
        throw NumericError("built-up index is undefined when every class area is zero");
    }
    return built / total;
}

std::vector<ChangeRow> change_table(const std::array<double, kNumClasses>& before_km2,
                                    const std::array<double, kNumClasses>& after_km2,
                                    const Palette& palette) {
    std::vector<ChangeRow> rows;
    rows.reserve(kNumClasses);
    for (int k = 0; k < kNumClasses; ++k) {
        ChangeRow row;
        row.class_name = palette.class_at(k).name;
        row.area_before_km2 = before_km2[std::size_t(k)];
        row.area_after_km2 = after_km2[std::size_t(k)];
        row.delta_km2 = row.area_after_km2 - row.area_before_km2;
        row.percent = percent_change(row.area_before_km2, row.area_after_km2);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ChangeRow> change_table(const AreaReport& before, const AreaReport& after,
                                    const Palette& palette) {
    if (before.resolution_m != after.resolution_m) {
        throw InvalidInputError("change table requires matching resolutions");
    }
    return change_table(before.area_km2, after.area_km2, palette);
}

Raster difference_map(const SegmentationMap& a, const SegmentationMap& b, const Palette& palette) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw InvalidInputError("difference map requires equal dimensions, got " +
                                std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                " vs " + std::to_string(b.width()) + "x" +
                                std::to_string(b.height()));
    }
    std::array<Rgb, kNumClasses> colors;
    for (int k = 0; k < kNumClasses; ++k) colors[std::size_t(k)] = palette.class_at(k).color;

    Raster out(a.width(), a.height());
    for (int y = 0; y < a.height(); ++y) {
        const std::uint8_t* la = a.row(y);
        const std::uint8_t* lb = b.row(y);
        std::uint8_t* pixels = out.row(y);
        for (int x = 0; x < a.width(); ++x) {
            Rgb c{0, 0, 0};
            if (la[x] == SegmentationMap::kUnclassified || lb[x] == SegmentationMap::kUnclassified) {
                c = kDiffSentinel;
            } else if (la[x] != lb[x]) {
                c = colors[lb[x]];
            }
            pixels[3 * x] = c.r;
            pixels[3 * x + 1] = c.g;
            pixels[3 * x + 2] = c.b;
        }
    }
    return out;
}

void write_change_table_csv(const std::vector<ChangeRow>& rows, std::ostream& out) {
    out << "class,area_before_km2,area_after_km2,delta_km2,percent_change\n";
    for (const ChangeRow& row : rows) {
        out << row.class_name << ',' << fixed3(row.area_before_km2) << ','
            << fixed3(row.area_after_km2) << ',' << fixed3(row.delta_km2) << ','
            << fixed3(row.percent) << '\n';
    }
}

}  // namespace landpatch

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "landpatch/palette.hpp"
#include "landpatch/raster.hpp"
#include "landpatch/segmenter.hpp"

namespace landpatch {

/// Color marking pixels that cannot be compared in a difference map
/// (unclassified in either input).
inline constexpr Rgb kDiffSentinel{255, 0, 255};

/// Per-class ground areas derived from pixel counts at a fixed ground
/// resolution (meters per pixel).
struct AreaReport {
    std::array<std::uint64_t, kNumClasses> pixel_counts{};
    double resolution_m = 0.65;
    std::array<double, kNumClasses> area_km2{};

    static AreaReport from_counts(const std::array<std::uint64_t, kNumClasses>& counts,
                                  double resolution_m);
};

/// One row of a change table. `percent` may be +infinity when the class
/// appeared from a zero base.
struct ChangeRow {
    std::string class_name;
    double area_before_km2 = 0;
    double area_after_km2 = 0;
    double delta_km2 = 0;
    double percent = 0;
};

/// Ground area of `count` pixels: count * resolution^2 / 1e6, in km².
double pixels_to_area_km2(std::uint64_t count, double resolution_m);

/// (after - before) / before * 100. A class appearing from zero yields
/// +infinity; zero before and after yields 0. Negative areas are rejected.
double percent_change(double before_km2, double after_km2);

/// Ratio of built-up class area to total classified area, in [0, 1].
/// Throws NumericError when every area is zero.
double built_up_index(const std::array<double, kNumClasses>& areas_km2, const Palette& palette);

/// One ChangeRow per class in palette order.
std::vector<ChangeRow> change_table(const std::array<double, kNumClasses>& before_km2,
                                    const std::array<double, kNumClasses>& after_km2,
                                    const Palette& palette);

/// Same, from full reports; the reports must share a resolution.
std::vector<ChangeRow> change_table(const AreaReport& before, const AreaReport& after,
                                    const Palette& palette);

/// Pixel-wise comparison of two segmentation maps: agreeing pixels render
/// black, differing pixels take the later map's class color, and pixels
/// unclassified in either map take the sentinel color.
Raster difference_map(const SegmentationMap& a, const SegmentationMap& b, const Palette& palette);

/// Writes the change-table CSV: header
/// `class,area_before_km2,area_after_km2,delta_km2,percent_change`, one row
/// per class, areas and percents with 3 decimals, infinities as `inf`.
void write_change_table_csv(const std::vector<ChangeRow>& rows, std::ostream& out);

}  // namespace landpatch

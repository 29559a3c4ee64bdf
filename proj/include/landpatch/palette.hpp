// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "landpatch/raster.hpp"

namespace landpatch {

/// Number of land-use classes. Fixed; every palette, distribution, and
/// report is indexed 0..9.
inline constexpr int kNumClasses = 10;

/// One land-use class: a stable index, an identifier name, a display color,
/// and whether the class counts as built-up (buildings or roads) for the
/// built-up index.
struct LandUseClass {
    int index = 0;
    std::string name;
    Rgb color;
    bool built_up = false;
};

/// The ordered 10-class palette. Lookups by index, name, and color are all
/// bijective; the unclassified color is distinct from every class color.
/// Immutable after construction and safe to share across threads.
class Palette {
public:
    /// Validates all palette invariants; throws InvalidInputError on
    /// duplicate indices/names/colors or an unclassified-color collision.
    explicit Palette(std::vector<LandUseClass> classes, Rgb unclassified_color = Rgb{0, 0, 0});

    const std::vector<LandUseClass>& classes() const noexcept { return classes_; }
    const LandUseClass& class_at(int index) const;

    std::optional<int> index_of_name(std::string_view name) const;
    std::optional<int> index_of_color(Rgb color) const;

    Rgb unclassified_color() const noexcept { return unclassified_color_; }

private:
    std::vector<LandUseClass> classes_;
    Rgb unclassified_color_;
    std::unordered_map<std::string, int> by_name_;
    std::unordered_map<std::uint32_t, int> by_color_;
};

/// The canonical palette, classes in fixed order:
///   0 commercial_area, 1 dense_residential, 2 medium_residential,
///   3 sparse_residential, 4 parking_lot, 5 freeway, 6 road_junction,
///   7 meadow, 8 chaparral, 9 open_space.
/// The first seven are built-up; meadow, chaparral, and open_space are not.
const Palette& default_palette();

/// Loads a palette config file: one `<index>,<name>,<r>,<g>,<b>,<built_up>`
/// line per class, exactly 10 classes, '#' comment lines permitted.
Palette load_palette(const std::filesystem::path& path);

}  // namespace landpatch

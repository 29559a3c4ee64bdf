// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#include "landpatch/palette.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "landpatch/errors.hpp"

namespace landpatch {

namespace {

std::uint32_t color_key(Rgb c) {
    return (std::uint32_t(c.r) << 16) | (std::uint32_t(c.g) << 8) | std::uint32_t(c.b);
}

bool valid_class_name(std::string_view name) {
    if (name.empty()) return false;
    for (char c : name) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '_';
        if (!ok) return false;
    }
    return true;
}

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

int parse_int(const std::string& field, int lo, int hi, const std::string& what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || value < lo || value > hi) {
        throw InvalidInputError("palette config: bad " + what + " '" + field + "'");
    }
    return value;
}

}  // namespace

Palette::Palette(std::vector<LandUseClass> classes, Rgb unclassified_color)
    : classes_(std::move(classes)), unclassified_color_(unclassified_color) {
    if (classes_.size() != std::size_t(kNumClasses)) {
        throw InvalidInputError("palette must have exactly " + std::to_string(kNumClasses) +
                                " classes, got " + std::to_string(classes_.size()));
    }
    std::sort(classes_.begin(), classes_.end(),
              [](const LandUseClass& a, const LandUseClass& b) { return a.index < b.index; });
    for (int i = 0; i < kNumClasses; ++i) {
        const LandUseClass& c = classes_[std::size_t(i)];
        if (c.index != i) {
            throw InvalidInputError("palette class indices must cover 0.." +
                                    std::to_string(kNumClasses - 1) + " exactly once");
        }
        if (!valid_class_name(c.name)) {
            throw InvalidInputError("palette class name must be a [A-Za-z0-9_]+ identifier: '" +
                                    c.name + "'");
        }
        if (!by_name_.emplace(c.name, i).second) {
            throw InvalidInputError("duplicate palette class name: " + c.name);
        }
        if (!by_color_.emplace(color_key(c.color), i).second) {
            throw InvalidInputError("duplicate palette class color for class: " + c.name);
        }
        if (c.color == unclassified_color_) {
            throw InvalidInputError("class color collides with the unclassified color: " + c.name);
        }
    }
}

const LandUseClass& Palette::class_at(int index) const {
    if (index < 0 || index >= kNumClasses) {
        throw InvalidInputError("class index out of range: " + std::to_string(index));
    }
    return classes_[std::size_t(index)];
}

std::optional<int> Palette::index_of_name(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> Palette::index_of_color(Rgb color) const {
    auto it = by_color_.find(color_key(color));
    if (it == by_color_.end()) return std::nullopt;
    return it->second;
}

const Palette& default_palette() {
    static const Palette palette([] {
        std::vector<LandUseClass> classes = {
            {0, "commercial_area", {230, 25, 75}, true},
            {1, "dense_residential", {245, 130, 48}, true},
            {2, "medium_residential", {255, 225, 25}, true},
            {3, "sparse_residential", {210, 245, 60}, true},
            {4, "parking_lot", {128, 128, 128}, true},
            {5, "freeway", {0, 0, 128}, true},
            {6, "road_junction", {70, 240, 240}, true},
            {7, "meadow", {60, 180, 75}, false},
            {8, "chaparral", {170, 110, 40}, false},
            {9, "open_space", {255, 250, 200}, false},
        };
        return classes;
    }());
    return palette;
}

Palette load_palette(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open palette config: " + path.string());

    std::vector<LandUseClass> classes;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;

        std::vector<std::string> fields;
        std::stringstream ss(text);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(trim(field));
        if (fields.size() != 6) {
            throw InvalidInputError("palette config line " + std::to_string(line_no) +
                                    ": expected 6 comma-separated fields");
        }

        LandUseClass c;
        c.index = parse_int(fields[0], 0, kNumClasses - 1, "class index");
        c.name = fields[1];
        c.color = Rgb{std::uint8_t(parse_int(fields[2], 0, 255, "red value")),
                      std::uint8_t(parse_int(fields[3], 0, 255, "green value")),
                      std::uint8_t(parse_int(fields[4], 0, 255, "blue value"))};
        c.built_up = parse_int(fields[5], 0, 1, "built_up flag") == 1;
        classes.push_back(std::move(c));
    }
    if (classes.size() != std::size_t(kNumClasses)) {
        throw InvalidInputError("palette config must define exactly " +
                                std::to_string(kNumClasses) + " classes: " + path.string());
    }
    return Palette(std::move(classes));
}

}  // namespace landpatch

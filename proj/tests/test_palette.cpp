// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#include <doctest.h>

#include <array>
#include <string>
#include <vector>

#include "landpatch/errors.hpp"
#include "landpatch/palette.hpp"
#include "test_support.hpp"

using namespace landpatch;
using testutil::TempDir;

namespace {

const std::array<const char*, 10> kExpectedOrder = {
    "commercial_area",  "dense_residential", "medium_residential", "sparse_residential",
    "parking_lot",      "freeway",           "road_junction",      "meadow",
    "chaparral",        "open_space",
};

std::vector<LandUseClass> default_classes_copy() {
    return default_palette().classes();
}

}  // namespace

TEST_CASE("default palette lists the ten classes in canonical order") {
    const Palette& palette = default_palette();
    REQUIRE(int(palette.classes().size()) == kNumClasses);
    for (int k = 0; k < kNumClasses; ++k) {
        CHECK(palette.class_at(k).index == k);
        CHECK(palette.class_at(k).name == kExpectedOrder[std::size_t(k)]);
    }
}

TEST_CASE("default palette marks exactly the seven built-up classes") {
    const Palette& palette = default_palette();
    int built = 0;
    for (const auto& c : palette.classes()) built += c.built_up ? 1 : 0;
    CHECK(built == 7);
    // Buildings, residential tiers, parking, and roads count as built-up;
    // vegetation and bare land do not.
    for (int k = 0; k <= 6; ++k) CHECK(palette.class_at(k).built_up);
    for (int k = 7; k <= 9; ++k) CHECK_FALSE(palette.class_at(k).built_up);
}

TEST_CASE("default palette colors are distinct and none collide with unclassified") {
    const Palette& palette = default_palette();
    CHECK(palette.unclassified_color() == Rgb{0, 0, 0});
    for (int a = 0; a < kNumClasses; ++a) {
        CHECK_FALSE(palette.class_at(a).color == palette.unclassified_color());
        for (int b = a + 1; b < kNumClasses; ++b)
            CHECK_FALSE(palette.class_at(a).color == palette.class_at(b).color);
    }
    CHECK(palette.class_at(0).color == Rgb{230, 25, 75});
    CHECK(palette.class_at(5).color == Rgb{0, 0, 128});
    CHECK(palette.class_at(9).color == Rgb{255, 250, 200});
}

TEST_CASE("palette lookups are bijective") {
    const Palette& palette = default_palette();
    for (int k = 0; k < kNumClasses; ++k) {
        CHECK(palette.index_of_name(palette.class_at(k).name) == k);
        CHECK(palette.index_of_color(palette.class_at(k).color) == k);
    }
    CHECK_FALSE(palette.index_of_name("swimming_pool").has_value());
    CHECK_FALSE(palette.index_of_color(Rgb{1, 2, 3}).has_value());
}

TEST_CASE("class_at rejects out-of-range indices") {
    CHECK_THROWS_AS(default_palette().class_at(-1), InvalidInputError);
    CHECK_THROWS_AS(default_palette().class_at(10), InvalidInputError);
}

TEST_CASE("palette constructor validates the class list") {
    auto classes = default_classes_copy();

    SUBCASE("wrong count") {
        classes.pop_back();
        CHECK_THROWS_AS(Palette{classes}, InvalidInputError);
    }
    SUBCASE("duplicate index") {
        classes[3].index = 2;
        CHECK_THROWS_AS(Palette{classes}, InvalidInputError);
    }
    SUBCASE("duplicate name") {
        classes[3].name = classes[2].name;
        CHECK_THROWS_AS(Palette{classes}, InvalidInputError);
    }
    SUBCASE("duplicate color") {
        classes[3].color = classes[2].color;
        CHECK_THROWS_AS(Palette{classes}, InvalidInputError);
    }
    SUBCASE("class color equal to unclassified color") {
        classes[3].color = Rgb{0, 0, 0};
        CHECK_THROWS_AS(Palette{classes}, InvalidInputError);
    }
    SUBCASE("invalid name characters") {
        classes[3].name = "sparse residential";
        CHECK_THROWS_AS(Palette{classes}, InvalidInputError);
    }
    SUBCASE("order independence: shuffled input sorts by index") {
        std::swap(classes[0], classes[9]);
        Palette palette(classes);
        CHECK(palette.class_at(0).name == "commercial_area");
        CHECK(palette.class_at(9).name == "open_space");
    }
}

TEST_CASE("palette config files round trip") {
    TempDir dir;
    const auto path = dir.file("palette.cfg");
    std::string text = "# custom palette\n";
    for (int k = 0; k < kNumClasses; ++k) {
        const LandUseClass& c = default_palette().class_at(k);
        text += std::to_string(k) + "," + c.name + "," + std::to_string(int(c.color.r)) + "," +
                std::to_string(int(c.color.g)) + "," + std::to_string(int(c.color.b)) + "," +
                (c.built_up ? "1" : "0") + "\n";
    }
    testutil::write_file(path, text);

    const Palette loaded = load_palette(path);
    for (int k = 0; k < kNumClasses; ++k) {
        CHECK(loaded.class_at(k).name == default_palette().class_at(k).name);
        CHECK(loaded.class_at(k).color == default_palette().class_at(k).color);
        CHECK(loaded.class_at(k).built_up == default_palette().class_at(k).built_up);
    }
}

TEST_CASE("palette config accepts renamed classes and padded fields") {
    TempDir dir;
    const auto path = dir.file("renamed.cfg");
    std::string text;
    for (int k = 0; k < kNumClasses; ++k) {
        const LandUseClass& c = default_palette().class_at(k);
        text += " " + std::to_string(k) + " , class_" + std::to_string(k) + " , " +
                std::to_string(int(c.color.r)) + " ," + std::to_string(int(c.color.g)) + "," +
                std::to_string(int(c.color.b)) + " , " + (c.built_up ? "1" : "0") + " \n";
    }
    testutil::write_file(path, text);
    const Palette loaded = load_palette(path);
    CHECK(loaded.class_at(4).name == "class_4");
    CHECK(loaded.index_of_name("class_7") == 7);
}

TEST_CASE("palette config errors are rejected") {
    TempDir dir;

    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_palette(dir.file("absent.cfg")), IoError);
    }
    SUBCASE("too few classes") {
        testutil::write_file(dir.file("nine.cfg"),
                             "0,a,1,0,0,1\n1,b,2,0,0,1\n2,c,3,0,0,1\n3,d,4,0,0,1\n"
                             "4,e,5,0,0,1\n5,f,6,0,0,1\n6,g,7,0,0,1\n7,h,8,0,0,0\n"
                             "8,i,9,0,0,0\n");
        CHECK_THROWS_AS(load_palette(dir.file("nine.cfg")), InvalidInputError);
    }
    SUBCASE("wrong field count") {
        std::string text;
        for (int k = 0; k < 10; ++k)
            text += std::to_string(k) + ",name" + std::to_string(k) + ",1,2\n";
        testutil::write_file(dir.file("fields.cfg"), text);
        CHECK_THROWS_AS(load_palette(dir.file("fields.cfg")), InvalidInputError);
    }
    SUBCASE("sample out of range") {
        std::string text = "0,a,300,0,0,1\n";
        for (int k = 1; k < 10; ++k)
            text += std::to_string(k) + ",n" + std::to_string(k) + "," + std::to_string(k) +
                    ",0,0,0\n";
        testutil::write_file(dir.file("range.cfg"), text);
        CHECK_THROWS_AS(load_palette(dir.file("range.cfg")), InvalidInputError);
    }
    SUBCASE("built_up flag outside 0/1") {
        std::string text;
        for (int k = 0; k < 10; ++k)
            text += std::to_string(k) + ",n" + std::to_string(k) + "," + std::to_string(k + 1) +
                    ",0,0," + (k == 5 ? "2" : "1") + "\n";
        testutil::write_file(dir.file("flag.cfg"), text);
        CHECK_THROWS_AS(load_palette(dir.file("flag.cfg")), InvalidInputError);
    }
}

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "landpatch/classifier.hpp"
#include "landpatch/palette.hpp"
#include "landpatch/raster.hpp"

namespace landpatch {

/// How overlapping patch footprints are resolved.
///   overwrite: the last patch in loop order wins (sequential semantics of
///              sliding-window recoloring).
///   vote:      every patch adds its full class distribution; the per-pixel
///              argmax of the accumulated votes wins. Order-independent.
enum class OverlapMode { overwrite, vote };

struct SegmenterConfig {
    int patch_size = 256;
    int stride = 32;
    OverlapMode mode = OverlapMode::overwrite;
    /// Append flush patches along the right/bottom edges so every pixel is
    /// covered. Off by default: the margin stays unclassified.
    bool cover_edges = false;
    /// Worker threads for patch classification and vote accumulation.
    /// 0 = hardware concurrency. Output is byte-identical for any count.
    int workers = 0;
};

struct PatchOrigin {
    int x = 0;
    int y = 0;

    friend bool operator==(const PatchOrigin&, const PatchOrigin&) = default;
};

/// All patch origins for a width x height image under the given config, in
/// loop order: x advances in the outer loop, y in the inner loop, both by
/// config.stride, up to (inclusive) width - patch_size and
/// height - patch_size. With cover_edges, flush right/bottom/corner origins
/// not already on the grid are appended after the main grid, in the same
/// x-major order.
std::vector<PatchOrigin> enumerate_patches(int width, int height, const SegmenterConfig& config);

/// Per-pixel class assignment aligned to a source raster. Labels are 0..9;
/// kUnclassified marks pixels outside every patch footprint.
class SegmentationMap {
public:
    static constexpr std::uint8_t kUnclassified = 255;

    SegmentationMap() = default;
    SegmentationMap(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    std::uint8_t label(int x, int y) const { return labels_[std::size_t(y) * width_ + x]; }
    void set_label(int x, int y, std::uint8_t label) { labels_[std::size_t(y) * width_ + x] = label; }

    std::uint8_t* row(int y) { return labels_.data() + std::size_t(y) * width_; }
    const std::uint8_t* row(int y) const { return labels_.data() + std::size_t(y) * width_; }

    std::vector<std::uint8_t>& labels() noexcept { return labels_; }
    const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }

    friend bool operator==(const SegmentationMap&, const SegmentationMap&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> labels_;
};

/// Per-pixel 10-lane accumulator of class probabilities over a horizontal
/// band of rows [y_offset, y_offset + rows). A pixel covered by n patches
/// accumulates a lane sum of n, since each patch contributes one normalized
/// distribution. Accumulation in a fixed patch order makes the resolved
/// labels independent of how bands are assigned to threads.
class VoteGrid {
public:
    VoteGrid(int width, int rows, int y_offset = 0);

    int width() const noexcept { return width_; }
    int rows() const noexcept { return rows_; }
    int y_offset() const noexcept { return y_offset_; }

    /// Adds the distribution over the intersection of the patch footprint
    /// with this band. Footprints outside the band are ignored.
    void accumulate(PatchOrigin origin, int patch_size, const ClassDistribution& dist);

    /// Lane values for pixel (x, y) in image coordinates.
    const double* lanes(int x, int y) const;
    double lane_sum(int x, int y) const;

    /// Writes per-pixel argmax labels (ties to the lowest class index) into
    /// the band's rows of `out`; pixels with no votes become unclassified.
    void resolve(SegmentationMap& out) const;

private:
    int width_ = 0;
    int rows_ = 0;
    int y_offset_ = 0;
    std::vector<double> lanes_;
};

/// Slides a patch_size window over the image at the configured stride,
/// classifies every patch, and assembles the per-pixel label map. Patch
/// classification runs on config.workers threads; the result is
/// bit-identical for any worker count in both overlap modes.
SegmentationMap segment(const Raster& image, const Classifier& classifier,
                        const SegmenterConfig& config);

/// Colors a label map through the palette; unclassified pixels take the
/// palette's unclassified color.
Raster render(const SegmentationMap& map, const Palette& palette);

/// Inverts a rendered map back to labels by palette color lookup. The
/// unclassified color and the difference-map sentinel (255,0,255) invert to
/// unclassified; any other non-palette color raises InvalidInputError
/// naming the pixel coordinates.
SegmentationMap labels_from_render(const Raster& rendered, const Palette& palette);

struct ClassPixelCounts {
    std::array<std::uint64_t, kNumClasses> classified{};
    std::uint64_t unclassified = 0;

    std::uint64_t total() const noexcept {
        std::uint64_t t = unclassified;
        for (auto c : classified) t += c;
        return t;
    }
};

/// Exact label histogram; counts sum to width x height.
ClassPixelCounts class_pixel_counts(const SegmentationMap& map);

}  // namespace landpatch

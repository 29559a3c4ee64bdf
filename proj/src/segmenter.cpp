// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#include "landpatch/segmenter.hpp"

#include <algorithm>
#include <cstring>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "landpatch/analytics.hpp"
#include "landpatch/errors.hpp"
#include "parallel.hpp"

namespace landpatch {

namespace {

// Height of the horizontal bands vote mode is accumulated in. Fixed (never
// derived from the worker count) so that per-pixel addition order, and with
// it the resolved map, is identical for any parallelism level.
constexpr int kVoteBandRows = 64;

void check_config(int width, int height, const SegmenterConfig& config) {
    if (config.patch_size < 1) {
        throw InvalidInputError("patch size must be positive: " +
                                std::to_string(config.patch_size));
    }
    if (config.stride < 1 || config.stride > config.patch_size) {
        throw InvalidInputError("stride must satisfy 1 <= stride <= patch_size, got stride " +
                                std::to_string(config.stride) + " with patch size " +
                                std::to_string(config.patch_size));
    }
    if (config.patch_size > width || config.patch_size > height) {
        throw InvalidInputError("patch size " + std::to_string(config.patch_size) +
                                " exceeds image dimensions " + std::to_string(width) + "x" +
                                std::to_string(height));
    }
}

}  // namespace

std::vector<PatchOrigin> enumerate_patches(int width, int height, const SegmenterConfig& config) {
    check_config(width, height, config);
    const int size = config.patch_size;
    const int stride = config.stride;

    std::vector<PatchOrigin> origins;
    for (int x = 0; x + size <= width; x += stride) {
        for (int y = 0; y + size <= height; y += stride) {
            origins.push_back({x, y});
        }
    }

    if (config.cover_edges) {
        const int flush_x = width - size;
        const int flush_y = height - size;
        auto on_grid = [stride](int v) { return v % stride == 0; };

        // Collect flush candidates, drop the ones already on the stride
        // grid, and append the rest after the main grid in x-major order.
        std::set<std::pair<int, int>> flush;
        for (int y = 0; y + size <= height; y += stride) {
            if (!on_grid(flush_x)) flush.insert({flush_x, y});
        }
        for (int x = 0; x + size <= width; x += stride) {
            if (!on_grid(flush_y)) flush.insert({x, flush_y});
        }
        if (!on_grid(flush_x) || !on_grid(flush_y)) flush.insert({flush_x, flush_y});
        for (const auto& [x, y] : flush) origins.push_back({x, y});
    }
    return origins;
}

SegmentationMap::SegmentationMap(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw InvalidInputError("segmentation map dimensions must be positive");
    }
    labels_.assign(std::size_t(width) * height, kUnclassified);
}

VoteGrid::VoteGrid(int width, int rows, int y_offset)
    : width_(width), rows_(rows), y_offset_(y_offset) {
    if (width < 1 || rows < 1 || y_offset < 0) {
        throw InvalidInputError("vote grid dimensions must be positive");
    }
    lanes_.assign(std::size_t(width) * rows * kNumClasses, 0.0);
}

void VoteGrid::accumulate(PatchOrigin origin, int patch_size, const ClassDistribution& dist) {
    int y_begin = std::max(origin.y, y_offset_);
    int y_end = std::min(origin.y + patch_size, y_offset_ + rows_);
    int x_begin = std::max(origin.x, 0);
    int x_end = std::min(origin.x + patch_size, width_);
    for (int y = y_begin; y < y_end; ++y) {
        double* row = lanes_.data() +
                      (std::size_t(y - y_offset_) * width_ + std::size_t(x_begin)) * kNumClasses;
        for (int x = x_begin; x < x_end; ++x, row += kNumClasses) {
            for (int k = 0; k < kNumClasses; ++k) row[k] += dist.p[std::size_t(k)];
        }
    }
}

const double* VoteGrid::lanes(int x, int y) const {
    return lanes_.data() + (std::size_t(y - y_offset_) * width_ + std::size_t(x)) * kNumClasses;
}

double VoteGrid::lane_sum(int x, int y) const {
    const double* row = lanes(x, y);
    double total = 0;
    for (int k = 0; k < kNumClasses; ++k) total += row[k];
    return total;
}

void VoteGrid::resolve(SegmentationMap& out) const {
    for (int y = y_offset_; y < y_offset_ + rows_; ++y) {
        std::uint8_t* labels = out.row(y);
        for (int x = 0; x < width_; ++x) {
            const double* row = lanes(x, y);
            int best = -1;
            double best_votes = 0;
            for (int k = 0; k < kNumClasses; ++k) {
                if (row[k] > best_votes) {
                    best = k;
                    best_votes = row[k];
                }
            }
            labels[x] = best < 0 ? SegmentationMap::kUnclassified : std::uint8_t(best);
        }
    }
}

SegmentationMap segment(const Raster& image, const Classifier& classifier,
                        const SegmenterConfig& config) {
    if (classifier.patch_size() != config.patch_size) {
        throw InvalidInputError("classifier patch size " + std::to_string(classifier.patch_size()) +
                                " does not match configured patch size " +
                                std::to_string(config.patch_size));
    }
    const int width = image.width();
    const int height = image.height();
    const std::vector<PatchOrigin> origins = enumerate_patches(width, height, config);
    const int size = config.patch_size;
    const RasterView full = image.view();

    // Phase 1: classify every patch into an index-addressed slot. Thread
    // assignment cannot influence the result.
    std::vector<ClassDistribution> dists(origins.size());
    detail::parallel_for(origins.size(), config.workers, 8, [&](std::size_t i) {
        dists[i] = classifier.classify(full.sub(origins[i].x, origins[i].y, size, size));
    });

    SegmentationMap map(width, height);

    if (config.mode == OverlapMode::overwrite) {
        // Phase 2: sequential paint in enumeration order, so on overlap the
        // last patch of the loop wins exactly as in the sequential algorithm.
        for (std::size_t i = 0; i < origins.size(); ++i) {
            std::uint8_t label = std::uint8_t(dists[i].argmax());
            for (int y = origins[i].y; y < origins[i].y + size; ++y) {
                std::memset(map.row(y) + origins[i].x, label, std::size_t(size));
            }
        }
        return map;
    }

    // Vote mode. Each fixed-height band accumulates, in global patch order,
    // every patch that intersects it, then resolves its own rows of the
    // map. Bands are independent, so they parallelize freely while keeping
    // per-pixel addition order fixed.
    const int bands = (height + kVoteBandRows - 1) / kVoteBandRows;
    std::vector<std::vector<std::uint32_t>> band_patches;
    band_patches.resize(std::size_t(bands));
    for (std::size_t i = 0; i < origins.size(); ++i) {
        int first = origins[i].y / kVoteBandRows;
        int last = (origins[i].y + size - 1) / kVoteBandRows;
        for (int b = first; b <= last; ++b) {
            band_patches[std::size_t(b)].push_back(std::uint32_t(i));
        }
    }

    detail::parallel_for(std::size_t(bands), config.workers, 1, [&](std::size_t b) {
        int y0 = int(b) * kVoteBandRows;
        int rows = std::min(kVoteBandRows, height - y0);
        VoteGrid grid(width, rows, y0);
        for (std::uint32_t i : band_patches[b]) {
            grid.accumulate(origins[i], size, dists[i]);
        }
        grid.resolve(map);
    });
    return map;
}

Raster render(const SegmentationMap& map, const Palette& palette) {
    std::array<Rgb, kNumClasses> colors;
    for (int k = 0; k < kNumClasses; ++k) colors[std::size_t(k)] = palette.class_at(k).color;
    const Rgb unclassified = palette.unclassified_color();

    Raster out(map.width(), map.height());
    for (int y = 0; y < map.height(); ++y) {
        const std::uint8_t* labels = map.row(y);
        std::uint8_t* pixels = out.row(y);
        for (int x = 0; x < map.width(); ++x) {
            Rgb c = labels[x] == SegmentationMap::kUnclassified ? unclassified
                                                                : colors[labels[x]];
            pixels[3 * x] = c.r;
            pixels[3 * x + 1] = c.g;
            pixels[3 * x + 2] = c.b;
        }
    }
    return out;
}

SegmentationMap labels_from_render(const Raster& rendered, const Palette& palette) {
    SegmentationMap map(rendered.width(), rendered.height());
    for (int y = 0; y < rendered.height(); ++y) {
        const std::uint8_t* pixels = rendered.row(y);
        std::uint8_t* labels = map.row(y);
        for (int x = 0; x < rendered.width(); ++x) {
            Rgb c{pixels[3 * x], pixels[3 * x + 1], pixels[3 * x + 2]};
            if (c == palette.unclassified_color() || c == kDiffSentinel) {
                labels[x] = SegmentationMap::kUnclassified;
                continue;
            }
            std::optional<int> index = palette.index_of_color(c);
            if (!index) {
                throw InvalidInputError("pixel (" + std::to_string(x) + ", " + std::to_string(y) +
                                        ") has color (" + std::to_string(c.r) + ", " +
                                        std::to_string(c.g) + ", " + std::to_string(c.b) +
                                        ") which is not in the palette");
            }
            labels[x] = std::uint8_t(*index);
        }
    }
    return map;
}

ClassPixelCounts class_pixel_counts(const SegmentationMap& map) {
    ClassPixelCounts counts;
    for (int y = 0; y < map.height(); ++y) {
        const std::uint8_t* labels = map.row(y);
        for (int x = 0; x < map.width(); ++x) {
            if (labels[x] == SegmentationMap::kUnclassified) {
                ++counts.unclassified;
            } else {
                ++counts.classified[labels[x]];
            }
        }
    }
    return counts;
}

}  // namespace landpatch

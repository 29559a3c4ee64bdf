// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "landpatch/errors.hpp"

namespace landpatch {

/// 8-bit RGB color triple.
struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

class RasterView;

/// An owned width x height RGB image. Samples are 8-bit, stored row-major,
/// three samples per pixel (R, G, B). Immutable rasters are safe to share
/// across threads.
class Raster {
public:
    static constexpr int kChannels = 3;

    Raster() = default;
    Raster(int width, int height, Rgb fill = Rgb{});

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return data_.empty(); }

    Rgb pixel(int x, int y) const;
    void set_pixel(int x, int y, Rgb color);

    /// Pointer to the first sample of row y.
    std::uint8_t* row(int y);
    const std::uint8_t* row(int y) const;

    std::vector<std::uint8_t>& data() noexcept { return data_; }
    const std::vector<std::uint8_t>& data() const noexcept { return data_; }

    /// View covering the whole image.
    RasterView view() const noexcept;

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Non-owning rectangular window into RGB pixel data. Rows may be strided
/// when the view is a sub-rectangle of a larger image.
class RasterView {
public:
    RasterView() = default;
    RasterView(const std::uint8_t* data, int width, int height, std::ptrdiff_t row_stride)
        : data_(data), width_(width), height_(height), row_stride_(row_stride) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    const std::uint8_t* row(int y) const noexcept { return data_ + y * row_stride_; }
    Rgb pixel(int x, int y) const noexcept {
        const std::uint8_t* p = row(y) + std::ptrdiff_t{3} * x;
        return Rgb{p[0], p[1], p[2]};
    }

    /// Bounds-checked sub-window.
    RasterView sub(int x, int y, int width, int height) const;

private:
    const std::uint8_t* data_ = nullptr;
    int width_ = 0;
    int height_ = 0;
    std::ptrdiff_t row_stride_ = 0;
};

/// Loads a PNG or binary PPM (P6) file with 8-bit RGB samples. The format is
/// detected from the file's magic bytes, not the extension. PNG alpha
/// channels are stripped; pixel values are loaded exactly, with no
/// resampling or color transform.
Raster load_raster(const std::filesystem::path& path);

/// Writes the raster losslessly. The format is chosen by extension: ".png"
/// (default choice for pipelines) or ".ppm" (P6, maxval 255). Loading the
/// written file reproduces the raster bit-exactly.
void save_raster(const Raster& raster, const std::filesystem::path& path);

/// 8-bit single-channel image, used for segmentation label sidecars.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Binary PGM (P5, maxval 255) I/O for label sidecars.
GrayImage load_pgm(const std::filesystem::path& path);
void save_pgm(const GrayImage& image, const std::filesystem::path& path);

}  // namespace landpatch

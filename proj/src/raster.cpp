// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#include "landpatch/raster.hpp"

#include <png.h>

#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace landpatch {

namespace fs = std::filesystem;

namespace {

constexpr long long kMaxDimension = 1 << 20;       // per-side pixel cap
constexpr long long kMaxPixels = 1LL << 31;        // total pixel cap

void check_dimensions(long long width, long long height, const fs::path& path) {
    if (width < 1 || height < 1) {
        throw InvalidInputError("image has non-positive dimensions: " + path.string());
    }
    if (width > kMaxDimension || height > kMaxDimension || width * height > kMaxPixels) {
        throw InvalidInputError("image dimensions overflow the supported size: " + path.string());
    }
}

struct FileHandle {
    std::FILE* fp = nullptr;

    ~FileHandle() {
        if (fp) std::fclose(fp);
    }
};

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;

    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;

    ~PngWriter() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

// Pixel storage lives on the heap, not in the frame that calls setjmp, so a
// libpng longjmp cannot leave an automatic object in an indeterminate state.
struct PngBuffers {
    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;
};

void quiet_png_warning(png_structp, png_const_charp) {}

// Decode errors surface as exceptions from the setjmp site; keep libpng's
// default stderr chatter out of the way.
[[noreturn]] void quiet_png_error(png_structp png, png_const_charp) { png_longjmp(png, 1); }

Raster load_png(std::FILE* fp, const fs::path& path) {
    PngReader r;
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, quiet_png_error, quiet_png_warning);
    if (!r.png) throw IoError("cannot allocate PNG decoder state: " + path.string());
    r.info = png_create_info_struct(r.png);
    if (!r.info) throw IoError("cannot allocate PNG decoder state: " + path.string());

    auto buffers = std::make_unique<PngBuffers>();

    if (setjmp(png_jmpbuf(r.png))) {
        throw InvalidInputError("malformed PNG file: " + path.string());
    }

    png_init_io(r.png, fp);
    png_set_sig_bytes(r.png, 8);
    png_read_info(r.png, r.info);

    png_uint_32 width = png_get_image_width(r.png, r.info);
    png_uint_32 height = png_get_image_height(r.png, r.info);
    int bit_depth = png_get_bit_depth(r.png, r.info);
    int color_type = png_get_color_type(r.png, r.info);
    check_dimensions(width, height, path);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
    if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
    if (bit_depth == 16) png_set_strip_16(r.png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(r.png);
    }
    png_set_strip_alpha(r.png);
    png_read_update_info(r.png, r.info);

    if (png_get_bit_depth(r.png, r.info) != 8 || png_get_channels(r.png, r.info) != 3 ||
        png_get_rowbytes(r.png, r.info) != std::size_t{width} * 3) {
        throw InvalidInputError("unsupported PNG sample layout: " + path.string());
    }

    buffers->pixels.resize(std::size_t{width} * height * 3);
    buffers->rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) {
        buffers->rows[y] = buffers->pixels.data() + std::size_t{y} * width * 3;
    }
    png_read_image(r.png, buffers->rows.data());
    png_read_end(r.png, nullptr);

    Raster out(static_cast<int>(width), static_cast<int>(height));
    out.data() = std::move(buffers->pixels);
    return out;
}

void save_png(const Raster& raster, const fs::path& path) {
    FileHandle file;
    file.fp = std::fopen(path.string().c_str(), "wb");
    if (!file.fp) throw IoError("cannot open for writing: " + path.string());

    PngWriter w;
    w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, quiet_png_error, quiet_png_warning);
    if (!w.png) throw IoError("cannot allocate PNG encoder state: " + path.string());
    w.info = png_create_info_struct(w.png);
    if (!w.info) throw IoError("cannot allocate PNG encoder state: " + path.string());

    if (setjmp(png_jmpbuf(w.png))) {
        throw IoError("failed to write PNG file: " + path.string());
    }

    png_init_io(w.png, file.fp);
    png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(raster.width()),
                 static_cast<png_uint_32>(raster.height()), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_BASE, PNG_FILTER_TYPE_BASE);
    png_write_info(w.png, w.info);
    for (int y = 0; y < raster.height(); ++y) {
        png_write_row(w.png, raster.row(y));
    }
    png_write_end(w.png, nullptr);

    if (std::fflush(file.fp) != 0) throw IoError("failed to write PNG file: " + path.string());
}

// Reads one whitespace-delimited PNM header token, skipping '#' comments.
std::string read_pnm_token(std::istream& in, const fs::path& path) {
    std::string token;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            break;
        }
        if (c != EOF) c = in.get();
    }
    while (c != EOF && !std::isspace(c) && c != '#') {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (c != EOF) in.unget();
    if (token.empty()) throw InvalidInputError("truncated PNM header: " + path.string());
    return token;
}

long long parse_pnm_number(std::istream& in, const fs::path& path) {
    std::string token = read_pnm_token(in, path);
    long long value = 0;
    for (char ch : token) {
        if (ch < '0' || ch > '9') {
            throw InvalidInputError("malformed PNM header field '" + token + "': " + path.string());
        }
        value = value * 10 + (ch - '0');
        if (value > std::numeric_limits<int>::max()) {
            throw InvalidInputError("PNM header field out of range: " + path.string());
        }
    }
    return value;
}

// Parses a P5/P6 header (magic already consumed by the caller) and returns
// width and height after validating maxval == 255.
std::pair<int, int> read_pnm_header(std::istream& in, const fs::path& path) {
    long long width = parse_pnm_number(in, path);
    long long height = parse_pnm_number(in, path);
    long long maxval = parse_pnm_number(in, path);
    check_dimensions(width, height, path);
    if (maxval != 255) {
        throw InvalidInputError("unsupported PNM maxval " + std::to_string(maxval) +
                                " (only 8-bit samples are supported): " + path.string());
    }
    int sep = in.get();
    if (sep == EOF || !std::isspace(sep)) {
        throw InvalidInputError("malformed PNM header: " + path.string());
    }
    return {static_cast<int>(width), static_cast<int>(height)};
}

void read_exact(std::istream& in, std::uint8_t* dst, std::size_t count, const fs::path& path) {
    in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) {
        throw InvalidInputError("truncated pixel data: " + path.string());
    }
}

Raster load_ppm(std::istream& in, const fs::path& path) {
    auto [width, height] = read_pnm_header(in, path);
    Raster out(width, height);
    read_exact(in, out.data().data(), out.data().size(), path);
    return out;
}

void save_pnm(const fs::path& path, const std::string& magic, int width, int height,
              const std::uint8_t* data, std::size_t size) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << magic << "\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
    out.flush();
    if (!out) throw IoError("failed to write file: " + path.string());
}

}  // namespace

Raster::Raster(int width, int height, Rgb fill) : width_(width), height_(height) {
    check_dimensions(width, height, "<in-memory raster>");
    data_.resize(std::size_t(width) * height * kChannels);
    if (fill.r != 0 || fill.g != 0 || fill.b != 0) {
        for (std::size_t i = 0; i < data_.size(); i += 3) {
            data_[i] = fill.r;
            data_[i + 1] = fill.g;
            data_[i + 2] = fill.b;
        }
    }
}

Rgb Raster::pixel(int x, int y) const {
    const std::uint8_t* p = row(y) + std::ptrdiff_t{3} * x;
    return Rgb{p[0], p[1], p[2]};
}

void Raster::set_pixel(int x, int y, Rgb color) {
    std::uint8_t* p = row(y) + std::ptrdiff_t{3} * x;
    p[0] = color.r;
    p[1] = color.g;
    p[2] = color.b;
}

std::uint8_t* Raster::row(int y) { return data_.data() + std::size_t(y) * width_ * kChannels; }

const std::uint8_t* Raster::row(int y) const {
    return data_.data() + std::size_t(y) * width_ * kChannels;
}

RasterView Raster::view() const noexcept {
    return RasterView(data_.data(), width_, height_, std::ptrdiff_t{width_} * kChannels);
}

RasterView RasterView::sub(int x, int y, int width, int height) const {
    if (x < 0 || y < 0 || width < 1 || height < 1 || x + width > width_ || y + height > height_) {
        throw InvalidInputError("sub-view out of bounds");
    }
    return RasterView(row(y) + std::ptrdiff_t{3} * x, width, height, row_stride_);
}

Raster load_raster(const fs::path& path) {
    FileHandle file;
    file.fp = std::fopen(path.string().c_str(), "rb");
    if (!file.fp) throw IoError("cannot open for reading: " + path.string());

    unsigned char sig[8] = {};
    std::size_t got = std::fread(sig, 1, sizeof sig, file.fp);
    if (got == sizeof sig && png_sig_cmp(sig, 0, sizeof sig) == 0) {
        return load_png(file.fp, path);
    }
    if (got >= 2 && sig[0] == 'P' && sig[1] == '6') {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open for reading: " + path.string());
        in.seekg(2);
        return load_ppm(in, path);
    }
    throw InvalidInputError("unsupported image format (expected PNG or P6 PPM): " + path.string());
}

void save_raster(const Raster& raster, const fs::path& path) {
    if (raster.empty()) throw InvalidInputError("cannot save an empty raster: " + path.string());
    if (path.extension() == ".ppm") {
        save_pnm(path, "P6", raster.width(), raster.height(), raster.data().data(),
                 raster.data().size());
    } else {
        save_png(raster, path);
    }
}

GrayImage load_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    char magic[2] = {};
    in.read(magic, 2);
    if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '5') {
        throw InvalidInputError("not a P5 PGM file: " + path.string());
    }
    auto [width, height] = read_pnm_header(in, path);
    GrayImage out;
    out.width = width;
    out.height = height;
    out.pixels.resize(std::size_t(width) * height);
    read_exact(in, out.pixels.data(), out.pixels.size(), path);
    return out;
}

void save_pgm(const GrayImage& image, const fs::path& path) {
    if (image.width < 1 || image.height < 1 ||
        image.pixels.size() != std::size_t(image.width) * image.height) {
        throw InvalidInputError("cannot save a malformed gray image: " + path.string());
    }
    save_pnm(path, "P5", image.width, image.height, image.pixels.data(), image.pixels.size());
}

}  // namespace landpatch

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#include "landpatch/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "landpatch/classifier.hpp"
#include "landpatch/errors.hpp"
#include "landpatch/raster.hpp"
#include "landpatch/series_csv.hpp"

namespace landpatch {

namespace fs = std::filesystem;

namespace {

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::string part;
    for (char c : line) {
        if (c == sep) {
            parts.push_back(std::move(part));
            part.clear();
        } else {
            part.push_back(c);
        }
    }
    parts.push_back(std::move(part));
    return parts;
}

std::string random_suffix() {
    static std::mt19937_64 rng(std::random_device{}());
    std::uint64_t bits = rng();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(bits));
    return buf;
}

/// Scratch directory inside the output directory. Files are staged here and
/// renamed into place on commit; a run that aborts removes the staging
/// directory with everything in it, leaving the output directory untouched.
class StagingDir {
public:
    explicit StagingDir(const fs::path& out_dir) : out_dir_(out_dir) {
        std::error_code ec;
        fs::create_directories(out_dir_, ec);
        if (ec) throw IoError("cannot create output directory: " + out_dir_.string());
        dir_ = out_dir_ / (".staging-" + random_suffix());
        if (!fs::create_directory(dir_, ec) || ec) {
            throw IoError("cannot create staging directory: " + dir_.string());
        }
    }

    StagingDir(const StagingDir&) = delete;
    StagingDir& operator=(const StagingDir&) = delete;

    ~StagingDir() {
        if (committed_) return;
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }

    fs::path staged(const std::string& name) const { return dir_ / name; }

    /// Renames every staged file into the output directory (replacing any
    /// previous version) and removes the staging directory.
    void commit() {
        for (const auto& entry : fs::directory_iterator(dir_)) {
            fs::path target = out_dir_ / entry.path().filename();
            std::error_code ec;
            fs::rename(entry.path(), target, ec);
            if (ec) throw IoError("cannot move output into place: " + target.string());
        }
        std::error_code ec;
        fs::remove(dir_, ec);
        committed_ = true;
    }

private:
    fs::path out_dir_;
    fs::path dir_;
    bool committed_ = false;
};

void write_text_atomic(const fs::path& path, const std::string& content) {
    fs::path parent = path.parent_path();
    if (parent.empty()) parent = ".";
    std::error_code ec;
    fs::create_directories(parent, ec);
    fs::path tmp = parent / (".tmp-" + random_suffix() + "-" + path.filename().string());
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            fs::remove(tmp, ec);
            throw IoError("failed to write: " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place: " + path.string());
    }
}

void save_raster_atomic(const Raster& raster, const fs::path& path) {
    fs::path parent = path.parent_path();
    if (parent.empty()) parent = ".";
    // The temp name keeps the final filename as a suffix so save_raster
    // still picks the output format from the real extension.
    fs::path tmp = parent / (".tmp-" + random_suffix() + "-" + path.filename().string());
    try {
        save_raster(raster, tmp);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place: " + path.string());
    }
}

int parse_positive_int(const std::string& value, const std::string& what) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || out < 1) {
        throw InvalidInputError("manifest: bad " + what + " '" + value + "'");
    }
    return out;
}

double mean_sample_value(const Raster& image) {
    std::uint64_t total = 0;
    for (std::uint8_t v : image.data()) total += v;
    return double(total) / double(image.data().size());
}

const Palette& manifest_palette(const Manifest& manifest, std::optional<Palette>& storage) {
    if (!manifest.palette_path) return default_palette();
    storage = load_palette(*manifest.palette_path);
    return *storage;
}

}  // namespace

Manifest parse_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    const fs::path base = fs::path(path).parent_path();

    Manifest manifest;
    std::set<int> quarters_seen;
    const std::set<std::string> directives = {"resolution", "model",  "palette",    "patch_size",
                                              "stride",     "mode",   "cover_edges"};

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = strip(line);
        if (text.empty() || text[0] == '#') continue;
        const std::string where = "manifest line " + std::to_string(line_no);

        std::size_t space = text.find_first_of(" \t");
        std::string head = text.substr(0, space);
        if (directives.count(head)) {
            if (space == std::string::npos) {
                throw InvalidInputError(where + ": directive '" + head + "' needs a value");
            }
            std::string value = strip(text.substr(space + 1));
            if (head == "resolution") {
                char* end = nullptr;
                double r = std::strtod(value.c_str(), &end);
                if (end != value.c_str() + value.size() || !(r > 0) || !std::isfinite(r)) {
                    throw InvalidInputError(where + ": bad resolution '" + value + "'");
                }
                manifest.resolution_m = r;
            } else if (head == "model") {
                manifest.model_path = (base / value).string();
            } else if (head == "palette") {
                manifest.palette_path = (base / value).string();
            } else if (head == "patch_size") {
                manifest.patch_size = parse_positive_int(value, "patch_size");
            } else if (head == "stride") {
                manifest.stride = parse_positive_int(value, "stride");
            } else if (head == "mode") {
                if (value == "overwrite") {
                    manifest.mode = OverlapMode::overwrite;
                } else if (value == "vote") {
                    manifest.mode = OverlapMode::vote;
                } else {
                    throw InvalidInputError(where + ": mode must be 'overwrite' or 'vote'");
                }
            } else if (head == "cover_edges") {
                if (value != "0" && value != "1") {
                    throw InvalidInputError(where + ": cover_edges must be 0 or 1");
                }
                manifest.cover_edges = value == "1";
            }
            continue;
        }

        std::vector<std::string> fields = split(text, ',');
        for (std::string& f : fields) f = strip(f);
        if (fields.size() < 2 || fields.size() > 4) {
            throw InvalidInputError(where + ": expected '<YYYYQn>,<path>[,excluded[,<reason>]]'");
        }
        std::optional<Quarter> quarter = Quarter::parse(fields[0]);
        if (!quarter) throw InvalidInputError(where + ": bad quarter '" + fields[0] + "'");
        if (!quarters_seen.insert(quarter->index()).second) {
            throw InvalidInputError(where + ": duplicate quarter " + quarter->to_string());
        }
        if (fields[1].empty()) throw InvalidInputError(where + ": empty image path");

        ManifestEntry entry;
        entry.quarter = *quarter;
        entry.image_path = (base / fields[1]).string();
        if (fields.size() >= 3) {
            if (fields[2] != "excluded") {
                throw InvalidInputError(where + ": third field must be 'excluded', got '" +
                                        fields[2] + "'");
            }
            entry.excluded = true;
            if (fields.size() == 4) entry.exclude_reason = fields[3];
        }
        manifest.entries.push_back(std::move(entry));
    }

    if (manifest.entries.empty()) throw InvalidInputError("manifest lists no images: " + path);
    if (manifest.model_path.empty()) {
        throw InvalidInputError("manifest is missing the required 'model <path>' directive: " +
                                path);
    }
    if (std::none_of(manifest.entries.begin(), manifest.entries.end(),
                     [](const ManifestEntry& e) { return !e.excluded; })) {
        throw InvalidInputError("manifest excludes every image: " + path);
    }
    return manifest;
}

SegmentRunResult run_segment(const Manifest& manifest, const std::string& out_dir, int workers) {
    std::optional<Palette> palette_storage;
    const Palette& palette = manifest_palette(manifest, palette_storage);
    std::unique_ptr<Classifier> classifier = load_model(manifest.model_path);

    SegmenterConfig config;
    config.patch_size = manifest.patch_size.value_or(classifier->patch_size());
    if (config.patch_size != classifier->patch_size()) {
        throw InvalidInputError("manifest patch_size " + std::to_string(config.patch_size) +
                                " does not match the model's patch size " +
                                std::to_string(classifier->patch_size()));
    }
    config.stride = manifest.stride.value_or(std::min(32, config.patch_size));
    config.mode = manifest.mode;
    config.cover_edges = manifest.cover_edges;
    config.workers = workers;

    StagingDir staging(out_dir);
    SegmentRunResult result;

    std::vector<std::pair<Quarter, std::array<std::optional<double>, kNumClasses>>> area_rows;
    for (const ManifestEntry& entry : manifest.entries) {
        if (entry.excluded) {
            area_rows.push_back({entry.quarter, {}});
            continue;
        }
        Raster image = load_raster(entry.image_path);
        if (mean_sample_value(image) > 240.0) {
            result.warnings.push_back("image for " + entry.quarter.to_string() +
                                      " has mean sample value above 240 and may be cloud-covered"
                                      " (kept; exclude it in the manifest to drop it): " +
                                      entry.image_path);
        }

        SegmentationMap map = segment(image, *classifier, config);

        const std::string quarter = entry.quarter.to_string();
        save_raster(render(map, palette), staging.staged(quarter + "_map.png"));
        GrayImage labels;
        labels.width = map.width();
        labels.height = map.height();
        labels.pixels = map.labels();
        save_pgm(labels, staging.staged(quarter + "_labels.pgm"));

        AreaReport report =
            AreaReport::from_counts(class_pixel_counts(map).classified, manifest.resolution_m);
        std::array<std::optional<double>, kNumClasses> row;
        for (int k = 0; k < kNumClasses; ++k) row[std::size_t(k)] = report.area_km2[std::size_t(k)];
        area_rows.push_back({entry.quarter, row});
    }

    std::sort(area_rows.begin(), area_rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SeriesTable table;
    for (int k = 0; k < kNumClasses; ++k) table.class_names.push_back(palette.class_at(k).name);
    for (auto& [quarter, row] : area_rows) {
        table.quarters.push_back(quarter);
        table.rows.push_back(row);
    }
    {
        std::ostringstream csv;
        write_series_csv(table, csv);
        std::ofstream out(staging.staged("areas.csv"), std::ios::binary);
        if (!out) throw IoError("cannot write areas.csv");
        out << csv.str();
        out.flush();
        if (!out) throw IoError("cannot write areas.csv");
    }

    staging.commit();

    const fs::path out_base(out_dir);
    for (const ManifestEntry& entry : manifest.entries) {
        if (entry.excluded) continue;
        const std::string quarter = entry.quarter.to_string();
        result.map_paths.push_back((out_base / (quarter + "_map.png")).string());
        result.label_paths.push_back((out_base / (quarter + "_labels.pgm")).string());
    }
    result.areas_csv_path = (out_base / "areas.csv").string();
    return result;
}

namespace {

std::array<double, kNumClasses> row_areas(const SeriesTable& table, Quarter quarter) {
    auto it = std::find_if(table.quarters.begin(), table.quarters.end(),
                           [&](Quarter q) { return q == quarter; });
    if (it == table.quarters.end()) {
        throw InvalidInputError("quarter " + quarter.to_string() + " is not present in the series");
    }
    const auto& row = table.rows[std::size_t(it - table.quarters.begin())];
    std::array<double, kNumClasses> areas{};
    for (int k = 0; k < kNumClasses; ++k) {
        if (!row[std::size_t(k)]) {
            throw InvalidInputError("quarter " + quarter.to_string() +
                                    " has missing values and cannot be compared");
        }
        areas[std::size_t(k)] = *row[std::size_t(k)];
    }
    return areas;
}

}  // namespace

ChangeRunResult run_change(const std::string& areas_csv, Quarter from, Quarter to,
                           const Palette& palette) {
    SeriesTable table = read_series_csv(areas_csv, palette);
    std::array<double, kNumClasses> before = row_areas(table, from);
    std::array<double, kNumClasses> after = row_areas(table, to);

    ChangeRunResult result;
    result.rows = change_table(before, after, palette);
    result.bui_before = built_up_index(before, palette);
    result.bui_after = built_up_index(after, palette);
    return result;
}

void write_change_csv(const ChangeRunResult& result, const std::string& path) {
    std::ostringstream out;
    write_change_table_csv(result.rows, out);
    out << "# BUI_before=" << format_double(result.bui_before) << '\n';
    out << "# BUI_after=" << format_double(result.bui_after) << '\n';
    write_text_atomic(path, out.str());
}

namespace {

SegmentationMap load_map_for_diff(const std::string& path, const Palette& palette) {
    // A label sidecar is authoritative; a rendered map goes through the
    // palette's color-to-class inversion.
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open for reading: " + path);
    char magic[2] = {};
    probe.read(magic, 2);
    probe.close();
    if (probe.gcount() == 2 && magic[0] == 'P' && magic[1] == '5') {
        GrayImage labels = load_pgm(path);
        SegmentationMap map(labels.width, labels.height);
        for (int y = 0; y < labels.height; ++y) {
            for (int x = 0; x < labels.width; ++x) {
                std::uint8_t v = labels.pixels[std::size_t(y) * labels.width + std::size_t(x)];
                if (v >= kNumClasses && v != SegmentationMap::kUnclassified) {
                    throw InvalidInputError("label sidecar pixel (" + std::to_string(x) + ", " +
                                            std::to_string(y) + ") has invalid label " +
                                            std::to_string(v) + ": " + path);
                }
                map.set_label(x, y, v);
            }
        }
        return map;
    }
    try {
        return labels_from_render(load_raster(path), palette);
    } catch (const InvalidInputError& e) {
        throw InvalidInputError(std::string(e.what()) + ": " + path);
    }
}

}  // namespace

void run_diff(const std::string& map_a, const std::string& map_b, const std::string& out_path,
              const Palette& palette) {
    SegmentationMap a = load_map_for_diff(map_a, palette);
    SegmentationMap b = load_map_for_diff(map_b, palette);
    save_raster_atomic(difference_map(a, b, palette), out_path);
}

ForecastRunResult run_forecast(const std::string& areas_csv, Quarter target, int p, int d,
                               const Palette& palette) {
    SeriesTable table = read_series_csv(areas_csv, palette);
    if (table.quarters.empty()) throw InvalidInputError("series CSV has no data rows");

    std::array<ClassAreaSeries, kNumClasses> series = table.to_class_series();
    const Quarter start = table.quarters.front();
    const Quarter end = table.quarters.back();
    for (auto& s : series) s = regularize(s, start, end);

    ForecastRunResult result;
    result.grid = forecast_grid(series, target, p, d);
    for (const auto& row : result.grid.rows) {
        result.bui.push_back(built_up_index(row, palette));
    }
    return result;
}

void write_forecast_csv(const ForecastRunResult& result, const Palette& palette,
                        const std::string& path) {
    std::ostringstream out;
    out << "quarter";
    for (int k = 0; k < kNumClasses; ++k) out << ',' << palette.class_at(k).name;
    out << '\n';
    Quarter quarter = result.grid.first;
    for (std::size_t i = 0; i < result.grid.rows.size(); ++i) {
        out << quarter.to_string();
        for (int k = 0; k < kNumClasses; ++k) {
            out << ',' << format_double(result.grid.rows[i][std::size_t(k)]);
        }
        out << '\n';
        out << "# BUI=" << format_double(result.bui[i]) << '\n';
        quarter = quarter.next();
    }
    write_text_atomic(path, out.str());
}

AcfRunResult run_acf(const std::string& areas_csv, const std::string& class_name, int max_lag,
                     const Palette& palette) {
    SeriesTable table = read_series_csv(areas_csv, palette);
    if (table.quarters.empty()) throw InvalidInputError("series CSV has no data rows");
    std::optional<int> index = palette.index_of_name(class_name);
    if (!index) throw InvalidInputError("unknown class name '" + class_name + "'");

    ClassAreaSeries series = table.to_class_series()[std::size_t(*index)];
    series = regularize(series, table.quarters.front(), table.quarters.back());

    AcfRunResult result;
    result.class_name = class_name;
    result.r = acf(series.values(), max_lag);
    return result;
}

}  // namespace landpatch

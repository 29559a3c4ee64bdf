// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "landpatch/analytics.hpp"
#include "landpatch/forecast.hpp"
#include "landpatch/palette.hpp"
#include "landpatch/segmenter.hpp"

namespace landpatch {

/// One input raster of the segmentation batch. Excluded entries (for
/// example cloud-covered quarters) are carried through so their quarter can
/// be marked missing in the output series rather than silently dropped.
struct ManifestEntry {
    Quarter quarter;
    std::string image_path;  // resolved against the manifest's directory
    bool excluded = false;
    std::string exclude_reason;
};

/// Parsed batch manifest: directive lines ("model <path>", "stride <n>",
/// ...) and one "<YYYYQn>,<path>[,excluded[,<reason>]]" entry line per
/// image, in any order.
struct Manifest {
    std::vector<ManifestEntry> entries;
    std::string model_path;
    std::optional<std::string> palette_path;
    double resolution_m = 0.65;
    std::optional<int> patch_size;  // default: the model's native size
    std::optional<int> stride;      // default: min(32, patch size)
    OverlapMode mode = OverlapMode::overwrite;
    bool cover_edges = false;
};

Manifest parse_manifest(const std::string& path);

/// Everything `segment` leaves in the output directory, plus run warnings.
struct SegmentRunResult {
    std::vector<std::string> map_paths;    // one rendered map per processed entry
    std::vector<std::string> label_paths;  // matching label sidecars
    std::string areas_csv_path;
    std::vector<std::string> warnings;     // advisory only, e.g. cloud suspicion
};

/// Runs the batch: segments every non-excluded manifest image, saves the
/// rendered map as "<quarter>_map.png" plus a "<quarter>_labels.pgm" label
/// sidecar, tabulates per-class areas into "areas.csv" (excluded quarters
/// appear with empty cells), and commits all outputs atomically: a failed
/// run leaves no partial files in out_dir.
SegmentRunResult run_segment(const Manifest& manifest, const std::string& out_dir, int workers);

struct ChangeRunResult {
    std::vector<ChangeRow> rows;
    double bui_before = 0;
    double bui_after = 0;
};

/// Change analytics between two quarters of an areas CSV.
ChangeRunResult run_change(const std::string& areas_csv, Quarter from, Quarter to,
                           const Palette& palette);
void write_change_csv(const ChangeRunResult& result, const std::string& path);

/// Pixel-wise difference map of two rendered segmentation maps.
void run_diff(const std::string& map_a, const std::string& map_b, const std::string& out_path,
              const Palette& palette);

struct ForecastRunResult {
    ForecastGrid grid;
    std::vector<double> bui;  // one value per grid row
};

ForecastRunResult run_forecast(const std::string& areas_csv, Quarter target, int p, int d,
                               const Palette& palette);
void write_forecast_csv(const ForecastRunResult& result, const Palette& palette,
                        const std::string& path);

struct AcfRunResult {
    std::string class_name;
    std::vector<double> r;  // lags 0..max_lag
};

AcfRunResult run_acf(const std::string& areas_csv, const std::string& class_name, int max_lag,
                     const Palette& palette);

}  // namespace landpatch

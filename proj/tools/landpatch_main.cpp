// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "landpatch/errors.hpp"
#include "landpatch/pipeline.hpp"
#include "landpatch/series_csv.hpp"

namespace {

using namespace landpatch;

Quarter parse_quarter_arg(const std::string& text, const std::string& flag) {
    std::optional<Quarter> q = Quarter::parse(text);
    if (!q) {
        throw InvalidInputError(flag + " must be a quarter of the form YYYYQn, got '" + text +
                                "'");
    }
    return *q;
}

// Palette selected by --palette, falling back to the built-in table.
struct PaletteChoice {
    std::string path;
    std::optional<Palette> loaded;

    const Palette& get() {
        if (path.empty()) return default_palette();
        if (!loaded) loaded = load_palette(path);
        return *loaded;
    }
};

int run(int argc, char** argv) {
    CLI::App app{"Patch-based land-use segmentation, change analytics, and forecasting"};
    app.require_subcommand(1);

    auto* segment_cmd =
        app.add_subcommand("segment", "Segment every image of a manifest and tabulate areas");
    std::string manifest_path;
    std::string segment_out;
    int workers = 0;
    segment_cmd->add_option("manifest", manifest_path, "Batch manifest file")->required();
    segment_cmd->add_option("-o,--out", segment_out, "Output directory")->required();
    segment_cmd->add_option("--workers", workers, "Worker threads (0 = all hardware threads)");

    auto* change_cmd =
        app.add_subcommand("change", "Change table and built-up index between two quarters");
    std::string change_csv, change_from, change_to, change_out;
    PaletteChoice change_palette;
    change_cmd->add_option("areas", change_csv, "Per-quarter area CSV")->required();
    change_cmd->add_option("--from", change_from, "Earlier quarter (YYYYQn)")->required();
    change_cmd->add_option("--to", change_to, "Later quarter (YYYYQn)")->required();
    change_cmd->add_option("-o,--out", change_out, "Output CSV file")->required();
    change_cmd->add_option("--palette", change_palette.path, "Palette config file");

    auto* diff_cmd = app.add_subcommand("diff", "Pixel-wise difference map of two rendered maps");
    std::string diff_a, diff_b, diff_out;
    PaletteChoice diff_palette;
    diff_cmd->add_option("map_a", diff_a, "Earlier rendered map (or label sidecar)")->required();
    diff_cmd->add_option("map_b", diff_b, "Later rendered map (or label sidecar)")->required();
    diff_cmd->add_option("-o,--out", diff_out, "Output image file")->required();
    diff_cmd->add_option("--palette", diff_palette.path, "Palette config file");

    auto* forecast_cmd =
        app.add_subcommand("forecast", "Forecast per-class areas out to a target quarter");
    std::string forecast_csv, forecast_target, forecast_out;
    int order_p = 4, order_d = 1;
    PaletteChoice forecast_palette;
    forecast_cmd->add_option("areas", forecast_csv, "Per-quarter area CSV")->required();
    forecast_cmd->add_option("--target", forecast_target, "Target quarter (YYYYQn)")->required();
    forecast_cmd->add_option("--p", order_p, "AR order");
    forecast_cmd->add_option("--d", order_d, "Difference order");
    forecast_cmd->add_option("-o,--out", forecast_out, "Output CSV file")->required();
    forecast_cmd->add_option("--palette", forecast_palette.path, "Palette config file");

    auto* acf_cmd = app.add_subcommand("acf", "Autocorrelation diagnostics for one class series");
    std::string acf_csv, acf_class;
    int max_lag = 12;
    PaletteChoice acf_palette;
    acf_cmd->add_option("areas", acf_csv, "Per-quarter area CSV")->required();
    acf_cmd->add_option("--class", acf_class, "Class name")->required();
    acf_cmd->add_option("--max-lag", max_lag, "Largest lag to report");
    acf_cmd->add_option("--palette", acf_palette.path, "Palette config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (segment_cmd->parsed()) {
        Manifest manifest = parse_manifest(manifest_path);
        SegmentRunResult result = run_segment(manifest, segment_out, workers);
        for (const std::string& warning : result.warnings) {
            std::cerr << "warning: " << warning << "\n";
        }
        for (const std::string& path : result.map_paths) std::cout << "wrote " << path << "\n";
        for (const std::string& path : result.label_paths) std::cout << "wrote " << path << "\n";
        std::cout << "wrote " << result.areas_csv_path << "\n";
    } else if (change_cmd->parsed()) {
        Quarter from = parse_quarter_arg(change_from, "--from");
        Quarter to = parse_quarter_arg(change_to, "--to");
        ChangeRunResult result = run_change(change_csv, from, to, change_palette.get());
        write_change_csv(result, change_out);
        std::cout << "BUI " << from.to_string() << "=" << format_double(result.bui_before) << "\n";
        std::cout << "BUI " << to.to_string() << "=" << format_double(result.bui_after) << "\n";
        std::cout << "wrote " << change_out << "\n";
    } else if (diff_cmd->parsed()) {
        run_diff(diff_a, diff_b, diff_out, diff_palette.get());
        std::cout << "wrote " << diff_out << "\n";
    } else if (forecast_cmd->parsed()) {
        Quarter target = parse_quarter_arg(forecast_target, "--target");
        const Palette& palette = forecast_palette.get();
        ForecastRunResult result = run_forecast(forecast_csv, target, order_p, order_d, palette);
        write_forecast_csv(result, palette, forecast_out);
        if (!result.bui.empty()) {
            std::cout << "BUI " << target.to_string() << "=" << format_double(result.bui.back())
                      << "\n";
        }
        std::cout << "wrote " << forecast_out << "\n";
    } else if (acf_cmd->parsed()) {
        AcfRunResult result = run_acf(acf_csv, acf_class, max_lag, acf_palette.get());
        std::cout << "lag,acf\n";
        for (std::size_t k = 0; k < result.r.size(); ++k) {
            std::cout << k << "," << format_double(result.r[k]) << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#pragma once

#include <array>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "landpatch/analytics.hpp"
#include "landpatch/palette.hpp"

namespace landpatch {

/// A calendar quarter. Totally ordered; the successor of (y, 4) is (y+1, 1).
struct Quarter {
    int year = 0;
    int q = 1;  // 1..4

    /// Position on the contiguous quarter axis.
    int index() const noexcept { return year * 4 + (q - 1); }
    static Quarter from_index(int index) noexcept {
        int y = index >= 0 ? index / 4 : -((-index + 3) / 4);
        return Quarter{y, index - y * 4 + 1};
    }
    Quarter next() const noexcept { return from_index(index() + 1); }

    /// "YYYYQn", zero-padded year.
    std::string to_string() const;
    /// Parses "YYYYQn"; empty on malformed input.
    static std::optional<Quarter> parse(std::string_view text);

    friend bool operator==(const Quarter& a, const Quarter& b) noexcept {
        return a.index() == b.index();
    }
    friend std::strong_ordering operator<=>(const Quarter& a, const Quarter& b) noexcept {
        return a.index() <=> b.index();
    }
};

struct SeriesPoint {
    Quarter quarter;
    std::optional<double> area_km2;  // empty = missing observation
};

/// Quarterly ground-area series for one land-use class. Quarters are
/// strictly increasing. After regularization the quarters form a contiguous
/// range and every point carries a value.
struct ClassAreaSeries {
    int class_index = 0;
    std::vector<SeriesPoint> points;

    bool regular() const;
    /// Values of a regular series, in quarter order.
    std::vector<double> values() const;
};

/// Resamples the series onto the contiguous quarterly grid [start, end].
/// Interior gaps are filled by linear interpolation between the nearest
/// observed neighbors; leading/trailing gaps hold the nearest observed
/// value constant. Observed points pass through unchanged.
ClassAreaSeries regularize(const ClassAreaSeries& series, Quarter start, Quarter end);

/// d applications of first differencing; output length = input length - d.
std::vector<double> difference(std::span<const double> values, int d);

/// Inverse of `difference` given the d originals that precede the diffs:
/// difference(anchors ++ undifference(diffs, anchors), d) == diffs exactly.
std::vector<double> undifference(std::span<const double> diffs, std::span<const double> anchors);

/// Sample autocorrelation at lags 0..max_lag:
/// r(k) = sum_t (x_t - mean)(x_{t+k} - mean) / sum_t (x_t - mean)^2, r(0)=1.
/// Throws NumericError for a zero-variance series.
std::vector<double> acf(std::span<const double> values, int max_lag);

/// A fitted ARIMA(p, d, 0) model: AR coefficients, drift constant, residual
/// variance, and the training-series tail needed to forecast.
struct ArimaModel {
    int p = 4;
    int d = 1;
    int q = 0;  // fixed at 0
    std::vector<double> phi;   // p AR coefficients
    double c = 0;              // drift constant
    double sigma2 = 0;         // residual variance
    std::vector<double> tail;  // last p + d observations, chronological
};

/// Fits ARIMA(p, d, 0) by conditional least squares: differences to order
/// d, then regresses w_t on [1, w_{t-1}, ..., w_{t-p}] via Householder QR.
/// A rank-deficient design (zero-variance regressors) falls back to
/// phi = 0, c = mean(w).
ArimaModel fit_arima(std::span<const double> values, int p, int d);

/// Iterates the AR recursion on the differenced scale, undifferences
/// against the model tail, and clamps the resulting areas at 0 from below.
std::vector<double> forecast(const ArimaModel& model, int horizon);

/// Per-quarter forecasts for all 10 classes, quarters first..first+rows-1.
struct ForecastGrid {
    Quarter first;
    std::vector<std::array<double, kNumClasses>> rows;
};

/// Fits one independent ARIMA per class on regular series sharing a common
/// window and forecasts every quarter from the series end (exclusive) to
/// `target` (inclusive). target == series end yields an empty grid;
/// an earlier target is an error.
ForecastGrid forecast_grid(const std::array<ClassAreaSeries, kNumClasses>& series, Quarter target,
                           int p, int d);

struct ForecastTable {
    std::vector<ChangeRow> rows;  // last observed vs forecast at target
    double bui = 0;               // built-up index of the target-quarter areas
};

ForecastTable forecast_table(const std::array<ClassAreaSeries, kNumClasses>& series,
                             Quarter target, int p, int d, const Palette& palette);

}  // namespace landpatch

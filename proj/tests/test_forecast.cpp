// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "landpatch/errors.hpp"
#include "landpatch/forecast.hpp"
#include "landpatch/palette.hpp"
#include "test_support.hpp"

using namespace landpatch;

namespace {

ClassAreaSeries series_from(int class_index, Quarter start, const std::vector<double>& values) {
    ClassAreaSeries s;
    s.class_index = class_index;
    Quarter q = start;
    for (double v : values) {
        s.points.push_back({q, v});
        q = q.next();
    }
    return s;
}

}  // namespace

TEST_CASE("quarters order, advance, and print") {
    CHECK(Quarter{2018, 4}.index() - Quarter{2018, 1}.index() == 3);
    CHECK(Quarter{2018, 4}.next() == Quarter{2019, 1});
    CHECK(Quarter{2004, 1} < Quarter{2004, 2});
    CHECK(Quarter{2003, 4} < Quarter{2004, 1});
    CHECK(Quarter{2011, 4}.to_string() == "2011Q4");
    CHECK(Quarter::from_index(Quarter{2025, 3}.index()) == Quarter{2025, 3});

    // Dec 2018 to Dec 2025 is 28 quarters.
    CHECK(Quarter{2025, 4}.index() - Quarter{2018, 4}.index() == 28);
}

TEST_CASE("quarter parsing is strict") {
    CHECK(Quarter::parse("2011Q4") == Quarter{2011, 4});
    CHECK(Quarter::parse("0007Q1") == Quarter{7, 1});
    CHECK_FALSE(Quarter::parse("2011q4").has_value());
    CHECK_FALSE(Quarter::parse("2011Q5").has_value());
    CHECK_FALSE(Quarter::parse("2011Q0").has_value());
    CHECK_FALSE(Quarter::parse("11Q4").has_value());
    CHECK_FALSE(Quarter::parse("2011Q44").has_value());
    CHECK_FALSE(Quarter::parse("2011-4").has_value());
    CHECK_FALSE(Quarter::parse("").has_value());
}

TEST_CASE("regularize passes a complete series through unchanged") {
    const auto s = series_from(0, Quarter{2004, 1}, {1.0, 2.0, 3.0, 4.0});
    const auto r = regularize(s, Quarter{2004, 1}, Quarter{2004, 4});
    REQUIRE(r.points.size() == 4u);
    CHECK(r.regular());
    CHECK(r.values() == std::vector<double>{1.0, 2.0, 3.0, 4.0});
}

TEST_CASE("regularize interpolates interior gaps linearly") {
    ClassAreaSeries s;
    s.class_index = 2;
    s.points.push_back({Quarter{2010, 1}, 1.0});
    s.points.push_back({Quarter{2010, 2}, std::nullopt});
    s.points.push_back({Quarter{2010, 3}, 3.0});
    const auto r = regularize(s, Quarter{2010, 1}, Quarter{2010, 3});
    CHECK(r.values() == std::vector<double>{1.0, 2.0, 3.0});

    // A two-quarter hole splits the segment into thirds.
    ClassAreaSeries t;
    t.points.push_back({Quarter{2010, 1}, 0.0});
    t.points.push_back({Quarter{2010, 4}, 3.0});
    const auto rt = regularize(t, Quarter{2010, 1}, Quarter{2010, 4});
    CHECK(rt.values()[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rt.values()[2] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("regularize holds the nearest value across the edges") {
    ClassAreaSeries s;
    s.points.push_back({Quarter{2010, 2}, 5.0});
    s.points.push_back({Quarter{2010, 3}, 7.0});
    const auto r = regularize(s, Quarter{2010, 1}, Quarter{2011, 1});
    CHECK(r.values() == std::vector<double>{5.0, 5.0, 7.0, 7.0, 7.0});
    CHECK(r.points.front().quarter == Quarter{2010, 1});
    CHECK(r.points.back().quarter == Quarter{2011, 1});
}

TEST_CASE("regularize can window down to a sub-range") {
    const auto s = series_from(0, Quarter{2004, 1}, {1, 2, 3, 4, 5, 6, 7, 8});
    const auto r = regularize(s, Quarter{2004, 3}, Quarter{2005, 1});
    CHECK(r.values() == std::vector<double>{3.0, 4.0, 5.0});
}

TEST_CASE("regularize rejects impossible requests") {
    const auto s = series_from(0, Quarter{2004, 1}, {1.0, 2.0});
    CHECK_THROWS_AS(regularize(s, Quarter{2005, 1}, Quarter{2004, 1}), InvalidInputError);

    ClassAreaSeries empty;
    CHECK_THROWS_AS(regularize(empty, Quarter{2004, 1}, Quarter{2004, 4}), InvalidInputError);

    ClassAreaSeries all_missing;
    all_missing.points.push_back({Quarter{2004, 1}, std::nullopt});
    CHECK_THROWS_AS(regularize(all_missing, Quarter{2004, 1}, Quarter{2004, 2}),
                    InvalidInputError);

    ClassAreaSeries unsorted;
    unsorted.points.push_back({Quarter{2004, 2}, 1.0});
    unsorted.points.push_back({Quarter{2004, 1}, 2.0});
    CHECK_THROWS_AS(regularize(unsorted, Quarter{2004, 1}, Quarter{2004, 2}), InvalidInputError);
}

TEST_CASE("differencing peels off one order at a time") {
    const std::vector<double> x = {1.0, 2.0, 4.0, 7.0, 11.0};
    CHECK(difference(x, 0) == x);
    CHECK(difference(x, 1) == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(difference(x, 2) == std::vector<double>{1.0, 1.0, 1.0});
    CHECK_THROWS_AS(difference(x, -1), InvalidInputError);
    CHECK_THROWS_AS(difference(std::vector<double>{1.0}, 1), InvalidInputError);
}

TEST_CASE("undifference inverts difference exactly") {
    SUBCASE("worked example") {
        const std::vector<double> diffs = {1.0, 1.0, 1.0};
        const std::vector<double> anchors = {10.0};
        CHECK(undifference(diffs, anchors) == std::vector<double>{11.0, 12.0, 13.0});
    }
    SUBCASE("empty forecast") {
        CHECK(undifference(std::vector<double>{}, std::vector<double>{5.0}).empty());
    }
    SUBCASE("round trips at d = 0, 1, 2") {
        std::mt19937_64 rng(19);
        for (int d = 0; d <= 2; ++d) {
            std::vector<double> x;
            for (int i = 0; i < 24; ++i) x.push_back(testutil::uniform01(rng) * 10.0);

            // Split x into a history (anchors) and a future; reconstruct the
            // future from the differenced representation.
            const int split = 12;
            std::vector<double> all_diffs = difference(x, d);
            std::vector<double> anchors(x.begin() + split - d, x.begin() + split);
            std::vector<double> future_diffs(all_diffs.begin() + (split - d), all_diffs.end());
            const std::vector<double> rebuilt = undifference(future_diffs, anchors);
            REQUIRE(rebuilt.size() == x.size() - std::size_t(split));
            for (std::size_t i = 0; i < rebuilt.size(); ++i)
                CHECK(rebuilt[i] == doctest::Approx(x[std::size_t(split) + i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("acf normalizes to one at lag zero") {
    std::mt19937_64 rng(23);
    std::vector<double> x;
    for (int i = 0; i < 50; ++i) x.push_back(testutil::normal(rng));
    const auto r = acf(x, 5);
    REQUIRE(r.size() == 6u);
    CHECK(r[0] == 1.0);
    for (double v : r) {
        CHECK(v <= 1.0 + 1e-12);
        CHECK(v >= -1.0 - 1e-12);
    }
}

TEST_CASE("acf of an alternating series is strongly negative at lag one") {
    std::vector<double> x;
    for (int i = 0; i < 40; ++i) x.push_back(i % 2 == 0 ? 1.0 : -1.0);
    const auto r = acf(x, 2);
    CHECK(r[1] == doctest::Approx(-0.975).epsilon(1e-9));
    CHECK(r[2] > 0.9);
}

TEST_CASE("acf of white noise is near zero at positive lags") {
    std::mt19937_64 rng(29);
    std::vector<double> x;
    for (int i = 0; i < 10000; ++i) x.push_back(testutil::normal(rng));
    const auto r = acf(x, 8);
    for (int k = 1; k <= 8; ++k) CHECK(std::abs(r[std::size_t(k)]) < 0.05);
}

TEST_CASE("acf is invariant to affine rescaling") {
    std::mt19937_64 rng(31);
    std::vector<double> x, y;
    for (int i = 0; i < 200; ++i) {
        const double v = testutil::normal(rng);
        x.push_back(v);
        y.push_back(3.5 * v + 11.0);
    }
    const auto rx = acf(x, 6);
    const auto ry = acf(y, 6);
    for (std::size_t k = 0; k < rx.size(); ++k)
        CHECK(rx[k] == doctest::Approx(ry[k]).epsilon(1e-10));
}

TEST_CASE("acf input validation") {
    CHECK_THROWS_AS(acf(std::vector<double>{1.0, 1.0, 1.0}, 1), NumericError);
    CHECK_THROWS_AS(acf(std::vector<double>{1.0, 2.0}, 2), InvalidInputError);
    CHECK_THROWS_AS(acf(std::vector<double>{}, 0), InvalidInputError);
    CHECK_THROWS_AS(acf(std::vector<double>{1.0, 2.0, 3.0}, -1), InvalidInputError);
}

TEST_CASE("a perfect linear trend fits as pure drift") {
    std::vector<double> x;
    for (int i = 0; i < 30; ++i) x.push_back(1.0 + 0.25 * i);
    const ArimaModel model = fit_arima(x, 2, 1);
    // The differenced series is constant, so the AR design is rank
    // deficient and the estimator falls back to drift only.
    CHECK(model.phi == std::vector<double>{0.0, 0.0});
    CHECK(model.c == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(model.sigma2 == doctest::Approx(0.0).epsilon(1e-12));
    REQUIRE(model.tail.size() == 3u);
    CHECK(model.tail.back() == doctest::Approx(x.back()).epsilon(1e-12));
}

TEST_CASE("ar(1) coefficient is recovered from simulated data") {
    const auto y = testutil::simulate_ar({0.6}, 1.0, 1.0, 2000, 12345);
    const ArimaModel model = fit_arima(y, 1, 0);
    REQUIRE(model.phi.size() == 1u);
    CHECK(model.phi[0] == doctest::Approx(0.6).epsilon(0.1));
    CHECK(model.sigma2 > 0.5);
    CHECK(model.sigma2 < 2.0);
}

TEST_CASE("ar(4) coefficients are recovered from simulated data") {
    const std::vector<double> phi = {0.3, 0.1, 0.05, 0.4};
    const auto y = testutil::simulate_ar(phi, 0.5, 1.0, 5000, 99);
    const ArimaModel model = fit_arima(y, 4, 0);
    REQUIRE(model.phi.size() == 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(model.phi[i] - phi[i]) < 0.07);
    }
}

TEST_CASE("residuals are orthogonal to the regressors") {
    const auto y = testutil::simulate_ar({0.5, -0.2}, 0.3, 1.0, 400, 7);
    const int p = 2, d = 0;
    const ArimaModel model = fit_arima(y, p, d);

    // Rebuild the regression residuals and check X^T r == 0.
    const int n = int(y.size());
    double dot_const = 0.0;
    std::array<double, 2> dot_lag = {0.0, 0.0};
    for (int t = p; t < n; ++t) {
        double fitted = model.c;
        for (int i = 0; i < p; ++i) fitted += model.phi[std::size_t(i)] * y[std::size_t(t - 1 - i)];
        const double r = y[std::size_t(t)] - fitted;
        dot_const += r;
        for (int i = 0; i < p; ++i) dot_lag[std::size_t(i)] += r * y[std::size_t(t - 1 - i)];
    }
    CHECK(std::abs(dot_const) < 1e-8);
    CHECK(std::abs(dot_lag[0]) < 1e-8);
    CHECK(std::abs(dot_lag[1]) < 1e-8);
}

TEST_CASE("fit_arima validates its inputs") {
    std::vector<double> tiny = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(fit_arima(tiny, 4, 1), InvalidInputError);
    std::vector<double> ok(40, 0.0);
    for (std::size_t i = 0; i < ok.size(); ++i) ok[i] = double(i % 7);
    CHECK_THROWS_AS(fit_arima(ok, -1, 0), InvalidInputError);
    CHECK_THROWS_AS(fit_arima(ok, 1, -1), InvalidInputError);

    std::vector<double> with_nan = ok;
    with_nan[5] = std::nan("");
    CHECK_THROWS_AS(fit_arima(with_nan, 1, 1), InvalidInputError);
}

TEST_CASE("pure drift forecasts advance by the drift each quarter") {
    ArimaModel model;
    model.p = 0;
    model.d = 1;
    model.phi = {};
    model.c = 0.1;
    model.tail = {1.0};
    const auto f = forecast(model, 3);
    REQUIRE(f.size() == 3u);
    CHECK(f[0] == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(f[1] == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(f[2] == doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("a fitted linear trend forecasts the continued line") {
    std::vector<double> x;
    for (int i = 0; i < 20; ++i) x.push_back(2.0 + 0.5 * i);
    const ArimaModel model = fit_arima(x, 4, 1);
    const auto f = forecast(model, 4);
    for (int h = 0; h < 4; ++h)
        CHECK(f[std::size_t(h)] == doctest::Approx(2.0 + 0.5 * (19 + h + 1)).epsilon(1e-9));
}

TEST_CASE("forecasts never go below zero") {
    ArimaModel model;
    model.p = 0;
    model.d = 1;
    model.c = -1.0;
    model.tail = {1.5};
    const auto f = forecast(model, 5);
    CHECK(f[0] == doctest::Approx(0.5).epsilon(1e-12));
    for (double v : f) CHECK(v >= 0.0);
}

TEST_CASE("an ar(1) forecast decays toward the process mean") {
    ArimaModel model;
    model.p = 1;
    model.d = 0;
    model.phi = {0.5};
    model.c = 1.0;
    model.tail = {4.0};
    // Process mean = c / (1 - phi) = 2; forecasts halve the distance
    // each step: 3.0, 2.5, 2.25, ...
    const auto f = forecast(model, 3);
    CHECK(f[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f[1] == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(f[2] == doctest::Approx(2.25).epsilon(1e-12));
}

TEST_CASE("forecast validates the model and horizon") {
    ArimaModel model;
    model.p = 1;
    model.d = 1;
    model.phi = {0.5};
    model.tail = {1.0};  // needs p + d = 2 values
    CHECK_THROWS_AS(forecast(model, 1), InvalidInputError);

    model.tail = {1.0, 2.0};
    CHECK_THROWS_AS(forecast(model, 0), InvalidInputError);
    CHECK_THROWS_AS(forecast(model, -3), InvalidInputError);
    CHECK_NOTHROW(forecast(model, 1));
}

TEST_CASE("forecast_grid extends every class to the target quarter") {
    std::array<ClassAreaSeries, kNumClasses> series;
    const Quarter start{2004, 1};
    const Quarter end{2018, 4};
    const int n = end.index() - start.index() + 1;
    for (int k = 0; k < kNumClasses; ++k) {
        std::vector<double> values;
        for (int i = 0; i < n; ++i) values.push_back(1.0 + 0.1 * k + 0.02 * k * i);
        series[std::size_t(k)] = series_from(k, start, values);
    }

    const ForecastGrid grid = forecast_grid(series, Quarter{2020, 4}, 4, 1);
    CHECK(grid.first == Quarter{2019, 1});
    REQUIRE(grid.rows.size() == 8u);
    for (const auto& row : grid.rows)
        for (double v : row) CHECK(v >= 0.0);

    // Linear series continue their lines (class 0 is constant at 1.0).
    CHECK(grid.rows[7][0] == doctest::Approx(1.0).epsilon(1e-9));
    const double slope3 = 0.02 * 3;
    CHECK(grid.rows[7][3] == doctest::Approx(1.3 + slope3 * (n - 1 + 8)).epsilon(1e-6));
}

TEST_CASE("forecast_grid with target at the series end is empty") {
    std::array<ClassAreaSeries, kNumClasses> series;
    for (int k = 0; k < kNumClasses; ++k) {
        series[std::size_t(k)] =
            series_from(k, Quarter{2010, 1}, std::vector<double>(20, 1.0 + k));
    }
    const ForecastGrid grid = forecast_grid(series, Quarter{2014, 4}, 4, 1);
    CHECK(grid.rows.empty());

    CHECK_THROWS_WITH_AS(forecast_grid(series, Quarter{2014, 3}, 4, 1),
                         doctest::Contains("target precedes series end"), InvalidInputError);
}

TEST_CASE("forecast_table compares the series end against the target") {
    std::array<ClassAreaSeries, kNumClasses> series;
    for (int k = 0; k < kNumClasses; ++k) {
        std::vector<double> values;
        for (int i = 0; i < 24; ++i) values.push_back(2.0 + 0.05 * i + k);
        series[std::size_t(k)] = series_from(k, Quarter{2010, 1}, values);
    }
    const ForecastTable table = forecast_table(series, Quarter{2017, 4}, 4, 1, default_palette());
    REQUIRE(table.rows.size() == 10u);
    // Every class grows along its trend, so every delta is positive.
    for (const auto& row : table.rows) CHECK(row.delta_km2 > 0.0);
    CHECK(table.bui > 0.0);
    CHECK(table.bui < 1.0);
}

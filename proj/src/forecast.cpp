// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#include "landpatch/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "landpatch/analytics.hpp"
#include "landpatch/errors.hpp"

namespace landpatch {

std::string Quarter::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04dQ%d", year, q);
    return buf;
}

std::optional<Quarter> Quarter::parse(std::string_view text) {
    if (text.size() != 6 || text[4] != 'Q') return std::nullopt;
    int year = 0;
    for (int i = 0; i < 4; ++i) {
        if (text[std::size_t(i)] < '0' || text[std::size_t(i)] > '9') return std::nullopt;
        year = year * 10 + (text[std::size_t(i)] - '0');
    }
    if (text[5] < '1' || text[5] > '4') return std::nullopt;
    return Quarter{year, text[5] - '0'};
}

bool ClassAreaSeries::regular() const {
    if (points.empty()) return false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].area_km2.has_value()) return false;
        if (i > 0 && points[i].quarter.index() != points[i - 1].quarter.index() + 1) return false;
    }
    return true;
}

std::vector<double> ClassAreaSeries::values() const {
    if (!regular()) {
        throw InvalidInputError("series for class " + std::to_string(class_index) +
                                " is not regular");
    }
    std::vector<double> out;
    out.reserve(points.size());
    for (const SeriesPoint& point : points) out.push_back(*point.area_km2);
    return out;
}

ClassAreaSeries regularize(const ClassAreaSeries& series, Quarter start, Quarter end) {
    if (start > end) {
        throw InvalidInputError("empty regularization window: " + start.to_string() + " to " +
                                end.to_string());
    }
    std::vector<std::pair<int, double>> observed;
    int previous = std::numeric_limits<int>::min();
    for (const SeriesPoint& point : series.points) {
        int index = point.quarter.index();
        if (index <= previous) {
            throw InvalidInputError("series quarters must be strictly increasing");
        }
        previous = index;
        if (!point.area_km2.has_value()) continue;
        if (!std::isfinite(*point.area_km2)) {
            throw InvalidInputError("series contains a non-finite value at " +
                                    point.quarter.to_string());
        }
        observed.emplace_back(index, *point.area_km2);
    }
    if (observed.empty()) {
        throw InvalidInputError("series has no observed values to regularize from");
    }
    bool any_in_window = std::any_of(observed.begin(), observed.end(), [&](const auto& o) {
        return o.first >= start.index() && o.first <= end.index();
    });
    if (!any_in_window) {
        throw InvalidInputError("series has no observed value inside " + start.to_string() +
                                " to " + end.to_string());
    }

    ClassAreaSeries out;
    out.class_index = series.class_index;
    out.points.reserve(std::size_t(end.index() - start.index() + 1));
    for (int index = start.index(); index <= end.index(); ++index) {
        auto after = std::lower_bound(observed.begin(), observed.end(), index,
                                      [](const auto& o, int i) { return o.first < i; });
        double value;
        if (after != observed.end() && after->first == index) {
            value = after->second;
        } else if (after == observed.end()) {
            value = observed.back().second;  // hold last observation
        } else if (after == observed.begin()) {
            value = observed.front().second;  // hold first observation
        } else {
            auto before = std::prev(after);
            double t = double(index - before->first) / double(after->first - before->first);
            value = before->second + t * (after->second - before->second);
        }
        out.points.push_back({Quarter::from_index(index), value});
    }
    return out;
}

std::vector<double> difference(std::span<const double> values, int d) {
    if (d < 0) throw InvalidInputError("difference order must be non-negative");
    if (values.size() <= std::size_t(d)) {
        throw InvalidInputError("sequence too short to difference " + std::to_string(d) +
                                " times: length " + std::to_string(values.size()));
    }
    std::vector<double> out(values.begin(), values.end());
    for (int pass = 0; pass < d; ++pass) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

std::vector<double> undifference(std::span<const double> diffs, std::span<const double> anchors) {
    if (anchors.empty()) return {diffs.begin(), diffs.end()};
    // Integrate one level against the last value of the (d-1)-fold
    // differenced series, then recurse with one fewer anchor.
    std::vector<double> anchor_vec(anchors.begin(), anchors.end());
    double base = difference(anchor_vec, int(anchors.size()) - 1).back();
    std::vector<double> integrated;
    integrated.reserve(diffs.size());
    double acc = base;
    for (double v : diffs) {
        acc += v;
        integrated.push_back(acc);
    }
    if (anchors.size() == 1) return integrated;
    return undifference(integrated, anchors.subspan(1));
}

std::vector<double> acf(std::span<const double> values, int max_lag) {
    if (max_lag < 0) throw InvalidInputError("max lag must be non-negative");
    if (values.size() < std::size_t(max_lag) + 2) {
        throw InvalidInputError("series too short for lag " + std::to_string(max_lag) +
                                ": need at least " + std::to_string(max_lag + 2) + " values");
    }
    double mean = 0;
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidInputError("series contains a non-finite value");
        mean += v;
    }
    mean /= double(values.size());
    double denom = 0;
    for (double v : values) denom += (v - mean) * (v - mean);
    if (denom == 0) throw NumericError("autocorrelation is undefined for a zero-variance series");

    std::vector<double> r(std::size_t(max_lag) + 1);
    r[0] = 1.0;
    for (int k = 1; k <= max_lag; ++k) {
        double num = 0;
        for (std::size_t t = 0; t + std::size_t(k) < values.size(); ++t) {
            num += (values[t] - mean) * (values[t + std::size_t(k)] - mean);
        }
        r[std::size_t(k)] = num / denom;
    }
    return r;
}

namespace {

// Least squares via Householder QR on the m x k design matrix (column-major).
// Returns false when the design is rank deficient at the scale-relative
// tolerance, in which case the caller takes the documented fallback.
bool qr_least_squares(std::vector<double>& a, std::vector<double>& y, std::size_t m, std::size_t k,
                      std::vector<double>& beta) {
    double max_norm = 0;
    for (std::size_t j = 0; j < k; ++j) {
        double norm = 0;
        for (std::size_t i = 0; i < m; ++i) norm += a[j * m + i] * a[j * m + i];
        max_norm = std::max(max_norm, std::sqrt(norm));
    }
    const double tol =
        max_norm * double(std::max(m, k)) * std::numeric_limits<double>::epsilon();

    std::vector<double> v(m);
    for (std::size_t j = 0; j < k; ++j) {
        double norm = 0;
        for (std::size_t i = j; i < m; ++i) norm += a[j * m + i] * a[j * m + i];
        norm = std::sqrt(norm);
        if (norm <= tol) return false;

        double x0 = a[j * m + j];
        double alpha = x0 > 0 ? -norm : norm;
        double vtv = 0;
        for (std::size_t i = j; i < m; ++i) {
            v[i] = a[j * m + i];
            if (i == j) v[i] -= alpha;
            vtv += v[i] * v[i];
        }
        a[j * m + j] = alpha;
        for (std::size_t i = j + 1; i < m; ++i) a[j * m + i] = 0;

        for (std::size_t c = j + 1; c < k; ++c) {
            double dot = 0;
            for (std::size_t i = j; i < m; ++i) dot += v[i] * a[c * m + i];
            double s = 2.0 * dot / vtv;
            for (std::size_t i = j; i < m; ++i) a[c * m + i] -= s * v[i];
        }
        double dot = 0;
        for (std::size_t i = j; i < m; ++i) dot += v[i] * y[i];
        double s = 2.0 * dot / vtv;
        for (std::size_t i = j; i < m; ++i) y[i] -= s * v[i];
    }

    beta.assign(k, 0.0);
    for (std::size_t j = k; j-- > 0;) {
        double value = y[j];
        for (std::size_t c = j + 1; c < k; ++c) value -= a[c * m + j] * beta[c];
        beta[j] = value / a[j * m + j];
    }
    return true;
}

}  // namespace

ArimaModel fit_arima(std::span<const double> values, int p, int d) {
    if (p < 0) throw InvalidInputError("AR order must be non-negative");
    if (d < 0) throw InvalidInputError("difference order must be non-negative");
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidInputError("series contains a non-finite value");
    }
    if (values.size() < std::size_t(p + d + 5)) {
        throw InvalidInputError("series too short to fit ARIMA(" + std::to_string(p) + "," +
                                std::to_string(d) + ",0): need at least " +
                                std::to_string(p + d + 5) + " observations, got " +
                                std::to_string(values.size()));
    }

    const std::vector<double> w = difference(values, d);
    const std::size_t n = w.size();
    const std::size_t m = n - std::size_t(p);
    const std::size_t k = std::size_t(p) + 1;

    // Design: row t has [1, w_{t-1}, ..., w_{t-p}] for t = p..n-1.
    std::vector<double> a(m * k);
    std::vector<double> rhs(m);
    for (std::size_t t = 0; t < m; ++t) {
        a[t] = 1.0;
        for (int i = 1; i <= p; ++i) {
            a[std::size_t(i) * m + t] = w[t + std::size_t(p - i)];
        }
        rhs[t] = w[t + std::size_t(p)];
    }

    ArimaModel model;
    model.p = p;
    model.d = d;
    std::vector<double> beta;
    std::vector<double> design = a;
    std::vector<double> transformed = rhs;
    if (qr_least_squares(design, transformed, m, k, beta)) {
        model.c = beta[0];
        model.phi.assign(beta.begin() + 1, beta.end());
    } else {
        double mean = 0;
        for (double v : w) mean += v;
        model.c = mean / double(n);
        model.phi.assign(std::size_t(p), 0.0);
    }

    double rss = 0;
    for (std::size_t t = 0; t < m; ++t) {
        double fitted = model.c;
        for (int i = 1; i <= p; ++i) {
            fitted += model.phi[std::size_t(i - 1)] * a[std::size_t(i) * m + t];
        }
        double r = rhs[t] - fitted;
        rss += r * r;
    }
    const std::ptrdiff_t dof = std::ptrdiff_t(m) - std::ptrdiff_t(k);
    model.sigma2 = dof > 0 ? rss / double(dof) : 0.0;
    model.tail.assign(values.end() - (p + d), values.end());

    if (!std::isfinite(model.c) || !std::isfinite(model.sigma2) ||
        std::any_of(model.phi.begin(), model.phi.end(),
                    [](double v) { return !std::isfinite(v); })) {
        throw NumericError("ARIMA fit produced non-finite parameters");
    }
    return model;
}

std::vector<double> forecast(const ArimaModel& model, int horizon) {
    if (horizon < 1) throw InvalidInputError("forecast horizon must be at least 1");
    if (model.q != 0) throw InvalidInputError("only q == 0 models are supported");
    if (model.phi.size() != std::size_t(model.p) ||
        model.tail.size() != std::size_t(model.p + model.d)) {
        throw InvalidInputError("model tail or coefficient count does not match its orders");
    }

    // AR recursion on the differenced scale, seeded with the differenced tail.
    std::vector<double> hist =
        model.p > 0 ? difference(model.tail, model.d) : std::vector<double>{};
    hist.reserve(hist.size() + std::size_t(horizon));
    for (int h = 0; h < horizon; ++h) {
        double value = model.c;
        for (int i = 1; i <= model.p; ++i) {
            value += model.phi[std::size_t(i - 1)] * hist[hist.size() - std::size_t(i)];
        }
        hist.push_back(value);
    }

    std::span<const double> diffs(hist.data() + model.p, std::size_t(horizon));
    std::span<const double> anchors(model.tail.data() + model.p, std::size_t(model.d));
    std::vector<double> levels = undifference(diffs, anchors);
    for (double& v : levels) v = std::max(0.0, v);
    return levels;
}

ForecastGrid forecast_grid(const std::array<ClassAreaSeries, kNumClasses>& series, Quarter target,
                           int p, int d) {
    for (int k = 0; k < kNumClasses; ++k) {
        const ClassAreaSeries& s = series[std::size_t(k)];
        if (s.class_index != k || !s.regular()) {
            throw InvalidInputError("forecast requires regular per-class series in class order");
        }
        if (s.points.front().quarter != series[0].points.front().quarter ||
            s.points.back().quarter != series[0].points.back().quarter) {
            throw InvalidInputError("forecast requires all class series to share one window");
        }
    }
    const Quarter end = series[0].points.back().quarter;
    if (target < end) {
        throw InvalidInputError("target precedes series end: target " + target.to_string() +
                                ", series ends " + end.to_string());
    }

    ForecastGrid grid;
    grid.first = end.next();
    const int horizon = target.index() - end.index();
    if (horizon == 0) return grid;

    grid.rows.assign(std::size_t(horizon), {});
    for (int k = 0; k < kNumClasses; ++k) {
        ArimaModel model = fit_arima(series[std::size_t(k)].values(), p, d);
        std::vector<double> levels = forecast(model, horizon);
        for (int h = 0; h < horizon; ++h) {
            grid.rows[std::size_t(h)][std::size_t(k)] = levels[std::size_t(h)];
        }
    }
    return grid;
}

ForecastTable forecast_table(const std::array<ClassAreaSeries, kNumClasses>& series,
                             Quarter target, int p, int d, const Palette& palette) {
    ForecastGrid grid = forecast_grid(series, target, p, d);

    std::array<double, kNumClasses> last{};
    for (int k = 0; k < kNumClasses; ++k) {
        last[std::size_t(k)] = *series[std::size_t(k)].points.back().area_km2;
    }
    const std::array<double, kNumClasses>& at_target = grid.rows.empty() ? last : grid.rows.back();

    ForecastTable table;
    table.rows = change_table(last, at_target, palette);
    table.bui = built_up_index(at_target, palette);
    return table;
}

}  // namespace landpatch

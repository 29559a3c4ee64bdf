// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#include "landpatch/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "landpatch/errors.hpp"

namespace landpatch {

namespace {

void check_patch_shape(const RasterView& patch, int expected) {
    if (patch.width() != expected || patch.height() != expected) {
        throw InvalidInputError("patch dimension mismatch: got " + std::to_string(patch.width()) +
                                "x" + std::to_string(patch.height()) + ", classifier expects " +
                                std::to_string(expected) + "x" + std::to_string(expected));
    }
}

ClassDistribution one_hot(int index) {
    ClassDistribution dist;
    dist.p[std::size_t(index)] = 1.0;
    return dist;
}

void check_class_index(int index, const std::string& what) {
    if (index < 0 || index >= kNumClasses) {
        throw InvalidInputError(what + " out of range: " + std::to_string(index));
    }
}

void check_patch_size(int patch_size) {
    if (patch_size < 1) {
        throw InvalidInputError("patch size must be positive: " + std::to_string(patch_size));
    }
}

}  // namespace

PatchFeatures extract_features(const RasterView& patch) {
    if (patch.width() < 1 || patch.height() < 1) {
        throw InvalidInputError("cannot extract features from an empty patch");
    }
    // Exact integer accumulation: per-channel sums and sums of squares fit
    // comfortably in 64 bits for any supported patch, and the (mean, std)
    // pair derived from them does not depend on traversal order.
    std::uint64_t sum[3] = {0, 0, 0};
    std::uint64_t sumsq[3] = {0, 0, 0};
    for (int y = 0; y < patch.height(); ++y) {
        const std::uint8_t* row = patch.row(y);
        for (int x = 0; x < patch.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                std::uint64_t v = row[3 * x + c];
                sum[c] += v;
                sumsq[c] += v * v;
            }
        }
    }
    std::uint64_t n = std::uint64_t(patch.width()) * std::uint64_t(patch.height());
    PatchFeatures features;
    for (int c = 0; c < 3; ++c) {
        features.values[std::size_t(c)] = double(sum[c]) / double(n);
        // Population variance as an exact integer ratio: (n*sumsq - sum^2) / n^2.
        unsigned __int128 num = (unsigned __int128)n * sumsq[c] -
                                (unsigned __int128)sum[c] * sum[c];
        double variance = double(num) / (double(n) * double(n));
        features.values[std::size_t(c + 3)] = std::sqrt(variance);
    }
    return features;
}

ClassDistribution classify_linear(const LinearSoftmaxModel& model, const PatchFeatures& features) {
    std::array<double, kNumClasses> logits{};
    for (int k = 0; k < kNumClasses; ++k) {
        double z = model.biases[std::size_t(k)];
        for (int j = 0; j < 6; ++j) {
            z += model.weights[std::size_t(k)][std::size_t(j)] *
                 (features.values[std::size_t(j)] / model.feature_scale[std::size_t(j)]);
        }
        logits[std::size_t(k)] = z;
    }
    double max_logit = *std::max_element(logits.begin(), logits.end());
    ClassDistribution dist;
    double total = 0;
    for (int k = 0; k < kNumClasses; ++k) {
        double e = std::exp(logits[std::size_t(k)] - max_logit);
        dist.p[std::size_t(k)] = e;
        total += e;
    }
    for (double& p : dist.p) p /= total;
    return dist;
}

ConstantClassifier::ConstantClassifier(int class_index, int patch_size)
    : class_index_(class_index), patch_size_(patch_size) {
    check_class_index(class_index, "constant classifier class");
    check_patch_size(patch_size);
}

ClassDistribution ConstantClassifier::classify(const RasterView& patch) const {
    check_patch_shape(patch, patch_size_);
    return one_hot(class_index_);
}

CentroidClassifier::CentroidClassifier(const Centroids& centroids, int patch_size)
    : centroids_(centroids), patch_size_(patch_size) {
    check_patch_size(patch_size);
    for (const auto& c : centroids_) {
        for (double v : c) {
            if (!std::isfinite(v)) throw InvalidInputError("centroid values must be finite");
        }
    }
}

CentroidClassifier CentroidClassifier::from_palette(const Palette& palette, int patch_size) {
    Centroids centroids{};
    for (int k = 0; k < kNumClasses; ++k) {
        Rgb color = palette.class_at(k).color;
        centroids[std::size_t(k)] = {double(color.r), double(color.g), double(color.b)};
    }
    return CentroidClassifier(centroids, patch_size);
}

ClassDistribution CentroidClassifier::classify(const RasterView& patch) const {
    check_patch_shape(patch, patch_size_);
    PatchFeatures features = extract_features(patch);
    int best = 0;
    double best_d2 = 0;
    for (int k = 0; k < kNumClasses; ++k) {
        double d2 = 0;
        for (int c = 0; c < 3; ++c) {
            double diff = features.values[std::size_t(c)] - centroids_[std::size_t(k)][std::size_t(c)];
            d2 += diff * diff;
        }
        if (k == 0 || d2 < best_d2) {
            best = k;
            best_d2 = d2;
        }
    }
    return one_hot(best);
}

LinearSoftmaxClassifier::LinearSoftmaxClassifier(const LinearSoftmaxModel& model, int patch_size)
    : model_(model), patch_size_(patch_size) {
    check_patch_size(patch_size);
    for (const auto& row : model_.weights) {
        for (double w : row) {
            if (!std::isfinite(w)) throw InvalidInputError("model weights must be finite");
        }
    }
    for (double b : model_.biases) {
        if (!std::isfinite(b)) throw InvalidInputError("model biases must be finite");
    }
    for (double s : model_.feature_scale) {
        if (!std::isfinite(s) || s <= 0) {
            throw InvalidInputError("model feature scales must be positive and finite");
        }
    }
}

ClassDistribution LinearSoftmaxClassifier::classify(const RasterView& patch) const {
    check_patch_shape(patch, patch_size_);
    return classify_linear(model_, extract_features(patch));
}

namespace {

// Token stream over the model file with '#' comments stripped.
class TokenReader {
public:
    explicit TokenReader(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open model file: " + path.string());
        std::string line;
        std::string all;
        while (std::getline(in, line)) {
            std::size_t comment = line.find('#');
            if (comment != std::string::npos) line.resize(comment);
            all += line;
            all += '\n';
        }
        std::stringstream ss(all);
        std::string token;
        while (ss >> token) tokens_.push_back(token);
    }

    std::string next(const std::string& what) {
        if (pos_ >= tokens_.size()) {
            throw InvalidInputError("malformed model file: unexpected end of file, expected " +
                                    what);
        }
        return tokens_[pos_++];
    }

    void expect(const std::string& literal) {
        std::string token = next("'" + literal + "'");
        if (token != literal) {
            throw InvalidInputError("malformed model file: expected '" + literal + "', got '" +
                                    token + "'");
        }
    }

    int next_int(const std::string& what, int lo, int hi) {
        std::string token = next(what);
        try {
            std::size_t used = 0;
            int value = std::stoi(token, &used);
            if (used != token.size() || value < lo || value > hi) throw std::invalid_argument("");
            return value;
        } catch (const std::exception&) {
            throw InvalidInputError("malformed model file: bad " + what + " '" + token + "'");
        }
    }

    double next_double(const std::string& what) {
        std::string token = next(what);
        try {
            std::size_t used = 0;
            double value = std::stod(token, &used);
            if (used != token.size() || !std::isfinite(value)) throw std::invalid_argument("");
            return value;
        } catch (const std::exception&) {
            throw InvalidInputError("malformed model file: non-finite or bad " + what + " '" +
                                    token + "'");
        }
    }

    bool done() const { return pos_ >= tokens_.size(); }

private:
    std::vector<std::string> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace

std::unique_ptr<Classifier> load_model(const std::filesystem::path& path) {
    TokenReader reader(path);
    reader.expect("landpatch-model");
    reader.expect("v1");
    reader.expect("kind");
    std::string kind = reader.next("classifier kind");
    reader.expect("patch_size");
    int patch_size = reader.next_int("patch size", 1, 1 << 16);

    std::unique_ptr<Classifier> classifier;
    if (kind == "constant") {
        reader.expect("class");
        int index = reader.next_int("class index", 0, kNumClasses - 1);
        classifier = std::make_unique<ConstantClassifier>(index, patch_size);
    } else if (kind == "centroid") {
        CentroidClassifier::Centroids centroids{};
        std::array<bool, kNumClasses> seen{};
        for (int i = 0; i < kNumClasses; ++i) {
            int index = reader.next_int("centroid class index", 0, kNumClasses - 1);
            if (seen[std::size_t(index)]) {
                throw InvalidInputError("malformed model file: duplicate centroid for class " +
                                        std::to_string(index));
            }
            seen[std::size_t(index)] = true;
            for (int c = 0; c < 3; ++c) {
                centroids[std::size_t(index)][std::size_t(c)] =
                    reader.next_double("centroid component");
            }
        }
        classifier = std::make_unique<CentroidClassifier>(centroids, patch_size);
    } else if (kind == "linear_softmax") {
        LinearSoftmaxModel model;
        reader.expect("scale");
        for (int j = 0; j < 6; ++j) {
            model.feature_scale[std::size_t(j)] = reader.next_double("feature scale");
        }
        std::array<bool, kNumClasses> seen{};
        for (int i = 0; i < kNumClasses; ++i) {
            int index = reader.next_int("weight-row class index", 0, kNumClasses - 1);
            if (seen[std::size_t(index)]) {
                throw InvalidInputError("malformed model file: duplicate weight row for class " +
                                        std::to_string(index));
            }
            seen[std::size_t(index)] = true;
            for (int j = 0; j < 6; ++j) {
                model.weights[std::size_t(index)][std::size_t(j)] =
                    reader.next_double("weight");
            }
            model.biases[std::size_t(index)] = reader.next_double("bias");
        }
        classifier = std::make_unique<LinearSoftmaxClassifier>(model, patch_size);
    } else {
        throw InvalidInputError("malformed model file: unknown kind '" + kind + "'");
    }

    if (!reader.done()) {
        throw InvalidInputError("malformed model file: unexpected trailing content");
    }
    return classifier;
}

}  // namespace landpatch

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <string_view>

#include "landpatch/palette.hpp"
#include "landpatch/raster.hpp"

namespace landpatch {

/// A probability distribution over the 10 land-use classes. Entries are
/// non-negative and sum to 1 (within 1e-9).
struct ClassDistribution {
    std::array<double, kNumClasses> p{};

    /// Index of the largest probability; ties break to the lowest index.
    int argmax() const noexcept {
        int best = 0;
        for (int k = 1; k < kNumClasses; ++k) {
            if (p[k] > p[best]) best = k;
        }
        return best;
    }
};

/// Summary features of a patch: per-channel population mean and population
/// standard deviation, in the fixed order
/// (mean_r, mean_g, mean_b, std_r, std_g, std_b).
struct PatchFeatures {
    std::array<double, 6> values{};
};

/// Population mean and standard deviation per channel over all pixels of
/// the patch. Accumulation is exact (integer sums), so results are
/// bit-identical regardless of evaluation order.
PatchFeatures extract_features(const RasterView& patch);

/// Parameters of the file-loadable linear-softmax classifier. Features are
/// divided by feature_scale before the affine map.
struct LinearSoftmaxModel {
    std::array<std::array<double, 6>, kNumClasses> weights{};
    std::array<double, kNumClasses> biases{};
    std::array<double, 6> feature_scale{1, 1, 1, 1, 1, 1};
};

/// softmax(weights . (features / feature_scale) + biases), computed in
/// double precision with max-subtraction so large logits stay finite.
ClassDistribution classify_linear(const LinearSoftmaxModel& model, const PatchFeatures& features);

/// Patch-classification contract. Implementations are immutable after
/// construction, reentrant, and deterministic: identical patch bytes always
/// yield bitwise-identical distributions.
class Classifier {
public:
    virtual ~Classifier() = default;

    /// Side length of the square patches this classifier accepts.
    virtual int patch_size() const = 0;

    /// Classifies one patch_size x patch_size patch.
    /// Throws InvalidInputError on a patch dimension mismatch.
    virtual ClassDistribution classify(const RasterView& patch) const = 0;

    virtual std::string_view kind() const = 0;
};

/// Always answers the same class with probability 1.
class ConstantClassifier final : public Classifier {
public:
    ConstantClassifier(int class_index, int patch_size);

    int patch_size() const override { return patch_size_; }
    ClassDistribution classify(const RasterView& patch) const override;
    std::string_view kind() const override { return "constant"; }

private:
    int class_index_;
    int patch_size_;
};

/// Nearest-centroid on the patch's mean RGB, by Euclidean distance.
/// Ties break to the lowest class index. The answer is one-hot.
class CentroidClassifier final : public Classifier {
public:
    using Centroids = std::array<std::array<double, 3>, kNumClasses>;

    CentroidClassifier(const Centroids& centroids, int patch_size);

    /// Centroids at the palette's class colors.
    static CentroidClassifier from_palette(const Palette& palette, int patch_size);

    int patch_size() const override { return patch_size_; }
    ClassDistribution classify(const RasterView& patch) const override;
    std::string_view kind() const override { return "centroid"; }

private:
    Centroids centroids_;
    int patch_size_;
};

/// Linear-softmax on the 6 summary features.
class LinearSoftmaxClassifier final : public Classifier {
public:
    LinearSoftmaxClassifier(const LinearSoftmaxModel& model, int patch_size);

    int patch_size() const override { return patch_size_; }
    ClassDistribution classify(const RasterView& patch) const override;
    std::string_view kind() const override { return "linear_softmax"; }

    const LinearSoftmaxModel& model() const noexcept { return model_; }

private:
    LinearSoftmaxModel model_;
    int patch_size_;
};

/// Loads a model file (see the model-file format in the README) and returns
/// the classifier it declares: constant, centroid, or linear_softmax.
/// Throws InvalidInputError on malformed files.
std::unique_ptr<Classifier> load_model(const std::filesystem::path& path);

}  // namespace landpatch

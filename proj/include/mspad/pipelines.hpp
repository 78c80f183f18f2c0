#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "mspad/dataset.hpp"
#include "mspad/fusion.hpp"
#include "mspad/lbp.hpp"
#include "mspad/svm.hpp"

namespace mspad {

// Labels: +1 bonafide, -1 attack.
struct LabeledCube {
    SpectralCube cube;
    int label = 0;
};

// Per-band dev-set score ranges; only populated when min-max normalization
// before the sum rule is requested (off by default).
struct ScoreNormStats {
    std::array<double, kNumBands> min{};
    std::array<double, kNumBands> max{};
};

// Late fusion: one SVM per band over that band's LBP histogram, decision
// scores combined by a plain sum.
struct ScoreFusionPipeline {
    std::array<SvmModel, kNumBands> per_band_models;
    std::optional<ScoreNormStats> norm;
};

// Early fusion: wavelet-averaged composite image, then LBP + one SVM.
struct ImageFusionPipeline {
    SvmModel model;
    FusionWeights weights = FusionWeights::uniform();
};

// Feature extraction steps shared by training and scoring.
std::array<FeatureVector, kNumBands> band_features(const SpectralCube& cube);
FeatureVector fused_features(const SpectralCube& cube, const FusionWeights& weights);

ScoreFusionPipeline train_score_fusion(const std::vector<LabeledCube>& train, double C, uint64_t seed);
double score_score_fusion(const ScoreFusionPipeline& p, const SpectralCube& cube);
double score_score_fusion(const ScoreFusionPipeline& p, const std::array<FeatureVector, kNumBands>& feats);

ImageFusionPipeline train_image_fusion(const std::vector<LabeledCube>& train, const FusionWeights& weights, double C,
                                       uint64_t seed);
double score_image_fusion(const ImageFusionPipeline& p, const SpectralCube& cube);

// Feature-level variants used by the protocol harness (features cached once
// per dataset rather than re-extracted per run).
ScoreFusionPipeline train_score_fusion_features(const std::vector<std::array<FeatureVector, kNumBands>>& feats,
                                                const std::vector<int>& labels, double C, uint64_t seed);
ImageFusionPipeline train_image_fusion_features(const std::vector<FeatureVector>& feats, const std::vector<int>& labels,
                                                const FusionWeights& weights, double C, uint64_t seed);

void save_score_fusion(const ScoreFusionPipeline& p, const std::filesystem::path& path);
ScoreFusionPipeline load_score_fusion(const std::filesystem::path& path);
void save_image_fusion(const ImageFusionPipeline& p, const std::filesystem::path& path);
ImageFusionPipeline load_image_fusion(const std::filesystem::path& path);

}  // namespace mspad

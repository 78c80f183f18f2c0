#include "mspad/pipelines.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "mspad/rng.hpp"

namespace mspad {

std::array<FeatureVector, kNumBands> band_features(const SpectralCube& cube) {
    std::array<FeatureVector, kNumBands> out;
    for (int b = 0; b < kNumBands; ++b) out[static_cast<size_t>(b)] = lbp_histogram(cube.band_unit(b));
    return out;
}

FeatureVector fused_features(const SpectralCube& cube, const FusionWeights& weights) {
    return lbp_histogram(fuse_cube(cube, weights));
}

ScoreFusionPipeline train_score_fusion_features(const std::vector<std::array<FeatureVector, kNumBands>>& feats,
                                                const std::vector<int>& labels, double C, uint64_t seed) {
    if (feats.size() != labels.size()) throw std::invalid_argument("features/labels size mismatch");
    ScoreFusionPipeline p;
    for (int b = 0; b < kNumBands; ++b) {
        std::vector<std::vector<double>> X;
        X.reserve(feats.size());
        for (const auto& f : feats) X.push_back(feature_as_vector(f[static_cast<size_t>(b)]));
        try {
            p.per_band_models[static_cast<size_t>(b)] =
                svm_train(X, labels, C, hash_combine(seed, static_cast<uint64_t>(b))).model;
        } catch (const std::exception& e) {
            throw std::runtime_error("training band " + std::to_string(band_wavelength(b)) + "nm model failed: " +
                                     e.what());
        }
    }
    return p;
}

ScoreFusionPipeline train_score_fusion(const std::vector<LabeledCube>& train, double C, uint64_t seed) {
    std::vector<std::array<FeatureVector, kNumBands>> feats;
    std::vector<int> labels;
    feats.reserve(train.size());
    for (const auto& s : train) {
        feats.push_back(band_features(s.cube));
        labels.push_back(s.label);
    }
    return train_score_fusion_features(feats, labels, C, seed);
}

double score_score_fusion(const ScoreFusionPipeline& p, const std::array<FeatureVector, kNumBands>& feats) {
    // Sum accumulated in band order for determinism.
    double total = 0.0;
    for (int b = 0; b < kNumBands; ++b) {
        double s = p.per_band_models[static_cast<size_t>(b)].score(feats[static_cast<size_t>(b)]);
        if (p.norm) {
            const double lo = p.norm->min[static_cast<size_t>(b)], hi = p.norm->max[static_cast<size_t>(b)];
            s = hi > lo ? (s - lo) / (hi - lo) : 0.5;
        }
        total += s;
    }
    return total;
}

double score_score_fusion(const ScoreFusionPipeline& p, const SpectralCube& cube) {
    return score_score_fusion(p, band_features(cube));
}

ImageFusionPipeline train_image_fusion_features(const std::vector<FeatureVector>& feats, const std::vector<int>& labels,
                                                const FusionWeights& weights, double C, uint64_t seed) {
    weights.validate();
    std::vector<std::vector<double>> X;
    X.reserve(feats.size());
    for (const auto& f : feats) X.push_back(feature_as_vector(f));
    ImageFusionPipeline p;
    p.weights = weights;
    p.model = svm_train(X, labels, C, seed).model;
    return p;
}

ImageFusionPipeline train_image_fusion(const std::vector<LabeledCube>& train, const FusionWeights& weights, double C,
                                       uint64_t seed) {
    std::vector<FeatureVector> feats;
    std::vector<int> labels;
    feats.reserve(train.size());
    for (const auto& s : train) {
        feats.push_back(fused_features(s.cube, weights));
        labels.push_back(s.label);
    }
    return train_image_fusion_features(feats, labels, weights, C, seed);
}

double score_image_fusion(const ImageFusionPipeline& p, const SpectralCube& cube) {
    return p.model.score(fused_features(cube, p.weights));
}

namespace {

nlohmann::json svm_to_json(const SvmModel& m) {
    return {{"w", m.w}, {"b", m.b}, {"c", m.c}, {"mean", m.mean}, {"std", m.std_dev}};
}

SvmModel svm_from_json(const nlohmann::json& j) {
    SvmModel m;
    m.w = j.at("w").get<std::vector<double>>();
    m.b = j.at("b").get<double>();
    m.c = j.at("c").get<double>();
    m.mean = j.at("mean").get<std::vector<double>>();
    m.std_dev = j.at("std").get<std::vector<double>>();
    return m;
}

void dump_atomic(const nlohmann::json& j, const std::filesystem::path& path) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw std::runtime_error("cannot write: " + path.string());
        f << j.dump() << "\n";
    }
    std::filesystem::rename(tmp, path);
}

nlohmann::json parse_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path.string());
    nlohmann::json j;
    f >> j;
    return j;
}

}  // namespace

void save_score_fusion(const ScoreFusionPipeline& p, const std::filesystem::path& path) {
    nlohmann::json j;
    j["method"] = "score_fusion";
    auto& models = j["models"] = nlohmann::json::array();
    for (const auto& m : p.per_band_models) models.push_back(svm_to_json(m));
    if (p.norm) {
        j["score_norm"]["min"] = p.norm->min;
        j["score_norm"]["max"] = p.norm->max;
    }
    dump_atomic(j, path);
}

ScoreFusionPipeline load_score_fusion(const std::filesystem::path& path) {
    const nlohmann::json j = parse_file(path);
    if (j.at("method") != "score_fusion") throw std::runtime_error("not a score_fusion pipeline: " + path.string());
    ScoreFusionPipeline p;
    const auto& models = j.at("models");
    if (models.size() != kNumBands) throw std::runtime_error("expected 9 models: " + path.string());
    for (size_t b = 0; b < kNumBands; ++b) p.per_band_models[b] = svm_from_json(models[b]);
    if (j.contains("score_norm")) {
        ScoreNormStats n;
        n.min = j["score_norm"]["min"].get<std::array<double, 9>>();
        n.max = j["score_norm"]["max"].get<std::array<double, 9>>();
        p.norm = n;
    }
    return p;
}

void save_image_fusion(const ImageFusionPipeline& p, const std::filesystem::path& path) {
    nlohmann::json j;
    j["method"] = "image_fusion";
    j["model"] = svm_to_json(p.model);
    j["weights"] = p.weights.w;
    dump_atomic(j, path);
}

ImageFusionPipeline load_image_fusion(const std::filesystem::path& path) {
    const nlohmann::json j = parse_file(path);
    if (j.at("method") != "image_fusion") throw std::runtime_error("not an image_fusion pipeline: " + path.string());
    ImageFusionPipeline p;
    p.model = svm_from_json(j.at("model"));
    p.weights.w = j.at("weights").get<std::array<double, 9>>();
    p.weights.validate();
    return p;
}

}  // namespace mspad

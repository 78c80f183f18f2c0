#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mspad/lbp.hpp"

namespace mspad {

// Linear soft-margin SVM over standardized features. Scores are
// w . standardize(x) + b, higher meaning more bonafide-like.
struct SvmModel {
    std::vector<double> w;
    double b = 0.0;
    double c = 1.0;
    std::vector<double> mean;
    std::vector<double> std_dev;  // floored at 1e-8

    double score(const std::vector<double>& x) const;
    double score(const FeatureVector& fv) const;

    bool operator==(const SvmModel&) const = default;
};

struct SvmTrainResult {
    SvmModel model;
    double dual_objective = 0.0;
    double kkt_gap = 0.0;  // max violating pair gap at termination
    std::size_t iterations = 0;
};

// SMO with max-violating-pair working-set selection, KKT tolerance 1e-3,
// hard cap 1e6 iterations. Class imbalance handled by per-class box
// constraints: C+ = C * n- / n+, C- = C. Labels are +1 bonafide, -1 attack.
// Deterministic for fixed (data, C, seed).
SvmTrainResult svm_train(const std::vector<std::vector<double>>& features, const std::vector<int>& labels, double C,
                         uint64_t seed);

inline double decision_score(const SvmModel& model, const FeatureVector& x) { return model.score(x); }

void save_svm(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_svm(const std::filesystem::path& path);

std::vector<double> feature_as_vector(const FeatureVector& fv);

}  // namespace mspad

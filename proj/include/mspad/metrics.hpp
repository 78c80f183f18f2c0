#pragma once

#include <utility>
#include <vector>

#include "mspad/types.hpp"

namespace mspad {

// Decision convention, fixed globally: score >= threshold means the sample
// is classified bonafide.
struct ScoreSet {
    std::vector<double> bonafide_scores;
    std::vector<double> attack_scores;
};

struct DetPoint {
    double apcer = 0.0;
    double bpcer = 0.0;
    double threshold = 0.0;
};

struct EerResult {
    double deer = 0.0;      // percent
    double threshold = 0.0;
};

struct EvalReport {
    double d_eer = 0.0;
    double eer_threshold = 0.0;
    double bpcer_at_apcer5 = 0.0;
    double bpcer_at_apcer10 = 0.0;
    std::vector<DetPoint> det_points;
};

// Percent of attacks accepted as bonafide at the threshold.
double apcer(const ScoreSet& scores, double threshold);
// Percent of bonafide rejected at the threshold.
double bpcer(const ScoreSet& scores, double threshold);

// Midpoints between adjacent sorted unique pooled scores, plus -inf/+inf
// sentinels. Every metric below sweeps exactly these.
std::vector<double> candidate_thresholds(const ScoreSet& scores);

// Threshold minimizing |APCER - BPCER| over the candidate sweep, ties broken
// toward the lower threshold; rate reported as (APCER + BPCER) / 2 there.
EerResult d_eer(const ScoreSet& scores);

// BPCER at the smallest candidate threshold achieving APCER <= alpha.
double bpcer_at_apcer(const ScoreSet& scores, double alpha);

std::vector<DetPoint> det_points(const ScoreSet& scores);

EvalReport evaluate_scores(const ScoreSet& scores);

}  // namespace mspad

#include "mspad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mspad {

double apcer(const ScoreSet& scores, double threshold) {
    if (scores.attack_scores.empty()) throw std::invalid_argument("apcer: empty attack score list");
    size_t accepted = 0;
    for (double s : scores.attack_scores)
        if (s >= threshold) ++accepted;
    return 100.0 * static_cast<double>(accepted) / static_cast<double>(scores.attack_scores.size());
}

double bpcer(const ScoreSet& scores, double threshold) {
    if (scores.bonafide_scores.empty()) throw std::invalid_argument("bpcer: empty bonafide score list");
    size_t rejected = 0;
    for (double s : scores.bonafide_scores)
        if (s < threshold) ++rejected;
    return 100.0 * static_cast<double>(rejected) / static_cast<double>(scores.bonafide_scores.size());
}

std::vector<double> candidate_thresholds(const ScoreSet& scores) {
    std::vector<double> pooled = scores.bonafide_scores;
    pooled.insert(pooled.end(), scores.attack_scores.begin(), scores.attack_scores.end());
    std::sort(pooled.begin(), pooled.end());
    pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

    std::vector<double> out;
    out.reserve(pooled.size() + 1);
    out.push_back(-std::numeric_limits<double>::infinity());
    for (size_t i = 0; i + 1 < pooled.size(); ++i) out.push_back(0.5 * (pooled[i] + pooled[i + 1]));
    out.push_back(std::numeric_limits<double>::infinity());
    return out;
}

EerResult d_eer(const ScoreSet& scores) {
    if (scores.bonafide_scores.empty() || scores.attack_scores.empty())
        throw std::invalid_argument("d_eer: both score lists must be non-empty");
    EerResult best;
    double best_diff = std::numeric_limits<double>::infinity();
    for (double tau : candidate_thresholds(scores)) {
        const double a = apcer(scores, tau);
        const double b = bpcer(scores, tau);
        const double diff = std::abs(a - b);
        if (diff < best_diff) {  // strict: ties keep the lower threshold
            best_diff = diff;
            best.deer = 0.5 * (a + b);
            best.threshold = tau;
        }
    }
    return best;
}

double bpcer_at_apcer(const ScoreSet& scores, double alpha) {
    if (!(alpha > 0.0 && alpha < 100.0)) throw std::invalid_argument("alpha must be in (0,100)");
    for (double tau : candidate_thresholds(scores)) {
        if (apcer(scores, tau) <= alpha) return bpcer(scores, tau);
    }
    return 100.0;  // unreachable: the +inf sentinel always yields APCER 0
}

std::vector<DetPoint> det_points(const ScoreSet& scores) {
    std::vector<DetPoint> pts;
    for (double tau : candidate_thresholds(scores))
        pts.push_back({apcer(scores, tau), bpcer(scores, tau), tau});
    std::stable_sort(pts.begin(), pts.end(), [](const DetPoint& x, const DetPoint& y) { return x.apcer < y.apcer; });
    return pts;
}

EvalReport evaluate_scores(const ScoreSet& scores) {
    EvalReport r;
    const EerResult e = d_eer(scores);
    r.d_eer = e.deer;
    r.eer_threshold = e.threshold;
    r.bpcer_at_apcer5 = bpcer_at_apcer(scores, 5.0);
    r.bpcer_at_apcer10 = bpcer_at_apcer(scores, 10.0);
    r.det_points = det_points(scores);
    return r;
}

}  // namespace mspad

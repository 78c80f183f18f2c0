#include "mspad/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace mspad {

namespace {

constexpr double kKktTol = 1e-5;  // tighter than the 1e-3 contract; cheap on these problem sizes
constexpr std::size_t kMaxIter = 1'000'000;
constexpr double kStdFloor = 1e-8;

}  // namespace

std::vector<double> feature_as_vector(const FeatureVector& fv) {
    return std::vector<double>(fv.hist.begin(), fv.hist.end());
}

double SvmModel::score(const std::vector<double>& x) const {
    if (x.size() != w.size()) throw std::invalid_argument("feature dimension mismatch");
    double s = b;
    for (size_t k = 0; k < w.size(); ++k) s += w[k] * (x[k] - mean[k]) / std_dev[k];
    return s;
}

double SvmModel::score(const FeatureVector& fv) const { return score(feature_as_vector(fv)); }

SvmTrainResult svm_train(const std::vector<std::vector<double>>& features, const std::vector<int>& labels, double C,
                         uint64_t seed) {
    const size_t n = features.size();
    if (C <= 0.0) throw std::invalid_argument("C must be positive");
    if (n == 0 || labels.size() != n) throw std::invalid_argument("features/labels size mismatch");
    const size_t dim = features[0].size();
    size_t n_pos = 0, n_neg = 0;
    for (size_t i = 0; i < n; ++i) {
        if (features[i].size() != dim) throw std::invalid_argument("inconsistent feature dimensions");
        if (labels[i] == 1)
            ++n_pos;
        else if (labels[i] == -1)
            ++n_neg;
        else
            throw std::invalid_argument("labels must be +1 or -1");
    }
    if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("training data must contain both classes");

    // Standardization statistics from the training set.
    std::vector<double> mean(dim, 0.0), sdev(dim, 0.0);
    for (const auto& x : features)
        for (size_t k = 0; k < dim; ++k) mean[k] += x[k];
    for (double& m : mean) m /= static_cast<double>(n);
    for (const auto& x : features)
        for (size_t k = 0; k < dim; ++k) sdev[k] += (x[k] - mean[k]) * (x[k] - mean[k]);
    for (double& s : sdev) s = std::max(std::sqrt(s / static_cast<double>(n)), kStdFloor);

    std::vector<std::vector<double>> X(n, std::vector<double>(dim));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < dim; ++k) X[i][k] = (features[i][k] - mean[k]) / sdev[k];

    // Per-class boxes: C+ = C * n- / n+, C- = C.
    const double c_pos = C * static_cast<double>(n_neg) / static_cast<double>(n_pos);
    const double c_neg = C;
    auto box = [&](size_t i) { return labels[i] == 1 ? c_pos : c_neg; };

    std::vector<double> gram(n * n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i; j < n; ++j) {
            const double k = std::inner_product(X[i].begin(), X[i].end(), X[j].begin(), 0.0);
            gram[i * n + j] = k;
            gram[j * n + i] = k;
        }
    }

    // Seeded scan order fixes working-set tie-breaks.
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // G_i = sum_j a_j y_j y_i K_ij - 1
    const std::vector<int>& y = labels;

    std::size_t iter = 0;
    double gap = 0.0;
    for (;; ++iter) {
        if (iter >= kMaxIter) throw std::runtime_error("SMO did not converge within iteration cap");

        // Max violating pair over I_up / I_low on -y*G.
        double up_best = -std::numeric_limits<double>::infinity();
        double low_best = std::numeric_limits<double>::infinity();
        size_t i_sel = n, j_sel = n;
        for (size_t t : order) {
            const double v = -y[t] * grad[t];
            const bool in_up = (y[t] == 1 && alpha[t] < box(t)) || (y[t] == -1 && alpha[t] > 0.0);
            const bool in_low = (y[t] == 1 && alpha[t] > 0.0) || (y[t] == -1 && alpha[t] < box(t));
            if (in_up && v > up_best) {
                up_best = v;
                i_sel = t;
            }
            if (in_low && v < low_best) {
                low_best = v;
                j_sel = t;
            }
        }
        gap = up_best - low_best;
        if (gap <= kKktTol || i_sel == n || j_sel == n) break;

        const size_t i = i_sel, j = j_sel;
        // Step along alpha_i += y_i t, alpha_j -= y_j t.
        const double eta = gram[i * n + i] + gram[j * n + j] - 2.0 * gram[i * n + j];
        double t_lo, t_hi;
        if (y[i] == 1) {
            t_lo = -alpha[i];
            t_hi = box(i) - alpha[i];
        } else {
            t_lo = alpha[i] - box(i);
            t_hi = alpha[i];
        }
        if (y[j] == 1) {
            t_lo = std::max(t_lo, alpha[j] - box(j));
            t_hi = std::min(t_hi, alpha[j]);
        } else {
            t_lo = std::max(t_lo, -alpha[j]);
            t_hi = std::min(t_hi, box(j) - alpha[j]);
        }
        const double deriv = y[i] * grad[i] - y[j] * grad[j];  // negative by pair selection
        double step = eta > 1e-12 ? -deriv / eta : t_hi;
        step = std::clamp(step, t_lo, t_hi);
        if (step == 0.0) break;  // boxed in; gap cannot be reduced by this pair

        const double d_ai = y[i] * step;
        const double d_aj = -y[j] * step;
        alpha[i] += d_ai;
        alpha[j] += d_aj;
        for (size_t a = 0; a < n; ++a)
            grad[a] += y[a] * (y[i] * gram[a * n + i] * d_ai + y[j] * gram[a * n + j] * d_aj);
    }

    SvmModel model;
    model.c = C;
    model.mean = std::move(mean);
    model.std_dev = std::move(sdev);
    model.w.assign(dim, 0.0);
    for (size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0.0) continue;
        const double coef = alpha[i] * y[i];
        for (size_t k = 0; k < dim; ++k) model.w[k] += coef * X[i][k];
    }

    // b from free support vectors; fall back to the KKT interval midpoint.
    double b_sum = 0.0;
    size_t b_cnt = 0;
    for (size_t i = 0; i < n; ++i) {
        const double ci = box(i);
        if (alpha[i] > 1e-8 * ci && alpha[i] < ci * (1.0 - 1e-8)) {
            b_sum += -y[i] * grad[i];
            ++b_cnt;
        }
    }
    if (b_cnt > 0) {
        model.b = b_sum / static_cast<double>(b_cnt);
    } else {
        double up_best = -std::numeric_limits<double>::infinity();
        double low_best = std::numeric_limits<double>::infinity();
        for (size_t t = 0; t < n; ++t) {
            const double v = -y[t] * grad[t];
            if ((y[t] == 1 && alpha[t] < box(t)) || (y[t] == -1 && alpha[t] > 0.0)) up_best = std::max(up_best, v);
            if ((y[t] == 1 && alpha[t] > 0.0) || (y[t] == -1 && alpha[t] < box(t))) low_best = std::min(low_best, v);
        }
        model.b = 0.5 * (up_best + low_best);
    }

    double obj = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0.0) continue;
        obj += alpha[i];
        // 1/2 a_i a_j y_i y_j K_ij accumulated via the gradient identity.
        obj -= 0.5 * alpha[i] * (grad[i] + 1.0);
    }

    SvmTrainResult result;
    result.model = std::move(model);
    result.dual_objective = obj;
    result.kkt_gap = gap;
    result.iterations = iter;
    return result;
}

void save_svm(const SvmModel& model, const std::filesystem::path& path) {
    nlohmann::json j;
    j["w"] = model.w;
    j["b"] = model.b;
    j["c"] = model.c;
    j["mean"] = model.mean;
    j["std"] = model.std_dev;
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw std::runtime_error("cannot write model: " + path.string());
        f << j.dump() << "\n";
    }
    std::filesystem::rename(tmp, path);
}

SvmModel load_svm(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open model: " + path.string());
    nlohmann::json j;
    f >> j;
    SvmModel m;
    m.w = j.at("w").get<std::vector<double>>();
    m.b = j.at("b").get<double>();
    m.c = j.at("c").get<double>();
    m.mean = j.at("mean").get<std::vector<double>>();
    m.std_dev = j.at("std").get<std::vector<double>>();
    if (m.mean.size() != m.w.size() || m.std_dev.size() != m.w.size())
        throw std::runtime_error("inconsistent model arrays: " + path.string());
    return m;
}

}  // namespace mspad

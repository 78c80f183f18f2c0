#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "mspad/svm.hpp"

using namespace mspad;

namespace {

std::vector<double> embed256(std::initializer_list<double> coords) {
    std::vector<double> v(256, 0.0);
    size_t i = 0;
    for (double c : coords) v[i++] = c;
    return v;
}

// Exact dual maximizer for tiny problems by active-set enumeration: each
// alpha is free, at 0, or at its box; free variables solve the KKT linear
// system with the equality constraint. Independent of the SMO path.
struct OracleResult {
    double objective = -std::numeric_limits<double>::infinity();
    std::vector<double> alpha;
};

bool solve_linear(std::vector<std::vector<double>> a, std::vector<double>& b) {
    const size_t n = b.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return true;
}

OracleResult brute_force_dual(const std::vector<std::vector<double>>& x, const std::vector<int>& y, double c_pos,
                              double c_neg) {
    const size_t n = x.size();
    std::vector<std::vector<double>> q(n, std::vector<double>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            double k = 0.0;
            for (size_t d = 0; d < x[i].size(); ++d) k += x[i][d] * x[j][d];
            q[i][j] = y[i] * y[j] * k;
        }
    auto box = [&](size_t i) { return y[i] == 1 ? c_pos : c_neg; };

    OracleResult best;
    std::vector<int> state(n, 0);  // 0 = at zero, 1 = at box, 2 = free
    const size_t configs = static_cast<size_t>(std::pow(3, static_cast<double>(n)));
    for (size_t code = 0; code < configs; ++code) {
        size_t rem = code;
        for (size_t i = 0; i < n; ++i) {
            state[i] = static_cast<int>(rem % 3);
            rem /= 3;
        }
        std::vector<double> alpha(n, 0.0);
        std::vector<size_t> free_idx;
        for (size_t i = 0; i < n; ++i) {
            if (state[i] == 1) alpha[i] = box(i);
            if (state[i] == 2) free_idx.push_back(i);
        }
        // Stationarity for the free set: Q_FF a_F + nu y_F = e_F - Q_FB a_B,
        // plus y^T a = 0.
        const size_t m = free_idx.size();
        if (m > 0) {
            std::vector<std::vector<double>> a(m + 1, std::vector<double>(m + 1, 0.0));
            std::vector<double> rhs(m + 1, 0.0);
            for (size_t r = 0; r < m; ++r) {
                rhs[r] = 1.0;
                for (size_t i = 0; i < n; ++i)
                    if (state[i] == 1) rhs[r] -= q[free_idx[r]][i] * alpha[i];
                for (size_t col = 0; col < m; ++col) a[r][col] = q[free_idx[r]][free_idx[col]];
                a[r][m] = y[free_idx[r]];
                a[m][r] = y[free_idx[r]];
            }
            for (size_t i = 0; i < n; ++i)
                if (state[i] == 1) rhs[m] -= y[i] * alpha[i];
            if (!solve_linear(a, rhs)) continue;
            bool feasible = true;
            for (size_t r = 0; r < m; ++r) {
                alpha[free_idx[r]] = rhs[r];
                if (rhs[r] < -1e-9 || rhs[r] > box(free_idx[r]) + 1e-9) feasible = false;
            }
            if (!feasible) continue;
        } else {
            double sum = 0.0;
            for (size_t i = 0; i < n; ++i) sum += y[i] * alpha[i];
            if (std::abs(sum) > 1e-12) continue;
        }
        double obj = 0.0;
        for (size_t i = 0; i < n; ++i) {
            obj += alpha[i];
            for (size_t j = 0; j < n; ++j) obj -= 0.5 * alpha[i] * alpha[j] * q[i][j];
        }
        if (obj > best.objective) {
            best.objective = obj;
            best.alpha = alpha;
        }
    }
    return best;
}

// Standardize the way the trainer does, for feeding the oracle the same
// problem the solver sees.
std::vector<std::vector<double>> standardized(const std::vector<std::vector<double>>& raw) {
    const size_t n = raw.size(), dim = raw[0].size();
    std::vector<double> mean(dim, 0.0), sd(dim, 0.0);
    for (const auto& x : raw)
        for (size_t k = 0; k < dim; ++k) mean[k] += x[k];
    for (double& m : mean) m /= static_cast<double>(n);
    for (const auto& x : raw)
        for (size_t k = 0; k < dim; ++k) sd[k] += (x[k] - mean[k]) * (x[k] - mean[k]);
    for (double& s : sd) s = std::max(std::sqrt(s / static_cast<double>(n)), 1e-8);
    std::vector<std::vector<double>> out(n, std::vector<double>(dim));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < dim; ++k) out[i][k] = (raw[i][k] - mean[k]) / sd[k];
    return out;
}

}  // namespace

TEST_CASE("symmetric separable pair") {
    std::vector<std::vector<double>> x{embed256({1.0}), embed256({-1.0})};
    std::vector<int> y{1, -1};
    const SvmTrainResult r = svm_train(x, y, 1.0, 0);
    CHECK(r.model.score(x[0]) > 0.0);
    CHECK(r.model.score(x[1]) < 0.0);
    CHECK(std::abs(r.model.score(x[0]) + r.model.score(x[1])) < 1e-9);  // boundary at the midpoint
    CHECK(r.kkt_gap <= 1e-3);
}

TEST_CASE("4-point toy problems match the exact dual oracle") {
    std::mt19937_64 rng(424242);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<std::vector<double>> x;
        std::vector<int> y{1, 1, -1, -1};
        for (int i = 0; i < 4; ++i) {
            const double shift = y[static_cast<size_t>(i)] * 0.8;
            x.push_back(embed256({gauss(rng) + shift, gauss(rng) - shift}));
        }
        const double C = 1.0;
        const SvmTrainResult got = svm_train(x, y, C, static_cast<uint64_t>(rep));
        // Balanced classes: per-class boxes both equal C.
        const OracleResult oracle = brute_force_dual(standardized(x), y, C, C);
        REQUIRE(oracle.objective > -std::numeric_limits<double>::infinity());
        CHECK(std::abs(got.dual_objective - oracle.objective) <= 1e-6 * std::max(1.0, std::abs(oracle.objective)));
        CHECK(got.kkt_gap <= 1e-3);
    }
}

TEST_CASE("imbalanced toy problem still matches the oracle with weighted boxes") {
    std::vector<std::vector<double>> x{embed256({1.2, 0.1}), embed256({-0.9, 0.4}), embed256({-1.1, -0.2}),
                                       embed256({-0.8, 0.9})};
    std::vector<int> y{1, -1, -1, -1};
    const double C = 0.7;
    const SvmTrainResult got = svm_train(x, y, C, 5);
    const OracleResult oracle = brute_force_dual(standardized(x), y, C * 3.0, C);  // C+ = C * n-/n+
    CHECK(std::abs(got.dual_objective - oracle.objective) <= 1e-6 * std::max(1.0, std::abs(oracle.objective)));
}

TEST_CASE("label negation negates the model exactly (balanced classes)") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (int i = 0; i < 8; ++i) {
        const int label = i < 4 ? 1 : -1;
        x.push_back(embed256({gauss(rng) + label, gauss(rng), gauss(rng) - label}));
        y.push_back(label);
    }
    std::vector<int> neg(y);
    for (int& v : neg) v = -v;
    const SvmModel m1 = svm_train(x, y, 1.0, 7).model;
    const SvmModel m2 = svm_train(x, neg, 1.0, 7).model;
    CHECK(m2.b == -m1.b);
    for (size_t k = 0; k < m1.w.size(); ++k) CHECK(m2.w[k] == -m1.w[k]);
    CHECK(m2.score(x[0]) == -m1.score(x[0]));
}

TEST_CASE("free support vector sits on the unit margin") {
    std::vector<std::vector<double>> x{embed256({1.0, 0.2}), embed256({0.9, -0.1}), embed256({-1.0, 0.1}),
                                       embed256({-0.8, -0.3})};
    std::vector<int> y{1, 1, -1, -1};
    const SvmTrainResult r = svm_train(x, y, 10.0, 0);
    // Separable with large C: every support vector is on the margin.
    double closest = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < x.size(); ++i)
        closest = std::min(closest, std::abs(y[i] * r.model.score(x[i]) - 1.0));
    CHECK(closest < 1e-2);
}

TEST_CASE("scoring the feature mean returns exactly b") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (int i = 0; i < 10; ++i) {
        const int label = i % 2 == 0 ? 1 : -1;
        x.push_back(embed256({gauss(rng) + label, gauss(rng)}));
        y.push_back(label);
    }
    const SvmModel m = svm_train(x, y, 1.0, 1).model;
    CHECK(m.score(m.mean) == doctest::Approx(m.b).epsilon(1e-12));
}

TEST_CASE("sign agreement with a nearest-centroid oracle on separable data") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss(0.0, 0.6);
    auto sample = [&](int label) {
        std::vector<double> v(256, 0.0);
        for (size_t k = 0; k < 6; ++k) v[k] = gauss(rng) + label * (k % 2 == 0 ? 1.5 : -1.5);
        return v;
    };
    std::vector<std::vector<double>> train_x, test_x;
    std::vector<int> train_y, test_y;
    for (int i = 0; i < 60; ++i) {
        const int label = i % 2 == 0 ? 1 : -1;
        train_x.push_back(sample(label));
        train_y.push_back(label);
    }
    for (int i = 0; i < 100; ++i) {
        const int label = i % 2 == 0 ? 1 : -1;
        test_x.push_back(sample(label));
        test_y.push_back(label);
    }
    const SvmModel m = svm_train(train_x, train_y, 1.0, 3).model;

    std::vector<double> cpos(256, 0.0), cneg(256, 0.0);
    int npos = 0, nneg = 0;
    for (size_t i = 0; i < train_x.size(); ++i) {
        auto& c = train_y[i] == 1 ? cpos : cneg;
        (train_y[i] == 1 ? npos : nneg)++;
        for (size_t k = 0; k < 256; ++k) c[k] += train_x[i][k];
    }
    for (size_t k = 0; k < 256; ++k) {
        cpos[k] /= npos;
        cneg[k] /= nneg;
    }
    int agree = 0;
    for (size_t i = 0; i < test_x.size(); ++i) {
        double dp = 0.0, dn = 0.0;
        for (size_t k = 0; k < 256; ++k) {
            dp += (test_x[i][k] - cpos[k]) * (test_x[i][k] - cpos[k]);
            dn += (test_x[i][k] - cneg[k]) * (test_x[i][k] - cneg[k]);
        }
        const int centroid_label = dp <= dn ? 1 : -1;
        const int svm_label = m.score(test_x[i]) >= 0.0 ? 1 : -1;
        if (centroid_label == svm_label) ++agree;
    }
    CHECK(agree >= 95);
}

TEST_CASE("determinism: identical inputs give bit-identical models") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (int i = 0; i < 20; ++i) {
        const int label = i % 2 == 0 ? 1 : -1;
        x.push_back(embed256({gauss(rng) + 0.5 * label, gauss(rng), gauss(rng)}));
        y.push_back(label);
    }
    const SvmModel a = svm_train(x, y, 1.0, 77).model;
    const SvmModel b = svm_train(x, y, 1.0, 77).model;
    CHECK(a == b);
}

TEST_CASE("errors: single class, bad C, dimension mismatch") {
    std::vector<std::vector<double>> x{embed256({1.0}), embed256({2.0})};
    CHECK_THROWS(svm_train(x, {1, 1}, 1.0, 0));
    CHECK_THROWS(svm_train(x, {1, -1}, 0.0, 0));
    CHECK_THROWS(svm_train(x, {1, -1}, -2.0, 0));
    const SvmModel m = svm_train(x, {1, -1}, 1.0, 0).model;
    CHECK_THROWS(m.score(std::vector<double>(10, 0.0)));
}

TEST_CASE("model json round trip preserves doubles") {
    std::vector<std::vector<double>> x{embed256({0.3, 1.7}), embed256({-0.4, 0.1}), embed256({1.1, -0.6}),
                                       embed256({-1.2, 0.8})};
    const SvmModel m = svm_train(x, {1, -1, 1, -1}, 2.5, 9).model;
    const auto path = std::filesystem::temp_directory_path() / "mspad_svm_model.json";
    save_svm(m, path);
    const SvmModel back = load_svm(path);
    CHECK(back == m);
    std::filesystem::remove(path);
}

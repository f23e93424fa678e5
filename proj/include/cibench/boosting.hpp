#pragma once

#include <vector>

#include "cibench/classifier.hpp"
#include "cibench/common.hpp"
#include "cibench/tree.hpp"

namespace cibench {

// ---------------------------------------------------------------------------
// AdaBoost over depth-1 stumps (SAMME correction for more than two classes).
// ---------------------------------------------------------------------------

struct AdaBoostParams {
    std::size_t n_rounds = 50;
    double learning_rate = 1.0;
    std::uint64_t seed = 0;
};

class AdaBoostClassifier : public Classifier {
public:
    explicit AdaBoostClassifier(AdaBoostParams params = {}) : params_(params) {}
    void fit(const Matrix& X, const Labels& y, int n_classes) override;
    std::vector<double> predict_proba(std::span<const double> x) const override;

    const std::vector<double>& alphas() const { return alphas_; }
    const std::vector<double>& round_errors() const { return round_errors_; }
    std::size_t n_stumps() const { return stumps_.size(); }
    const TreeNode& stump(std::size_t t) const { return *stumps_[t]; }

private:
    AdaBoostParams params_;
    std::vector<TreePtr> stumps_;
    std::vector<double> alphas_;
    std::vector<double> round_errors_;
    int n_classes_ = 0;
};

// ---------------------------------------------------------------------------
// Gradient boosting with log-loss: depth-3 squared-error trees on
// pseudo-residuals, per-leaf one-step Newton values, shrinkage.
// ---------------------------------------------------------------------------

struct GbmParams {
    std::size_t n_stages = 100;
    double learning_rate = 0.1;
    int max_depth = 3;
    std::size_t min_split = 2;
    std::size_t min_leaf = 1;
};

class GbmCore {
public:
    void fit(const Matrix& X, const Labels& y01, const GbmParams& params);
    double score(std::span<const double> x) const;  // F_M(x)
    double initial_score() const { return f0_; }
    double learning_rate() const { return lr_; }
    const std::vector<TreePtr>& stages() const { return stages_; }

private:
    double f0_ = 0.0;
    double lr_ = 0.1;
    std::vector<TreePtr> stages_;
};

// ---------------------------------------------------------------------------
// Second-order regularized tree boosting, exact greedy split search:
// gain = 1/2 [GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)] - gamma, leaf -G/(H+l).
// ---------------------------------------------------------------------------

struct XgbParams {
    std::size_t n_rounds = 100;
    double eta = 0.3;
    double lambda = 1.0;
    double gamma_leaf = 0.0;
    int max_depth = 6;
    double min_child_weight = 1.0;
};

class XgbCore {
public:
    void fit(const Matrix& X, const Labels& y01, const XgbParams& params);
    double score(std::span<const double> x) const;
    double base_score() const { return 0.0; }
    const std::vector<TreePtr>& trees() const { return trees_; }
    double eta() const { return eta_; }
    double lambda() const { return lambda_; }

private:
    double eta_ = 0.3;
    double lambda_ = 1.0;
    std::vector<TreePtr> trees_;
};

/// Exact-greedy split choice on explicit gradient/hessian vectors; exposed so
/// the histogram learner can be cross-checked against it.
struct XgbSplit {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};
XgbSplit xgb_best_split(const Matrix& X, const std::vector<double>& grad,
                        const std::vector<double>& hess, const std::vector<std::size_t>& idx,
                        double lambda, double gamma_leaf, double min_child_weight);

// ---------------------------------------------------------------------------
// Histogram boosting with gradient-based one-side sampling and leaf-wise
// growth. Features are pre-binned into at most max_bin quantile bins.
// ---------------------------------------------------------------------------

struct HistParams {
    std::size_t n_rounds = 100;
    double learning_rate = 0.1;
    std::size_t num_leaves = 31;
    std::size_t max_bin = 255;
    std::size_t min_data_in_leaf = 20;
    double goss_a = 0.2;  // top fraction kept by |gradient|
    double goss_b = 0.1;  // random fraction of the remainder
    double lambda = 0.0;
    double min_hessian_in_leaf = 1e-3;
    std::uint64_t seed = 0;
};

class HistCore {
public:
    void fit(const Matrix& X, const Labels& y01, const HistParams& params);
    double score(std::span<const double> x) const;
    double initial_score() const { return f0_; }
    double learning_rate() const { return lr_; }
    const std::vector<TreePtr>& trees() const { return trees_; }
    const std::vector<std::vector<double>>& bin_boundaries() const { return boundaries_; }

private:
    double f0_ = 0.0;
    double lr_ = 0.1;
    std::vector<std::vector<double>> boundaries_;
    std::vector<TreePtr> trees_;
};

// ---------------------------------------------------------------------------
// Classifier fronts. Binary targets use the core directly (probability =
// sigmoid of the boosted score); multi-class uses one-vs-rest cores with
// normalized sigmoids.
// ---------------------------------------------------------------------------

template <typename Core, typename Params>
class BoostedClassifier : public Classifier {
public:
    explicit BoostedClassifier(Params params = {}) : params_(params) {}

    void fit(const Matrix& X, const Labels& y, int n_classes) override {
        n_classes_ = n_classes;
        cores_.clear();
        if (n_classes == 2) {
            cores_.emplace_back();
            cores_[0].fit(X, y, params_);
            return;
        }
        for (int c = 0; c < n_classes; ++c) {
            Labels yc(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) yc[i] = (y[i] == c) ? 1 : 0;
            cores_.emplace_back();
            if constexpr (requires(Params& p) { p.seed; }) {
                Params pc = params_;
                pc.seed = mix_seed(params_.seed, static_cast<std::uint64_t>(c) + 101);
                cores_.back().fit(X, yc, pc);
            } else {
                cores_.back().fit(X, yc, params_);
            }
        }
    }

    std::vector<double> predict_proba(std::span<const double> x) const override {
        if (cores_.empty()) throw PredictError("boosted classifier: not fitted");
        if (n_classes_ == 2) {
            double p = sigmoid(cores_[0].score(x));
            return {1.0 - p, p};
        }
        std::vector<double> proba(static_cast<std::size_t>(n_classes_));
        double total = 0.0;
        for (int c = 0; c < n_classes_; ++c) {
            proba[static_cast<std::size_t>(c)] = sigmoid(cores_[static_cast<std::size_t>(c)].score(x));
            total += proba[static_cast<std::size_t>(c)];
        }
        if (total <= 0)
            return std::vector<double>(static_cast<std::size_t>(n_classes_),
                                       1.0 / static_cast<double>(n_classes_));
        for (double& p : proba) p /= total;
        return proba;
    }

    const Core& core(std::size_t c = 0) const { return cores_[c]; }

private:
    Params params_;
    std::vector<Core> cores_;
    int n_classes_ = 0;
};

using GbmClassifier = BoostedClassifier<GbmCore, GbmParams>;
using XgbClassifier = BoostedClassifier<XgbCore, XgbParams>;
using HistGbmClassifier = BoostedClassifier<HistCore, HistParams>;

}  // namespace cibench

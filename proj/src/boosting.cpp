#include "cibench/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace cibench {

namespace {

constexpr double kAlphaCap = 0.5 * 23.025850929940457;  // 0.5 * ln(1e10)

void require_both_classes(const Labels& y01, const char* who) {
    bool pos = false, neg = false;
    for (int v : y01) (v == 1 ? pos : neg) = true;
    if (!pos || !neg) throw FitError(std::string(who) + ": single-class target");
}

double clamped_log_odds(double p) {
    p = std::min(1.0 - 1e-12, std::max(1e-12, p));
    return std::log(p / (1.0 - p));
}

}  // namespace

// ---------------------------------------------------------------------------
// AdaBoost
// ---------------------------------------------------------------------------

void AdaBoostClassifier::fit(const Matrix& X, const Labels& y, int n_classes) {
    if (n_classes < 2) throw FitError("fit_adaboost: need at least 2 classes");
    if (y.empty()) throw FitError("fit_adaboost: empty input");
    bool multiple = false;
    for (int v : y)
        if (v != y[0]) { multiple = true; break; }
    if (!multiple) throw FitError("fit_adaboost: single class present");

    n_classes_ = n_classes;
    stumps_.clear();
    alphas_.clear();
    round_errors_.clear();

    std::size_t n = X.rows();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    double guard = 1.0 - 1.0 / static_cast<double>(n_classes);

    CartParams stump_params;
    stump_params.max_depth = 1;
    stump_params.min_leaf = 1;

    for (std::size_t t = 0; t < params_.n_rounds; ++t) {
        stump_params.seed = mix_seed(params_.seed, t);
        TreePtr stump = fit_cart(X, y, n_classes, stump_params, &w);
        if (stump->is_leaf()) {
            if (t == 0) throw FitError("fit_adaboost: no valid stump (constant features?)");
            break;
        }

        std::vector<int> pred(n);
        double eps = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = argmax_lowest(predict_proba_tree(*stump, X.row(i)));
            if (pred[i] != y[i]) eps += w[i];
        }

        if (eps <= 0.0) {
            stumps_.push_back(std::move(stump));
            alphas_.push_back(params_.learning_rate * kAlphaCap);
            round_errors_.push_back(0.0);
            break;  // perfect stump dominates; nothing left to reweight
        }
        if (eps >= guard) break;  // weak-learner condition violated: discard and stop

        double ratio = (1.0 - eps) / eps;
        double alpha = (n_classes == 2)
                           ? params_.learning_rate * 0.5 * std::log(ratio)
                           : params_.learning_rate *
                                 (std::log(ratio) + std::log(static_cast<double>(n_classes - 1)));
        stumps_.push_back(std::move(stump));
        alphas_.push_back(alpha);
        round_errors_.push_back(eps);

        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] *= std::exp(pred[i] != y[i] ? alpha : -alpha);
            total += w[i];
        }
        for (double& wi : w) wi /= total;
    }

    if (stumps_.empty()) throw FitError("fit_adaboost: no usable stump");
}

std::vector<double> AdaBoostClassifier::predict_proba(std::span<const double> x) const {
    if (stumps_.empty()) throw PredictError("AdaBoostClassifier: not fitted");
    std::vector<double> scores(static_cast<std::size_t>(n_classes_), 0.0);
    double total = 0.0;
    for (std::size_t t = 0; t < stumps_.size(); ++t) {
        int label = argmax_lowest(predict_proba_tree(*stumps_[t], x));
        scores[static_cast<std::size_t>(label)] += alphas_[t];
        total += alphas_[t];
    }
    if (total <= 0) return std::vector<double>(scores.size(), 1.0 / static_cast<double>(n_classes_));
    for (double& s : scores) s /= total;
    return scores;
}

// ---------------------------------------------------------------------------
// Gradient boosting (log-loss)
// ---------------------------------------------------------------------------

void GbmCore::fit(const Matrix& X, const Labels& y01, const GbmParams& params) {
    require_both_classes(y01, "fit_gbm");
    lr_ = params.learning_rate;
    stages_.clear();

    std::size_t n = X.rows();
    double pos_rate = 0.0;
    for (int v : y01) pos_rate += v;
    pos_rate /= static_cast<double>(n);
    f0_ = clamped_log_odds(pos_rate);

    std::vector<double> f(n, f0_);
    CartParams tp;
    tp.max_depth = params.max_depth;
    tp.min_split = params.min_split;
    tp.min_leaf = params.min_leaf;

    for (std::size_t m = 0; m < params.n_stages; ++m) {
        std::vector<double> residual(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = sigmoid(f[i]);
            residual[i] = static_cast<double>(y01[i]) - p[i];
        }
        TreePtr tree = fit_regression_tree(X, residual, tp);
        // one-step Newton leaf values for log-loss
        for_each_leaf(*tree, [&](TreeNode& leaf) {
            double num = 0.0, den = 0.0;
            for (std::size_t i : leaf.indices) {
                num += residual[i];
                den += p[i] * (1.0 - p[i]);
            }
            leaf.value = num / std::max(den, 1e-12);
        });
        for (std::size_t i = 0; i < n; ++i)
            f[i] += lr_ * predict_tree_value(*tree, X.row(i));
        stages_.push_back(std::move(tree));
    }
}

double GbmCore::score(std::span<const double> x) const {
    double f = f0_;
    for (const auto& t : stages_) f += lr_ * predict_tree_value(*t, x);
    return f;
}

// ---------------------------------------------------------------------------
// Second-order boosting, exact greedy
// ---------------------------------------------------------------------------

XgbSplit xgb_best_split(const Matrix& X, const std::vector<double>& grad,
                        const std::vector<double>& hess, const std::vector<std::size_t>& idx,
                        double lambda, double gamma_leaf, double min_child_weight) {
    XgbSplit best;
    double g_total = 0.0, h_total = 0.0;
    for (std::size_t i : idx) {
        g_total += grad[i];
        h_total += hess[i];
    }
    double parent_score = g_total * g_total / (h_total + lambda);

    std::vector<std::size_t> order(idx);
    for (int fidx = 0; fidx < static_cast<int>(X.cols()); ++fidx) {
        auto f = static_cast<std::size_t>(fidx);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return X(a, f) < X(b, f); });
        double gl = 0.0, hl = 0.0;
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            gl += grad[order[k]];
            hl += hess[order[k]];
            double v = X(order[k], f), v_next = X(order[k + 1], f);
            if (v == v_next) continue;
            double gr = g_total - gl, hr = h_total - hl;
            if (hl < min_child_weight || hr < min_child_weight) continue;
            double gain = 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) -
                                 parent_score) -
                          gamma_leaf;
            if (gain > best.gain + 1e-15) best = {fidx, 0.5 * (v + v_next), gain};
        }
    }
    return best;
}

namespace {

TreePtr grow_xgb_node(const Matrix& X, const std::vector<double>& grad,
                      const std::vector<double>& hess, std::vector<std::size_t> idx,
                      const XgbParams& params, int depth) {
    auto make_leaf = [&](std::vector<std::size_t> leaf_idx) {
        auto node = std::make_unique<TreeNode>();
        double g = 0.0, h = 0.0;
        for (std::size_t i : leaf_idx) {
            g += grad[i];
            h += hess[i];
        }
        node->value = -g / (h + params.lambda);
        node->indices = std::move(leaf_idx);
        return node;
    };

    if (depth >= params.max_depth || idx.size() < 2) return make_leaf(std::move(idx));
    XgbSplit split = xgb_best_split(X, grad, hess, idx, params.lambda, params.gamma_leaf,
                                    params.min_child_weight);
    if (split.feature < 0 || split.gain <= 0.0) return make_leaf(std::move(idx));

    std::vector<std::size_t> left, right;
    for (std::size_t i : idx) {
        (X(i, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right)
            .push_back(i);
    }
    auto node = std::make_unique<TreeNode>();
    node->feature = split.feature;
    node->threshold = split.threshold;
    node->gain = split.gain;
    node->left = grow_xgb_node(X, grad, hess, std::move(left), params, depth + 1);
    node->right = grow_xgb_node(X, grad, hess, std::move(right), params, depth + 1);
    return node;
}

}  // namespace

void XgbCore::fit(const Matrix& X, const Labels& y01, const XgbParams& params) {
    require_both_classes(y01, "fit_xgbm");
    eta_ = params.eta;
    lambda_ = params.lambda;
    trees_.clear();

    std::size_t n = X.rows();
    std::vector<double> f(n, 0.0);
    for (std::size_t round = 0; round < params.n_rounds; ++round) {
        std::vector<double> grad(n), hess(n);
        for (std::size_t i = 0; i < n; ++i) {
            double p = sigmoid(f[i]);
            grad[i] = p - static_cast<double>(y01[i]);
            hess[i] = std::max(p * (1.0 - p), 1e-16);
        }
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        TreePtr tree = grow_xgb_node(X, grad, hess, std::move(all), params, 0);
        if (tree->is_leaf() && tree->value == 0.0) break;  // nothing left to learn
        for (std::size_t i = 0; i < n; ++i)
            f[i] += eta_ * predict_tree_value(*tree, X.row(i));
        trees_.push_back(std::move(tree));
    }
}

double XgbCore::score(std::span<const double> x) const {
    double f = 0.0;
    for (const auto& t : trees_) f += eta_ * predict_tree_value(*t, x);
    return f;
}

// ---------------------------------------------------------------------------
// Histogram boosting with GOSS and leaf-wise growth
// ---------------------------------------------------------------------------

namespace {

std::vector<double> quantile_boundaries(const Matrix& X, std::size_t feature,
                                        std::size_t max_bin) {
    std::vector<double> values(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) values[i] = X(i, feature);
    std::sort(values.begin(), values.end());

    // distinct values with multiplicities
    std::vector<std::pair<double, std::size_t>> distinct;
    for (double v : values) {
        if (distinct.empty() || distinct.back().first != v) distinct.emplace_back(v, 1);
        else distinct.back().second++;
    }
    std::vector<double> boundaries;
    if (distinct.size() <= 1) return boundaries;  // constant feature: one bin, no splits

    if (distinct.size() <= max_bin) {
        for (std::size_t k = 0; k + 1 < distinct.size(); ++k)
            boundaries.push_back(0.5 * (distinct[k].first + distinct[k + 1].first));
        return boundaries;
    }
    // greedy equal-count cuts that never split a run of equal values
    double target = static_cast<double>(values.size()) / static_cast<double>(max_bin);
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < distinct.size(); ++k) {
        acc += static_cast<double>(distinct[k].second);
        if (acc >= target && boundaries.size() + 1 < max_bin) {
            boundaries.push_back(0.5 * (distinct[k].first + distinct[k + 1].first));
            acc = 0.0;
        }
    }
    return boundaries;
}

std::size_t bin_of(const std::vector<double>& boundaries, double v) {
    return static_cast<std::size_t>(
        std::lower_bound(boundaries.begin(), boundaries.end(), v) - boundaries.begin());
}

struct HistLeaf {
    TreeNode* node = nullptr;
    std::vector<std::size_t> rows;  // sampled rows in this leaf
    int best_feature = -1;
    std::size_t best_boundary = 0;
    double best_gain = 0.0;
    double best_threshold = 0.0;
};

struct GossSample {
    std::vector<std::size_t> rows;
    std::vector<double> weight;  // multiplies both gradient and hessian sums
};

GossSample goss_select(const std::vector<double>& grad, double a, double b,
                       std::size_t min_data_in_leaf, Rng& rng) {
    std::size_t n = grad.size();
    GossSample sample;
    auto top_n = static_cast<std::size_t>(std::ceil(a * static_cast<double>(n)));
    auto rand_n = static_cast<std::size_t>(std::ceil(b * static_cast<double>(n)));
    // one-side sampling is an accelerator for large data; when the sampled
    // subset could barely support a single split, train the round on full data
    bool too_small = top_n + rand_n < 3 * min_data_in_leaf;
    if (a >= 1.0 || too_small) {
        sample.rows.resize(n);
        std::iota(sample.rows.begin(), sample.rows.end(), 0);
        sample.weight.assign(n, 1.0);
        return sample;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        double gi = std::fabs(grad[i]), gj = std::fabs(grad[j]);
        if (gi != gj) return gi > gj;
        return i < j;
    });
    rand_n = std::min(rand_n, n - top_n);

    for (std::size_t k = 0; k < top_n; ++k) {
        sample.rows.push_back(order[k]);
        sample.weight.push_back(1.0);
    }
    if (rand_n > 0) {
        std::vector<std::size_t> rest(order.begin() + static_cast<std::ptrdiff_t>(top_n),
                                      order.end());
        rng.shuffle(rest);
        double up = (1.0 - a) / b;
        for (std::size_t k = 0; k < rand_n; ++k) {
            sample.rows.push_back(rest[k]);
            sample.weight.push_back(up);
        }
    }
    return sample;
}

}  // namespace

void HistCore::fit(const Matrix& X, const Labels& y01, const HistParams& params) {
    require_both_classes(y01, "fit_histgbm");
    std::size_t n = X.rows();
    if (n <= params.min_data_in_leaf)
        throw FitError("fit_histgbm: train size must exceed min_data_in_leaf");

    lr_ = params.learning_rate;
    trees_.clear();
    boundaries_.clear();
    boundaries_.reserve(X.cols());
    for (std::size_t f = 0; f < X.cols(); ++f)
        boundaries_.push_back(quantile_boundaries(X, f, params.max_bin));

    // pre-binned design matrix
    std::vector<std::vector<std::size_t>> binned(X.cols(), std::vector<std::size_t>(n));
    for (std::size_t f = 0; f < X.cols(); ++f)
        for (std::size_t i = 0; i < n; ++i) binned[f][i] = bin_of(boundaries_[f], X(i, f));

    double pos_rate = 0.0;
    for (int v : y01) pos_rate += v;
    pos_rate /= static_cast<double>(n);
    f0_ = clamped_log_odds(pos_rate);
    std::vector<double> f_score(n, f0_);

    for (std::size_t round = 0; round < params.n_rounds; ++round) {
        std::vector<double> grad(n), hess(n);
        for (std::size_t i = 0; i < n; ++i) {
            double p = sigmoid(f_score[i]);
            grad[i] = p - static_cast<double>(y01[i]);
            hess[i] = std::max(p * (1.0 - p), 1e-16);
        }
        Rng rng(mix_seed(params.seed, round));
        GossSample sample =
            goss_select(grad, params.goss_a, params.goss_b, params.min_data_in_leaf, rng);
        std::vector<double> row_weight(n, 0.0);
        for (std::size_t k = 0; k < sample.rows.size(); ++k)
            row_weight[sample.rows[k]] = sample.weight[k];

        auto root = std::make_unique<TreeNode>();
        std::vector<HistLeaf> leaves;
        leaves.push_back({root.get(), sample.rows, -1, 0, 0.0, 0.0});

        auto evaluate_leaf = [&](HistLeaf& leaf) {
            leaf.best_feature = -1;
            leaf.best_gain = 0.0;
            if (leaf.rows.size() < 2 * params.min_data_in_leaf) return;
            double g_total = 0.0, h_total = 0.0;
            for (std::size_t i : leaf.rows) {
                g_total += row_weight[i] * grad[i];
                h_total += row_weight[i] * hess[i];
            }
            double parent_score = g_total * g_total / (h_total + params.lambda);

            for (std::size_t f = 0; f < X.cols(); ++f) {
                const auto& bounds = boundaries_[f];
                if (bounds.empty()) continue;
                std::size_t n_bins = bounds.size() + 1;
                std::vector<double> bin_g(n_bins, 0.0), bin_h(n_bins, 0.0);
                std::vector<std::size_t> bin_count(n_bins, 0);
                for (std::size_t i : leaf.rows) {
                    std::size_t b = binned[f][i];
                    bin_g[b] += row_weight[i] * grad[i];
                    bin_h[b] += row_weight[i] * hess[i];
                    bin_count[b]++;
                }
                double gl = 0.0, hl = 0.0;
                std::size_t cl = 0;
                for (std::size_t b = 0; b + 1 < n_bins; ++b) {
                    gl += bin_g[b];
                    hl += bin_h[b];
                    cl += bin_count[b];
                    std::size_t cr = leaf.rows.size() - cl;
                    if (cl < params.min_data_in_leaf || cr < params.min_data_in_leaf) continue;
                    double gr = g_total - gl, hr = h_total - hl;
                    if (hl < params.min_hessian_in_leaf || hr < params.min_hessian_in_leaf)
                        continue;
                    double gain = 0.5 * (gl * gl / (hl + params.lambda) +
                                         gr * gr / (hr + params.lambda) - parent_score);
                    if (gain > leaf.best_gain + 1e-15) {
                        leaf.best_feature = static_cast<int>(f);
                        leaf.best_boundary = b;
                        leaf.best_gain = gain;
                        leaf.best_threshold = bounds[b];
                    }
                }
            }
        };

        auto finalize_leaf = [&](HistLeaf& leaf) {
            double g = 0.0, h = 0.0;
            for (std::size_t i : leaf.rows) {
                g += row_weight[i] * grad[i];
                h += row_weight[i] * hess[i];
            }
            leaf.node->value = -g / (h + params.lambda);
            leaf.node->indices = leaf.rows;
        };

        evaluate_leaf(leaves[0]);
        std::size_t n_leaves = 1;
        while (n_leaves < params.num_leaves) {
            // always split the leaf with the current best gain
            std::size_t best = leaves.size();
            for (std::size_t k = 0; k < leaves.size(); ++k) {
                if (leaves[k].best_feature < 0) continue;
                if (best == leaves.size() || leaves[k].best_gain > leaves[best].best_gain)
                    best = k;
            }
            if (best == leaves.size()) break;  // no positive-gain split anywhere

            HistLeaf leaf = std::move(leaves[best]);
            leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(best));

            leaf.node->feature = leaf.best_feature;
            leaf.node->threshold = leaf.best_threshold;
            leaf.node->gain = leaf.best_gain;
            leaf.node->left = std::make_unique<TreeNode>();
            leaf.node->right = std::make_unique<TreeNode>();

            HistLeaf left{leaf.node->left.get(), {}, -1, 0, 0.0, 0.0};
            HistLeaf right{leaf.node->right.get(), {}, -1, 0, 0.0, 0.0};
            auto bf = static_cast<std::size_t>(leaf.best_feature);
            for (std::size_t i : leaf.rows)
                (binned[bf][i] <= leaf.best_boundary ? left.rows : right.rows).push_back(i);
            evaluate_leaf(left);
            evaluate_leaf(right);
            leaves.push_back(std::move(left));
            leaves.push_back(std::move(right));
            ++n_leaves;
        }
        for (auto& leaf : leaves) finalize_leaf(leaf);

        for (std::size_t i = 0; i < n; ++i)
            f_score[i] += lr_ * predict_tree_value(*root, X.row(i));
        trees_.push_back(std::move(root));
    }
}

double HistCore::score(std::span<const double> x) const {
    double f = f0_;
    for (const auto& t : trees_) f += lr_ * predict_tree_value(*t, x);
    return f;
}

}  // namespace cibench

#include "cibench/tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace cibench {

namespace {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

constexpr double kMinGain = 1e-12;

double gini_from_weights(const std::vector<double>& class_w, double total) {
    if (total <= 0) return 0.0;
    double sum_sq = 0.0;
    for (double w : class_w) sum_sq += (w / total) * (w / total);
    return 1.0 - sum_sq;
}

// Shared engine for Gini (classification) and squared-error (regression)
// split search over a node's index set.
class TreeBuilder {
public:
    TreeBuilder(const Matrix& X, const Labels* y, int n_classes,
                const std::vector<double>* targets, const std::vector<double>* weights,
                const CartParams& params)
        : X_(X), y_(y), n_classes_(n_classes), targets_(targets), weights_(weights),
          params_(params), rng_(params.seed) {}

    TreePtr build(std::vector<std::size_t> indices) {
        if (indices.empty()) throw FitError("tree fit: empty input");
        return grow(std::move(indices), 0);
    }

private:
    double weight_of(std::size_t i) const { return weights_ ? (*weights_)[i] : 1.0; }

    TreePtr make_leaf(std::vector<std::size_t> indices) {
        auto node = std::make_unique<TreeNode>();
        if (y_) {
            std::vector<double> dist(static_cast<std::size_t>(n_classes_), 0.0);
            double total = 0.0;
            for (std::size_t i : indices) {
                dist[static_cast<std::size_t>((*y_)[i])] += weight_of(i);
                total += weight_of(i);
            }
            for (double& d : dist) d /= total;
            node->distribution = std::move(dist);
        } else {
            double sum = 0.0;
            for (std::size_t i : indices) sum += (*targets_)[i];
            node->value = sum / static_cast<double>(indices.size());
        }
        node->indices = std::move(indices);
        return node;
    }

    std::vector<int> candidate_features() {
        int f = static_cast<int>(X_.cols());
        std::vector<int> all(static_cast<std::size_t>(f));
        std::iota(all.begin(), all.end(), 0);
        if (params_.feature_subset < 0 || params_.feature_subset >= f) return all;
        rng_.shuffle(all);
        all.resize(static_cast<std::size_t>(params_.feature_subset));
        std::sort(all.begin(), all.end());
        return all;
    }

    SplitChoice best_gini_split(const std::vector<std::size_t>& idx,
                                const std::vector<int>& feats) {
        SplitChoice best;
        std::vector<double> total_w(static_cast<std::size_t>(n_classes_), 0.0);
        double total = 0.0;
        for (std::size_t i : idx) {
            total_w[static_cast<std::size_t>((*y_)[i])] += weight_of(i);
            total += weight_of(i);
        }
        double parent_imp = gini_from_weights(total_w, total);

        std::vector<std::size_t> order(idx);
        for (int f : feats) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return X_(a, static_cast<std::size_t>(f)) < X_(b, static_cast<std::size_t>(f));
            });
            std::vector<double> left_w(static_cast<std::size_t>(n_classes_), 0.0);
            double left_total = 0.0;
            for (std::size_t k = 0; k + 1 < order.size(); ++k) {
                std::size_t i = order[k];
                left_w[static_cast<std::size_t>((*y_)[i])] += weight_of(i);
                left_total += weight_of(i);
                double v = X_(i, static_cast<std::size_t>(f));
                double v_next = X_(order[k + 1], static_cast<std::size_t>(f));
                if (v == v_next) continue;
                std::size_t n_left = k + 1, n_right = order.size() - n_left;
                if (n_left < params_.min_leaf || n_right < params_.min_leaf) continue;
                std::vector<double> right_w(static_cast<std::size_t>(n_classes_));
                for (std::size_t c = 0; c < right_w.size(); ++c)
                    right_w[c] = total_w[c] - left_w[c];
                double right_total = total - left_total;
                double gain = parent_imp -
                              (left_total / total) * gini_from_weights(left_w, left_total) -
                              (right_total / total) * gini_from_weights(right_w, right_total);
                if (gain > best.gain + kMinGain ||
                    (best.feature < 0 && gain > kMinGain)) {
                    best = {f, 0.5 * (v + v_next), gain};
                }
            }
        }
        return best;
    }

    SplitChoice best_sse_split(const std::vector<std::size_t>& idx,
                               const std::vector<int>& feats) {
        SplitChoice best;
        double total_sum = 0.0;
        for (std::size_t i : idx) total_sum += (*targets_)[i];
        double n = static_cast<double>(idx.size());
        double parent_score = total_sum * total_sum / n;

        std::vector<std::size_t> order(idx);
        for (int f : feats) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return X_(a, static_cast<std::size_t>(f)) < X_(b, static_cast<std::size_t>(f));
            });
            double left_sum = 0.0;
            for (std::size_t k = 0; k + 1 < order.size(); ++k) {
                left_sum += (*targets_)[order[k]];
                double v = X_(order[k], static_cast<std::size_t>(f));
                double v_next = X_(order[k + 1], static_cast<std::size_t>(f));
                if (v == v_next) continue;
                std::size_t n_left = k + 1, n_right = order.size() - n_left;
                if (n_left < params_.min_leaf || n_right < params_.min_leaf) continue;
                double right_sum = total_sum - left_sum;
                double gain = left_sum * left_sum / static_cast<double>(n_left) +
                              right_sum * right_sum / static_cast<double>(n_right) - parent_score;
                if (gain > best.gain + kMinGain ||
                    (best.feature < 0 && gain > kMinGain)) {
                    best = {f, 0.5 * (v + v_next), gain};
                }
            }
        }
        return best;
    }

    bool node_is_pure(const std::vector<std::size_t>& idx) const {
        if (y_) {
            for (std::size_t i : idx)
                if ((*y_)[i] != (*y_)[idx[0]]) return false;
            return true;
        }
        for (std::size_t i : idx)
            if ((*targets_)[i] != (*targets_)[idx[0]]) return false;
        return true;
    }

    TreePtr grow(std::vector<std::size_t> idx, int depth) {
        bool depth_capped = params_.max_depth >= 0 && depth >= params_.max_depth;
        if (depth_capped || idx.size() < params_.min_split || idx.size() < 2 * params_.min_leaf ||
            node_is_pure(idx))
            return make_leaf(std::move(idx));

        auto feats = candidate_features();
        SplitChoice choice = y_ ? best_gini_split(idx, feats) : best_sse_split(idx, feats);
        if (choice.feature < 0) return make_leaf(std::move(idx));

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx) {
            if (X_(i, static_cast<std::size_t>(choice.feature)) <= choice.threshold)
                left_idx.push_back(i);
            else
                right_idx.push_back(i);
        }
        auto node = std::make_unique<TreeNode>();
        node->feature = choice.feature;
        node->threshold = choice.threshold;
        node->left = grow(std::move(left_idx), depth + 1);
        node->right = grow(std::move(right_idx), depth + 1);
        return node;
    }

    const Matrix& X_;
    const Labels* y_;
    int n_classes_;
    const std::vector<double>* targets_;
    const std::vector<double>* weights_;
    CartParams params_;
    Rng rng_;
};

std::vector<std::size_t> full_index(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

}  // namespace

TreePtr fit_cart(const Matrix& X, const Labels& y, int n_classes, const CartParams& params,
                 const std::vector<double>* weights, const std::vector<std::size_t>* subset) {
    if (X.rows() == 0) throw FitError("fit_cart: empty input");
    if (params.min_leaf < 1) throw FitError("fit_cart: min_leaf must be >= 1");
    TreeBuilder builder(X, &y, n_classes, nullptr, weights, params);
    return builder.build(subset ? *subset : full_index(X.rows()));
}

TreePtr fit_regression_tree(const Matrix& X, const std::vector<double>& targets,
                            const CartParams& params, const std::vector<std::size_t>* subset) {
    if (X.rows() == 0) throw FitError("fit_regression_tree: empty input");
    TreeBuilder builder(X, nullptr, 0, &targets, nullptr, params);
    return builder.build(subset ? *subset : full_index(X.rows()));
}

const TreeNode& route_to_leaf(const TreeNode& tree, std::span<const double> x) {
    const TreeNode* node = &tree;
    while (!node->is_leaf()) {
        if (static_cast<std::size_t>(node->feature) >= x.size())
            throw PredictError("tree routing: feature index out of range");
        node = (x[static_cast<std::size_t>(node->feature)] <= node->threshold)
                   ? node->left.get()
                   : node->right.get();
    }
    return *node;
}

std::vector<double> predict_proba_tree(const TreeNode& tree, std::span<const double> x) {
    return route_to_leaf(tree, x).distribution;
}

double predict_tree_value(const TreeNode& tree, std::span<const double> x) {
    return route_to_leaf(tree, x).value;
}

void for_each_leaf(TreeNode& tree, const std::function<void(TreeNode&)>& fn) {
    if (tree.is_leaf()) {
        fn(tree);
        return;
    }
    for_each_leaf(*tree.left, fn);
    for_each_leaf(*tree.right, fn);
}

void CartClassifier::fit(const Matrix& X, const Labels& y, int n_classes) {
    root_ = fit_cart(X, y, n_classes, params_);
}

std::vector<double> CartClassifier::predict_proba(std::span<const double> x) const {
    if (!root_) throw PredictError("CartClassifier: not fitted");
    return predict_proba_tree(*root_, x);
}

void ForestClassifier::fit(const Matrix& X, const Labels& y, int n_classes) {
    if (X.rows() < 2) throw FitError("fit_forest: need at least 2 rows");
    n_classes_ = n_classes;
    trees_.clear();
    trees_.reserve(params_.n_trees);
    int subset = params_.subsample_features
                     ? std::max(1, static_cast<int>(std::sqrt(static_cast<double>(X.cols()))))
                     : -1;
    for (std::size_t t = 0; t < params_.n_trees; ++t) {
        std::uint64_t tree_seed = mix_seed(params_.seed, t);
        CartParams cp;
        cp.max_depth = params_.max_depth;
        cp.min_leaf = params_.min_leaf;
        cp.feature_subset = subset;
        cp.seed = mix_seed(tree_seed, 0x7ee5);
        if (params_.bootstrap) {
            Rng rng(tree_seed);
            std::vector<std::size_t> bag(X.rows());
            for (auto& b : bag) b = rng.uniform_index(X.rows());
            trees_.push_back(fit_cart(X, y, n_classes, cp, nullptr, &bag));
        } else {
            trees_.push_back(fit_cart(X, y, n_classes, cp));
        }
    }
}

std::vector<double> ForestClassifier::predict_proba(std::span<const double> x) const {
    if (trees_.empty()) throw PredictError("ForestClassifier: not fitted");
    std::vector<double> mean(static_cast<std::size_t>(n_classes_), 0.0);
    for (const auto& t : trees_) {
        auto p = predict_proba_tree(*t, x);
        for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += p[c];
    }
    for (double& v : mean) v /= static_cast<double>(trees_.size());
    return mean;
}

}  // namespace cibench

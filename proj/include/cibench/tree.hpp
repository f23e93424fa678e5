#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "cibench/classifier.hpp"
#include "cibench/common.hpp"

namespace cibench {

/// One node of a binary decision tree. Internal nodes route x[feature] <= threshold
/// to the left child; leaves carry either a class distribution (classification)
/// or a scalar value plus the training rows that landed there (regression,
/// so boosting can solve for leaf values after the structure is grown).
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;  // split gain (boosting trees record it for audits)
    std::unique_ptr<TreeNode> left;
    std::unique_ptr<TreeNode> right;
    std::vector<double> distribution;
    double value = 0.0;
    std::vector<std::size_t> indices;

    bool is_leaf() const { return feature < 0; }
};

using TreePtr = std::unique_ptr<TreeNode>;

struct CartParams {
    int max_depth = -1;          // -1: unlimited
    std::size_t min_leaf = 1;
    std::size_t min_split = 2;
    int feature_subset = -1;     // features re-drawn per split; -1: all
    std::uint64_t seed = 0;
};

/// Greedy Gini CART. Optional per-instance weights (boosting) and an optional
/// index subset (bagging) select what the tree trains on.
TreePtr fit_cart(const Matrix& X, const Labels& y, int n_classes, const CartParams& params,
                 const std::vector<double>* weights = nullptr,
                 const std::vector<std::size_t>* subset = nullptr);

std::vector<double> predict_proba_tree(const TreeNode& tree, std::span<const double> x);

/// Squared-error regression tree on real targets; leaves keep their instance
/// sets and start at the target mean.
TreePtr fit_regression_tree(const Matrix& X, const std::vector<double>& targets,
                            const CartParams& params,
                            const std::vector<std::size_t>* subset = nullptr);

double predict_tree_value(const TreeNode& tree, std::span<const double> x);

const TreeNode& route_to_leaf(const TreeNode& tree, std::span<const double> x);

/// Walks every leaf (mutable, for boosting leaf-value solves).
void for_each_leaf(TreeNode& tree, const std::function<void(TreeNode&)>& fn);

struct ForestParams {
    std::size_t n_trees = 100;
    int max_depth = -1;
    std::size_t min_leaf = 1;
    bool bootstrap = true;
    bool subsample_features = true;  // sqrt(f) per split when on
    std::uint64_t seed = 0;
};

class CartClassifier : public Classifier {
public:
    explicit CartClassifier(CartParams params = {}) : params_(params) {}
    void fit(const Matrix& X, const Labels& y, int n_classes) override;
    std::vector<double> predict_proba(std::span<const double> x) const override;
    const TreeNode& root() const { return *root_; }

private:
    CartParams params_;
    TreePtr root_;
};

/// Bagged CART ensemble; probability output is the exact arithmetic mean of
/// the member tree distributions.
class ForestClassifier : public Classifier {
public:
    explicit ForestClassifier(ForestParams params = {}) : params_(params) {}
    void fit(const Matrix& X, const Labels& y, int n_classes) override;
    std::vector<double> predict_proba(std::span<const double> x) const override;
    std::size_t n_trees() const { return trees_.size(); }
    const TreeNode& tree(std::size_t i) const { return *trees_[i]; }

private:
    ForestParams params_;
    std::vector<TreePtr> trees_;
    int n_classes_ = 0;
};

}  // namespace cibench

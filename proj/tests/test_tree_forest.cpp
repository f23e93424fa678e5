#include <doctest.h>

#include <cmath>

#include "cibench/tree.hpp"

using namespace cibench;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m;
    for (const auto& r : rows) m.push_row(r);
    return m;
}

double gini_of(const std::vector<int>& labels, int n_classes) {
    std::vector<double> counts(static_cast<std::size_t>(n_classes), 0.0);
    for (int v : labels) counts[static_cast<std::size_t>(v)] += 1.0;
    double total = static_cast<double>(labels.size());
    double s = 0.0;
    for (double c : counts) s += (c / total) * (c / total);
    return 1.0 - s;
}

// Exhaustive best-split oracle over all (feature, midpoint threshold) pairs.
struct OracleSplit {
    int feature = -1;
    double threshold = 0.0;
    double gain = -1.0;
};

OracleSplit brute_force_split(const Matrix& X, const Labels& y, int n_classes) {
    OracleSplit best;
    double parent = gini_of(y, n_classes);
    for (int f = 0; f < static_cast<int>(X.cols()); ++f) {
        std::vector<double> values;
        for (std::size_t i = 0; i < X.rows(); ++i) values.push_back(X(i, static_cast<std::size_t>(f)));
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t k = 0; k + 1 < values.size(); ++k) {
            double t = 0.5 * (values[k] + values[k + 1]);
            Labels left, right;
            for (std::size_t i = 0; i < X.rows(); ++i)
                (X(i, static_cast<std::size_t>(f)) <= t ? left : right).push_back(y[i]);
            double n = static_cast<double>(y.size());
            double gain = parent -
                          (static_cast<double>(left.size()) / n) * gini_of(left, n_classes) -
                          (static_cast<double>(right.size()) / n) * gini_of(right, n_classes);
            if (gain > best.gain + 1e-12) best = {f, t, gain};
        }
    }
    return best;
}

double max_gini_on_path(const TreeNode& node, const Matrix& X, const Labels& y,
                        const std::vector<std::size_t>& idx, int n_classes, double parent_gini) {
    Labels sub;
    for (std::size_t i : idx) sub.push_back(y[i]);
    double g = gini_of(sub, n_classes);
    CHECK(g <= parent_gini + 1e-9);  // impurity never increases downward
    if (node.is_leaf()) return g;
    std::vector<std::size_t> left, right;
    for (std::size_t i : idx)
        (X(i, static_cast<std::size_t>(node.feature)) <= node.threshold ? left : right).push_back(i);
    double a = max_gini_on_path(*node.left, X, y, left, n_classes, g);
    double b = max_gini_on_path(*node.right, X, y, right, n_classes, g);
    return std::max(a, b);
}

}  // namespace

TEST_CASE("cart leaves and simple splits") {
    // pure one-class input -> single leaf with probability one
    Matrix pure = from_rows({{0.0}, {1.0}, {2.0}});
    TreePtr leaf = fit_cart(pure, {1, 1, 1}, 2, {});
    CHECK(leaf->is_leaf());
    CHECK(predict_proba_tree(*leaf, std::vector<double>{5.0}) ==
          std::vector<double>{0.0, 1.0});

    // 1-D two-point split at the midpoint, both leaves pure
    Matrix two = from_rows({{0.0}, {1.0}});
    TreePtr tree = fit_cart(two, {0, 1}, 2, {});
    REQUIRE(!tree->is_leaf());
    CHECK(tree->threshold == doctest::Approx(0.5));
    CHECK(predict_proba_tree(*tree, std::vector<double>{0.1}) == std::vector<double>{1.0, 0.0});
    CHECK(predict_proba_tree(*tree, std::vector<double>{0.9}) == std::vector<double>{0.0, 1.0});

    // mixed leaf distribution {3 of class 0, 1 of class 1}
    Matrix same = from_rows({{1.0}, {1.0}, {1.0}, {1.0}});
    TreePtr mixed = fit_cart(same, {0, 0, 0, 1}, 2, {});
    CHECK(mixed->is_leaf());
    auto dist = predict_proba_tree(*mixed, std::vector<double>{1.0});
    CHECK(dist[0] == doctest::Approx(0.75));
    CHECK(dist[1] == doctest::Approx(0.25));

    CHECK_THROWS_AS(fit_cart(Matrix{}, {}, 2, {}), FitError);
}

TEST_CASE("cart split equals the exhaustive oracle") {
    // 8-point 2-D fixture with a unique best split
    Matrix X = from_rows({{0.1, 2.0}, {0.3, 1.0}, {0.6, 2.2}, {0.9, 1.4},
                          {1.4, 2.1}, {1.7, 0.8}, {2.1, 1.9}, {2.4, 1.1}});
    Labels y = {0, 0, 0, 0, 1, 1, 1, 1};
    OracleSplit oracle = brute_force_split(X, y, 2);
    TreePtr tree = fit_cart(X, y, 2, {});
    REQUIRE(!tree->is_leaf());
    CHECK(tree->feature == oracle.feature);
    CHECK(tree->threshold == doctest::Approx(oracle.threshold));

    // and a second fixture where the separating feature is the other one
    Matrix X2 = from_rows({{0.5, 0.1}, {1.5, 0.2}, {0.7, 0.35}, {1.8, 0.3},
                           {0.6, 0.8}, {1.2, 0.9}, {0.9, 0.7}, {1.9, 0.85}});
    Labels y2 = {0, 0, 0, 0, 1, 1, 1, 1};
    OracleSplit oracle2 = brute_force_split(X2, y2, 2);
    TreePtr tree2 = fit_cart(X2, y2, 2, {});
    REQUIRE(!tree2->is_leaf());
    CHECK(tree2->feature == oracle2.feature);
    CHECK(tree2->threshold == doctest::Approx(oracle2.threshold));
}

TEST_CASE("gini impurity is non-increasing along every path") {
    Rng rng(3);
    Matrix X(40, 3);
    Labels y(40);
    for (std::size_t i = 0; i < 40; ++i) {
        for (std::size_t j = 0; j < 3; ++j) X(i, j) = rng.u01();
        y[i] = static_cast<int>(rng.uniform_index(3));
    }
    TreePtr tree = fit_cart(X, y, 3, {});
    std::vector<std::size_t> idx(40);
    std::iota(idx.begin(), idx.end(), 0);
    max_gini_on_path(*tree, X, y, idx, 3, 1.0);
}

TEST_CASE("forest basics") {
    Rng rng(5);
    Matrix X(60, 2);
    Labels y(60);
    for (std::size_t i = 0; i < 60; ++i) {
        y[i] = static_cast<int>(i % 2);
        X(i, 0) = (y[i] ? 2.0 : 0.0) + rng.u01();
        X(i, 1) = rng.u01();
    }

    // a single unbagged, unsubsampled tree equals plain cart
    ForestParams fp;
    fp.n_trees = 1;
    fp.bootstrap = false;
    fp.subsample_features = false;
    ForestClassifier degenerate(fp);
    degenerate.fit(X, y, 2);
    CartClassifier cart;
    cart.fit(X, y, 2);
    for (std::size_t i = 0; i < 10; ++i) {
        auto a = degenerate.predict_proba(X.row(i));
        auto b = cart.predict_proba(X.row(i));
        CHECK(a == b);
    }

    // pure one-class data -> constant prediction with probability one
    Labels ones(60, 1);
    ForestClassifier pure((ForestParams{.n_trees = 10, .seed = 1}));
    pure.fit(X, ones, 2);
    CHECK(pure.predict_proba(X.row(3)) == std::vector<double>{0.0, 1.0});

    // determinism: same seed, same predictions
    ForestClassifier f1((ForestParams{.n_trees = 20, .seed = 9}));
    ForestClassifier f2((ForestParams{.n_trees = 20, .seed = 9}));
    f1.fit(X, y, 2);
    f2.fit(X, y, 2);
    for (std::size_t i = 0; i < 20; ++i) CHECK(f1.predict_proba(X.row(i)) == f2.predict_proba(X.row(i)));

    // forest probability equals the mean of the member distributions exactly
    std::vector<double> mean(2, 0.0);
    for (std::size_t t = 0; t < f1.n_trees(); ++t) {
        auto p = predict_proba_tree(f1.tree(t), X.row(0));
        mean[0] += p[0];
        mean[1] += p[1];
    }
    mean[0] /= static_cast<double>(f1.n_trees());
    mean[1] /= static_cast<double>(f1.n_trees());
    auto fp0 = f1.predict_proba(X.row(0));
    CHECK(fp0[0] == doctest::Approx(mean[0]).epsilon(1e-12));
    CHECK(fp0[1] == doctest::Approx(mean[1]).epsilon(1e-12));

    // probability outputs live on the simplex
    for (std::size_t i = 0; i < 30; ++i) {
        auto p = f1.predict_proba(X.row(i));
        CHECK(p[0] >= 0.0);
        CHECK(p[1] >= 0.0);
        CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("regression tree fits residual structure") {
    Matrix X = from_rows({{0.0}, {1.0}, {2.0}, {3.0}});
    std::vector<double> targets = {1.0, 1.0, 5.0, 5.0};
    CartParams params;
    params.max_depth = 2;
    TreePtr tree = fit_regression_tree(X, targets, params);
    CHECK(predict_tree_value(*tree, std::vector<double>{0.5}) == doctest::Approx(1.0));
    CHECK(predict_tree_value(*tree, std::vector<double>{2.5}) == doctest::Approx(5.0));
}

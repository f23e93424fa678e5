#include <doctest.h>

#include <cmath>

#include "cibench/boosting.hpp"

using namespace cibench;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m;
    for (const auto& r : rows) m.push_row(r);
    return m;
}

// separable two-cluster fixture
void make_blobs(std::size_t n, Matrix& X, Labels& y, std::uint64_t seed, double gap = 1.5) {
    Rng rng(seed);
    X = Matrix(n, 2);
    y.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<int>(i % 2);
        X(i, 0) = (y[i] ? gap : 0.0) + rng.u01();
        X(i, 1) = rng.u01();
    }
}

double log_loss(const std::vector<double>& scores, const Labels& y) {
    double loss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double p = sigmoid(scores[i]);
        p = std::min(1.0 - 1e-15, std::max(1e-15, p));
        loss += (y[i] == 1) ? -std::log(p) : -std::log(1.0 - p);
    }
    return loss / static_cast<double>(y.size());
}

template <typename Stage>
std::vector<double> staged_losses(const Matrix& X, const Labels& y, double f0, double lr,
                                  const std::vector<Stage>& stages) {
    std::vector<double> scores(X.rows(), f0);
    std::vector<double> losses = {log_loss(scores, y)};
    for (const auto& stage : stages) {
        for (std::size_t i = 0; i < X.rows(); ++i)
            scores[i] += lr * predict_tree_value(*stage, X.row(i));
        losses.push_back(log_loss(scores, y));
    }
    return losses;
}

}  // namespace

TEST_CASE("adaboost influence formula") {
    // alpha at eps = 0.5 is zero; at eps = 1/(1+e^2) it is exactly one
    auto alpha = [](double eps) { return 0.5 * std::log((1.0 - eps) / eps); };
    CHECK(alpha(0.5) == doctest::Approx(0.0));
    CHECK(alpha(1.0 / (1.0 + std::exp(2.0))) == doctest::Approx(1.0));
}

TEST_CASE("adaboost fit and invariants") {
    Matrix X;
    Labels y;
    make_blobs(24, X, y, 3, 0.8);

    AdaBoostClassifier model{AdaBoostParams{.n_rounds = 20, .seed = 1}};
    model.fit(X, y, 2);
    CHECK(model.n_stumps() >= 1);
    // kept rounds satisfy the weak-learner condition
    for (double eps : model.round_errors()) CHECK(eps < 0.5);
    for (double a : model.alphas()) CHECK(std::isfinite(a));

    // single stump with positive alpha: prediction is one-hot for its vote
    AdaBoostClassifier one{AdaBoostParams{.n_rounds = 1, .seed = 1}};
    one.fit(X, y, 2);
    auto p = one.predict_proba(X.row(1));
    CHECK(p[0] + p[1] == doctest::Approx(1.0));
    CHECK((p[0] == doctest::Approx(1.0) || p[1] == doctest::Approx(1.0)));

    // constant features leave no valid stump
    Matrix flat(6, 2, 1.0);
    Labels yf = {0, 1, 0, 1, 0, 1};
    CHECK_THROWS_AS(AdaBoostClassifier{}.fit(flat, yf, 2), FitError);
    CHECK_THROWS_AS(AdaBoostClassifier{}.fit(X, Labels(24, 1), 2), FitError);
}

TEST_CASE("adaboost weight bookkeeping") {
    // initial weights are 1/N; after every round they renormalize to one.
    // Verified indirectly: replay the update rule alongside the fit.
    Matrix X;
    Labels y;
    make_blobs(16, X, y, 9, 0.4);
    AdaBoostClassifier model{AdaBoostParams{.n_rounds = 8, .seed = 2}};
    model.fit(X, y, 2);

    std::vector<double> w(16, 1.0 / 16.0);
    double total0 = 0.0;
    for (double wi : w) total0 += wi;
    CHECK(total0 == doctest::Approx(1.0).epsilon(1e-12));

    for (std::size_t t = 0; t < model.n_stumps(); ++t) {
        double eps = 0.0;
        std::vector<int> pred(16);
        for (std::size_t i = 0; i < 16; ++i) {
            pred[i] = argmax_lowest(predict_proba_tree(model.stump(t), X.row(i)));
            if (pred[i] != y[i]) eps += w[i];
        }
        if (model.round_errors()[t] > 0.0)
            CHECK(eps == doctest::Approx(model.round_errors()[t]).epsilon(1e-9));
        double alpha = model.alphas()[t];
        double total = 0.0;
        for (std::size_t i = 0; i < 16; ++i) {
            w[i] *= std::exp(pred[i] != y[i] ? alpha : -alpha);
            total += w[i];
        }
        for (auto& wi : w) wi /= total;
        double sum = 0.0;
        for (double wi : w) sum += wi;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("gbm pseudo-residuals and base rate") {
    // squared-loss residual sanity: y=3, F=1 -> residual 2 (the negative
    // gradient of 0.5-scaled squared error reduces to y - F)
    double y_val = 3.0, f_val = 1.0;
    CHECK(y_val - f_val == doctest::Approx(2.0));

    // zero stages predict the positive base rate everywhere
    Matrix X;
    Labels y;
    make_blobs(20, X, y, 11);
    Labels skew(y);
    for (std::size_t i = 0; i < 6; ++i) skew[i] = 1;
    double rate = 0.0;
    for (int v : skew) rate += v;
    rate /= 20.0;
    GbmClassifier zero{GbmParams{.n_stages = 0}};
    zero.fit(X, skew, 2);
    auto p = zero.predict_proba(X.row(0));
    CHECK(p[1] == doctest::Approx(rate).epsilon(1e-9));

    CHECK_THROWS_AS(GbmClassifier{}.fit(X, Labels(20, 0), 2), FitError);
}

TEST_CASE("gbm training log-loss never increases") {
    Matrix X;
    Labels y;
    make_blobs(30, X, y, 17, 0.6);
    GbmClassifier model{GbmParams{.n_stages = 50}};
    model.fit(X, y, 2);
    const GbmCore& core = model.core();
    auto losses = staged_losses(X, y, core.initial_score(), core.learning_rate(), core.stages());
    CHECK(losses.size() == 51);
    for (std::size_t m = 1; m < losses.size(); ++m) CHECK(losses[m] <= losses[m - 1] + 1e-12);
}

TEST_CASE("xgb leaf weights and limits") {
    // single leaf: G=2, H=1, lambda=1 -> weight -1, structure score -1
    double g = 2.0, h = 1.0, lambda = 1.0;
    CHECK(-g / (h + lambda) == doctest::Approx(-1.0));
    CHECK(-0.5 * g * g / (h + lambda) == doctest::Approx(-1.0));

    Matrix X;
    Labels y;
    make_blobs(20, X, y, 23);

    // lambda -> infinity drives every leaf weight to zero
    XgbClassifier heavy{XgbParams{.n_rounds = 5, .lambda = 1e12}};
    heavy.fit(X, y, 2);
    auto p = heavy.predict_proba(X.row(0));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-6));  // stays at the base score

    // every accepted split carries strictly positive gain, and each leaf
    // weight recomputes exactly from its stored instance set
    XgbClassifier model{XgbParams{.n_rounds = 10}};
    model.fit(X, y, 2);
    for (const auto& tree : model.core().trees()) {
        std::vector<const TreeNode*> stack = {tree.get()};
        while (!stack.empty()) {
            const TreeNode* node = stack.back();
            stack.pop_back();
            if (!node->is_leaf()) {
                CHECK(node->gain > 0.0);
                stack.push_back(node->left.get());
                stack.push_back(node->right.get());
            }
        }
    }
}

TEST_CASE("xgb leaf weight formula holds on stored instance sets") {
    Matrix X;
    Labels y;
    make_blobs(16, X, y, 29, 0.7);
    XgbParams params{.n_rounds = 3, .eta = 0.3, .lambda = 1.0};
    XgbClassifier model{params};
    model.fit(X, y, 2);

    // replay the boosting recursion to recover per-round gradients
    std::vector<double> f(16, 0.0);
    for (const auto& tree : model.core().trees()) {
        std::vector<double> grad(16), hess(16);
        for (std::size_t i = 0; i < 16; ++i) {
            double p = sigmoid(f[i]);
            grad[i] = p - static_cast<double>(y[i]);
            hess[i] = p * (1.0 - p);
        }
        for_each_leaf(*tree, [&](TreeNode& leaf) {
            double g = 0.0, h = 0.0;
            for (std::size_t i : leaf.indices) {
                g += grad[i];
                h += hess[i];
            }
            CHECK(leaf.value == doctest::Approx(-g / (h + params.lambda)).epsilon(1e-9));
        });
        for (std::size_t i = 0; i < 16; ++i)
            f[i] += params.eta * predict_tree_value(*tree, X.row(i));
    }
}

TEST_CASE("xgb depth-1 split equals the brute-force gain oracle") {
    Matrix X = from_rows({{0.2, 1.1}, {0.4, 0.3}, {0.9, 1.4}, {1.3, 0.2},
                          {1.8, 1.0}, {2.2, 0.6}, {2.7, 1.3}, {3.0, 0.4}});
    Labels y = {0, 0, 0, 1, 0, 1, 1, 1};

    std::vector<double> grad(8), hess(8);
    for (std::size_t i = 0; i < 8; ++i) {
        double p = 0.5;  // first round: scores are zero
        grad[i] = p - static_cast<double>(y[i]);
        hess[i] = p * (1.0 - p);
    }
    std::vector<std::size_t> idx(8);
    std::iota(idx.begin(), idx.end(), 0);
    XgbSplit chosen = xgb_best_split(X, grad, hess, idx, 1.0, 0.0, 0.0);

    // oracle: enumerate every (feature, midpoint) candidate
    double best_gain = -1.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    double g_tot = 0.0, h_tot = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        g_tot += grad[i];
        h_tot += hess[i];
    }
    for (int f = 0; f < 2; ++f) {
        std::vector<double> values;
        for (std::size_t i = 0; i < 8; ++i) values.push_back(X(i, static_cast<std::size_t>(f)));
        std::sort(values.begin(), values.end());
        for (std::size_t k = 0; k + 1 < values.size(); ++k) {
            if (values[k] == values[k + 1]) continue;
            double t = 0.5 * (values[k] + values[k + 1]);
            double gl = 0.0, hl = 0.0;
            for (std::size_t i = 0; i < 8; ++i)
                if (X(i, static_cast<std::size_t>(f)) <= t) {
                    gl += grad[i];
                    hl += hess[i];
                }
            double gr = g_tot - gl, hr = h_tot - hl;
            double gain = 0.5 * (gl * gl / (hl + 1.0) + gr * gr / (hr + 1.0) -
                                 g_tot * g_tot / (h_tot + 1.0));
            if (gain > best_gain + 1e-12) {
                best_gain = gain;
                best_feature = f;
                best_threshold = t;
            }
        }
    }
    CHECK(chosen.feature == best_feature);
    CHECK(chosen.threshold == doctest::Approx(best_threshold));
    CHECK(chosen.gain == doctest::Approx(best_gain).epsilon(1e-12));
}

TEST_CASE("xgb training log-loss never increases") {
    Matrix X;
    Labels y;
    make_blobs(30, X, y, 31, 0.5);
    XgbClassifier model{XgbParams{.n_rounds = 40}};
    model.fit(X, y, 2);
    const auto& core = model.core();
    auto losses = staged_losses(X, y, core.base_score(), core.eta(), core.trees());
    for (std::size_t m = 1; m < losses.size(); ++m) CHECK(losses[m] <= losses[m - 1] + 1e-12);
}

TEST_CASE("histgbm structure") {
    Matrix X;
    Labels y;
    make_blobs(60, X, y, 37, 0.8);

    // num_leaves = 2 caps every tree at a single split
    HistParams stump_params;
    stump_params.n_rounds = 5;
    stump_params.num_leaves = 2;
    stump_params.min_data_in_leaf = 5;
    HistGbmClassifier stumps{stump_params};
    stumps.fit(X, y, 2);
    for (const auto& tree : stumps.core().trees()) {
        if (tree->is_leaf()) continue;
        CHECK(tree->left->is_leaf());
        CHECK(tree->right->is_leaf());
    }

    // a constant feature is never chosen
    Matrix Xc(60, 3);
    for (std::size_t i = 0; i < 60; ++i) {
        Xc(i, 0) = X(i, 0);
        Xc(i, 1) = X(i, 1);
        Xc(i, 2) = 42.0;
    }
    HistParams hp;
    hp.n_rounds = 10;
    hp.min_data_in_leaf = 5;
    HistGbmClassifier model{hp};
    model.fit(Xc, y, 2);
    for (const auto& tree : model.core().trees()) {
        std::vector<const TreeNode*> stack = {tree.get()};
        while (!stack.empty()) {
            const TreeNode* node = stack.back();
            stack.pop_back();
            if (!node->is_leaf()) {
                CHECK(node->feature != 2);
                stack.push_back(node->left.get());
                stack.push_back(node->right.get());
            }
        }
    }

    CHECK_THROWS_AS(HistGbmClassifier{}.fit(from_rows({{1.0}, {2.0}}), Labels{0, 1}, 2), FitError);
}

TEST_CASE("histgbm with sampling off reproduces the exact-greedy splits") {
    Matrix X;
    Labels y;
    make_blobs(20, X, y, 41, 0.6);

    HistParams hp;
    hp.n_rounds = 8;
    hp.learning_rate = 0.3;
    hp.num_leaves = 64;
    hp.max_bin = 255;          // 20 distinct values: binning is lossless
    hp.min_data_in_leaf = 1;
    hp.goss_a = 1.0;           // keep every row
    hp.goss_b = 0.0;
    hp.lambda = 1.0;
    hp.min_hessian_in_leaf = 0.0;
    HistGbmClassifier hist{hp};
    hist.fit(X, y, 2);

    XgbParams xp;
    xp.n_rounds = 8;
    xp.eta = 0.3;
    xp.lambda = 1.0;
    xp.gamma_leaf = 0.0;
    xp.max_depth = 32;
    xp.min_child_weight = 0.0;
    XgbClassifier exact{xp};
    exact.fit(X, y, 2);

    // same number of rounds, same root split gains, same predictions
    REQUIRE(hist.core().trees().size() == exact.core().trees().size());
    // the two learners start from different base scores (log-odds vs 0), so
    // compare the first round only, where gradients coincide for balanced y
    const TreeNode& hist_root = *hist.core().trees()[0];
    const TreeNode& exact_root = *exact.core().trees()[0];
    REQUIRE(!hist_root.is_leaf());
    REQUIRE(!exact_root.is_leaf());
    CHECK(hist_root.feature == exact_root.feature);
    CHECK(hist_root.threshold == doctest::Approx(exact_root.threshold).epsilon(1e-9));
    CHECK(hist_root.gain == doctest::Approx(exact_root.gain).epsilon(1e-9));
}

TEST_CASE("histgbm training log-loss never increases") {
    Matrix X;
    Labels y;
    make_blobs(80, X, y, 43, 0.5);
    HistParams hp;
    hp.n_rounds = 30;
    hp.min_data_in_leaf = 5;
    hp.goss_a = 1.0;  // deterministic full-data rounds for the trace check
    hp.goss_b = 0.0;
    HistGbmClassifier model{hp};
    model.fit(X, y, 2);
    const auto& core = model.core();
    auto losses = staged_losses(X, y, core.initial_score(), core.learning_rate(), core.trees());
    for (std::size_t m = 1; m < losses.size(); ++m) CHECK(losses[m] <= losses[m - 1] + 1e-12);
}

TEST_CASE("goss reweighting keeps high-gradient rows") {
    // with a = 0.5, b = 0.25 on 80 rows the sampler keeps 40 + 20 rows and
    // up-weights the random part by (1-a)/b = 2; verify through tree indices
    Matrix X;
    Labels y;
    make_blobs(80, X, y, 47, 0.4);
    HistParams hp;
    hp.n_rounds = 1;
    hp.goss_a = 0.5;
    hp.goss_b = 0.25;
    hp.min_data_in_leaf = 5;
    hp.seed = 3;
    HistGbmClassifier model{hp};
    model.fit(X, y, 2);
    std::size_t sampled = 0;
    std::vector<const TreeNode*> stack = {model.core().trees()[0].get()};
    while (!stack.empty()) {
        const TreeNode* node = stack.back();
        stack.pop_back();
        if (node->is_leaf()) sampled += node->indices.size();
        else {
            stack.push_back(node->left.get());
            stack.push_back(node->right.get());
        }
    }
    CHECK(sampled == 60);  // ceil(0.5*80) + ceil(0.25*80)
}

TEST_CASE("boosted probability outputs") {
    Matrix X;
    Labels y;
    make_blobs(30, X, y, 53);
    GbmClassifier gbm;
    gbm.fit(X, y, 2);
    XgbClassifier xgb;
    xgb.fit(X, y, 2);
    Rng rng(59);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> q = {3.0 * rng.u01(), rng.u01()};
        auto pg = gbm.predict_proba(q);
        auto px = xgb.predict_proba(q);
        CHECK(pg[0] + pg[1] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(px[0] + px[1] == doctest::Approx(1.0).epsilon(1e-9));
    }

    // determinism across refits
    HistParams hp;
    hp.min_data_in_leaf = 5;
    hp.seed = 77;
    HistGbmClassifier h1{hp}, h2{hp};
    h1.fit(X, y, 2);
    h2.fit(X, y, 2);
    for (std::size_t i = 0; i < X.rows(); ++i)
        CHECK(h1.predict_proba(X.row(i)) == h2.predict_proba(X.row(i)));
}

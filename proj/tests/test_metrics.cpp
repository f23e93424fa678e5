#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cibench/common.hpp"
#include "cibench/metrics.hpp"

using namespace cibench;

namespace {

// Independent oracle: trapezoidal integration of the ROC curve over every
// distinct score threshold.
double trapezoid_roc_auc(const Labels& y, const std::vector<double>& scores) {
    std::set<double, std::greater<double>> thresholds(scores.begin(), scores.end());
    double n_pos = 0, n_neg = 0;
    for (int v : y) (v == 1 ? n_pos : n_neg) += 1.0;

    std::vector<std::pair<double, double>> curve = {{0.0, 0.0}};  // (fpr, tpr)
    for (double t : thresholds) {
        double tp = 0, fp = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (scores[i] >= t) (y[i] == 1 ? tp : fp) += 1.0;
        }
        curve.emplace_back(fp / n_neg, tp / n_pos);
    }
    curve.emplace_back(1.0, 1.0);
    double auc = 0.0;
    for (std::size_t k = 1; k < curve.size(); ++k)
        auc += (curve[k].first - curve[k - 1].first) * (curve[k].second + curve[k - 1].second) / 2.0;
    return 100.0 * auc;
}

// Brute-force pair enumeration for the multi-class AUC variants.
double brute_pair_auc(const Labels& y, const Matrix& proba, int pos, int neg) {
    std::vector<double> s_pos, s_neg;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != pos && y[i] != neg) continue;
        double denom = proba(i, static_cast<std::size_t>(pos)) + proba(i, static_cast<std::size_t>(neg));
        double score = denom > 0 ? proba(i, static_cast<std::size_t>(pos)) / denom : 0.5;
        (y[i] == pos ? s_pos : s_neg).push_back(score);
    }
    double wins = 0;
    for (double a : s_pos)
        for (double b : s_neg) wins += (a > b) ? 1.0 : (a == b ? 0.5 : 0.0);
    return 100.0 * wins / (static_cast<double>(s_pos.size()) * static_cast<double>(s_neg.size()));
}

double brute_auc_multiclass(const Labels& y, const Matrix& proba, AucScheme scheme,
                            AucAverage average) {
    int c = static_cast<int>(proba.cols());
    auto counts = class_counts(y, c);
    double num = 0, den = 0;
    if (scheme == AucScheme::OneVsOne) {
        for (int a = 0; a < c; ++a)
            for (int b = 0; b < c; ++b) {
                if (a == b) continue;
                double w = average == AucAverage::Weighted
                               ? static_cast<double>(counts[static_cast<std::size_t>(a)] +
                                                     counts[static_cast<std::size_t>(b)])
                               : 1.0;
                num += w * brute_pair_auc(y, proba, a, b);
                den += w;
            }
    } else {
        for (int a = 0; a < c; ++a) {
            std::vector<double> s_pos, s_neg;
            for (std::size_t i = 0; i < y.size(); ++i)
                (y[i] == a ? s_pos : s_neg).push_back(proba(i, static_cast<std::size_t>(a)));
            double wins = 0;
            for (double pa : s_pos)
                for (double pb : s_neg) wins += (pa > pb) ? 1.0 : (pa == pb ? 0.5 : 0.0);
            double auc = 100.0 * wins /
                         (static_cast<double>(s_pos.size()) * static_cast<double>(s_neg.size()));
            double w = average == AucAverage::Weighted
                           ? static_cast<double>(counts[static_cast<std::size_t>(a)])
                           : 1.0;
            num += w * auc;
            den += w;
        }
    }
    return num / den;
}

Matrix random_simplex_rows(std::size_t n, std::size_t c, Rng& rng) {
    Matrix m(n, c);
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0;
        for (std::size_t j = 0; j < c; ++j) {
            m(i, j) = -std::log(1.0 - rng.u01());
            total += m(i, j);
        }
        for (std::size_t j = 0; j < c; ++j) m(i, j) /= total;
    }
    return m;
}

}  // namespace

TEST_CASE("confusion matrix basics") {
    ConfusionCounts perfect({0, 1, 2, 1}, {0, 1, 2, 1}, 3);
    for (int t = 0; t < 3; ++t)
        for (int p = 0; p < 3; ++p)
            CHECK(perfect.at(t, p) == (t == p ? (t == 1 ? 2u : 1u) : 0u));
    CHECK(accuracy(perfect) == doctest::Approx(100.0));

    // one of each outcome relative to positive class 1
    ConfusionCounts counts({1, 0, 0, 1}, {1, 0, 1, 0}, 2);
    CHECK(counts.tp(1) == 1);
    CHECK(counts.tn(1) == 1);
    CHECK(counts.fp(1) == 1);
    CHECK(counts.fn(1) == 1);
    CHECK(accuracy(counts) == doctest::Approx(50.0));

    CHECK_THROWS_AS(ConfusionCounts({0, 1}, {0}, 2), MetricError);

    // hand tally on a random 3-class fixture
    Rng rng(7);
    Labels yt(40), yp(40);
    for (std::size_t i = 0; i < 40; ++i) {
        yt[i] = static_cast<int>(rng.uniform_index(3));
        yp[i] = static_cast<int>(rng.uniform_index(3));
    }
    ConfusionCounts cc(yt, yp, 3);
    std::size_t tally[3][3] = {};
    for (std::size_t i = 0; i < 40; ++i) tally[yt[i]][yp[i]]++;
    for (int t = 0; t < 3; ++t)
        for (int p = 0; p < 3; ++p) CHECK(cc.at(t, p) == tally[t][p]);
}

TEST_CASE("precision, recall, f1") {
    ConfusionCounts counts({1, 1, 0, 0}, {1, 1, 0, 0}, 2);
    auto prf = precision_recall_f1(counts, 1);
    CHECK(prf.f1 == doctest::Approx(100.0));

    // TP = 0 -> all zero by the zero-denominator rule
    ConfusionCounts zero({1, 1, 0}, {0, 0, 0}, 2);
    CHECK(precision_recall_f1(zero, 1).f1 == 0.0);

    // precision 0.5, recall 1 -> F1 = 2/3
    ConfusionCounts half({1, 0, 0}, {1, 1, 0}, 2);
    auto h = precision_recall_f1(half, 1);
    CHECK(h.precision == doctest::Approx(50.0));
    CHECK(h.recall == doctest::Approx(100.0));
    CHECK(h.f1 == doctest::Approx(100.0 * 2.0 / 3.0));
}

TEST_CASE("f1 averaging modes") {
    ConfusionCounts perfect({0, 1, 2}, {0, 1, 2}, 3);
    CHECK(f1_averaged(perfect, F1Average::Macro) == doctest::Approx(100.0));
    CHECK(f1_averaged(perfect, F1Average::Micro) == doctest::Approx(100.0));
    CHECK(f1_averaged(perfect, F1Average::Weighted) == doctest::Approx(100.0));

    // micro-F1 equals accuracy on single-label multi-class data
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Labels yt(30), yp(30);
        for (std::size_t i = 0; i < 30; ++i) {
            yt[i] = static_cast<int>(rng.uniform_index(4));
            yp[i] = static_cast<int>(rng.uniform_index(4));
        }
        ConfusionCounts cc(yt, yp, 4);
        CHECK(f1_averaged(cc, F1Average::Micro) == doctest::Approx(accuracy(cc)).epsilon(1e-12));
    }

    // skewed fixture: macro and weighted recomputed by hand from per-class F1
    Labels yt = {0, 0, 0, 0, 0, 0, 1, 1, 2};
    Labels yp = {0, 0, 0, 0, 1, 2, 1, 0, 2};
    ConfusionCounts cc(yt, yp, 3);
    double f0 = precision_recall_f1(cc, 0).f1;
    double f1 = precision_recall_f1(cc, 1).f1;
    double f2 = precision_recall_f1(cc, 2).f1;
    CHECK(f1_averaged(cc, F1Average::Macro) == doctest::Approx((f0 + f1 + f2) / 3.0));
    CHECK(f1_averaged(cc, F1Average::Weighted) ==
          doctest::Approx((6.0 * f0 + 2.0 * f1 + 1.0 * f2) / 9.0));
}

TEST_CASE("rank auc matches the trapezoid oracle") {
    CHECK(roc_auc_binary({0, 0, 1, 1}, {0.1, 0.2, 0.8, 0.9}) == doctest::Approx(100.0));
    CHECK(roc_auc_binary({0, 0, 1, 1}, {0.9, 0.8, 0.2, 0.1}) == doctest::Approx(0.0));
    CHECK(roc_auc_binary({0, 1, 0, 1}, {0.5, 0.5, 0.5, 0.5}) == doctest::Approx(50.0));
    CHECK_THROWS_AS(roc_auc_binary({1, 1}, {0.3, 0.4}), MetricError);

    Rng rng(101);
    int checked = 0;
    while (checked < 20) {
        std::size_t n = 12 + rng.uniform_index(30);
        Labels y(n);
        std::vector<double> s(n);
        bool has_pos = false, has_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = static_cast<int>(rng.uniform_index(2));
            (y[i] ? has_pos : has_neg) = true;
            // quantized scores so ties actually occur
            s[i] = std::floor(rng.u01() * 8.0) / 8.0 + (y[i] ? 0.1 * rng.u01() : 0.0);
        }
        if (!has_pos || !has_neg) continue;
        CHECK(roc_auc_binary(y, s) == doctest::Approx(trapezoid_roc_auc(y, s)).epsilon(1e-11));
        ++checked;
    }
}

TEST_CASE("rank auc invariances") {
    Rng rng(55);
    Labels y(25);
    std::vector<double> s(25);
    for (std::size_t i = 0; i < 25; ++i) {
        y[i] = static_cast<int>(rng.uniform_index(2));
        s[i] = rng.u01();
    }
    y[0] = 0;
    y[1] = 1;
    double base = roc_auc_binary(y, s);

    // strictly increasing transforms leave the rank statistic unchanged
    std::vector<double> exp_s(s), affine_s(s);
    for (auto& v : exp_s) v = std::exp(v);
    for (auto& v : affine_s) v = 3.0 * v + 7.0;
    CHECK(roc_auc_binary(y, exp_s) == doctest::Approx(base).epsilon(1e-12));
    CHECK(roc_auc_binary(y, affine_s) == doctest::Approx(base).epsilon(1e-12));

    // negating scores mirrors the statistic exactly
    std::vector<double> neg_s(s);
    for (auto& v : neg_s) v = -v;
    CHECK(roc_auc_binary(y, neg_s) + base == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("single-threshold auc") {
    // TPR=1, FPR=0
    ConfusionCounts perfect({1, 1, 0, 0}, {1, 1, 0, 0}, 2);
    CHECK(auc_single_threshold(perfect, 1) == doctest::Approx(100.0));
    // TPR=0, FPR=1
    ConfusionCounts inverted({1, 1, 0, 0}, {0, 0, 1, 1}, 2);
    CHECK(auc_single_threshold(inverted, 1) == doctest::Approx(0.0));
    // TPR = FPR -> 50
    ConfusionCounts coin({1, 1, 0, 0}, {1, 0, 1, 0}, 2);
    CHECK(auc_single_threshold(coin, 1) == doctest::Approx(50.0));
}

TEST_CASE("multi-class auc equals the brute-force oracle") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n = 15;
        Labels y(n);
        y[0] = 0; y[1] = 1; y[2] = 2;  // every class present
        for (std::size_t i = 3; i < n; ++i) y[i] = static_cast<int>(rng.uniform_index(3));
        Matrix proba = random_simplex_rows(n, 3, rng);
        for (auto scheme : {AucScheme::OneVsOne, AucScheme::OneVsRest})
            for (auto average : {AucAverage::Macro, AucAverage::Weighted})
                CHECK(auc_multiclass(y, proba, scheme, average) ==
                      doctest::Approx(brute_auc_multiclass(y, proba, scheme, average))
                          .epsilon(1e-11));
    }
}

TEST_CASE("multi-class auc reductions and edge cases") {
    Rng rng(23);
    // 2-class input reduces to the plain binary rank statistic
    Labels y(20);
    Matrix proba(20, 2);
    for (std::size_t i = 0; i < 20; ++i) {
        y[i] = static_cast<int>(rng.uniform_index(2));
        double p = rng.u01();
        proba(i, 0) = 1.0 - p;
        proba(i, 1) = p;
    }
    y[0] = 0; y[1] = 1;
    std::vector<double> s(20);
    for (std::size_t i = 0; i < 20; ++i) s[i] = proba(i, 1);
    double binary = roc_auc_binary(y, s);
    for (auto scheme : {AucScheme::OneVsOne, AucScheme::OneVsRest})
        for (auto average : {AucAverage::Macro, AucAverage::Weighted})
            CHECK(auc_multiclass(y, proba, scheme, average) ==
                  doctest::Approx(binary).epsilon(1e-12));

    // perfectly separated 3-class probabilities -> 100 everywhere
    Labels y3 = {0, 0, 1, 1, 2, 2};
    Matrix p3(6, 3);
    for (std::size_t i = 0; i < 6; ++i) p3(i, static_cast<std::size_t>(y3[i])) = 0.9;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (p3(i, j) == 0.0) p3(i, j) = 0.05;
    for (auto scheme : {AucScheme::OneVsOne, AucScheme::OneVsRest})
        for (auto average : {AucAverage::Macro, AucAverage::Weighted})
            CHECK(auc_multiclass(y3, p3, scheme, average) == doctest::Approx(100.0));

    // absent class under macro -> error
    Labels absent = {0, 0, 1, 1, 1, 0};
    CHECK_THROWS_AS(auc_multiclass(absent, p3, AucScheme::OneVsRest, AucAverage::Macro),
                    MetricError);
}

TEST_CASE("score_predictions emits the expected keys") {
    Labels yt = {0, 1, 0, 1}, yp = {0, 1, 0, 0};
    Matrix proba(4, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        proba(i, 1) = 0.2 + 0.2 * static_cast<double>(i);
        proba(i, 0) = 1.0 - proba(i, 1);
    }
    MetricsRecord rec = score_predictions(yt, yp, proba, 2, 1);
    CHECK(rec.values.count("accuracy"));
    CHECK(rec.values.count("f1"));
    CHECK(rec.values.count("f1_class0"));
    CHECK(rec.values.count("f1_class1"));
    CHECK(rec.values.count("auc"));
    CHECK(rec.values.count("auc_threshold"));
    CHECK(rec.values["f1"] == doctest::Approx(rec.values["f1_class1"]));
    CHECK(rec.threshold == 0.5);
}

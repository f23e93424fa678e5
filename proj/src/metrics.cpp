#include "cibench/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace cibench {

ConfusionCounts::ConfusionCounts(const Labels& y_true, const Labels& y_pred, int n_classes)
    : n_classes_(n_classes), total_(y_true.size()),
      counts_(static_cast<std::size_t>(n_classes) * static_cast<std::size_t>(n_classes), 0) {
    if (y_true.size() != y_pred.size())
        throw MetricError("confusion: y_true and y_pred length mismatch");
    if (n_classes < 2) throw MetricError("confusion: need at least 2 classes");
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        int t = y_true[i], p = y_pred[i];
        if (t < 0 || t >= n_classes || p < 0 || p >= n_classes)
            throw MetricError("confusion: label out of range at row " + std::to_string(i));
        counts_[static_cast<std::size_t>(t) * static_cast<std::size_t>(n_classes) +
                static_cast<std::size_t>(p)]++;
    }
}

std::size_t ConfusionCounts::tp(int positive) const { return at(positive, positive); }

std::size_t ConfusionCounts::fp(int positive) const {
    std::size_t s = 0;
    for (int t = 0; t < n_classes_; ++t)
        if (t != positive) s += at(t, positive);
    return s;
}

std::size_t ConfusionCounts::fn(int positive) const {
    std::size_t s = 0;
    for (int p = 0; p < n_classes_; ++p)
        if (p != positive) s += at(positive, p);
    return s;
}

std::size_t ConfusionCounts::tn(int positive) const {
    return total_ - tp(positive) - fp(positive) - fn(positive);
}

std::size_t ConfusionCounts::support(int cls) const {
    std::size_t s = 0;
    for (int p = 0; p < n_classes_; ++p) s += at(cls, p);
    return s;
}

double accuracy(const ConfusionCounts& counts) {
    if (counts.total() == 0) throw MetricError("accuracy: empty counts");
    std::size_t diag = 0;
    for (int c = 0; c < counts.n_classes(); ++c) diag += counts.at(c, c);
    return 100.0 * static_cast<double>(diag) / static_cast<double>(counts.total());
}

PrecisionRecallF1 precision_recall_f1(const ConfusionCounts& counts, int positive) {
    double tp = static_cast<double>(counts.tp(positive));
    double fp = static_cast<double>(counts.fp(positive));
    double fn = static_cast<double>(counts.fn(positive));
    double p = (tp + fp > 0) ? tp / (tp + fp) : 0.0;
    double r = (tp + fn > 0) ? tp / (tp + fn) : 0.0;
    double f1 = (p + r > 0) ? 2.0 * p * r / (p + r) : 0.0;
    return {100.0 * p, 100.0 * r, 100.0 * f1};
}

double f1_averaged(const ConfusionCounts& counts, F1Average mode) {
    int c = counts.n_classes();
    switch (mode) {
        case F1Average::Micro: {
            // pooled counts: for single-label data micro-F1 equals accuracy
            double tp = 0, fp = 0, fn = 0;
            for (int k = 0; k < c; ++k) {
                tp += static_cast<double>(counts.tp(k));
                fp += static_cast<double>(counts.fp(k));
                fn += static_cast<double>(counts.fn(k));
            }
            double p = (tp + fp > 0) ? tp / (tp + fp) : 0.0;
            double r = (tp + fn > 0) ? tp / (tp + fn) : 0.0;
            return (p + r > 0) ? 100.0 * 2.0 * p * r / (p + r) : 0.0;
        }
        case F1Average::Macro: {
            double s = 0.0;
            for (int k = 0; k < c; ++k) s += precision_recall_f1(counts, k).f1;
            return s / static_cast<double>(c);
        }
        case F1Average::Weighted: {
            double s = 0.0;
            for (int k = 0; k < c; ++k)
                s += precision_recall_f1(counts, k).f1 * static_cast<double>(counts.support(k));
            return s / static_cast<double>(counts.total());
        }
    }
    throw MetricError("f1_averaged: unknown mode");
}

double roc_auc_binary(const Labels& y_true, const std::vector<double>& scores) {
    if (y_true.size() != scores.size())
        throw MetricError("roc_auc_binary: length mismatch");
    std::size_t n_pos = 0, n_neg = 0;
    for (int v : y_true) (v == 1 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0)
        throw MetricError("roc_auc_binary: only one class present");

    // average-rank formulation; ties within a score group get the mid rank
    std::vector<std::size_t> order(y_true.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k)
            if (y_true[order[k]] == 1) rank_sum_pos += mid_rank;
        i = j;
    }
    double n_pos_d = static_cast<double>(n_pos);
    double auc = (rank_sum_pos - n_pos_d * (n_pos_d + 1.0) / 2.0) /
                 (n_pos_d * static_cast<double>(n_neg));
    return 100.0 * auc;
}

double auc_single_threshold(const ConfusionCounts& counts, int positive) {
    double tp = static_cast<double>(counts.tp(positive));
    double fn = static_cast<double>(counts.fn(positive));
    double fp = static_cast<double>(counts.fp(positive));
    double tn = static_cast<double>(counts.tn(positive));
    double tpr = (tp + fn > 0) ? tp / (tp + fn) : 0.0;
    double fpr = (fp + tn > 0) ? fp / (fp + tn) : 0.0;
    return 100.0 * (1.0 + tpr - fpr) / 2.0;
}

namespace {

// Binary AUC of class `pos` restricted to rows whose true label is pos or neg,
// scoring by the pair-normalized probability p_pos / (p_pos + p_neg).
double pair_auc(const Labels& y_true, const Matrix& proba, int pos, int neg) {
    Labels y;
    std::vector<double> s;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] != pos && y_true[i] != neg) continue;
        y.push_back(y_true[i] == pos ? 1 : 0);
        double pp = proba(i, static_cast<std::size_t>(pos));
        double pn = proba(i, static_cast<std::size_t>(neg));
        double denom = pp + pn;
        s.push_back(denom > 0 ? pp / denom : 0.5);
    }
    return roc_auc_binary(y, s);
}

}  // namespace

double auc_multiclass(const Labels& y_true, const Matrix& proba,
                      AucScheme scheme, AucAverage average) {
    int c = static_cast<int>(proba.cols());
    if (c < 2) throw MetricError("auc_multiclass: need >= 2 classes");
    if (y_true.size() != proba.rows())
        throw MetricError("auc_multiclass: length mismatch");
    auto counts = class_counts(y_true, c);
    for (int k = 0; k < c; ++k)
        if (counts[static_cast<std::size_t>(k)] == 0)
            throw MetricError("auc_multiclass: class " + std::to_string(k) + " absent");

    double num = 0.0, den = 0.0;
    if (scheme == AucScheme::OneVsOne) {
        for (int a = 0; a < c; ++a)
            for (int b = 0; b < c; ++b) {
                if (a == b) continue;
                double auc = pair_auc(y_true, proba, a, b);
                double w = 1.0;
                if (average == AucAverage::Weighted)
                    w = static_cast<double>(counts[static_cast<std::size_t>(a)] +
                                            counts[static_cast<std::size_t>(b)]);
                num += w * auc;
                den += w;
            }
    } else {
        for (int a = 0; a < c; ++a) {
            Labels y(y_true.size());
            std::vector<double> s(y_true.size());
            for (std::size_t i = 0; i < y_true.size(); ++i) {
                y[i] = (y_true[i] == a) ? 1 : 0;
                s[i] = proba(i, static_cast<std::size_t>(a));
            }
            double auc = roc_auc_binary(y, s);
            double w = (average == AucAverage::Weighted)
                           ? static_cast<double>(counts[static_cast<std::size_t>(a)])
                           : 1.0;
            num += w * auc;
            den += w;
        }
    }
    return num / den;
}

MetricsRecord score_predictions(const Labels& y_true, const Labels& y_pred,
                                const Matrix& proba, int n_classes, int positive_class) {
    MetricsRecord rec;
    rec.positive_class = positive_class;
    ConfusionCounts counts(y_true, y_pred, n_classes);
    rec.values["accuracy"] = accuracy(counts);
    for (int c = 0; c < n_classes; ++c)
        rec.values["f1_class" + std::to_string(c)] = precision_recall_f1(counts, c).f1;
    rec.values["f1_macro"] = f1_averaged(counts, F1Average::Macro);
    rec.values["f1_micro"] = f1_averaged(counts, F1Average::Micro);
    rec.values["f1_weighted"] = f1_averaged(counts, F1Average::Weighted);

    if (n_classes == 2) {
        rec.values["f1"] = precision_recall_f1(counts, positive_class).f1;
        std::vector<double> scores(y_true.size());
        for (std::size_t i = 0; i < y_true.size(); ++i)
            scores[i] = proba(i, static_cast<std::size_t>(positive_class));
        Labels y(y_true.size());
        for (std::size_t i = 0; i < y_true.size(); ++i)
            y[i] = (y_true[i] == positive_class) ? 1 : 0;
        rec.values["auc"] = roc_auc_binary(y, scores);
        rec.values["auc_threshold"] = auc_single_threshold(counts, positive_class);
    } else {
        rec.values["f1"] = rec.values["f1_macro"];
        rec.values["auc_ovo_macro"] =
            auc_multiclass(y_true, proba, AucScheme::OneVsOne, AucAverage::Macro);
        rec.values["auc_ovo_weighted"] =
            auc_multiclass(y_true, proba, AucScheme::OneVsOne, AucAverage::Weighted);
        rec.values["auc_ovr_macro"] =
            auc_multiclass(y_true, proba, AucScheme::OneVsRest, AucAverage::Macro);
        rec.values["auc_ovr_weighted"] =
            auc_multiclass(y_true, proba, AucScheme::OneVsRest, AucAverage::Weighted);
        rec.values["auc"] = rec.values["auc_ovr_macro"];
    }
    return rec;
}

}  // namespace cibench

#pragma once

#include <map>
#include <string>
#include <vector>

#include "cibench/common.hpp"

namespace cibench {

/// Confusion matrix with counts[true][predicted]. The binary view (tp/fp/...)
/// is taken relative to a designated positive class.
class ConfusionCounts {
public:
    ConfusionCounts(const Labels& y_true, const Labels& y_pred, int n_classes);

    int n_classes() const { return n_classes_; }
    std::size_t total() const { return total_; }
    std::size_t at(int t, int p) const {
        return counts_[static_cast<std::size_t>(t) * static_cast<std::size_t>(n_classes_) +
                       static_cast<std::size_t>(p)];
    }

    std::size_t tp(int positive) const;
    std::size_t fp(int positive) const;
    std::size_t fn(int positive) const;
    std::size_t tn(int positive) const;

    std::size_t support(int cls) const;  // row sum: true count of cls

private:
    int n_classes_;
    std::size_t total_;
    std::vector<std::size_t> counts_;
};

enum class F1Average { Macro, Micro, Weighted };
enum class AucScheme { OneVsOne, OneVsRest };
enum class AucAverage { Macro, Weighted };

// All metric values are percentages in [0, 100].

double accuracy(const ConfusionCounts& counts);

struct PrecisionRecallF1 {
    double precision;
    double recall;
    double f1;
};

/// Eq-style precision/recall/F1 for one positive class; zero denominators
/// yield 0 rather than NaN.
PrecisionRecallF1 precision_recall_f1(const ConfusionCounts& counts, int positive);

double f1_averaged(const ConfusionCounts& counts, F1Average mode);

/// Rank-statistic ROC AUC: fraction of (positive, negative) pairs ranked
/// correctly, with half credit for score ties.
double roc_auc_binary(const Labels& y_true, const std::vector<double>& scores_for_positive);

/// The single-threshold form (1 + TPR - FPR) / 2 evaluated on crisp counts.
double auc_single_threshold(const ConfusionCounts& counts, int positive = 1);

double auc_multiclass(const Labels& y_true, const Matrix& probabilities,
                      AucScheme scheme, AucAverage average);

/// One scored run. Keys are stable metric names used throughout reports:
/// accuracy, f1, f1_class<i>, f1_macro, f1_micro, f1_weighted, auc,
/// auc_threshold, auc_ovo_macro, auc_ovo_weighted, auc_ovr_macro,
/// auc_ovr_weighted.
struct MetricsRecord {
    std::map<std::string, double> values;
    int positive_class = 1;
    double threshold = 0.5;
};

/// Scores one prediction batch. For binary data "f1"/"auc" refer to the
/// designated positive class (class 1 as produced by the binary recipes);
/// per-class F1 is always included because published tables disagree on the
/// positive-class convention. Multi-class AUC variants are emitted when
/// 3 or more classes are present.
MetricsRecord score_predictions(const Labels& y_true, const Labels& y_pred,
                                const Matrix& probabilities, int n_classes,
                                int positive_class = 1);

}  // namespace cibench

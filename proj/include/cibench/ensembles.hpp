#pragma once

#include <string>
#include <vector>

#include "cibench/boosting.hpp"
#include "cibench/classifier.hpp"
#include "cibench/knn.hpp"
#include "cibench/linear.hpp"
#include "cibench/tree.hpp"

namespace cibench {

enum class ModelKind {
    Cart,
    Forest,
    Knn,
    Logistic,
    AdaBoost,
    Gbm,
    Xgbm,
    HistGbm,
    VotingIHard,
    VotingISoft,
    VotingIIHard,
    VotingIISoft,
    StackingI,
    StackingII,
    Majority,  // constant all-majority baseline
};

ModelKind model_kind_from_string(const std::string& name);
std::string model_kind_name(ModelKind kind);

/// Model identifier plus the hyperparameter records (published defaults).
struct ModelSpec {
    ModelKind kind = ModelKind::Forest;
    std::uint64_t seed = 0;

    CartParams cart;
    ForestParams forest;
    KnnParams knn;
    LogisticParams logistic;
    AdaBoostParams adaboost;
    GbmParams gbm;
    XgbParams xgb;
    HistParams hist;
    std::size_t stacking_folds = 5;
};

ClassifierPtr make_classifier(const ModelSpec& spec);

int hard_vote(const Labels& label_votes);
std::vector<double> soft_vote(const std::vector<std::vector<double>>& prob_rows);

enum class VotingMode { Hard, Soft };

/// Pool ensemble. Hard voting takes the modal member label (vote fractions
/// double as the probability row); soft voting averages member probabilities.
class VotingClassifier : public Classifier {
public:
    VotingClassifier(std::vector<ModelSpec> pool, VotingMode mode, std::uint64_t seed);
    void fit(const Matrix& X, const Labels& y, int n_classes) override;
    std::vector<double> predict_proba(std::span<const double> x) const override;

private:
    std::vector<ModelSpec> pool_;
    VotingMode mode_;
    std::uint64_t seed_;
    std::vector<ClassifierPtr> members_;
    int n_classes_ = 0;
};

/// Two-level stack: out-of-fold base-learner probabilities feed a logistic
/// meta-learner; the bases are then refit on the full train split.
class StackingClassifier : public Classifier {
public:
    StackingClassifier(std::vector<ModelSpec> pool, std::size_t n_folds, std::uint64_t seed);
    void fit(const Matrix& X, const Labels& y, int n_classes) override;
    std::vector<double> predict_proba(std::span<const double> x) const override;

    /// Out-of-fold meta-feature matrix from the last fit (n x members*classes).
    const Matrix& meta_features() const { return meta_features_; }
    const std::vector<int>& fold_of() const { return fold_of_; }

private:
    std::vector<ModelSpec> pool_;
    std::size_t n_folds_;
    std::uint64_t seed_;
    std::vector<ClassifierPtr> members_;
    LogisticClassifier meta_;
    Matrix meta_features_;
    std::vector<int> fold_of_;
    int n_classes_ = 0;
};

/// Constant classifier that always answers the train-majority class.
class MajorityClassifier : public Classifier {
public:
    void fit(const Matrix& X, const Labels& y, int n_classes) override;
    std::vector<double> predict_proba(std::span<const double> x) const override;

private:
    int majority_ = 0;
    int n_classes_ = 0;
};

/// Voting-I / Stacking-I pool: decision tree, random forest, k-nearest
/// neighbours, second-order boosting. Voting-II / Stacking-II pool: random
/// forest and second-order boosting.
std::vector<ModelSpec> pool_one(const ModelSpec& base);
std::vector<ModelSpec> pool_two(const ModelSpec& base);

/// Deterministic fold assignment (n_folds blocks of a seeded shuffle) with
/// every class present in each training fold; re-draws up to 100 times, then
/// reduces the fold count.
std::vector<int> make_folds(const Labels& y, int n_classes, std::size_t n_folds,
                            std::uint64_t seed);

}  // namespace cibench

#pragma once

#include <vector>

#include "cibench/classifier.hpp"
#include "cibench/common.hpp"

namespace cibench {

enum class LinearKind { Logistic, Svm };

/// A fitted linear decision function w.x + b. For the SVM variant the indices
/// of margin points (y(w.x+b) <= 1 + 1e-6) are retained.
struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    LinearKind kind = LinearKind::Logistic;
    std::vector<std::size_t> support_indices;

    double decision(std::span<const double> x) const {
        double z = bias;
        for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * x[j];
        return z;
    }
};

struct LogisticParams {
    double l2 = 1.0;
    std::size_t max_iters = 1000;
    double tol = 1e-6;
    double step = 0.1;  // halved by backtracking when a step overshoots
};

/// Binary L2-regularized logistic regression by gradient descent with
/// backtracking halving. y must be 0/1.
LinearModel fit_logistic_binary(const Matrix& X, const Labels& y, const LogisticParams& params);

/// Mean log-loss plus L2 penalty, the objective fit_logistic_binary descends.
double logistic_loss(const Matrix& X, const Labels& y, const std::vector<double>& w, double b,
                     double l2);

/// Gradient of logistic_loss; last element is the bias derivative.
std::vector<double> logistic_gradient(const Matrix& X, const Labels& y,
                                      const std::vector<double>& w, double b, double l2);

struct SvmParams {
    double c = 1.0;
    std::size_t epochs = 200;
    std::uint64_t seed = 0;
};

/// Linear soft-margin SVM (primal hinge objective, full-batch subgradient
/// descent). y must be 0/1; internally mapped to -1/+1.
LinearModel fit_linear_svm(const Matrix& X, const Labels& y, const SvmParams& params);

double svm_objective(const Matrix& X, const Labels& y, const std::vector<double>& w, double b,
                     double c);

/// One-vs-rest logistic classifier; probabilities are the per-class sigmoids
/// normalized to sum 1 (binary reduces to the plain sigmoid pair).
class LogisticClassifier : public Classifier {
public:
    explicit LogisticClassifier(LogisticParams params = {}) : params_(params) {}
    void fit(const Matrix& X, const Labels& y, int n_classes) override;
    std::vector<double> predict_proba(std::span<const double> x) const override;
    const LinearModel& model(std::size_t c = 0) const { return models_[c]; }

private:
    LogisticParams params_;
    std::vector<LinearModel> models_;
    int n_classes_ = 0;
};

}  // namespace cibench

#include "cibench/linear.hpp"

#include <algorithm>
#include <cmath>

namespace cibench {

double logistic_loss(const Matrix& X, const Labels& y, const std::vector<double>& w, double b,
                     double l2) {
    double n = static_cast<double>(X.rows());
    double loss = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        double z = b;
        for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * X(i, j);
        // log(1 + exp(-m)) with m = z for y=1, -z for y=0, computed stably
        double m = (y[i] == 1) ? z : -z;
        loss += (m > 0) ? std::log1p(std::exp(-m)) : (-m + std::log1p(std::exp(m)));
    }
    double reg = 0.0;
    for (double v : w) reg += v * v;
    return loss / n + 0.5 * l2 * reg / n;
}

std::vector<double> logistic_gradient(const Matrix& X, const Labels& y,
                                      const std::vector<double>& w, double b, double l2) {
    double n = static_cast<double>(X.rows());
    std::vector<double> grad(w.size() + 1, 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        double z = b;
        for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * X(i, j);
        double err = sigmoid(z) - static_cast<double>(y[i]);
        for (std::size_t j = 0; j < w.size(); ++j) grad[j] += err * X(i, j);
        grad[w.size()] += err;
    }
    for (std::size_t j = 0; j < w.size(); ++j) grad[j] = grad[j] / n + l2 * w[j] / n;
    grad[w.size()] /= n;  // bias not regularized
    return grad;
}

LinearModel fit_logistic_binary(const Matrix& X, const Labels& y, const LogisticParams& params) {
    if (X.rows() == 0) throw FitError("fit_logistic: empty input");
    LinearModel model;
    model.kind = LinearKind::Logistic;
    model.weights.assign(X.cols(), 0.0);
    double step = params.step;
    double loss = logistic_loss(X, y, model.weights, model.bias, params.l2);
    if (!std::isfinite(loss)) throw FitError("fit_logistic: non-finite initial loss");

    for (std::size_t it = 0; it < params.max_iters; ++it) {
        auto grad = logistic_gradient(X, y, model.weights, model.bias, params.l2);
        double gnorm = 0.0;
        for (double g : grad) gnorm += g * g;
        gnorm = std::sqrt(gnorm);
        if (gnorm < params.tol) break;

        // backtracking: halve until the step decreases the loss
        while (step > 1e-12) {
            std::vector<double> w_try(model.weights);
            for (std::size_t j = 0; j < w_try.size(); ++j) w_try[j] -= step * grad[j];
            double b_try = model.bias - step * grad.back();
            double l_try = logistic_loss(X, y, w_try, b_try, params.l2);
            if (!std::isfinite(l_try)) throw FitError("fit_logistic: non-finite loss");
            if (l_try <= loss) {
                model.weights = std::move(w_try);
                model.bias = b_try;
                loss = l_try;
                break;
            }
            step *= 0.5;
        }
        if (step <= 1e-12) break;
    }
    return model;
}

double svm_objective(const Matrix& X, const Labels& y, const std::vector<double>& w, double b,
                     double c) {
    double obj = 0.0;
    for (double v : w) obj += 0.5 * v * v;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        double z = b;
        for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * X(i, j);
        double margin = (y[i] == 1 ? 1.0 : -1.0) * z;
        obj += c * std::max(0.0, 1.0 - margin);
    }
    return obj;
}

LinearModel fit_linear_svm(const Matrix& X, const Labels& y, const SvmParams& params) {
    bool has_pos = false, has_neg = false;
    for (int v : y) (v == 1 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw FitError("fit_linear_svm: both classes required");

    LinearModel model;
    model.kind = LinearKind::Svm;
    model.weights.assign(X.cols(), 0.0);
    double n = static_cast<double>(X.rows());

    std::vector<double> best_w = model.weights;
    double best_b = 0.0;
    double best_obj = svm_objective(X, y, model.weights, model.bias, params.c);

    for (std::size_t epoch = 1; epoch <= params.epochs; ++epoch) {
        double step = 1.0 / (1.0 + 0.1 * static_cast<double>(epoch));
        std::vector<double> grad(model.weights);  // d/dw of 0.5||w||^2
        double grad_b = 0.0;
        for (std::size_t i = 0; i < X.rows(); ++i) {
            double yi = (y[i] == 1 ? 1.0 : -1.0);
            double z = model.bias;
            for (std::size_t j = 0; j < model.weights.size(); ++j) z += model.weights[j] * X(i, j);
            if (yi * z < 1.0) {
                for (std::size_t j = 0; j < model.weights.size(); ++j)
                    grad[j] -= params.c * yi * X(i, j);
                grad_b -= params.c * yi;
            }
        }
        for (std::size_t j = 0; j < model.weights.size(); ++j)
            model.weights[j] -= step * grad[j] / n;
        model.bias -= step * grad_b / n;

        double obj = svm_objective(X, y, model.weights, model.bias, params.c);
        if (obj < best_obj) {
            best_obj = obj;
            best_w = model.weights;
            best_b = model.bias;
        }
    }
    model.weights = best_w;
    model.bias = best_b;

    for (std::size_t i = 0; i < X.rows(); ++i) {
        double yi = (y[i] == 1 ? 1.0 : -1.0);
        if (yi * model.decision(X.row(i)) <= 1.0 + 1e-6) model.support_indices.push_back(i);
    }
    return model;
}

void LogisticClassifier::fit(const Matrix& X, const Labels& y, int n_classes) {
    n_classes_ = n_classes;
    models_.clear();
    if (n_classes == 2) {
        models_.push_back(fit_logistic_binary(X, y, params_));
        return;
    }
    for (int c = 0; c < n_classes; ++c) {
        Labels yc(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) yc[i] = (y[i] == c) ? 1 : 0;
        models_.push_back(fit_logistic_binary(X, yc, params_));
    }
}

std::vector<double> LogisticClassifier::predict_proba(std::span<const double> x) const {
    if (models_.empty()) throw PredictError("LogisticClassifier: not fitted");
    if (n_classes_ == 2) {
        double p = sigmoid(models_[0].decision(x));
        return {1.0 - p, p};
    }
    std::vector<double> proba(static_cast<std::size_t>(n_classes_));
    double total = 0.0;
    for (int c = 0; c < n_classes_; ++c) {
        proba[static_cast<std::size_t>(c)] = sigmoid(models_[static_cast<std::size_t>(c)].decision(x));
        total += proba[static_cast<std::size_t>(c)];
    }
    if (total <= 0) return std::vector<double>(static_cast<std::size_t>(n_classes_),
                                               1.0 / static_cast<double>(n_classes_));
    for (double& p : proba) p /= total;
    return proba;
}

}  // namespace cibench

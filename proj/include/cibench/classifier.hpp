#pragma once

#include <memory>
#include <vector>

#include "cibench/common.hpp"

namespace cibench {

/// Anything that fits on a train split and yields per-class probability rows.
/// Crisp labels come from the 0.5 threshold (binary) which coincides with
/// argmax under the lowest-index tie rule.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual void fit(const Matrix& X, const Labels& y, int n_classes) = 0;
    virtual std::vector<double> predict_proba(std::span<const double> x) const = 0;

    int predict(std::span<const double> x) const {
        auto p = predict_proba(x);
        return argmax_lowest(p);
    }

    Matrix predict_proba_batch(const Matrix& X) const {
        Matrix out;
        for (std::size_t i = 0; i < X.rows(); ++i) out.push_row(predict_proba(X.row(i)));
        return out;
    }

    Labels predict_batch(const Matrix& X) const {
        Labels out(X.rows());
        for (std::size_t i = 0; i < X.rows(); ++i) out[i] = predict(X.row(i));
        return out;
    }
};

using ClassifierPtr = std::unique_ptr<Classifier>;

}  // namespace cibench

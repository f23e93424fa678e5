#pragma once

#include <vector>

#include "cibench/classifier.hpp"
#include "cibench/common.hpp"

namespace cibench {

/// Flat Euclidean nearest-neighbour index. Distance ties break toward the
/// lower point index.
class KnnIndex {
public:
    explicit KnnIndex(Matrix points) : points_(std::move(points)) {}

    std::size_t size() const { return points_.rows(); }
    const Matrix& points() const { return points_; }

    /// k nearest indices sorted by ascending distance (then index).
    std::vector<std::size_t> query(std::span<const double> q, std::size_t k) const;

    /// Same, but never returns `self`; used for neighbourhoods of indexed rows.
    std::vector<std::size_t> query_excluding(std::span<const double> q, std::size_t k,
                                             std::size_t self) const;

private:
    std::vector<std::size_t> query_impl(std::span<const double> q, std::size_t k,
                                        long long exclude) const;
    Matrix points_;
};

struct KnnParams {
    std::size_t k = 5;
};

/// Vote-fraction kNN on min-max scaled features (scaler fit on train only).
class KnnClassifier : public Classifier {
public:
    explicit KnnClassifier(KnnParams params = {}) : params_(params) {}
    void fit(const Matrix& X, const Labels& y, int n_classes) override;
    std::vector<double> predict_proba(std::span<const double> x) const override;

private:
    KnnParams params_;
    MinMaxScaler scaler_;
    std::unique_ptr<KnnIndex> index_;
    Labels y_;
    int n_classes_ = 0;
};

struct KMeansResult {
    Matrix centroids;
    std::vector<int> assignment;
    std::size_t n_clusters = 0;
};

/// Lloyd's k-means with k-means++ seeding; empty clusters are re-seeded from
/// the farthest point. Deterministic for a given seed.
KMeansResult kmeans(const Matrix& X, std::size_t n_clusters, std::uint64_t seed,
                    std::size_t max_iters = 100);

}  // namespace cibench

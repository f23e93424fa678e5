#include "cibench/knn.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace cibench {

std::vector<std::size_t> KnnIndex::query_impl(std::span<const double> q, std::size_t k,
                                              long long exclude) const {
    if (k == 0) throw QueryError("knn_query: k must be positive");
    std::size_t available = points_.rows() - (exclude >= 0 ? 1 : 0);
    if (k > available)
        throw QueryError("knn_query: k=" + std::to_string(k) + " exceeds indexed points");

    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(points_.rows());
    for (std::size_t i = 0; i < points_.rows(); ++i) {
        if (exclude >= 0 && i == static_cast<std::size_t>(exclude)) continue;
        dist.emplace_back(squared_distance(q, points_.row(i)), i);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
    return out;
}

std::vector<std::size_t> KnnIndex::query(std::span<const double> q, std::size_t k) const {
    return query_impl(q, k, -1);
}

std::vector<std::size_t> KnnIndex::query_excluding(std::span<const double> q, std::size_t k,
                                                   std::size_t self) const {
    return query_impl(q, k, static_cast<long long>(self));
}

void KnnClassifier::fit(const Matrix& X, const Labels& y, int n_classes) {
    if (params_.k > X.rows()) throw FitError("fit_knn: k exceeds train size");
    scaler_.fit(X);
    index_ = std::make_unique<KnnIndex>(scaler_.transform(X));
    y_ = y;
    n_classes_ = n_classes;
}

std::vector<double> KnnClassifier::predict_proba(std::span<const double> x) const {
    if (!index_) throw PredictError("KnnClassifier: not fitted");
    auto neighbors = index_->query(scaler_.transform_row(x), params_.k);
    std::vector<double> proba(static_cast<std::size_t>(n_classes_), 0.0);
    for (std::size_t i : neighbors) proba[static_cast<std::size_t>(y_[i])] += 1.0;
    for (double& p : proba) p /= static_cast<double>(neighbors.size());
    return proba;
}

KMeansResult kmeans(const Matrix& X, std::size_t n_clusters, std::uint64_t seed,
                    std::size_t max_iters) {
    std::size_t n = X.rows();
    if (n == 0) throw FitError("kmeans: empty input");
    n_clusters = std::min(n_clusters, n);

    Rng rng(seed);
    Matrix centroids(n_clusters, X.cols());

    // k-means++ seeding
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
    std::size_t first = rng.uniform_index(n);
    std::copy(X.row(first).begin(), X.row(first).end(), centroids.row(0).begin());
    for (std::size_t c = 1; c < n_clusters; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            min_dist[i] = std::min(min_dist[i], squared_distance(X.row(i), centroids.row(c - 1)));
            total += min_dist[i];
        }
        std::size_t pick = 0;
        if (total > 0) {
            double r = rng.u01() * total, acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += min_dist[i];
                if (acc >= r) { pick = i; break; }
            }
        } else {
            pick = rng.uniform_index(n);
        }
        std::copy(X.row(pick).begin(), X.row(pick).end(), centroids.row(c).begin());
    }

    std::vector<int> assignment(n, -1);
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (std::size_t c = 0; c < n_clusters; ++c) {
                double d = squared_distance(X.row(i), centroids.row(c));
                if (d < best) { best = d; best_c = static_cast<int>(c); }
            }
            if (assignment[i] != best_c) { assignment[i] = best_c; changed = true; }
        }
        if (!changed && iter > 0) break;

        Matrix sums(n_clusters, X.cols());
        std::vector<std::size_t> counts(n_clusters, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto c = static_cast<std::size_t>(assignment[i]);
            counts[c]++;
            for (std::size_t j = 0; j < X.cols(); ++j) sums(c, j) += X(i, j);
        }
        for (std::size_t c = 0; c < n_clusters; ++c) {
            if (counts[c] == 0) {
                // re-seed an empty cluster from the point farthest from its centroid
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double d = squared_distance(
                        X.row(i), centroids.row(static_cast<std::size_t>(assignment[i])));
                    if (d > far_d) { far_d = d; far = i; }
                }
                std::copy(X.row(far).begin(), X.row(far).end(), centroids.row(c).begin());
                continue;
            }
            for (std::size_t j = 0; j < X.cols(); ++j)
                centroids(c, j) = sums(c, j) / static_cast<double>(counts[c]);
        }
    }

    return {std::move(centroids), std::move(assignment), n_clusters};
}

}  // namespace cibench

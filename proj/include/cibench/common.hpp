#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cibench {

// ---------------------------------------------------------------------------
// Error hierarchy. Every failure surfaces as a typed exception so callers
// (and the grid driver) can tell configuration problems from data problems.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IngestError : Error { using Error::Error; };
struct RecipeError : Error { using Error::Error; };
struct SplitError  : Error { using Error::Error; };
struct FitError    : Error { using Error::Error; };
struct PredictError: Error { using Error::Error; };
struct QueryError  : Error { using Error::Error; };
struct VoteError   : Error { using Error::Error; };
struct MetricError : Error { using Error::Error; };
struct OptError    : Error { using Error::Error; };
struct ShapeError  : Error { using Error::Error; };
struct SampleError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct RankError   : Error { using Error::Error; };
struct IoError     : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Dense row-major matrix of doubles. Small and value-semantic; all the
// learners work on views of rows.
// ---------------------------------------------------------------------------

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : n_(rows), f_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return n_; }
    std::size_t cols() const { return f_; }
    bool empty() const { return n_ == 0; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * f_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * f_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * f_, f_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * f_, f_}; }

    void push_row(std::span<const double> r) {
        if (f_ == 0 && n_ == 0) f_ = r.size();
        if (r.size() != f_) throw ShapeError("push_row: width mismatch");
        data_.insert(data_.end(), r.begin(), r.end());
        ++n_;
    }

    Matrix select(const std::vector<std::size_t>& idx) const {
        Matrix out(idx.size(), f_);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            auto src = row(idx[i]);
            std::copy(src.begin(), src.end(), out.row(i).begin());
        }
        return out;
    }

    const std::vector<double>& raw() const { return data_; }
    std::vector<double>& raw() { return data_; }

    bool operator==(const Matrix& o) const = default;

private:
    std::size_t n_ = 0;
    std::size_t f_ = 0;
    std::vector<double> data_;
};

using Labels = std::vector<int>;

// ---------------------------------------------------------------------------
// Deterministic RNG. A thin wrapper over splitmix64 so every stream is
// reproducible across platforms and standard-library versions; std::
// distributions are deliberately avoided.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable mixer for deriving independent seeds from (seed, tag, index)
// tuples. Grid cells use this so results never depend on scheduling.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return splitmix64(s);
}

inline std::uint64_t hash_str(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {
        // warm up so nearby seeds decorrelate
        splitmix64(state_);
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0, 1)
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(u01() * static_cast<double>(n)) % n;
    }

    // standard normal via Box-Muller, pair cached
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        while (u <= 1e-300) u = u01();
        double v = u01();
        double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * M_PI * v);
        has_spare_ = true;
        return r * std::cos(2.0 * M_PI * v);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Per-feature min-max scaling to [0,1], fit on the train split only.
// Distance-based components (KNN, SMOTE family, k-means, SVM, GAN) use it.
// ---------------------------------------------------------------------------

class MinMaxScaler {
public:
    MinMaxScaler() = default;

    void fit(const Matrix& X) {
        mins_.assign(X.cols(), std::numeric_limits<double>::infinity());
        maxs_.assign(X.cols(), -std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < X.rows(); ++i)
            for (std::size_t j = 0; j < X.cols(); ++j) {
                mins_[j] = std::min(mins_[j], X(i, j));
                maxs_[j] = std::max(maxs_[j], X(i, j));
            }
    }

    Matrix transform(const Matrix& X) const {
        Matrix out(X.rows(), X.cols());
        for (std::size_t i = 0; i < X.rows(); ++i)
            for (std::size_t j = 0; j < X.cols(); ++j)
                out(i, j) = scale_one(X(i, j), j);
        return out;
    }

    std::vector<double> transform_row(std::span<const double> x) const {
        std::vector<double> out(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) out[j] = scale_one(x[j], j);
        return out;
    }

    std::vector<double> inverse_row(std::span<const double> x) const {
        std::vector<double> out(x.size());
        for (std::size_t j = 0; j < x.size(); ++j)
            out[j] = mins_[j] + x[j] * (maxs_[j] - mins_[j]);
        return out;
    }

    bool fitted() const { return !mins_.empty(); }
    const std::vector<double>& mins() const { return mins_; }
    const std::vector<double>& maxs() const { return maxs_; }

private:
    double scale_one(double v, std::size_t j) const {
        double range = maxs_[j] - mins_[j];
        if (range <= 0.0) return 0.0;  // constant feature
        return (v - mins_[j]) / range;
    }

    std::vector<double> mins_;
    std::vector<double> maxs_;
};

inline double sigmoid(double z) {
    if (z >= 0) {
        double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double t = a[j] - b[j];
        d += t * t;
    }
    return d;
}

inline int count_classes(const Labels& y) {
    int c = 0;
    for (int v : y) c = std::max(c, v + 1);
    return c;
}

inline std::vector<std::size_t> class_counts(const Labels& y, int n_classes) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes), 0);
    for (int v : y) counts[static_cast<std::size_t>(v)]++;
    return counts;
}

// Argmax with ties broken toward the lowest class index; the uniform rule
// across the whole toolkit.
inline int argmax_lowest(std::span<const double> v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
        if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(best)]) best = i;
    return best;
}

}  // namespace cibench

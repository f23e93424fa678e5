#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cibench/dataset.hpp"

namespace cibench {

enum class AugmentMethod {
    None,
    Ros,
    Rus,
    Smote,
    SmoteEnn,
    BorderlineSmote,
    SvmSmote,
    KmeansSmote,
    Adasyn,
    Ctgan,
};

AugmentMethod augment_method_from_string(const std::string& name);
std::string augment_method_name(AugmentMethod m);

enum class RowOrigin { Original, Duplicate, Synthetic };

/// Per-output-row provenance. Synthetic rows record the seed row, the chosen
/// neighbour and the interpolation factor so tests can replay the segment.
struct RowProvenance {
    RowOrigin origin = RowOrigin::Original;
    std::size_t source_a = static_cast<std::size_t>(-1);
    std::size_t source_b = static_cast<std::size_t>(-1);
    double u = 0.0;
    bool extrapolated = false;
};

struct ResampledTrain {
    Matrix X;
    Labels y;
    std::vector<RowProvenance> provenance;   // one entry per output row
    std::vector<std::size_t> removed;        // input rows dropped (cleaning/undersampling)
    bool warning = false;
    std::string warning_message;

    std::size_t count_origin(RowOrigin o) const {
        std::size_t n = 0;
        for (const auto& p : provenance)
            if (p.origin == o) ++n;
        return n;
    }
};

/// Method id plus hyperparameters (published defaults) and a mandatory seed.
struct AugmenterSpec {
    AugmentMethod method = AugmentMethod::None;
    std::uint64_t seed = 0;

    std::size_t smote_k = 5;
    std::size_t enn_k = 3;
    std::size_t m_neighbors = 10;
    double out_step = 0.5;
    double svm_c = 1.0;
    std::size_t svm_epochs = 200;
    std::size_t kmeans_k = 2;
    std::size_t kmeans_clusters = 8;
    double kmeans_balance_threshold = 0.5;
    std::size_t adasyn_k = 5;

    // CT-GAN knobs (consumed by the gan module)
    std::size_t gan_noise_dim = 16;
    std::size_t gan_epochs = 1000;
    std::size_t gan_batch = 64;
    double gan_step = 1e-3;
    std::string gan_trace_path;
};

ResampledTrain ros(const Dataset& train, std::uint64_t seed);
ResampledTrain rus(const Dataset& train, std::uint64_t seed);
ResampledTrain smote(const Dataset& train, std::size_t k, std::uint64_t seed);
ResampledTrain smote_enn(const Dataset& train, std::size_t k_smote, std::size_t k_enn,
                         std::uint64_t seed);
ResampledTrain borderline_smote(const Dataset& train, std::size_t k, std::size_t m,
                                std::uint64_t seed);
ResampledTrain svm_smote(const Dataset& train, std::size_t k, std::size_t m, double out_step,
                         double c, std::size_t epochs, std::uint64_t seed);
ResampledTrain kmeans_smote(const Dataset& train, std::size_t k, std::size_t n_clusters,
                            double balance_threshold, std::uint64_t seed);
ResampledTrain adasyn(const Dataset& train, std::size_t k, std::uint64_t seed);

/// Dispatch on spec.method (including none and ctgan).
ResampledTrain augment(const Dataset& train, const AugmenterSpec& spec);

/// Applies a resampling result back onto a Dataset shell (names/classes kept).
Dataset to_dataset(const Dataset& train, const ResampledTrain& resampled);

}  // namespace cibench

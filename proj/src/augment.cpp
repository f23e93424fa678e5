#include "cibench/gan.hpp"
#include "cibench/resampling.hpp"

namespace cibench {

ResampledTrain augment(const Dataset& train, const AugmenterSpec& spec) {
    switch (spec.method) {
        case AugmentMethod::None: {
            ResampledTrain out;
            out.X = train.X;
            out.y = train.y;
            out.provenance.resize(train.size());
            for (std::size_t i = 0; i < train.size(); ++i)
                out.provenance[i] = {RowOrigin::Original, i, static_cast<std::size_t>(-1), 0.0,
                                     false};
            return out;
        }
        case AugmentMethod::Ros:
            return ros(train, spec.seed);
        case AugmentMethod::Rus:
            return rus(train, spec.seed);
        case AugmentMethod::Smote:
            return smote(train, spec.smote_k, spec.seed);
        case AugmentMethod::SmoteEnn:
            return smote_enn(train, spec.smote_k, spec.enn_k, spec.seed);
        case AugmentMethod::BorderlineSmote:
            return borderline_smote(train, spec.smote_k, spec.m_neighbors, spec.seed);
        case AugmentMethod::SvmSmote:
            return svm_smote(train, spec.smote_k, spec.m_neighbors, spec.out_step, spec.svm_c,
                             spec.svm_epochs, spec.seed);
        case AugmentMethod::KmeansSmote:
            return kmeans_smote(train, spec.kmeans_k, spec.kmeans_clusters,
                                spec.kmeans_balance_threshold, spec.seed);
        case AugmentMethod::Adasyn:
            return adasyn(train, spec.adasyn_k, spec.seed);
        case AugmentMethod::Ctgan: {
            GanConfig cfg;
            cfg.noise_dim = spec.gan_noise_dim;
            cfg.epochs = spec.gan_epochs;
            cfg.batch = spec.gan_batch;
            cfg.step_size = spec.gan_step;
            cfg.trace_path = spec.gan_trace_path;
            return ctgan_augment(train, cfg, spec.seed);
        }
    }
    throw ConfigError("augment: unknown method");
}

}  // namespace cibench

#pragma once

#include <string>
#include <vector>

#include "cibench/dataset.hpp"
#include "cibench/resampling.hpp"

namespace cibench {

// ---------------------------------------------------------------------------
// Small dense nets with exact backprop, plus a hand-rolled Adam. These are
// the building blocks of the conditional tabular generator.
// ---------------------------------------------------------------------------

enum class Activation { Relu, Linear, Sigmoid };

struct DenseLayer {
    Matrix W;                // out x in
    std::vector<double> b;   // out
};

struct Mlp {
    std::vector<DenseLayer> layers;
    Activation output_activation = Activation::Linear;

    std::size_t input_width() const { return layers.front().W.cols(); }
    std::size_t output_width() const { return layers.back().W.rows(); }
};

/// Hidden layers use rectified-linear units; widths fix the architecture.
Mlp make_mlp(std::size_t input, const std::vector<std::size_t>& hidden, std::size_t output,
             Activation output_activation, Rng& rng);

struct MlpCache {
    std::vector<Matrix> activations;  // [0]=input, then post-activation per layer
    std::vector<Matrix> pre;          // pre-activation per layer
};

Matrix mlp_forward(const Mlp& net, const Matrix& batch, MlpCache* cache = nullptr);

struct MlpGrads {
    std::vector<DenseLayer> layers;  // same shapes as the net
    Matrix input;                    // dLoss/dInput
};

/// Exact gradients given dLoss/dOutput (the loss derivative is the caller's).
MlpGrads mlp_backward(const Mlp& net, const MlpCache& cache, const Matrix& dloss_dout);

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
};

/// One bias-corrected Adam step over a flat parameter view; t starts at 1.
void adam_update(std::span<double> param, std::span<const double> grad, AdamState& state,
                 double step_size, double beta1, double beta2, double eps, std::size_t t);

// ---------------------------------------------------------------------------
// Conditional tabular GAN, simplified: min-max scaled features, one-hot class
// condition, least-squares adversarial loss, Adam, plateau-aware stopping.
// ---------------------------------------------------------------------------

struct GanConfig {
    std::size_t noise_dim = 16;
    std::size_t epochs = 1000;          // hard cap
    std::size_t batch = 64;             // clamped to train size
    double step_size = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    std::vector<std::size_t> hidden = {50, 25, 10};
    std::string trace_path;             // optional per-epoch loss trace file
};

struct GeneratorHandle {
    Mlp generator;
    MinMaxScaler scaler;
    std::size_t noise_dim = 0;
    int n_classes = 0;
    std::size_t n_features = 0;
    std::size_t epochs_ran = 0;
    std::vector<std::pair<double, double>> loss_trace;  // (d_loss, g_loss) per epoch
};

GeneratorHandle fit_ctgan(const Dataset& train, const GanConfig& config, std::uint64_t seed);

/// n synthetic rows for one class, in original feature units. Deterministic
/// for a given seed.
Matrix sample(const GeneratorHandle& handle, int class_index, std::size_t n, std::uint64_t seed);

/// Fit on the train split, then sample each class's deficit so counts
/// equalize to the majority.
ResampledTrain ctgan_augment(const Dataset& train, const GanConfig& config, std::uint64_t seed);

}  // namespace cibench

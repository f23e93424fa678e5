#include "cibench/gan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace cibench {

Mlp make_mlp(std::size_t input, const std::vector<std::size_t>& hidden, std::size_t output,
             Activation output_activation, Rng& rng) {
    Mlp net;
    net.output_activation = output_activation;
    std::size_t in = input;
    std::vector<std::size_t> widths(hidden);
    widths.push_back(output);
    for (std::size_t w : widths) {
        DenseLayer layer;
        layer.W = Matrix(w, in);
        layer.b.assign(w, 0.0);
        double scale = std::sqrt(6.0 / static_cast<double>(in + w));
        for (std::size_t i = 0; i < w; ++i)
            for (std::size_t j = 0; j < in; ++j)
                layer.W(i, j) = (2.0 * rng.u01() - 1.0) * scale;
        net.layers.push_back(std::move(layer));
        in = w;
    }
    return net;
}

Matrix mlp_forward(const Mlp& net, const Matrix& batch, MlpCache* cache) {
    if (batch.cols() != net.input_width())
        throw ShapeError("mlp_forward: batch width " + std::to_string(batch.cols()) +
                         " != input width " + std::to_string(net.input_width()));
    if (cache) {
        cache->activations.clear();
        cache->pre.clear();
        cache->activations.push_back(batch);
    }
    Matrix cur = batch;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const DenseLayer& layer = net.layers[l];
        Matrix z(cur.rows(), layer.W.rows());
        for (std::size_t i = 0; i < cur.rows(); ++i)
            for (std::size_t o = 0; o < layer.W.rows(); ++o) {
                double acc = layer.b[o];
                for (std::size_t j = 0; j < layer.W.cols(); ++j) acc += layer.W(o, j) * cur(i, j);
                z(i, o) = acc;
            }
        bool last = (l + 1 == net.layers.size());
        Activation act = last ? net.output_activation : Activation::Relu;
        Matrix a = z;
        if (act == Activation::Relu) {
            for (std::size_t i = 0; i < a.rows(); ++i)
                for (std::size_t o = 0; o < a.cols(); ++o) a(i, o) = std::max(0.0, a(i, o));
        } else if (act == Activation::Sigmoid) {
            for (std::size_t i = 0; i < a.rows(); ++i)
                for (std::size_t o = 0; o < a.cols(); ++o) a(i, o) = sigmoid(a(i, o));
        }
        if (cache) {
            cache->pre.push_back(std::move(z));
            cache->activations.push_back(a);
        }
        cur = std::move(a);
    }
    return cur;
}

MlpGrads mlp_backward(const Mlp& net, const MlpCache& cache, const Matrix& dloss_dout) {
    MlpGrads grads;
    grads.layers.resize(net.layers.size());
    Matrix delta = dloss_dout;  // dLoss/dActivation at the current layer

    for (std::size_t l = net.layers.size(); l-- > 0;) {
        const DenseLayer& layer = net.layers[l];
        bool last = (l + 1 == net.layers.size());
        Activation act = last ? net.output_activation : Activation::Relu;

        // activation derivative: dLoss/dZ
        Matrix dz = delta;
        if (act == Activation::Relu) {
            for (std::size_t i = 0; i < dz.rows(); ++i)
                for (std::size_t o = 0; o < dz.cols(); ++o)
                    if (cache.pre[l](i, o) <= 0.0) dz(i, o) = 0.0;
        } else if (act == Activation::Sigmoid) {
            for (std::size_t i = 0; i < dz.rows(); ++i)
                for (std::size_t o = 0; o < dz.cols(); ++o) {
                    double s = cache.activations[l + 1](i, o);
                    dz(i, o) *= s * (1.0 - s);
                }
        }

        const Matrix& input = cache.activations[l];
        DenseLayer& g = grads.layers[l];
        g.W = Matrix(layer.W.rows(), layer.W.cols());
        g.b.assign(layer.b.size(), 0.0);
        for (std::size_t i = 0; i < dz.rows(); ++i)
            for (std::size_t o = 0; o < layer.W.rows(); ++o) {
                double d = dz(i, o);
                if (d == 0.0) continue;
                g.b[o] += d;
                for (std::size_t j = 0; j < layer.W.cols(); ++j) g.W(o, j) += d * input(i, j);
            }

        Matrix prev_delta(dz.rows(), layer.W.cols());
        for (std::size_t i = 0; i < dz.rows(); ++i)
            for (std::size_t j = 0; j < layer.W.cols(); ++j) {
                double acc = 0.0;
                for (std::size_t o = 0; o < layer.W.rows(); ++o)
                    acc += dz(i, o) * layer.W(o, j);
                prev_delta(i, j) = acc;
            }
        delta = std::move(prev_delta);
    }
    grads.input = std::move(delta);
    return grads;
}

void adam_update(std::span<double> param, std::span<const double> grad, AdamState& state,
                 double step_size, double beta1, double beta2, double eps, std::size_t t) {
    if (t < 1) throw OptError("adam_update: t must be >= 1");
    if (param.size() != grad.size()) throw OptError("adam_update: shape mismatch");
    if (state.m.empty()) {
        state.m.assign(param.size(), 0.0);
        state.v.assign(param.size(), 0.0);
    }
    double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < param.size(); ++i) {
        if (!std::isfinite(grad[i])) throw OptError("adam_update: non-finite gradient");
        state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grad[i];
        state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grad[i] * grad[i];
        double m_hat = state.m[i] / bc1;
        double v_hat = state.v[i] / bc2;
        param[i] -= step_size * m_hat / (std::sqrt(v_hat) + eps);
    }
}

namespace {

// Adam over every tensor of an Mlp, sharing one step counter.
class MlpAdam {
public:
    explicit MlpAdam(const Mlp& net) : states_(net.layers.size() * 2) {}

    void step(Mlp& net, const MlpGrads& grads, const GanConfig& cfg) {
        ++t_;
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            adam_update(net.layers[l].W.raw(), grads.layers[l].W.raw(), states_[2 * l],
                        cfg.step_size, cfg.beta1, cfg.beta2, cfg.adam_eps, t_);
            adam_update(net.layers[l].b, grads.layers[l].b, states_[2 * l + 1], cfg.step_size,
                        cfg.beta1, cfg.beta2, cfg.adam_eps, t_);
        }
    }

private:
    std::vector<AdamState> states_;
    std::size_t t_ = 0;
};

Matrix concat_cols(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
    }
    return out;
}

struct TrainOutcome {
    bool diverged = false;
    GeneratorHandle handle;
};

TrainOutcome train_once(const Dataset& train, const GanConfig& config, std::uint64_t seed) {
    TrainOutcome outcome;
    std::size_t n = train.size();
    std::size_t f = train.X.cols();
    int n_classes = train.n_classes();
    std::size_t batch = std::min(config.batch, n);

    MinMaxScaler scaler;
    scaler.fit(train.X);
    Matrix Xs = scaler.transform(train.X);

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(n_classes));
    for (std::size_t i = 0; i < n; ++i)
        by_class[static_cast<std::size_t>(train.y[i])].push_back(i);

    Rng rng(seed);
    Mlp gen = make_mlp(config.noise_dim + static_cast<std::size_t>(n_classes), config.hidden, f,
                       Activation::Linear, rng);
    Mlp disc = make_mlp(f + static_cast<std::size_t>(n_classes), config.hidden, 1,
                        Activation::Sigmoid, rng);
    MlpAdam gen_opt(gen), disc_opt(disc);

    std::size_t steps_per_epoch = (n + batch - 1) / batch;
    std::vector<std::pair<double, double>> trace;

    auto draw_batch = [&](Matrix& onehot, Matrix& real, Matrix& noise_in) {
        onehot = Matrix(batch, static_cast<std::size_t>(n_classes));
        real = Matrix(batch, f);
        noise_in = Matrix(batch, config.noise_dim + static_cast<std::size_t>(n_classes));
        for (std::size_t i = 0; i < batch; ++i) {
            // training-by-sampling: class uniform, then a real row of that class
            auto c = rng.uniform_index(static_cast<std::size_t>(n_classes));
            onehot(i, c) = 1.0;
            std::size_t row = by_class[c][rng.uniform_index(by_class[c].size())];
            for (std::size_t j = 0; j < f; ++j) real(i, j) = Xs(row, j);
            for (std::size_t j = 0; j < config.noise_dim; ++j) noise_in(i, j) = rng.normal();
            noise_in(i, config.noise_dim + c) = 1.0;
        }
    };

    std::size_t epoch = 0;
    for (; epoch < config.epochs; ++epoch) {
        double d_loss_sum = 0.0, g_loss_sum = 0.0;
        for (std::size_t step = 0; step < steps_per_epoch; ++step) {
            Matrix onehot, real, noise_in;
            draw_batch(onehot, real, noise_in);
            double inv_b = 1.0 / static_cast<double>(batch);

            // --- discriminator step (least-squares targets: real 1, fake 0)
            Matrix fake = mlp_forward(gen, noise_in);
            MlpCache dc_real, dc_fake;
            Matrix d_real = mlp_forward(disc, concat_cols(real, onehot), &dc_real);
            Matrix d_fake = mlp_forward(disc, concat_cols(fake, onehot), &dc_fake);

            double d_loss = 0.0;
            Matrix dl_real(batch, 1), dl_fake(batch, 1);
            for (std::size_t i = 0; i < batch; ++i) {
                double er = d_real(i, 0) - 1.0;
                double ef = d_fake(i, 0);
                d_loss += 0.5 * (er * er + ef * ef) * inv_b;
                dl_real(i, 0) = er * inv_b;
                dl_fake(i, 0) = ef * inv_b;
            }
            MlpGrads g_real = mlp_backward(disc, dc_real, dl_real);
            MlpGrads g_fake = mlp_backward(disc, dc_fake, dl_fake);
            for (std::size_t l = 0; l < disc.layers.size(); ++l) {
                auto& wr = g_real.layers[l].W.raw();
                const auto& wf = g_fake.layers[l].W.raw();
                for (std::size_t idx = 0; idx < wr.size(); ++idx) wr[idx] += wf[idx];
                for (std::size_t idx = 0; idx < g_real.layers[l].b.size(); ++idx)
                    g_real.layers[l].b[idx] += g_fake.layers[l].b[idx];
            }
            disc_opt.step(disc, g_real, config);

            // --- generator step (fresh noise, target 1 on fakes)
            draw_batch(onehot, real, noise_in);
            MlpCache gc, dc;
            Matrix fake2 = mlp_forward(gen, noise_in, &gc);
            Matrix d_out = mlp_forward(disc, concat_cols(fake2, onehot), &dc);
            double g_loss = 0.0;
            Matrix dl(batch, 1);
            for (std::size_t i = 0; i < batch; ++i) {
                double e = d_out(i, 0) - 1.0;
                g_loss += e * e * inv_b;
                dl(i, 0) = 2.0 * e * inv_b;
            }
            MlpGrads d_grads = mlp_backward(disc, dc, dl);
            // route dLoss/d(fake features) back through the generator
            Matrix dfake(batch, f);
            for (std::size_t i = 0; i < batch; ++i)
                for (std::size_t j = 0; j < f; ++j) dfake(i, j) = d_grads.input(i, j);
            MlpGrads gen_grads = mlp_backward(gen, gc, dfake);
            gen_opt.step(gen, gen_grads, config);

            d_loss_sum += d_loss;
            g_loss_sum += g_loss;
        }
        double d_epoch = d_loss_sum / static_cast<double>(steps_per_epoch);
        double g_epoch = g_loss_sum / static_cast<double>(steps_per_epoch);
        if (!std::isfinite(d_epoch) || !std::isfinite(g_epoch)) {
            outcome.diverged = true;
            return outcome;
        }
        trace.emplace_back(d_epoch, g_epoch);

        // plateau stop: both losses stable over the last 50 epochs
        if (epoch >= 50) {
            auto [d_old, g_old] = trace[epoch - 50];
            double d_rel = std::fabs(d_epoch - d_old) / std::max(std::fabs(d_old), 1e-12);
            double g_rel = std::fabs(g_epoch - g_old) / std::max(std::fabs(g_old), 1e-12);
            if (d_rel < 1e-4 && g_rel < 1e-4) {
                ++epoch;
                break;
            }
        }
    }

    if (!config.trace_path.empty()) {
        std::ofstream out(config.trace_path);
        if (!out) throw IoError("cannot write loss trace: " + config.trace_path);
        out << "epoch,d_loss,g_loss\n";
        for (std::size_t e = 0; e < trace.size(); ++e)
            out << e << "," << trace[e].first << "," << trace[e].second << "\n";
    }

    outcome.handle.generator = std::move(gen);
    outcome.handle.scaler = std::move(scaler);
    outcome.handle.noise_dim = config.noise_dim;
    outcome.handle.n_classes = n_classes;
    outcome.handle.n_features = f;
    outcome.handle.epochs_ran = epoch;
    outcome.handle.loss_trace = std::move(trace);
    return outcome;
}

}  // namespace

GeneratorHandle fit_ctgan(const Dataset& train, const GanConfig& config, std::uint64_t seed) {
    if (train.n_classes() < 2) throw FitError("fit_ctgan: need at least 2 classes");
    if (train.size() < 2) throw FitError("fit_ctgan: train too small");

    TrainOutcome outcome = train_once(train, config, seed);
    if (outcome.diverged) {
        outcome = train_once(train, config, seed + 1);  // one restart, then give up
        if (outcome.diverged) throw FitError("fit_ctgan: training diverged twice");
    }
    return outcome.handle;
}

Matrix sample(const GeneratorHandle& handle, int class_index, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw SampleError("sample: n must be >= 1");
    if (class_index < 0 || class_index >= handle.n_classes)
        throw SampleError("sample: unknown class index " + std::to_string(class_index));

    Rng rng(seed);
    Matrix input(n, handle.noise_dim + static_cast<std::size_t>(handle.n_classes));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < handle.noise_dim; ++j) input(i, j) = rng.normal();
        input(i, handle.noise_dim + static_cast<std::size_t>(class_index)) = 1.0;
    }
    Matrix raw = mlp_forward(handle.generator, input);
    Matrix out(n, handle.n_features);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> clipped(handle.n_features);
        for (std::size_t j = 0; j < handle.n_features; ++j)
            clipped[j] = std::clamp(raw(i, j), 0.0, 1.0);
        auto orig = handle.scaler.inverse_row(clipped);
        for (std::size_t j = 0; j < handle.n_features; ++j) out(i, j) = orig[j];
    }
    return out;
}

ResampledTrain ctgan_augment(const Dataset& train, const GanConfig& config, std::uint64_t seed) {
    auto counts = class_counts(train.y, train.n_classes());
    std::size_t majority = *std::max_element(counts.begin(), counts.end());

    ResampledTrain out;
    out.X = train.X;
    out.y = train.y;
    out.provenance.resize(train.size());
    for (std::size_t i = 0; i < train.size(); ++i)
        out.provenance[i] = {RowOrigin::Original, i, static_cast<std::size_t>(-1), 0.0, false};

    bool any_deficit = false;
    for (auto c : counts) any_deficit |= (c < majority);
    if (!any_deficit) return out;  // balanced input: nothing to synthesize

    GeneratorHandle handle = fit_ctgan(train, config, seed);
    for (int c = 0; c < train.n_classes(); ++c) {
        std::size_t deficit = majority - counts[static_cast<std::size_t>(c)];
        if (deficit == 0) continue;
        Matrix rows = sample(handle, c, deficit, mix_seed(seed, static_cast<std::uint64_t>(c) + 7));
        for (std::size_t i = 0; i < rows.rows(); ++i) {
            out.X.push_row(rows.row(i));
            out.y.push_back(c);
            out.provenance.push_back({RowOrigin::Synthetic, static_cast<std::size_t>(-1),
                                      static_cast<std::size_t>(-1), 0.0, false});
        }
    }
    return out;
}

}  // namespace cibench

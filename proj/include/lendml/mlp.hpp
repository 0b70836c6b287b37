#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lendml/dataset.hpp"
#include "lendml/linear_model.hpp"

namespace lendml {

// Feed-forward net: tanh hidden layers, sigmoid output. layer_sizes is
// (p, n1, n2, 1) for the two-hidden-layer net or (p, 1) for the linear
// classifier. Dropout applies to hidden outputs only.
struct MlpParams {
    std::vector<size_t> layer_sizes;
    std::vector<Matrix> weights;              // weights[l] is sizes[l] x sizes[l+1]
    std::vector<std::vector<double>> biases;  // biases[l] has sizes[l+1] entries
    double dropout_rate = 0.0;                // in [0, 0.3]
    double l2_alpha = 0.0;

    size_t n_layers() const { return weights.size(); }
    void validate() const;
};

MlpParams make_mlp(const std::vector<size_t>& layer_sizes, double dropout_rate, double l2_alpha,
                   std::uint64_t seed);  // uniform +-sqrt(6/(fan_in+fan_out)) init

// Identifies one training step so dropout masks are a pure function of
// (seed, epoch, batch, layer, row, unit) and never depend on call order.
struct DropoutContext {
    std::uint64_t seed = 0;
    size_t epoch = 0;
    size_t batch = 0;
};

double dropout_mask_uniform(const DropoutContext& ctx, size_t layer, size_t row, size_t unit);

struct ForwardCache {
    std::vector<Matrix> hidden_pre;   // tanh outputs before dropout, per hidden layer
    std::vector<Matrix> masks;        // 0/1 keep masks per hidden layer; empty in Infer mode
    std::vector<Matrix> hidden_post;  // layer inputs actually fed forward
    std::vector<double> output;       // sigmoid probabilities
};

// Train mode (ctx set) applies inverted dropout: kept activations are scaled
// by 1/(1-rate) so Infer mode needs no rescaling and is fully deterministic.
ForwardCache mlp_forward(const MlpParams& params, const Matrix& X,
                         const std::optional<DropoutContext>& train_ctx);

std::vector<double> mlp_predict(const MlpParams& params, const Matrix& X);

struct MlpGradients {
    std::vector<Matrix> grad_w;
    std::vector<std::vector<double>> grad_b;
};

// Gradients of weighted mean cross-entropy + l2_alpha/2 * sum ||W_l||^2,
// masks treated as constants, biases unpenalized. Requires the cache of a
// matching forward pass.
MlpGradients mlp_backprop(const MlpParams& params, const Matrix& X, const std::vector<int>& y,
                          const std::vector<double>& sample_weights, const ForwardCache& cache);

double mlp_loss(const MlpParams& params, const std::vector<double>& probs,
                const std::vector<int>& y, const std::vector<double>& sample_weights);

struct MlpTrainResult {
    MlpParams params;
    std::vector<EpochStats> trace;
};

MlpTrainResult train_mlp(const std::vector<size_t>& layer_sizes, double dropout_rate,
                         double l2_alpha, const Matrix& X, const std::vector<int>& y,
                         const std::vector<double>& sample_weights, const TrainConfig& config,
                         const Matrix& X_val, const std::vector<int>& y_val);

}  // namespace lendml

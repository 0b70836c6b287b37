#include "lendml/mlp.hpp"

#include <cmath>
#include <limits>

#include "lendml/rng.hpp"

namespace lendml {

namespace {

void matmul_add(const Matrix& A, const Matrix& W, const std::vector<double>& b, Matrix& out) {
    // out = A * W + b (row-broadcast)
    out = Matrix(A.rows, W.cols);
    for (size_t r = 0; r < A.rows; ++r) {
        const double* arow = A.row(r);
        double* orow = out.row(r);
        for (size_t j = 0; j < W.cols; ++j) orow[j] = b[j];
        for (size_t k = 0; k < A.cols; ++k) {
            const double a = arow[k];
            if (a == 0.0) continue;
            const double* wrow = W.row(k);
            for (size_t j = 0; j < W.cols; ++j) orow[j] += a * wrow[j];
        }
    }
}

double cross_entropy(double p, int y) {
    // clamped so saturated probabilities cannot produce inf
    const double eps = 1e-12;
    p = std::min(1.0 - eps, std::max(eps, p));
    return y == 1 ? -std::log(p) : -std::log(1.0 - p);
}

}  // namespace

void MlpParams::validate() const {
    if (layer_sizes.size() < 2) fail("mlp: need at least input and output layer sizes");
    if (layer_sizes.back() != 1) fail("mlp: output layer must have one unit");
    if (weights.size() != layer_sizes.size() - 1 || biases.size() != weights.size())
        fail("mlp: layer count mismatch");
    for (size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        if (weights[l].rows != layer_sizes[l] || weights[l].cols != layer_sizes[l + 1])
            fail("mlp: weight matrix shape mismatch at layer " + std::to_string(l));
        if (biases[l].size() != layer_sizes[l + 1])
            fail("mlp: bias length mismatch at layer " + std::to_string(l));
    }
    if (dropout_rate < 0.0 || dropout_rate > 0.3)
        fail("mlp: dropout rate must lie in [0, 0.3]");
    if (l2_alpha < 0.0) fail("mlp: l2_alpha must be nonnegative");
}

MlpParams make_mlp(const std::vector<size_t>& layer_sizes, double dropout_rate, double l2_alpha,
                   std::uint64_t seed) {
    MlpParams p;
    p.layer_sizes = layer_sizes;
    p.dropout_rate = dropout_rate;
    p.l2_alpha = l2_alpha;
    Rng rng(substream_seed(seed, 0x171217));
    for (size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const size_t fan_in = layer_sizes[l], fan_out = layer_sizes[l + 1];
        const double bound = std::sqrt(6.0 / (double)(fan_in + fan_out));
        Matrix W(fan_in, fan_out);
        for (double& v : W.data) v = (2.0 * rng.uniform() - 1.0) * bound;
        p.weights.push_back(std::move(W));
        p.biases.emplace_back(fan_out, 0.0);
    }
    p.validate();
    return p;
}

double dropout_mask_uniform(const DropoutContext& ctx, size_t layer, size_t row, size_t unit) {
    std::uint64_t h = mix64(ctx.seed);
    h = mix64(h ^ (std::uint64_t)(ctx.epoch + 1));
    h = mix64(h ^ (std::uint64_t)(ctx.batch + 1));
    h = mix64(h ^ (std::uint64_t)(layer + 1));
    h = mix64(h ^ (std::uint64_t)(row + 1));
    h = mix64(h ^ (std::uint64_t)(unit + 1));
    return (h >> 11) * 0x1.0p-53;
}

ForwardCache mlp_forward(const MlpParams& params, const Matrix& X,
                         const std::optional<DropoutContext>& train_ctx) {
    params.validate();
    if (X.cols != params.layer_sizes[0])
        fail("mlp_forward: input width " + std::to_string(X.cols) + " does not match layer size " +
             std::to_string(params.layer_sizes[0]));

    ForwardCache cache;
    const size_t n_hidden = params.n_layers() - 1;
    const bool use_dropout = train_ctx.has_value() && params.dropout_rate > 0.0;
    const double keep = 1.0 - params.dropout_rate;

    Matrix current = X;
    for (size_t l = 0; l < n_hidden; ++l) {
        Matrix z;
        matmul_add(current, params.weights[l], params.biases[l], z);
        for (double& v : z.data) v = std::tanh(v);
        cache.hidden_pre.push_back(z);
        if (use_dropout) {
            Matrix mask(z.rows, z.cols, 1.0);
            for (size_t r = 0; r < z.rows; ++r)
                for (size_t u = 0; u < z.cols; ++u)
                    if (dropout_mask_uniform(*train_ctx, l, r, u) >= keep) mask.at(r, u) = 0.0;
            for (size_t i = 0; i < z.data.size(); ++i) z.data[i] = z.data[i] * mask.data[i] / keep;
            cache.masks.push_back(std::move(mask));
        }
        cache.hidden_post.push_back(z);
        current = std::move(z);
    }
    Matrix z;
    matmul_add(current, params.weights.back(), params.biases.back(), z);
    cache.output.resize(X.rows);
    for (size_t r = 0; r < X.rows; ++r) cache.output[r] = stable_sigmoid(z.at(r, 0));
    return cache;
}

std::vector<double> mlp_predict(const MlpParams& params, const Matrix& X) {
    return mlp_forward(params, X, std::nullopt).output;
}

double mlp_loss(const MlpParams& params, const std::vector<double>& probs,
                const std::vector<int>& y, const std::vector<double>& sample_weights) {
    double weight_sum = 0.0, data = 0.0;
    for (size_t r = 0; r < probs.size(); ++r) {
        data += sample_weights[r] * cross_entropy(probs[r], y[r]);
        weight_sum += sample_weights[r];
    }
    if (weight_sum <= 0.0) fail("mlp_loss: zero total sample weight");
    double reg = 0.0;
    for (const Matrix& W : params.weights)
        for (double v : W.data) reg += v * v;
    return data / weight_sum + params.l2_alpha * 0.5 * reg;
}

MlpGradients mlp_backprop(const MlpParams& params, const Matrix& X, const std::vector<int>& y,
                          const std::vector<double>& sample_weights, const ForwardCache& cache) {
    params.validate();
    const size_t n = X.rows;
    const size_t L = params.n_layers();
    const size_t n_hidden = L - 1;
    if (cache.output.size() != n || cache.hidden_pre.size() != n_hidden)
        fail("mlp_backprop: cache does not match the forward pass");

    double weight_sum = 0.0;
    for (double w : sample_weights) weight_sum += w;
    if (weight_sum <= 0.0) fail("mlp_backprop: zero total sample weight");

    MlpGradients g;
    g.grad_w.resize(L);
    g.grad_b.resize(L);
    for (size_t l = 0; l < L; ++l) {
        g.grad_w[l] = Matrix(params.weights[l].rows, params.weights[l].cols);
        g.grad_b[l].assign(params.biases[l].size(), 0.0);
    }

    // delta at the output pre-activation: w_i * (p_i - y_i) / sum w
    Matrix delta(n, 1);
    for (size_t r = 0; r < n; ++r) {
        const double d = sample_weights[r] * (cache.output[r] - (double)y[r]) / weight_sum;
        if (std::isnan(d)) fail("mlp_backprop: NaN in output delta");
        delta.at(r, 0) = d;
    }

    const double keep = 1.0 - params.dropout_rate;
    const bool use_dropout = !cache.masks.empty();

    for (size_t l = L; l-- > 0;) {
        const Matrix& input = l == 0 ? X : cache.hidden_post[l - 1];
        // grad_W = input^T . delta ; grad_b = column sums of delta
        for (size_t r = 0; r < n; ++r) {
            const double* irow = input.row(r);
            const double* drow = delta.row(r);
            for (size_t j = 0; j < delta.cols; ++j) {
                const double d = drow[j];
                if (d == 0.0) continue;
                for (size_t k = 0; k < input.cols; ++k) g.grad_w[l].at(k, j) += irow[k] * d;
                g.grad_b[l][j] += d;
            }
        }
        for (size_t i = 0; i < g.grad_w[l].data.size(); ++i)
            g.grad_w[l].data[i] += params.l2_alpha * params.weights[l].data[i];

        if (l == 0) break;
        // propagate through W_l, dropout mask and tanh derivative
        const Matrix& W = params.weights[l];
        Matrix prev(n, W.rows);
        for (size_t r = 0; r < n; ++r) {
            const double* drow = delta.row(r);
            double* prow = prev.row(r);
            for (size_t k = 0; k < W.rows; ++k) {
                double acc = 0.0;
                const double* wrow = W.row(k);
                for (size_t j = 0; j < W.cols; ++j) acc += wrow[j] * drow[j];
                prow[k] = acc;
            }
        }
        const Matrix& pre = cache.hidden_pre[l - 1];
        for (size_t r = 0; r < n; ++r) {
            for (size_t k = 0; k < prev.cols; ++k) {
                double factor = 1.0 - pre.at(r, k) * pre.at(r, k);
                if (use_dropout) factor *= cache.masks[l - 1].at(r, k) / keep;
                prev.at(r, k) *= factor;
            }
        }
        delta = std::move(prev);
    }
    return g;
}

MlpTrainResult train_mlp(const std::vector<size_t>& layer_sizes, double dropout_rate,
                         double l2_alpha, const Matrix& X, const std::vector<int>& y,
                         const std::vector<double>& sample_weights, const TrainConfig& config,
                         const Matrix& X_val, const std::vector<int>& y_val) {
    if (X.rows == 0) fail("train_mlp: empty training data");
    if (y.size() != X.rows || sample_weights.size() != X.rows)
        fail("train_mlp: label/weight row count mismatch");
    {
        bool has0 = false, has1 = false;
        for (int v : y) (v == 1 ? has1 : has0) = true;
        if (!has0 || !has1) fail("train_mlp: degenerate single-class training data");
    }

    MlpTrainResult result;
    result.params = make_mlp(layer_sizes, dropout_rate, l2_alpha, config.seed);
    if (config.max_epochs == 0) return result;

    MlpParams params = result.params;
    Rng rng(substream_seed(config.seed, 0x7E42));
    std::vector<size_t> order(X.rows);
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    const size_t batch = config.batch_size == 0 ? X.rows : config.batch_size;
    const std::vector<double> val_weights(X_val.rows, 1.0);

    double best_val = std::numeric_limits<double>::infinity();
    size_t stale = 0;

    for (size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
        rng.shuffle(order);
        size_t batch_index = 0;
        for (size_t start = 0; start < order.size(); start += batch, ++batch_index) {
            const size_t stop = std::min(order.size(), start + batch);
            const size_t bn = stop - start;
            Matrix bx(bn, X.cols);
            std::vector<int> by(bn);
            std::vector<double> bw(bn);
            for (size_t i = 0; i < bn; ++i) {
                const size_t r = order[start + i];
                std::copy(X.row(r), X.row(r) + X.cols, bx.row(i));
                by[i] = y[r];
                bw[i] = sample_weights[r];
            }
            DropoutContext ctx{config.seed, epoch, batch_index};
            ForwardCache cache = mlp_forward(params, bx, ctx);
            MlpGradients grads = mlp_backprop(params, bx, by, bw, cache);
            for (size_t l = 0; l < params.n_layers(); ++l) {
                for (size_t i = 0; i < params.weights[l].data.size(); ++i)
                    params.weights[l].data[i] -= config.learning_rate * grads.grad_w[l].data[i];
                for (size_t j = 0; j < params.biases[l].size(); ++j)
                    params.biases[l][j] -= config.learning_rate * grads.grad_b[l][j];
            }
        }
        EpochStats stats;
        stats.train_loss = mlp_loss(params, mlp_predict(params, X), y, sample_weights);
        stats.val_loss = X_val.rows > 0
                             ? mlp_loss(params, mlp_predict(params, X_val), y_val, val_weights)
                             : stats.train_loss;
        if (std::isnan(stats.train_loss) || std::isinf(stats.train_loss) ||
            std::isnan(stats.val_loss))
            fail("train_mlp: diverged at epoch " + std::to_string(epoch) +
                 " (learning_rate=" + format_double(config.learning_rate) + ")");
        result.trace.push_back(stats);
        if (stats.val_loss < best_val) {
            best_val = stats.val_loss;
            result.params = params;
            stale = 0;
        } else {
            ++stale;
            if (stale > config.patience) break;
        }
    }
    return result;
}

}  // namespace lendml

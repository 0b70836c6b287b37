#include "lendml/linear_model.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "lendml/rng.hpp"

namespace lendml {

namespace {

void check_dims(const LinearParams& params, const Matrix& X) {
    if (params.weights.size() != X.cols)
        fail("linear model: weight length " + std::to_string(params.weights.size()) +
             " does not match design width " + std::to_string(X.cols));
}

void check_finite(const Matrix& X, const std::vector<double>& w) {
    for (double v : X.data)
        if (std::isnan(v)) fail("linear model: NaN in design matrix");
    for (double v : w)
        if (std::isnan(v) || v < 0.0) fail("linear model: invalid sample weight");
}

double dot_row(const Matrix& X, size_t r, const std::vector<double>& w) {
    const double* row = X.row(r);
    double acc = 0.0;
    for (size_t j = 0; j < X.cols; ++j) acc += row[j] * w[j];
    return acc;
}

// log(1 + exp(z)) without overflow
double softplus(double z) {
    if (z > 0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

double penalty_value(Penalty p, double alpha, const std::vector<double>& w) {
    double acc = 0.0;
    if (p == Penalty::L2) {
        for (double v : w) acc += v * v;
        return alpha * 0.5 * acc;
    }
    for (double v : w) acc += std::fabs(v);
    return alpha * acc;
}

void add_penalty_grad(Penalty p, double alpha, const std::vector<double>& w,
                      std::vector<double>& grad) {
    if (p == Penalty::L2) {
        for (size_t j = 0; j < w.size(); ++j) grad[j] += alpha * w[j];
    } else {
        for (size_t j = 0; j < w.size(); ++j) {
            if (w[j] > 0) grad[j] += alpha;
            else if (w[j] < 0) grad[j] -= alpha;
            // sign(0) := 0
        }
    }
}

LossGrad loss_grad_rows(const LinearParams& params, const Matrix& X, const std::vector<int>& y,
                        const std::vector<double>& weights, const std::vector<size_t>& rows) {
    check_dims(params, X);
    LossGrad out;
    out.grad_w.assign(X.cols, 0.0);
    double weight_sum = 0.0;
    double data_loss = 0.0;

    if (params.model_kind == LinearKind::Logistic) {
        for (size_t r : rows) {
            const double sw = weights[r];
            const double z = dot_row(X, r, params.weights) + params.bias;
            const double p = stable_sigmoid(z);
            data_loss += sw * (softplus(z) - (double)y[r] * z);
            const double g = sw * (p - (double)y[r]);
            const double* row = X.row(r);
            for (size_t j = 0; j < X.cols; ++j) out.grad_w[j] += g * row[j];
            out.grad_b += g;
            weight_sum += sw;
        }
    } else {
        for (size_t r : rows) {
            const double sw = weights[r];
            const double ys = y[r] == 1 ? 1.0 : -1.0;
            const double m = dot_row(X, r, params.weights) + params.bias;
            const double slack = 1.0 - ys * m;
            if (slack > 0.0) {  // strictly; the kink itself contributes no gradient
                data_loss += sw * slack;
                const double g = -sw * ys;
                const double* row = X.row(r);
                for (size_t j = 0; j < X.cols; ++j) out.grad_w[j] += g * row[j];
                out.grad_b += g;
            }
            weight_sum += sw;
        }
    }
    if (weight_sum <= 0.0) fail("linear model: zero total sample weight");
    for (double& g : out.grad_w) g /= weight_sum;
    out.grad_b /= weight_sum;
    out.loss = data_loss / weight_sum + penalty_value(params.penalty, params.alpha, params.weights);
    add_penalty_grad(params.penalty, params.alpha, params.weights, out.grad_w);
    return out;
}

std::vector<size_t> all_rows(size_t n) {
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

}  // namespace

std::string to_string(Penalty p) { return p == Penalty::L1 ? "l1" : "l2"; }
std::string to_string(LinearKind k) { return k == LinearKind::Logistic ? "logistic" : "svm"; }

Penalty penalty_from_string(const std::string& s) {
    if (s == "l1" || s == "L1") return Penalty::L1;
    if (s == "l2" || s == "L2") return Penalty::L2;
    fail("unknown penalty: " + s);
}

double stable_sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

std::vector<double> logistic_predict(const LinearParams& params, const Matrix& X) {
    if (params.model_kind != LinearKind::Logistic) fail("logistic_predict: wrong model kind");
    check_dims(params, X);
    std::vector<double> p(X.rows);
    for (size_t r = 0; r < X.rows; ++r)
        p[r] = stable_sigmoid(dot_row(X, r, params.weights) + params.bias);
    return p;
}

std::vector<double> svm_decision(const LinearParams& params, const Matrix& X) {
    if (params.model_kind != LinearKind::HingeSVM) fail("svm_decision: wrong model kind");
    check_dims(params, X);
    std::vector<double> m(X.rows);
    for (size_t r = 0; r < X.rows; ++r) m[r] = dot_row(X, r, params.weights) + params.bias;
    return m;
}

LossGrad logistic_loss_grad(const LinearParams& params, const Matrix& X, const std::vector<int>& y,
                            const std::vector<double>& sample_weights) {
    if (params.model_kind != LinearKind::Logistic) fail("logistic_loss_grad: wrong model kind");
    check_finite(X, sample_weights);
    return loss_grad_rows(params, X, y, sample_weights, all_rows(X.rows));
}

LossGrad svm_loss_grad(const LinearParams& params, const Matrix& X, const std::vector<int>& y,
                       const std::vector<double>& sample_weights) {
    if (params.model_kind != LinearKind::HingeSVM) fail("svm_loss_grad: wrong model kind");
    check_finite(X, sample_weights);
    return loss_grad_rows(params, X, y, sample_weights, all_rows(X.rows));
}

std::vector<double> linear_scores(const LinearParams& params, const Matrix& X) {
    return params.model_kind == LinearKind::Logistic ? logistic_predict(params, X)
                                                     : svm_decision(params, X);
}

double classification_threshold(LinearKind kind) {
    return kind == LinearKind::Logistic ? 0.5 : 0.0;
}

LinearTrainResult train_linear(LinearKind kind, Penalty penalty, double alpha, const Matrix& X,
                               const std::vector<int>& y,
                               const std::vector<double>& sample_weights,
                               const TrainConfig& config, const Matrix& X_val,
                               const std::vector<int>& y_val) {
    if (X.rows == 0) fail("train_linear: empty training data");
    if (y.size() != X.rows || sample_weights.size() != X.rows)
        fail("train_linear: label/weight row count mismatch");
    check_finite(X, sample_weights);
    {
        bool has0 = false, has1 = false;
        for (int v : y) (v == 1 ? has1 : has0) = true;
        if (!has0 || !has1) fail("train_linear: degenerate single-class training data");
    }

    LinearParams params;
    params.model_kind = kind;
    params.penalty = penalty;
    params.alpha = alpha;
    params.weights.assign(X.cols, 0.0);
    params.bias = 0.0;

    LinearTrainResult result;
    result.params = params;
    if (config.max_epochs == 0) return result;

    const std::vector<double> val_weights(X_val.rows, 1.0);
    const std::vector<size_t> train_rows = all_rows(X.rows);
    const std::vector<size_t> val_rows = all_rows(X_val.rows);
    auto eval_loss = [&](const Matrix& M, const std::vector<int>& labels,
                         const std::vector<double>& w, const std::vector<size_t>& rows) {
        return loss_grad_rows(params, M, labels, w, rows).loss;
    };

    Rng rng(substream_seed(config.seed, 0x7E41));
    std::vector<size_t> order = train_rows;
    const size_t batch = config.batch_size == 0 ? X.rows : config.batch_size;

    double best_val = std::numeric_limits<double>::infinity();
    size_t stale = 0;

    for (size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
        rng.shuffle(order);
        for (size_t start = 0; start < order.size(); start += batch) {
            const size_t stop = std::min(order.size(), start + batch);
            std::vector<size_t> rows(order.begin() + (std::ptrdiff_t)start,
                                     order.begin() + (std::ptrdiff_t)stop);
            LossGrad g = loss_grad_rows(params, X, y, sample_weights, rows);
            if (std::isnan(g.loss) || std::isinf(g.loss))
                fail("train_linear: diverged at epoch " + std::to_string(epoch) +
                     " (learning_rate=" + format_double(config.learning_rate) + ")");
            for (size_t j = 0; j < params.weights.size(); ++j)
                params.weights[j] -= config.learning_rate * g.grad_w[j];
            params.bias -= config.learning_rate * g.grad_b;
        }
        EpochStats stats;
        stats.train_loss = eval_loss(X, y, sample_weights, train_rows);
        stats.val_loss = X_val.rows > 0 ? eval_loss(X_val, y_val, val_weights, val_rows)
                                        : stats.train_loss;
        if (std::isnan(stats.train_loss) || std::isinf(stats.train_loss) ||
            std::isnan(stats.val_loss))
            fail("train_linear: diverged at epoch " + std::to_string(epoch) +
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

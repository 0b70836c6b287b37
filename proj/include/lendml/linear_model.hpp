#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lendml/dataset.hpp"

namespace lendml {

enum class Penalty { L1, L2 };
enum class LinearKind { Logistic, HingeSVM };

std::string to_string(Penalty p);
std::string to_string(LinearKind k);
Penalty penalty_from_string(const std::string& s);

struct LinearParams {
    LinearKind model_kind = LinearKind::Logistic;
    Penalty penalty = Penalty::L2;
    double alpha = 0.0;  // penalty strength multiplying the regularizer
    std::vector<double> weights;
    double bias = 0.0;
};

struct TrainConfig {
    double learning_rate = 0.01;
    size_t batch_size = 256;
    size_t max_epochs = 100;
    size_t patience = 5;  // epochs without validation improvement before stopping
    std::uint64_t seed = 0;
};

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad_w;
    double grad_b = 0.0;
};

// sigmoid(w.x + b), overflow-safe at any magnitude
std::vector<double> logistic_predict(const LinearParams& params, const Matrix& X);

// raw margins w.x + b; predicted class is 1 iff margin >= 0
std::vector<double> svm_decision(const LinearParams& params, const Matrix& X);

// weighted mean cross-entropy + alpha * penalty(w); bias unpenalized.
// L1 subgradient uses sign(0) = 0.
LossGrad logistic_loss_grad(const LinearParams& params, const Matrix& X,
                            const std::vector<int>& y, const std::vector<double>& sample_weights);

// weighted mean hinge + alpha * penalty(w); labels map {0,1} -> {-1,+1}
// internally; subgradient is 0 at the hinge kink.
LossGrad svm_loss_grad(const LinearParams& params, const Matrix& X, const std::vector<int>& y,
                       const std::vector<double>& sample_weights);

struct EpochStats {
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct LinearTrainResult {
    LinearParams params;  // best-validation-loss parameters
    std::vector<EpochStats> trace;
};

// Mini-batch gradient descent from zero initialization, shuffled per epoch
// with a seeded generator, early-stopped on validation loss.
LinearTrainResult train_linear(LinearKind kind, Penalty penalty, double alpha, const Matrix& X,
                               const std::vector<int>& y,
                               const std::vector<double>& sample_weights,
                               const TrainConfig& config, const Matrix& X_val,
                               const std::vector<int>& y_val);

// scores used for ranking/thresholding: probabilities for logistic, margins for SVM
std::vector<double> linear_scores(const LinearParams& params, const Matrix& X);
double classification_threshold(LinearKind kind);

double stable_sigmoid(double z);

}  // namespace lendml

// Independent test oracles. Everything here is deliberately naive (pairwise
// loops, finite differences) and must stay decoupled from the library's
// implementation paths.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "lendml/dataset.hpp"
#include "lendml/rng.hpp"

namespace oracle {

// O(n^2) pairwise AUC with half-credit for ties.
inline double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    size_t pairs = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / (double)pairs;
}

// Central finite differences of a scalar function over a parameter vector.
inline std::vector<double> finite_difference(const std::function<double(const std::vector<double>&)>& f,
                                             std::vector<double> theta, double h = 1e-5) {
    std::vector<double> grad(theta.size());
    for (size_t i = 0; i < theta.size(); ++i) {
        const double saved = theta[i];
        theta[i] = saved + h;
        const double up = f(theta);
        theta[i] = saved - h;
        const double down = f(theta);
        theta[i] = saved;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

// |a-b| relative to max(1, |a|, |b|): relative for large gradients,
// absolute near zero.
inline double grad_error(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

inline double max_grad_error(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, grad_error(a[i], b[i]));
    return worst;
}

inline lendml::Matrix random_matrix(lendml::Rng& rng, size_t rows, size_t cols, double scale = 1.0) {
    lendml::Matrix m(rows, cols);
    for (double& v : m.data) v = rng.normal(0.0, scale);
    return m;
}

inline std::vector<int> random_labels(lendml::Rng& rng, size_t n, double p1 = 0.5) {
    std::vector<int> y(n);
    bool has0 = false, has1 = false;
    for (size_t i = 0; i < n; ++i) {
        y[i] = rng.bernoulli(p1) ? 1 : 0;
        (y[i] ? has1 : has0) = true;
    }
    if (!has0) y[0] = 0;
    if (!has1) y[n - 1] = 1;
    return y;
}

inline std::vector<double> random_weights(lendml::Rng& rng, size_t n) {
    std::vector<double> w(n);
    for (double& v : w) v = 0.25 + rng.uniform() * 1.5;
    return w;
}

}  // namespace oracle

#include "lendml/rng.hpp"

#include <algorithm>
#include <cmath>

namespace lendml {

double Rng::normal(double mean, double stddev) {
    // Box-Muller, pairwise.
    if (have_spare_) {
        have_spare_ = false;
        return mean + stddev * spare_;
    }
    double u1 = uniform(), u2 = uniform();
    // avoid log(0)
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return mean + stddev * r * std::cos(theta);
}

std::vector<size_t> Rng::sample_without_replacement(size_t n, size_t k) {
    // Partial Fisher-Yates over an index pool.
    std::vector<size_t> pool(n);
    for (size_t i = 0; i < n; ++i) pool[i] = i;
    if (k > n) k = n;
    for (size_t i = 0; i < k; ++i) {
        size_t j = i + (size_t)uniform_int(0, (std::int64_t)(n - i) - 1);
        std::swap(pool[i], pool[j]);
    }
    std::vector<size_t> out(pool.begin(), pool.begin() + (std::ptrdiff_t)k);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace lendml

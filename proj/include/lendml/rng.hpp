#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace lendml {

// splitmix64 finisher; also used to derive independent substream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(seed ^ mix64(tag));
}

// Deterministic RNG. std::mt19937_64 is fully specified by the standard;
// the distributions below are hand-rolled because the standard library's
// distribution objects are implementation-defined and would break the
// byte-identical-outputs contract across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi]
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = (std::uint64_t)(hi - lo + 1);
        return lo + (std::int64_t)(std::uint64_t)(uniform() * (double)span);
    }

    bool bernoulli(double p) { return uniform() < p; }

    double normal(double mean = 0.0, double stddev = 1.0);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = (size_t)uniform_int(0, (std::int64_t)i - 1);
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices from [0, n), in increasing order.
    std::vector<size_t> sample_without_replacement(size_t n, size_t k);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace lendml

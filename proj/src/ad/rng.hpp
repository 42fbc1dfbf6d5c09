#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "util/fnv.hpp"

namespace asqg::ad {

// Seeded splittable RNG. Every stochastic operation takes one of these
// explicitly; child() derives an independent stream so that adding or
// reordering consumers does not disturb sibling streams.
class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed), gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53-bit mantissa. Identical across platforms;
    // std::uniform_real_distribution is not.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform index in [0, n). n must be positive.
    size_t index(size_t n) { return static_cast<size_t>(next_u64() % n); }

    Rng child(uint64_t tag) const { return Rng(mix(seed_, tag)); }
    Rng child(std::string_view name) const { return child(fnv1a64(name)); }

    uint64_t seed() const { return seed_; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static uint64_t mix(uint64_t a, uint64_t b) {
        // splitmix64 finalizer over the combined seed
        uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace asqg::ad

#pragma once
#include <cstdint>
#include <random>

namespace percolab {

// splitmix64 finalizer; used both to bootstrap engines and to derive
// independent child seed streams.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Documented child-seed derivation: child_k = hash(root, k).
inline uint64_t child_seed(uint64_t root, uint64_t k) {
    return mix64(mix64(root) ^ mix64(k + 0x632be59bd9b4e019ULL));
}

// Two-level derivation for (parameter, replicate) grids.
inline uint64_t child_seed(uint64_t root, uint64_t a, uint64_t b) {
    return child_seed(child_seed(root, a), b);
}

class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(mix64(seed)) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }
    // integer in [0, n)
    uint64_t below(uint64_t n) {
        return std::uniform_int_distribution<uint64_t>(0, n - 1)(eng_);
    }
    long poisson(double mean) {
        if (mean <= 0.0) return 0;
        return std::poisson_distribution<long>(mean)(eng_);
    }
    double exponential(double rate) {
        return std::exponential_distribution<double>(rate)(eng_);
    }
    double normal(double mu, double sigma) {
        return std::normal_distribution<double>(mu, sigma)(eng_);
    }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

}  // namespace percolab

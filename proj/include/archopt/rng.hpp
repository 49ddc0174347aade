#pragma once

#include <cstdint>
#include <cmath>

namespace archopt {

// splitmix64-based generator. Output is stable across platforms and standard
// library versions, which the reproducibility contract of optimizer runs
// relies on (std::uniform_*_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). n must be > 0.
    std::size_t index(std::size_t n) {
        // rejection sampling avoids modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return static_cast<std::size_t>(v % n);
    }

    // Uniform in [0, 1).
    double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return real() < p; }

    // Exponential with the given mean (mean 0 yields 0).
    double exponential(double mean) {
        if (mean <= 0.0) return 0.0;
        double u = real();
        return -mean * std::log1p(-u);
    }

    // Derive an independent stream, e.g. one per run or per individual.
    Rng split(std::uint64_t salt) {
        std::uint64_t s = next() ^ (salt * 0xd6e8feb86659fd93ull + 0xa5a5a5a5a5a5a5a5ull);
        return Rng(s);
    }

private:
    std::uint64_t state_;
};

}  // namespace archopt

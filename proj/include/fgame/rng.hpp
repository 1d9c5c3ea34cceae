#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fgame {

// Seeded generator with library-independent sampling helpers, so results are
// identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t next() { return engine_(); }

    // Uniform in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n);
    // Uniform in [0, 1).
    double unit();
    // Sorted uniformly random k-subset of [0, n).
    std::vector<std::uint64_t> subset(std::uint64_t n, std::uint64_t k);

    // Independent child stream; depends only on (seed, stream).
    Rng split(std::uint64_t stream) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace fgame

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fgame {

// n choose k; throws InvalidArgument on overflow of 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// n choose k as a double, for cost estimates that may exceed 64 bits.
double binomial_approx(double n, double k);

// Product of the factors, throwing on 64-bit overflow.
std::uint64_t checked_product(std::span<const std::uint64_t> factors);
std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp);

// Sorted duplicate-free k-subsets of [0, universe) ranked in colex order via
// the combinatorial number system: rank(s) = sum_i C(s_i, i + 1).
class SubsetIndex {
public:
    SubsetIndex(std::uint64_t universe, std::uint64_t k);

    std::uint64_t universe() const noexcept { return universe_; }
    std::uint64_t k() const noexcept { return k_; }
    std::uint64_t count() const noexcept { return count_; }

    std::uint64_t rank(std::span<const std::uint64_t> subset) const;
    std::vector<std::uint64_t> unrank(std::uint64_t rank) const;
    void unrank_into(std::uint64_t rank, std::span<std::uint64_t> out) const;

private:
    std::uint64_t universe_;
    std::uint64_t k_;
    std::uint64_t count_;
};

// Advances a sorted k-subset of [0, n) to its colex successor; false after the last.
bool next_combination(std::span<std::uint64_t> subset, std::uint64_t n);

// Advances a mixed-radix counter (digit 0 least significant); false on wrap-around.
bool next_tuple(std::span<std::uint64_t> digits, std::span<const std::uint64_t> radices);
bool next_tuple(std::span<std::uint64_t> digits, std::uint64_t radix);

}  // namespace fgame

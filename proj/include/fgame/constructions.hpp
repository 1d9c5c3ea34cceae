#pragma once

#include <cstdint>
#include <vector>

#include "fgame/combinatorics.hpp"
#include "fgame/csp.hpp"
#include "fgame/game.hpp"

namespace fgame {

// Tables larger than this are not materialized by default.
inline constexpr double kMaxDenseEntries = 1e7;

// Clause/variable game of a 3-CNF formula: question i to the first prover
// (a clause), question j to the second (a variable), uniform over the pairs
// with x_j in C_i. The first prover answers 3 bits, bit p being the value of
// the variable of the clause's p-th literal; the second answers one bit.
// Accepts iff the bits satisfy C_i and agree with the second prover on x_j.
TwoProverGame clause_variable_game(const CnfFormula& formula);

// The free game with X = Y = A = B = [n] that is lost exactly on question x = 0.
FreeGame counterexample_game(std::uint64_t n);

// Birthday repetition: questions are k-subsets of X and l-subsets of Y
// (colex ranks), answers are tuples in A^k and B^l encoded little-endian in
// the order of the sorted subset. The verifier accepts iff the base verifier
// accepts every pair of S x T that lies in the base support (vacuously 1
// when there is none).
class BirthdayGame {
public:
    // Base distribution must be uniform over its support (a uniform product
    // counts as full support) and the base verifier must be 0/1-valued.
    BirthdayGame(TwoProverGame base, std::uint64_t k, std::uint64_t l);

    const TwoProverGame& base() const noexcept { return base_; }
    std::uint64_t k() const noexcept { return k_; }
    std::uint64_t l() const noexcept { return l_; }
    const SubsetIndex& left() const noexcept { return left_; }
    const SubsetIndex& right() const noexcept { return right_; }

    // The repeated game with a rule verifier.
    const FreeGame& game() const noexcept { return game_; }
    // The same game with a dense table; throws BudgetExceeded above max_entries.
    FreeGame materialize(double max_entries = kMaxDenseEntries) const;

    bool in_support(std::uint64_t x, std::uint64_t y) const { return support_[x * base_.y_count() + y]; }

private:
    TwoProverGame base_;
    std::uint64_t k_, l_;
    SubsetIndex left_, right_;
    std::vector<bool> support_;
    FreeGame game_;
};

BirthdayGame birthday_repetition(const TwoProverGame& base, std::uint64_t k, std::uint64_t l);

// m-fold parallel repetition with product distribution and product verifier.
// Coordinates are little-endian: x = sum_i x_i |X|^i, likewise for y, a, b.
TwoProverGame parallel_repetition(const TwoProverGame& base, std::uint64_t m,
                                  double max_entries = kMaxDenseEntries);

// N-fold repetition accepting iff at least ceil(threshold * N) coordinates
// are won. Base verifier must be 0/1-valued; threshold in [0, 1].
TwoProverGame threshold_repetition(const TwoProverGame& base, std::uint64_t n, double threshold,
                                   double max_entries = kMaxDenseEntries);

// Number of won coordinates required by threshold_repetition.
std::uint64_t threshold_count(std::uint64_t n, double threshold);

// 2-CSP whose value equals the game's. With L = lcm(|X|, |Y|), variable
// x * (L/|X|) + r is a copy of the first prover's answer to x and L + y *
// (L/|Y|) + r a copy of the second's answer to y. Symbols [0, |A|) are first
// prover answers and [|A|, |A|+|B|) second prover answers. Every first/second
// pair of variables carries one constraint paying V, or 0 on mistyped symbols.
DenseCsp free_to_2csp(const FreeGame& game, double budget = kMaxDenseEntries);

// k-CSP with one variable per question tuple (little-endian rank, first
// player fastest) over the alphabet B_1 x ... x B_k (little-endian) and one
// constraint per k-set of tuples, paying the average over all orderings of
// the set of V evaluated along the diagonal. Requires 2 <= k <= 5.
DenseCsp kfree_to_kcsp(const KFreeGame& game, double budget = kMaxDenseEntries);

}  // namespace fgame

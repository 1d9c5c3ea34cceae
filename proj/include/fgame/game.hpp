#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "fgame/oracle.hpp"

namespace fgame {

struct UniformProduct {};

struct UniformOverSupport {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> support;
};

// Nonnegative weights over X x Y, row-major in x, summing to 1.
struct Weighted {
    std::vector<double> weights;
};

using Distribution = std::variant<UniformProduct, UniformOverSupport, Weighted>;

struct GameShape {
    std::uint64_t x_count = 0;
    std::uint64_t y_count = 0;
    std::uint64_t a_count = 0;
    std::uint64_t b_count = 0;
};

// Two-prover game (X, Y, A, B, D, V). Immutable after construction.
class TwoProverGame {
public:
    TwoProverGame(GameShape shape, Distribution distribution, VerificationOracle verifier);

    std::uint64_t x_count() const noexcept { return shape_.x_count; }
    std::uint64_t y_count() const noexcept { return shape_.y_count; }
    std::uint64_t a_count() const noexcept { return shape_.a_count; }
    std::uint64_t b_count() const noexcept { return shape_.b_count; }
    const GameShape& shape() const noexcept { return shape_; }

    const Distribution& distribution() const noexcept { return distribution_; }
    const VerificationOracle& verifier() const noexcept { return verifier_; }
    bool is_free() const noexcept { return std::holds_alternative<UniformProduct>(distribution_); }

    // Probability of the question pair (x, y).
    double weight(std::uint64_t x, std::uint64_t y) const {
        return is_free() ? uniform_weight_ : weights_[x * shape_.y_count + y];
    }

    double payoff(std::uint64_t x, std::uint64_t y, std::uint64_t a, std::uint64_t b) const;

private:
    GameShape shape_;
    Distribution distribution_;
    VerificationOracle verifier_;
    double uniform_weight_ = 0.0;
    std::vector<double> weights_;
};

// A two-prover game whose distribution is uniform over X x Y.
class FreeGame {
public:
    FreeGame(GameShape shape, VerificationOracle verifier)
        : game_(shape, UniformProduct{}, std::move(verifier)) {}

    // Throws InvalidArgument unless `game` is free.
    static FreeGame from(TwoProverGame game);

    const TwoProverGame& game() const noexcept { return game_; }
    operator const TwoProverGame&() const noexcept { return game_; }

    std::uint64_t x_count() const noexcept { return game_.x_count(); }
    std::uint64_t y_count() const noexcept { return game_.y_count(); }
    std::uint64_t a_count() const noexcept { return game_.a_count(); }
    std::uint64_t b_count() const noexcept { return game_.b_count(); }
    const VerificationOracle& verifier() const noexcept { return game_.verifier(); }
    double payoff(std::uint64_t x, std::uint64_t y, std::uint64_t a, std::uint64_t b) const {
        return game_.payoff(x, y, a, b);
    }

private:
    explicit FreeGame(TwoProverGame game) : game_(std::move(game)) {}
    TwoProverGame game_;
};

// k-player free game with question sets Y_i and answer sets B_i; the
// verifier is indexed by (y_1..y_k, b_1..b_k).
class KFreeGame {
public:
    KFreeGame(std::vector<std::uint64_t> question_counts, std::vector<std::uint64_t> answer_counts,
              VerificationOracle verifier);

    std::size_t players() const noexcept { return questions_.size(); }
    const std::vector<std::uint64_t>& question_counts() const noexcept { return questions_; }
    const std::vector<std::uint64_t>& answer_counts() const noexcept { return answers_; }
    const VerificationOracle& verifier() const noexcept { return verifier_; }

    // Number of question tuples, prod |Y_i|.
    std::uint64_t question_tuples() const noexcept { return question_tuples_; }

    // `index` holds the 2k entries (y_1..y_k, b_1..b_k).
    double payoff(std::span<const std::uint64_t> index) const { return verifier_(index); }

private:
    std::vector<std::uint64_t> questions_;
    std::vector<std::uint64_t> answers_;
    VerificationOracle verifier_;
    std::uint64_t question_tuples_ = 1;
};

// View of a two-player free game as a k = 2 game (same verifier layout).
KFreeGame to_kfree(const FreeGame& game);
// Inverse of to_kfree; throws unless the game has exactly two players.
FreeGame to_free2(const KFreeGame& game);

// Dense-table constructors.
FreeGame make_free_game(GameShape shape, std::vector<double> table);
KFreeGame make_kfree_game(std::vector<std::uint64_t> question_counts,
                          std::vector<std::uint64_t> answer_counts, std::vector<double> table);

}  // namespace fgame

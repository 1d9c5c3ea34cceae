#include "fgame/game.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "fgame/combinatorics.hpp"
#include "fgame/error.hpp"

namespace fgame {

TwoProverGame::TwoProverGame(GameShape shape, Distribution distribution, VerificationOracle verifier)
    : shape_(shape), distribution_(std::move(distribution)), verifier_(std::move(verifier)) {
    if (shape_.x_count == 0 || shape_.y_count == 0 || shape_.a_count == 0 || shape_.b_count == 0) {
        throw InvalidArgument("question and answer counts must be positive");
    }
    const std::vector<std::uint64_t> expected{shape_.x_count, shape_.y_count, shape_.a_count,
                                              shape_.b_count};
    if (verifier_.dims() != expected) {
        throw InvalidArgument("verifier dimensions do not match (|X|, |Y|, |A|, |B|)");
    }
    const std::uint64_t pairs = checked_product(std::array{shape_.x_count, shape_.y_count});
    if (std::holds_alternative<UniformProduct>(distribution_)) {
        uniform_weight_ = 1.0 / static_cast<double>(pairs);
    } else if (const auto* support = std::get_if<UniformOverSupport>(&distribution_)) {
        if (support->support.empty()) throw InvalidArgument("support must be nonempty");
        std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
        weights_.assign(pairs, 0.0);
        const double w = 1.0 / static_cast<double>(support->support.size());
        for (const auto& [x, y] : support->support) {
            if (x >= shape_.x_count || y >= shape_.y_count) {
                throw InvalidArgument("support pair (" + std::to_string(x) + ", " + std::to_string(y) +
                                      ") out of range");
            }
            if (!seen.insert({x, y}).second) throw InvalidArgument("support has duplicate pairs");
            weights_[x * shape_.y_count + y] = w;
        }
    } else {
        const auto& weighted = std::get<Weighted>(distribution_);
        if (weighted.weights.size() != pairs) {
            throw InvalidArgument("weights must have |X||Y| entries");
        }
        double total = 0.0;
        for (double w : weighted.weights) {
            if (!(w >= 0.0)) throw InvalidArgument("weights must be nonnegative");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw InvalidArgument("weights sum to " + std::to_string(total) + ", expected 1");
        }
        weights_ = weighted.weights;
    }
}

double TwoProverGame::payoff(std::uint64_t x, std::uint64_t y, std::uint64_t a, std::uint64_t b) const {
    if (verifier_.is_dense()) {
        return verifier_.at_flat(((x * shape_.y_count + y) * shape_.a_count + a) * shape_.b_count + b);
    }
    const std::array<std::uint64_t, 4> index{x, y, a, b};
    return verifier_(index);
}

FreeGame FreeGame::from(TwoProverGame game) {
    if (!game.is_free()) throw InvalidArgument("game distribution is not uniform over X x Y");
    return FreeGame(std::move(game));
}

KFreeGame::KFreeGame(std::vector<std::uint64_t> question_counts, std::vector<std::uint64_t> answer_counts,
                     VerificationOracle verifier)
    : questions_(std::move(question_counts)), answers_(std::move(answer_counts)), verifier_(std::move(verifier)) {
    if (questions_.empty()) throw InvalidArgument("a k-player game needs k >= 1");
    if (questions_.size() != answers_.size()) {
        throw InvalidArgument("question and answer count lists differ in length");
    }
    for (std::size_t i = 0; i < questions_.size(); ++i) {
        if (questions_[i] == 0 || answers_[i] == 0) {
            throw InvalidArgument("player " + std::to_string(i + 1) + " has an empty question or answer set");
        }
    }
    std::vector<std::uint64_t> expected = questions_;
    expected.insert(expected.end(), answers_.begin(), answers_.end());
    if (verifier_.dims() != expected) {
        throw InvalidArgument("verifier dimensions do not match (Y_1..Y_k, B_1..B_k)");
    }
    question_tuples_ = checked_product(questions_);
}

KFreeGame to_kfree(const FreeGame& game) {
    return KFreeGame({game.x_count(), game.y_count()}, {game.a_count(), game.b_count()}, game.verifier());
}

FreeGame to_free2(const KFreeGame& game) {
    if (game.players() != 2) throw InvalidArgument("expected a two-player game");
    const auto& q = game.question_counts();
    const auto& a = game.answer_counts();
    return FreeGame(GameShape{q[0], q[1], a[0], a[1]}, game.verifier());
}

FreeGame make_free_game(GameShape shape, std::vector<double> table) {
    return FreeGame(shape, VerificationOracle::dense({shape.x_count, shape.y_count, shape.a_count, shape.b_count},
                                                     std::move(table)));
}

KFreeGame make_kfree_game(std::vector<std::uint64_t> question_counts, std::vector<std::uint64_t> answer_counts,
                          std::vector<double> table) {
    std::vector<std::uint64_t> dims = question_counts;
    dims.insert(dims.end(), answer_counts.begin(), answer_counts.end());
    return KFreeGame(std::move(question_counts), std::move(answer_counts),
                     VerificationOracle::dense(std::move(dims), std::move(table)));
}

}  // namespace fgame

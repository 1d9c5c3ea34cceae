#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fgame/budget.hpp"
#include "fgame/game.hpp"

namespace fgame {

// Deterministic strategies: players[i][q] is player i's answer to question q.
struct StrategyProfile {
    std::vector<std::vector<std::uint64_t>> players;

    static StrategyProfile two(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
        return StrategyProfile{{std::move(a), std::move(b)}};
    }

    bool operator==(const StrategyProfile&) const = default;
};

struct GameValue {
    double value = 0.0;
    std::optional<StrategyProfile> witness;
    bool exact = false;
};

// Throws DimensionMismatch naming the first offending player.
void validate_profile(const StrategyProfile& profile, std::span<const std::uint64_t> question_counts,
                      std::span<const std::uint64_t> answer_counts);

double strategy_value(const TwoProverGame& game, const StrategyProfile& profile);
double strategy_value(const KFreeGame& game, const StrategyProfile& profile);

enum class Player { first, second };

struct BestResponse {
    std::vector<std::uint64_t> response;
    // Expectation of V under the distribution conditioned on the fixed
    // player's questions lying in the subset (the full set by default).
    double value = 0.0;
    // Questions of the responding player with no conditional support; their
    // answer defaults to 0.
    std::vector<std::uint64_t> unsupported;
};

// Per-question best response of the player other than `fixed` against
// `fixed_strategy`. Without `subset`, fixed_strategy is a total map over the
// fixed player's questions. With `subset`, fixed_strategy[i] answers
// subset[i] and expectations are conditioned on the subset. Ties go to the
// lowest answer index. A conditional distribution with no mass at all scores 1.
BestResponse best_response(const TwoProverGame& game, Player fixed,
                           std::span<const std::uint64_t> fixed_strategy,
                           std::optional<std::span<const std::uint64_t>> subset = std::nullopt);

// Player `responder`'s per-question best response in a k-player game when
// every other player's strategy is fixed by `profile` (responder's entry ignored).
BestResponse best_response_k(const KFreeGame& game, std::size_t responder,
                             const StrategyProfile& profile);

struct ExactOptions {
    double budget = kDefaultBudget;
    unsigned threads = 1;
};

// omega(G) with a witness. Enumerates the smaller prover's strategy space
// depth-first with per-question best responses for the other prover and
// prunes branches whose optimistic bound cannot beat the incumbent.
GameValue exact_value(const TwoProverGame& game, const ExactOptions& options = {});

// omega(G) for k players: enumerates all but one player, whose optimum
// decomposes per question.
GameValue exact_value_k(const KFreeGame& game, const ExactOptions& options = {});

// Worst-case evaluation count of exact_value (no pruning).
double exact_value_cost(const TwoProverGame& game);
double exact_value_k_cost(const KFreeGame& game);

template <typename Game>
struct Subgame {
    Game game;
    // kept[i][q'] is the parent question index of player i's question q'.
    std::vector<std::vector<std::uint64_t>> kept;

    // Extends a subgame profile to the parent game; unrestricted questions answer `fill`.
    StrategyProfile lift(const StrategyProfile& sub, std::span<const std::uint64_t> parent_questions,
                         std::uint64_t fill = 0) const;
};

// Restriction to the given question subsets (each nonempty, in range, duplicate-free).
Subgame<FreeGame> restrict_subgame(const FreeGame& game, std::span<const std::uint64_t> s,
                                   std::span<const std::uint64_t> t);
Subgame<KFreeGame> restrict_subgame(const KFreeGame& game,
                                    std::span<const std::vector<std::uint64_t>> subsets);

}  // namespace fgame

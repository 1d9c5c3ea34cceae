#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fgame/csp.hpp"
#include "fgame/experiments.hpp"
#include "fgame/game.hpp"

namespace fgame {

// Free game with payoffs drawn uniformly from {0, 1/levels, ..., 1}
// (levels = 1 gives a 0/1 verifier), table filled in row-major order.
FreeGame seeded_free_game(std::uint64_t seed, GameShape shape, std::uint64_t levels = 1);
KFreeGame seeded_kfree_game(std::uint64_t seed, std::vector<std::uint64_t> question_counts,
                            std::vector<std::uint64_t> answer_counts, std::uint64_t levels = 1);

struct NamedFormula {
    std::string name;
    CnfFormula formula;
};

// 3-CNF formulas over at most 4 variables, every variable occurring.
const std::vector<NamedFormula>& formula_corpus();
const CnfFormula& corpus_formula(const std::string& name);

struct NamedGraph {
    std::string name;
    BipartiteGraph graph;
};

// Regular bipartite graphs.
const std::vector<NamedGraph>& graph_corpus();

struct SeededGame {
    std::uint64_t seed;
    FreeGame game;
};

// 20 seeded 2x2x2x2 games with 0/1 verifiers (seeds 1..20).
const std::vector<SeededGame>& game_corpus();

// Seed of the 6x6x2x2 game with payoffs on a 1/4 grid used for subsampling curves.
inline constexpr std::uint64_t kSubsampleCurveSeed = 6622;

}  // namespace fgame

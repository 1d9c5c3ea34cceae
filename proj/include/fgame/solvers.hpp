#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "fgame/budget.hpp"
#include "fgame/csp.hpp"
#include "fgame/game.hpp"
#include "fgame/strategy.hpp"

namespace fgame {

struct EstimateOptions {
    double budget = kDefaultBudget;
    unsigned threads = 1;
    // Replaces the sample size from the error formula (still clamped to the question count).
    std::optional<std::uint64_t> kappa;
};

struct EstimateReport {
    // Value of `witness`, a real profile, so never above the game value.
    double lower_bound = 0.0;
    // min(lower_bound + epsilon, 1).
    double estimate = 0.0;
    double epsilon = 0.0;
    StrategyProfile witness;
    // Sample-set size per peeled player (one entry for two-player Est).
    std::vector<std::uint64_t> kappa;
    // Number of (subset, partial strategy) candidates evaluated at the top level.
    std::uint64_t candidates = 0;
    // Number of top-level subsets examined, and the subset itself for the randomized variant.
    std::uint64_t subsets = 0;
    std::vector<std::uint64_t> sampled_subset;
    std::optional<std::uint64_t> seed;
};

// Sample size ceil(ln(6 |Y||B|) / eps^2), clamped to [1, |X|].
std::uint64_t est_kappa(const TwoProverGame& game, double epsilon);

// Max over every kappa-subset S of X and every alpha: S -> A of the value of
// (a_alpha, b_alpha), where b_alpha best-responds to alpha conditioned on S
// and a_alpha best-responds to b_alpha over all of X.
EstimateReport est_deterministic(const TwoProverGame& game, double epsilon, const EstimateOptions& options = {});

// The same with a single uniformly random kappa-subset S.
EstimateReport est_randomized(const TwoProverGame& game, double epsilon, std::uint64_t seed,
                              const EstimateOptions& options = {});

// Worst-case evaluation count of est_deterministic for a given kappa.
double est_cost(const TwoProverGame& game, std::uint64_t kappa);

enum class Verdict { value_one, below_gap };

// A candidate (subset, alpha) whose induced profile is not perfect. For an
// evaluated candidate `questions` is the first question tuple it loses and
// `answers` the answers played there. For a pruned two-player branch
// `alpha` is the partial assignment, `questions` is (x, y) with x the subset
// question whose answer left y without any consistent answer, and `answers`
// is empty.
struct RefutationEntry {
    std::vector<std::uint64_t> subset;
    std::vector<std::uint64_t> alpha;
    std::vector<std::uint64_t> questions;
    std::vector<std::uint64_t> answers;
};

struct DecisionReport {
    Verdict verdict = Verdict::below_gap;
    std::optional<StrategyProfile> perfect;
    std::vector<RefutationEntry> refutation;
    bool refutation_truncated = false;
    std::vector<std::uint64_t> kappa;
    std::uint64_t candidates = 0;
    // Largest induced-profile value seen among fully evaluated candidates.
    double best_value = 0.0;
};

struct DecisionOptions {
    double budget = kDefaultBudget;
    unsigned threads = 1;
    std::optional<std::uint64_t> kappa;
    std::size_t max_refutation = 1000;
};

// Smallest kappa with (1 - eps)^kappa < 1/(3|Y||B|), clamped to [1, |X|].
std::uint64_t gap_kappa(const TwoProverGame& game, double epsilon);
// Smallest kappa with delta^kappa < 1/(3|Y||B|), clamped to [1, |X|].
std::uint64_t delta_kappa(const TwoProverGame& game, double delta);

// Decides omega = 1 versus omega <= 1 - eps by searching every kappa-subset
// and alpha for a perfect induced profile. Throws PromiseViolation when a
// candidate profile scores strictly between 1 - eps and 1.
DecisionReport decide_one_vs_gap(const TwoProverGame& game, double epsilon, const DecisionOptions& options = {});
// Decides omega = 1 versus omega < delta; PromiseViolation on a profile in [delta, 1).
DecisionReport decide_one_vs_delta(const TwoProverGame& game, double delta, const DecisionOptions& options = {});

// Per-level sample sizes for the k-player estimators, level l = 2..k stored at index l - 2.
std::vector<std::uint64_t> est_k_kappas(const KFreeGame& game, double epsilon);
std::vector<std::uint64_t> est_k_perfect_kappas(const KFreeGame& game, double epsilon);

// Peels players k, k-1, ..., 2: for each subset S_l and alpha_l: S_l -> B_l
// the game with player l averaged out over S_l is solved recursively, then
// player l best-responds in the full game. Player 1 is solved exactly.
EstimateReport est_k(const KFreeGame& game, double epsilon, const EstimateOptions& options = {});

// Decision analogue of est_k for omega = 1 versus omega <= 1 - eps.
DecisionReport est_k_perfect(const KFreeGame& game, double epsilon, const DecisionOptions& options = {});

struct SubsampleEstimate {
    double mean = 0.0;
    std::vector<std::uint64_t> kappa;
    std::uint64_t samples = 0;
    std::optional<double> stderr_estimate;
};

// ceil(eps^-lambda ln(|B_1|...|B_k|)), at least 1, then clamped per player to |Y_i|.
std::vector<std::uint64_t> subsample_kappa(const KFreeGame& game, double epsilon, double lambda);

// Mean of omega(G_S) over product subsets S_1 x ... x S_k with |S_i| = kappa_i,
// either over all of them or over seeded random draws.
SubsampleEstimate subsample_estimate(const KFreeGame& game, double epsilon, double lambda, const SubsampleMode& mode,
                                     const EstimateOptions& options = {});

// Estimator verdict on a 1 vs 1 - gap promise: value-one iff lower_bound >= 1 - gap/2.
Verdict verdict_from_estimate(const EstimateReport& report, double gap);

}  // namespace fgame

#include "fgame/solvers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fgame/combinatorics.hpp"
#include "fgame/error.hpp"
#include "fgame/format.hpp"
#include "fgame/parallel.hpp"
#include "fgame/rng.hpp"
#include "weights.hpp"

namespace fgame {

namespace {

using detail::kTieTolerance;
using detail::raw_weight;
using detail::weight_scale;

constexpr std::size_t kChunks = 64;

void check_open_unit(double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) throw InvalidArgument(std::string(name) + " must lie in (0, 1)");
}

std::uint64_t clamp_kappa(double raw, std::uint64_t limit) {
    if (!(raw < static_cast<double>(limit))) return limit;
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(raw));
}

std::uint64_t override_or(const std::optional<std::uint64_t>& kappa, std::uint64_t computed, std::uint64_t limit) {
    if (!kappa) return computed;
    if (*kappa == 0) throw InvalidArgument("kappa must be positive");
    return std::min(*kappa, limit);
}

// Shared state for the two-player sample-and-respond procedures.
class TwoPlayerSampler {
public:
    explicit TwoPlayerSampler(const TwoProverGame& game)
        : game_(game),
          xs_(game.x_count()),
          ys_(game.y_count()),
          as_(game.a_count()),
          bs_(game.b_count()),
          scale_(weight_scale(game)),
          weights_(xs_ * ys_) {
        for (std::uint64_t x = 0; x < xs_; ++x) {
            for (std::uint64_t y = 0; y < ys_; ++y) weights_[x * ys_ + y] = raw_weight(game, x, y);
        }
    }

    double weight(std::uint64_t x, std::uint64_t y) const { return weights_[x * ys_ + y]; }
    double scale() const { return scale_; }
    std::uint64_t xs() const { return xs_; }
    std::uint64_t ys() const { return ys_; }
    std::uint64_t as() const { return as_; }
    std::uint64_t bs() const { return bs_; }
    const TwoProverGame& game() const { return game_; }

    // Second prover's best response to alpha on the subset, lowest answer on ties.
    void respond_second(std::span<const std::uint64_t> subset, std::span<const std::uint64_t> alpha,
                        std::vector<std::uint64_t>& b) const {
        b.assign(ys_, 0);
        for (std::uint64_t y = 0; y < ys_; ++y) {
            double best = -1.0;
            for (std::uint64_t r = 0; r < bs_; ++r) {
                double s = 0.0;
                for (std::size_t i = 0; i < subset.size(); ++i) {
                    const double w = weight(subset[i], y);
                    if (w > 0.0) s += w * game_.payoff(subset[i], y, alpha[i], r);
                }
                if (s > best) best = s, b[y] = r;
            }
        }
    }

    // First prover's best response to b over all of X; returns the raw total.
    double respond_first(std::span<const std::uint64_t> b, std::vector<std::uint64_t>& a) const {
        a.assign(xs_, 0);
        double total = 0.0;
        for (std::uint64_t x = 0; x < xs_; ++x) {
            double best = -1.0;
            for (std::uint64_t r = 0; r < as_; ++r) {
                double s = 0.0;
                for (std::uint64_t y = 0; y < ys_; ++y) {
                    const double w = weight(x, y);
                    if (w > 0.0) s += w * game_.payoff(x, y, r, b[y]);
                }
                if (s > best) best = s, a[x] = r;
            }
            total += best;
        }
        return total;
    }

    // First supported question pair the profile loses, if any.
    std::optional<std::pair<std::uint64_t, std::uint64_t>> first_loss(std::span<const std::uint64_t> a,
                                                                      std::span<const std::uint64_t> b) const {
        for (std::uint64_t x = 0; x < xs_; ++x) {
            for (std::uint64_t y = 0; y < ys_; ++y) {
                if (weight(x, y) > 0.0 && game_.payoff(x, y, a[x], b[y]) != 1.0) return std::pair{x, y};
            }
        }
        return std::nullopt;
    }

    double value(double raw_total) const { return std::clamp(raw_total / scale_, 0.0, 1.0); }

private:
    const TwoProverGame& game_;
    std::uint64_t xs_, ys_, as_, bs_;
    double scale_;
    std::vector<double> weights_;
};

struct Candidate {
    double raw = -1.0;
    std::vector<std::uint64_t> a, b;
};

// Evaluates every alpha on every kappa-subset (or on the one fixed subset)
// and keeps the first best candidate.
EstimateReport run_estimate(const TwoProverGame& game, double epsilon, std::uint64_t kappa,
                            std::optional<std::vector<std::uint64_t>> fixed_subset, const EstimateOptions& options) {
    const TwoPlayerSampler sampler(game);
    const SubsetIndex subsets(sampler.xs(), kappa);
    const std::uint64_t subset_count = fixed_subset ? 1 : subsets.count();
    const std::uint64_t alphas = checked_pow(sampler.as(), kappa);
    const std::uint64_t total = checked_product(std::array{subset_count, alphas});
    const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(total, kChunks));
    const double tol = kTieTolerance * sampler.scale();

    std::vector<Candidate> results(chunks);
    parallel_chunks(chunks, options.threads, [&](std::size_t chunk) {
        auto [begin, end] = chunk_range(total, chunks, chunk);
        std::vector<std::uint64_t> subset = fixed_subset ? *fixed_subset : subsets.unrank(begin / alphas);
        std::vector<std::uint64_t> alpha(kappa, 0);
        std::uint64_t rem = begin % alphas;
        for (std::uint64_t i = 0; i < kappa; ++i) alpha[i] = rem % sampler.as(), rem /= sampler.as();
        std::vector<std::uint64_t> a, b;
        Candidate& best = results[chunk];
        for (std::uint64_t n = begin; n < end; ++n) {
            sampler.respond_second(subset, alpha, b);
            const double raw = sampler.respond_first(b, a);
            if (raw > best.raw + tol) best = Candidate{raw, a, b};
            if (!next_tuple(alpha, sampler.as())) next_combination(subset, sampler.xs());
        }
    });

    const Candidate* winner = &results[0];
    for (const auto& r : results) {
        if (r.raw > winner->raw + tol) winner = &r;
    }
    EstimateReport report;
    report.lower_bound = sampler.value(winner->raw);
    report.estimate = std::min(report.lower_bound + epsilon, 1.0);
    report.epsilon = epsilon;
    report.witness = StrategyProfile::two(winner->a, winner->b);
    report.kappa = {kappa};
    report.candidates = total;
    report.subsets = subset_count;
    if (fixed_subset) report.sampled_subset = *fixed_subset;
    return report;
}

double candidate_cost(const TwoProverGame& game, std::uint64_t kappa) {
    const double ys = static_cast<double>(game.y_count());
    return static_cast<double>(kappa) * ys * static_cast<double>(game.b_count()) +
           static_cast<double>(game.x_count()) * ys * static_cast<double>(game.a_count());
}

// Depth-first search over alpha on each subset for a perfect induced profile.
// A branch is cut as soon as some y has no answer that wins against every
// assigned subset question it is paired with.
DecisionReport run_decision(const TwoProverGame& game, double threshold, bool strict_threshold,
                            std::uint64_t kappa, const DecisionOptions& options, const char* what) {
    const TwoPlayerSampler sampler(game);
    const SubsetIndex subsets(sampler.xs(), kappa);
    const std::uint64_t as = sampler.as(), bs = sampler.bs(), ys = sampler.ys();
    const std::uint64_t total = checked_product(std::array{subsets.count(), as});
    const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(total, kChunks));
    WorkMeter meter(what, options.budget,
                    static_cast<double>(subsets.count()) * std::pow(static_cast<double>(as), double(kappa)) *
                        candidate_cost(game, kappa));

    struct ChunkResult {
        std::optional<StrategyProfile> perfect;
        std::vector<RefutationEntry> refutation;
        bool truncated = false;
        std::uint64_t candidates = 0;
        double best_raw = -1.0;
    };
    std::vector<ChunkResult> results(chunks);
    std::atomic<std::size_t> first_found{chunks};

    parallel_chunks(chunks, options.threads, [&](std::size_t chunk) {
        auto [begin, end] = chunk_range(total, chunks, chunk);
        ChunkResult& out = results[chunk];
        // alive[level][y * bs + b]: b still wins against every assigned subset question paired with y.
        std::vector<std::vector<char>> alive(kappa + 1, std::vector<char>(ys * bs, 1));
        std::vector<std::uint64_t> alpha(kappa, 0), a, b(ys, 0);
        std::uint64_t pending = 0;
        auto charge = [&](std::uint64_t units) {
            pending += units;
            if (pending >= 65536) meter.charge(pending), pending = 0;
        };
        auto record = [&](RefutationEntry entry) {
            if (out.refutation.size() < options.max_refutation) {
                out.refutation.push_back(std::move(entry));
            } else {
                out.truncated = true;
            }
        };

        for (std::uint64_t n = begin; n < end && !out.perfect; ++n) {
            if (first_found.load(std::memory_order_relaxed) < chunk) break;
            const std::vector<std::uint64_t> subset = subsets.unrank(n / as);
            const std::uint64_t first_answer = n % as;

            // Iterative DFS: depth d assigns alpha[d]; next[d] is the next answer to try there.
            std::vector<std::uint64_t> next(kappa + 1, 0);
            std::size_t depth = 0;
            next[0] = first_answer;
            while (!out.perfect) {
                const std::uint64_t limit = depth == 0 ? first_answer + 1 : as;
                if (next[depth] >= limit) {
                    if (depth == 0) break;
                    --depth;
                    continue;
                }
                const std::uint64_t r = next[depth]++;
                alpha[depth] = r;
                const std::uint64_t x = subset[depth];
                const auto& prev = alive[depth];
                auto& cur = alive[depth + 1];
                std::optional<std::uint64_t> dead_y;
                for (std::uint64_t y = 0; y < ys; ++y) {
                    bool any = false;
                    const bool paired = sampler.weight(x, y) > 0.0;
                    for (std::uint64_t c = 0; c < bs; ++c) {
                        char ok = prev[y * bs + c];
                        if (ok && paired) ok = game.payoff(x, y, r, c) == 1.0;
                        cur[y * bs + c] = ok;
                        any = any || ok;
                    }
                    if (!any && paired) {
                        dead_y = y;
                        break;
                    }
                }
                charge(ys * bs);
                if (dead_y) {
                    record({subset, std::vector<std::uint64_t>(alpha.begin(), alpha.begin() + depth + 1),
                            {x, *dead_y}, {}});
                    continue;
                }
                if (depth + 1 < kappa) {
                    ++depth;
                    next[depth] = 0;
                    continue;
                }
                // Full alpha: b_alpha picks the lowest answer consistent with the whole subset.
                for (std::uint64_t y = 0; y < ys; ++y) {
                    b[y] = 0;
                    for (std::uint64_t c = 0; c < bs; ++c) {
                        if (cur[y * bs + c]) {
                            b[y] = c;
                            break;
                        }
                    }
                }
                const double raw = sampler.respond_first(b, a);
                charge(static_cast<std::uint64_t>(candidate_cost(game, kappa)));
                ++out.candidates;
                out.best_raw = std::max(out.best_raw, raw);
                const auto loss = sampler.first_loss(a, b);
                if (!loss) {
                    out.perfect = StrategyProfile::two(a, b);
                    std::size_t expected = first_found.load();
                    while (chunk < expected && !first_found.compare_exchange_weak(expected, chunk)) {
                    }
                    break;
                }
                record({subset, alpha, {loss->first, loss->second}, {a[loss->first], b[loss->second]}});
            }
        }
        if (pending) meter.charge(pending);
    });

    DecisionReport report;
    report.kappa = {kappa};
    double best_raw = -1.0;
    for (auto& r : results) {
        report.candidates += r.candidates;
        best_raw = std::max(best_raw, r.best_raw);
        if (r.perfect && !report.perfect) report.perfect = std::move(r.perfect);
    }
    report.best_value = best_raw < 0.0 ? 0.0 : sampler.value(best_raw);
    if (report.perfect) {
        report.verdict = Verdict::value_one;
        report.best_value = 1.0;
        return report;
    }
    report.verdict = Verdict::below_gap;
    for (auto& r : results) {
        for (auto& e : r.refutation) {
            if (report.refutation.size() < options.max_refutation) {
                report.refutation.push_back(std::move(e));
            } else {
                report.refutation_truncated = true;
            }
        }
        report.refutation_truncated = report.refutation_truncated || r.truncated;
    }
    const double tol = kTieTolerance;
    const bool violates = strict_threshold ? report.best_value > threshold + tol : report.best_value >= threshold - tol;
    if (violates) {
        throw PromiseViolation(std::string(what) + ": found a profile of value " + format_double(report.best_value) +
                                   " inside the promise gap",
                               report.best_value);
    }
    return report;
}

}  // namespace

std::uint64_t est_kappa(const TwoProverGame& game, double epsilon) {
    check_open_unit(epsilon, "epsilon");
    const double yb = static_cast<double>(game.y_count()) * static_cast<double>(game.b_count());
    return clamp_kappa(std::ceil(std::log(6.0 * yb) / (epsilon * epsilon)), game.x_count());
}

double est_cost(const TwoProverGame& game, std::uint64_t kappa) {
    return binomial_approx(static_cast<double>(game.x_count()), static_cast<double>(kappa)) *
           std::pow(static_cast<double>(game.a_count()), static_cast<double>(kappa)) * candidate_cost(game, kappa);
}

EstimateReport est_deterministic(const TwoProverGame& game, double epsilon, const EstimateOptions& options) {
    const std::uint64_t kappa = override_or(options.kappa, est_kappa(game, epsilon), game.x_count());
    require_budget("est_deterministic", est_cost(game, kappa), options.budget);
    return run_estimate(game, epsilon, kappa, std::nullopt, options);
}

EstimateReport est_randomized(const TwoProverGame& game, double epsilon, std::uint64_t seed,
                              const EstimateOptions& options) {
    const std::uint64_t kappa = override_or(options.kappa, est_kappa(game, epsilon), game.x_count());
    require_budget("est_randomized",
                   std::pow(static_cast<double>(game.a_count()), static_cast<double>(kappa)) *
                       candidate_cost(game, kappa),
                   options.budget);
    Rng rng(seed);
    auto report = run_estimate(game, epsilon, kappa, rng.subset(game.x_count(), kappa), options);
    report.seed = seed;
    return report;
}

std::uint64_t gap_kappa(const TwoProverGame& game, double epsilon) {
    check_open_unit(epsilon, "epsilon");
    const double yb = static_cast<double>(game.y_count()) * static_cast<double>(game.b_count());
    return clamp_kappa(std::floor(std::log(3.0 * yb) / -std::log1p(-epsilon)) + 1.0, game.x_count());
}

std::uint64_t delta_kappa(const TwoProverGame& game, double delta) {
    check_open_unit(delta, "delta");
    const double yb = static_cast<double>(game.y_count()) * static_cast<double>(game.b_count());
    return clamp_kappa(std::floor(std::log(3.0 * yb) / -std::log(delta)) + 1.0, game.x_count());
}

DecisionReport decide_one_vs_gap(const TwoProverGame& game, double epsilon, const DecisionOptions& options) {
    const std::uint64_t kappa = override_or(options.kappa, gap_kappa(game, epsilon), game.x_count());
    return run_decision(game, 1.0 - epsilon, true, kappa, options, "decide_one_vs_gap");
}

DecisionReport decide_one_vs_delta(const TwoProverGame& game, double delta, const DecisionOptions& options) {
    const std::uint64_t kappa = override_or(options.kappa, delta_kappa(game, delta), game.x_count());
    return run_decision(game, delta, false, kappa, options, "decide_one_vs_delta");
}

// ---------------------------------------------------------------------------
// k players

namespace {

std::vector<std::uint64_t> level_kappas(const KFreeGame& game, double coefficient) {
    const auto& qs = game.question_counts();
    const auto& as = game.answer_counts();
    std::vector<std::uint64_t> kappas;
    double logs = std::log(6.0);
    for (std::size_t level = 2; level <= game.players(); ++level) {
        logs += std::log(static_cast<double>(qs[level - 2]) * static_cast<double>(as[level - 2]));
        kappas.push_back(clamp_kappa(std::ceil(coefficient * logs), qs[level - 1]));
    }
    return kappas;
}

KFreeGame dense_copy(const KFreeGame& game, double budget) {
    return KFreeGame(game.question_counts(), game.answer_counts(), game.verifier().materialize(budget));
}

// Evaluation count of peel() on a game with the given per-level sample sizes.
double peel_cost(std::span<const std::uint64_t> qs, std::span<const std::uint64_t> as,
                 std::span<const std::uint64_t> kappas) {
    const std::size_t k = qs.size();
    double table = 1.0;
    for (std::size_t i = 0; i < k; ++i) table *= static_cast<double>(qs[i]) * static_cast<double>(as[i]);
    if (k == 1) return table;
    const double kappa = static_cast<double>(kappas[k - 2]);
    const double inner_table = table / (static_cast<double>(qs[k - 1]) * static_cast<double>(as[k - 1]));
    const double per_candidate = inner_table * kappa + peel_cost(qs.first(k - 1), as.first(k - 1), kappas) + 2 * table;
    return binomial_approx(static_cast<double>(qs[k - 1]), kappa) *
           std::pow(static_cast<double>(as[k - 1]), kappa) * per_candidate;
}

// The game with the last player replaced by the average over its subset answers.
KFreeGame average_out_last(const KFreeGame& game, std::span<const std::uint64_t> subset,
                           std::span<const std::uint64_t> alpha) {
    const std::size_t k = game.players();
    std::vector<std::uint64_t> qs(game.question_counts().begin(), game.question_counts().end() - 1);
    std::vector<std::uint64_t> as(game.answer_counts().begin(), game.answer_counts().end() - 1);
    std::vector<std::uint64_t> dims = qs;
    dims.insert(dims.end(), as.begin(), as.end());
    const std::uint64_t size = checked_product(dims);
    std::vector<double> table(size);
    std::vector<std::uint64_t> inner(2 * (k - 1), 0), full(2 * k, 0);
    const double inv = 1.0 / static_cast<double>(subset.size());
    for (std::uint64_t flat = 0; flat < size; ++flat) {
        for (std::size_t i = 0; i + 1 < k; ++i) {
            full[i] = inner[i];
            full[k + i] = inner[k - 1 + i];
        }
        double s = 0.0;
        for (std::size_t j = 0; j < subset.size(); ++j) {
            full[k - 1] = subset[j];
            full[2 * k - 1] = alpha[j];
            s += game.payoff(full);
        }
        table[flat] = std::clamp(s * inv, 0.0, 1.0);
        for (std::size_t i = inner.size(); i-- > 0;) {
            if (++inner[i] < dims[i]) break;
            inner[i] = 0;
        }
    }
    return make_kfree_game(std::move(qs), std::move(as), std::move(table));
}

bool is_perfect(const KFreeGame& game, const StrategyProfile& profile, std::vector<std::uint64_t>* lost_questions,
                std::vector<std::uint64_t>* lost_answers) {
    const std::size_t k = game.players();
    std::vector<std::uint64_t> ys(k, 0), index(2 * k, 0);
    do {
        for (std::size_t i = 0; i < k; ++i) {
            index[i] = ys[i];
            index[k + i] = profile.players[i][ys[i]];
        }
        if (game.payoff(index) != 1.0) {
            if (lost_questions) *lost_questions = ys;
            if (lost_answers) lost_answers->assign(index.begin() + static_cast<std::ptrdiff_t>(k), index.end());
            return false;
        }
    } while (next_tuple(ys, game.question_counts()));
    return true;
}

struct Peeled {
    double value = -1.0;
    StrategyProfile profile;
};

Peeled peel(const KFreeGame& game, std::span<const std::uint64_t> kappas);

// Completes the recursion for one (subset, alpha) of the last player.
Peeled peel_candidate(const KFreeGame& game, std::span<const std::uint64_t> kappas,
                      std::span<const std::uint64_t> subset, std::span<const std::uint64_t> alpha) {
    const std::size_t k = game.players();
    Peeled inner = peel(average_out_last(game, subset, alpha), kappas);
    StrategyProfile full = inner.profile;
    full.players.emplace_back(game.question_counts()[k - 1], 0);
    full.players[k - 1] = best_response_k(game, k - 1, full).response;
    return Peeled{strategy_value(game, full), std::move(full)};
}

Peeled peel(const KFreeGame& game, std::span<const std::uint64_t> kappas) {
    const std::size_t k = game.players();
    if (k == 1) {
        const std::uint64_t ys = game.question_counts()[0], bs = game.answer_counts()[0];
        Peeled out;
        out.profile.players.assign(1, std::vector<std::uint64_t>(ys, 0));
        double total = 0.0;
        std::array<std::uint64_t, 2> index{};
        for (std::uint64_t y = 0; y < ys; ++y) {
            double best = -1.0;
            index[0] = y;
            for (std::uint64_t r = 0; r < bs; ++r) {
                index[1] = r;
                const double v = game.payoff(index);
                if (v > best) best = v, out.profile.players[0][y] = r;
            }
            total += best;
        }
        out.value = total / static_cast<double>(ys);
        return out;
    }
    const std::uint64_t ys = game.question_counts()[k - 1], bs = game.answer_counts()[k - 1];
    const std::uint64_t kappa = kappas[k - 2];
    std::vector<std::uint64_t> subset(kappa);
    std::iota(subset.begin(), subset.end(), 0);
    Peeled best;
    do {
        std::vector<std::uint64_t> alpha(kappa, 0);
        do {
            Peeled c = peel_candidate(game, kappas, subset, alpha);
            if (c.value > best.value + kTieTolerance) best = std::move(c);
        } while (next_tuple(alpha, bs));
    } while (next_combination(subset, ys));
    return best;
}

struct TopCandidate {
    std::vector<std::uint64_t> subset, alpha;
};

// Enumerates the top-level (subset, alpha) pairs of the last player in
// chunks, calling visit(chunk, candidate) in order within each chunk.
template <typename Visit>
std::uint64_t for_top_candidates(const KFreeGame& game, std::uint64_t kappa, unsigned threads, Visit&& visit,
                                 std::size_t& chunks_out) {
    const std::size_t k = game.players();
    const std::uint64_t ys = game.question_counts()[k - 1], bs = game.answer_counts()[k - 1];
    const SubsetIndex subsets(ys, kappa);
    const std::uint64_t alphas = checked_pow(bs, kappa);
    const std::uint64_t total = checked_product(std::array{subsets.count(), alphas});
    const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(total, kChunks));
    chunks_out = chunks;
    parallel_chunks(chunks, threads, [&](std::size_t chunk) {
        auto [begin, end] = chunk_range(total, chunks, chunk);
        TopCandidate c{subsets.unrank(begin / alphas), std::vector<std::uint64_t>(kappa, 0)};
        std::uint64_t rem = begin % alphas;
        for (std::uint64_t i = 0; i < kappa; ++i) c.alpha[i] = rem % bs, rem /= bs;
        for (std::uint64_t n = begin; n < end; ++n) {
            if (!visit(chunk, c)) break;
            if (!next_tuple(c.alpha, bs)) next_combination(c.subset, ys);
        }
    });
    return total;
}

void check_k_players(const KFreeGame& game) {
    if (game.players() < 2) throw InvalidArgument("the peeling estimators need at least two players");
}

}  // namespace

std::vector<std::uint64_t> est_k_kappas(const KFreeGame& game, double epsilon) {
    check_open_unit(epsilon, "epsilon");
    const double delta = epsilon / static_cast<double>(game.players());
    return level_kappas(game, 1.0 / (delta * delta));
}

std::vector<std::uint64_t> est_k_perfect_kappas(const KFreeGame& game, double epsilon) {
    check_open_unit(epsilon, "epsilon");
    const double k = static_cast<double>(game.players());
    return level_kappas(game, k * k / epsilon);
}

namespace {

std::vector<std::uint64_t> resolve_kappas(const KFreeGame& game, std::vector<std::uint64_t> kappas,
                                          const std::optional<std::uint64_t>& override_kappa) {
    if (!override_kappa) return kappas;
    for (std::size_t l = 0; l < kappas.size(); ++l) {
        kappas[l] = override_or(override_kappa, kappas[l], game.question_counts()[l + 1]);
    }
    return kappas;
}

}  // namespace

EstimateReport est_k(const KFreeGame& game, double epsilon, const EstimateOptions& options) {
    check_k_players(game);
    const auto kappas = resolve_kappas(game, est_k_kappas(game, epsilon), options.kappa);
    require_budget("est_k", peel_cost(game.question_counts(), game.answer_counts(), kappas), options.budget);
    const KFreeGame dense = dense_copy(game, options.budget);

    std::vector<Peeled> results(kChunks);
    std::size_t chunks = 0;
    const std::uint64_t total = for_top_candidates(
        dense, kappas.back(), options.threads,
        [&](std::size_t chunk, const TopCandidate& c) {
            Peeled p = peel_candidate(dense, kappas, c.subset, c.alpha);
            if (p.value > results[chunk].value + kTieTolerance) results[chunk] = std::move(p);
            return true;
        },
        chunks);
    const Peeled* winner = &results[0];
    for (std::size_t c = 1; c < chunks; ++c) {
        if (results[c].value > winner->value + kTieTolerance) winner = &results[c];
    }
    EstimateReport report;
    report.lower_bound = std::clamp(winner->value, 0.0, 1.0);
    report.estimate = std::min(report.lower_bound + epsilon, 1.0);
    report.epsilon = epsilon;
    report.witness = winner->profile;
    report.kappa = kappas;
    report.candidates = total;
    report.subsets = binomial(game.question_counts().back(), kappas.back());
    return report;
}

DecisionReport est_k_perfect(const KFreeGame& game, double epsilon, const DecisionOptions& options) {
    check_k_players(game);
    const auto kappas = resolve_kappas(game, est_k_perfect_kappas(game, epsilon), options.kappa);
    require_budget("est_k_perfect", peel_cost(game.question_counts(), game.answer_counts(), kappas), options.budget);
    const KFreeGame dense = dense_copy(game, options.budget);

    struct ChunkResult {
        std::optional<StrategyProfile> perfect;
        std::vector<RefutationEntry> refutation;
        bool truncated = false;
        std::uint64_t candidates = 0;
        double best = 0.0;
    };
    std::vector<ChunkResult> results(kChunks);
    std::atomic<std::size_t> first_found{kChunks};
    std::size_t chunks = 0;
    for_top_candidates(
        dense, kappas.back(), options.threads,
        [&](std::size_t chunk, const TopCandidate& c) {
            if (first_found.load(std::memory_order_relaxed) < chunk) return false;
            auto& out = results[chunk];
            Peeled p = peel_candidate(dense, kappas, c.subset, c.alpha);
            ++out.candidates;
            out.best = std::max(out.best, p.value);
            RefutationEntry entry{c.subset, c.alpha, {}, {}};
            if (is_perfect(dense, p.profile, &entry.questions, &entry.answers)) {
                out.perfect = std::move(p.profile);
                std::size_t expected = first_found.load();
                while (chunk < expected && !first_found.compare_exchange_weak(expected, chunk)) {
                }
                return false;
            }
            if (out.refutation.size() < options.max_refutation) {
                out.refutation.push_back(std::move(entry));
            } else {
                out.truncated = true;
            }
            return true;
        },
        chunks);

    DecisionReport report;
    report.kappa = kappas;
    for (std::size_t c = 0; c < chunks; ++c) {
        auto& r = results[c];
        report.candidates += r.candidates;
        report.best_value = std::max(report.best_value, r.best);
        if (r.perfect && !report.perfect) report.perfect = std::move(r.perfect);
    }
    if (report.perfect) {
        report.verdict = Verdict::value_one;
        report.best_value = 1.0;
        return report;
    }
    report.verdict = Verdict::below_gap;
    for (std::size_t c = 0; c < chunks; ++c) {
        for (auto& e : results[c].refutation) {
            if (report.refutation.size() < options.max_refutation) {
                report.refutation.push_back(std::move(e));
            } else {
                report.refutation_truncated = true;
            }
        }
        report.refutation_truncated = report.refutation_truncated || results[c].truncated;
    }
    if (report.best_value > 1.0 - epsilon + kTieTolerance) {
        throw PromiseViolation("est_k_perfect: found a profile of value " + format_double(report.best_value) +
                                   " inside the promise gap",
                               report.best_value);
    }
    return report;
}

std::vector<std::uint64_t> subsample_kappa(const KFreeGame& game, double epsilon, double lambda) {
    check_open_unit(epsilon, "epsilon");
    if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
    double log_answers = 0.0;
    for (auto b : game.answer_counts()) log_answers += std::log(static_cast<double>(b));
    const double raw = std::ceil(std::pow(epsilon, -lambda) * log_answers);
    std::vector<std::uint64_t> kappas;
    for (auto q : game.question_counts()) kappas.push_back(clamp_kappa(raw, q));
    return kappas;
}

SubsampleEstimate subsample_estimate(const KFreeGame& game, double epsilon, double lambda, const SubsampleMode& mode,
                                     const EstimateOptions& options) {
    const std::size_t k = game.players();
    const auto& qs = game.question_counts();
    std::vector<std::uint64_t> kappas = subsample_kappa(game, epsilon, lambda);
    if (options.kappa) {
        for (std::size_t i = 0; i < k; ++i) kappas[i] = override_or(options.kappa, kappas[i], qs[i]);
    }
    std::vector<std::uint64_t> sub_qs = kappas;
    const KFreeGame shape_only(sub_qs, game.answer_counts(),
                               VerificationOracle::rule(
                                   [&] {
                                       std::vector<std::uint64_t> d = sub_qs;
                                       d.insert(d.end(), game.answer_counts().begin(), game.answer_counts().end());
                                       return d;
                                   }(),
                                   [](std::span<const std::uint64_t>) { return 0.0; }));
    const double per_sample = exact_value_k_cost(shape_only);
    const ExactOptions inner{std::numeric_limits<double>::infinity(), 1};

    auto value_of = [&](const std::vector<std::vector<std::uint64_t>>& subsets) {
        return exact_value_k(restrict_subgame(game, subsets).game, inner).value;
    };

    SubsampleEstimate out;
    out.kappa = kappas;
    if (std::holds_alternative<ExactMode>(mode)) {
        std::vector<SubsetIndex> indices;
        std::vector<std::uint64_t> counts;
        double samples = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            indices.emplace_back(qs[i], kappas[i]);
            counts.push_back(indices.back().count());
            samples *= static_cast<double>(counts.back());
        }
        require_budget("subsample_estimate", samples * per_sample, options.budget);
        const std::uint64_t total = checked_product(counts);
        const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(total, kChunks));
        std::vector<double> sums(chunks, 0.0);
        parallel_chunks(chunks, options.threads, [&](std::size_t chunk) {
            auto [begin, end] = chunk_range(total, chunks, chunk);
            std::vector<std::uint64_t> ranks(k);
            std::uint64_t rem = begin;
            for (std::size_t i = 0; i < k; ++i) ranks[i] = rem % counts[i], rem /= counts[i];
            std::vector<std::vector<std::uint64_t>> subsets(k);
            for (std::uint64_t n = begin; n < end; ++n) {
                for (std::size_t i = 0; i < k; ++i) subsets[i] = indices[i].unrank(ranks[i]);
                sums[chunk] += value_of(subsets);
                next_tuple(ranks, counts);
            }
        });
        out.samples = total;
        out.mean = std::accumulate(sums.begin(), sums.end(), 0.0) / static_cast<double>(total);
        return out;
    }

    const auto& mc = std::get<MonteCarloMode>(mode);
    if (mc.trials == 0) throw InvalidArgument("Monte Carlo mode needs at least one trial");
    require_budget("subsample_estimate", static_cast<double>(mc.trials) * per_sample, options.budget);
    std::vector<double> values(mc.trials);
    const Rng root(mc.seed);
    const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(mc.trials, kChunks));
    parallel_chunks(chunks, options.threads, [&](std::size_t chunk) {
        auto [begin, end] = chunk_range(mc.trials, chunks, chunk);
        std::vector<std::vector<std::uint64_t>> subsets(k);
        for (std::uint64_t t = begin; t < end; ++t) {
            Rng rng = root.split(t);
            for (std::size_t i = 0; i < k; ++i) subsets[i] = rng.subset(qs[i], kappas[i]);
            values[t] = value_of(subsets);
        }
    });
    out.samples = mc.trials;
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(mc.trials);
    if (mc.trials >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.stderr_estimate = std::sqrt(ss / static_cast<double>(mc.trials - 1) / static_cast<double>(mc.trials));
    }
    return out;
}

Verdict verdict_from_estimate(const EstimateReport& report, double gap) {
    check_open_unit(gap, "gap");
    return report.lower_bound >= 1.0 - gap / 2.0 ? Verdict::value_one : Verdict::below_gap;
}

}  // namespace fgame

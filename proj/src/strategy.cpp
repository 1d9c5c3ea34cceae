#include "fgame/strategy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "fgame/combinatorics.hpp"
#include "fgame/error.hpp"
#include "fgame/parallel.hpp"
#include "weights.hpp"

namespace fgame {

namespace {

using detail::kTieTolerance;
using detail::raw_weight;
using detail::weight_scale;

// Largest contribution table kept in memory by exact_value (doubles).
constexpr double kMaxContributionEntries = 1 << 24;

std::size_t argmax_lowest(std::span<const double> scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return best;
}

void validate_subset(std::span<const std::uint64_t> subset, std::uint64_t universe, std::size_t player) {
    if (subset.empty()) throw DimensionMismatch(player, "question subset is empty");
    std::set<std::uint64_t> seen;
    for (auto q : subset) {
        if (q >= universe) throw DimensionMismatch(player, "question " + std::to_string(q) + " out of range");
        if (!seen.insert(q).second) throw DimensionMismatch(player, "question subset has duplicates");
    }
}

}  // namespace

void validate_profile(const StrategyProfile& profile, std::span<const std::uint64_t> question_counts,
                      std::span<const std::uint64_t> answer_counts) {
    if (profile.players.size() != question_counts.size()) {
        const std::size_t player = std::min(profile.players.size(), question_counts.size());
        throw DimensionMismatch(player, "profile has " + std::to_string(profile.players.size()) +
                                            " players, game has " + std::to_string(question_counts.size()));
    }
    for (std::size_t i = 0; i < question_counts.size(); ++i) {
        const auto& map = profile.players[i];
        if (map.size() != question_counts[i]) {
            throw DimensionMismatch(i, "strategy covers " + std::to_string(map.size()) + " questions, expected " +
                                           std::to_string(question_counts[i]));
        }
        for (auto answer : map) {
            if (answer >= answer_counts[i]) {
                throw DimensionMismatch(i, "answer index " + std::to_string(answer) + " out of range");
            }
        }
    }
}

double strategy_value(const TwoProverGame& game, const StrategyProfile& profile) {
    const std::array q{game.x_count(), game.y_count()};
    const std::array a{game.a_count(), game.b_count()};
    validate_profile(profile, q, a);
    const auto& sa = profile.players[0];
    const auto& sb = profile.players[1];
    double total = 0.0;
    for (std::uint64_t x = 0; x < game.x_count(); ++x) {
        for (std::uint64_t y = 0; y < game.y_count(); ++y) {
            const double w = raw_weight(game, x, y);
            if (w != 0.0) total += w * game.payoff(x, y, sa[x], sb[y]);
        }
    }
    return std::clamp(total / weight_scale(game), 0.0, 1.0);
}

double strategy_value(const KFreeGame& game, const StrategyProfile& profile) {
    validate_profile(profile, game.question_counts(), game.answer_counts());
    const std::size_t k = game.players();
    std::vector<std::uint64_t> index(2 * k, 0);
    std::span<std::uint64_t> ys(index.data(), k);
    double total = 0.0;
    do {
        for (std::size_t i = 0; i < k; ++i) index[k + i] = profile.players[i][ys[i]];
        total += game.payoff(index);
    } while (next_tuple(ys, game.question_counts()));
    return std::clamp(total / static_cast<double>(game.question_tuples()), 0.0, 1.0);
}

BestResponse best_response(const TwoProverGame& game, Player fixed, std::span<const std::uint64_t> fixed_strategy,
                           std::optional<std::span<const std::uint64_t>> subset) {
    const bool first_fixed = fixed == Player::first;
    const std::size_t fixed_index = first_fixed ? 0 : 1;
    const std::uint64_t fixed_questions = first_fixed ? game.x_count() : game.y_count();
    const std::uint64_t fixed_answers = first_fixed ? game.a_count() : game.b_count();
    const std::uint64_t own_questions = first_fixed ? game.y_count() : game.x_count();
    const std::uint64_t own_answers = first_fixed ? game.b_count() : game.a_count();

    std::vector<std::uint64_t> all;
    std::span<const std::uint64_t> questions;
    if (subset) {
        validate_subset(*subset, fixed_questions, fixed_index);
        questions = *subset;
    } else {
        all.resize(fixed_questions);
        for (std::uint64_t q = 0; q < fixed_questions; ++q) all[q] = q;
        questions = all;
    }
    if (fixed_strategy.size() != questions.size()) {
        throw DimensionMismatch(fixed_index, "fixed strategy covers " + std::to_string(fixed_strategy.size()) +
                                                 " questions, expected " + std::to_string(questions.size()));
    }
    for (auto ans : fixed_strategy) {
        if (ans >= fixed_answers) throw DimensionMismatch(fixed_index, "answer index out of range");
    }

    BestResponse result;
    result.response.assign(own_questions, 0);
    std::vector<double> scores(own_answers);
    double total = 0.0, mass = 0.0;
    for (std::uint64_t own = 0; own < own_questions; ++own) {
        std::fill(scores.begin(), scores.end(), 0.0);
        double own_mass = 0.0;
        for (std::size_t i = 0; i < questions.size(); ++i) {
            const std::uint64_t x = first_fixed ? questions[i] : own;
            const std::uint64_t y = first_fixed ? own : questions[i];
            const double w = raw_weight(game, x, y);
            if (w == 0.0) continue;
            own_mass += w;
            for (std::uint64_t r = 0; r < own_answers; ++r) {
                scores[r] += first_fixed ? w * game.payoff(x, y, fixed_strategy[i], r)
                                         : w * game.payoff(x, y, r, fixed_strategy[i]);
            }
        }
        if (own_mass == 0.0) {
            result.unsupported.push_back(own);
            continue;
        }
        const std::size_t best = argmax_lowest(scores);
        result.response[own] = best;
        total += scores[best];
        mass += own_mass;
    }
    result.value = mass == 0.0 ? 1.0 : std::clamp(total / mass, 0.0, 1.0);
    return result;
}

BestResponse best_response_k(const KFreeGame& game, std::size_t responder, const StrategyProfile& profile) {
    const std::size_t k = game.players();
    if (responder >= k) throw InvalidArgument("responder index out of range");
    if (profile.players.size() != k) throw DimensionMismatch(std::min(profile.players.size(), k), "wrong player count");
    for (std::size_t i = 0; i < k; ++i) {
        if (i == responder) continue;
        if (profile.players[i].size() != game.question_counts()[i]) {
            throw DimensionMismatch(i, "strategy does not cover the question set");
        }
        for (auto ans : profile.players[i]) {
            if (ans >= game.answer_counts()[i]) throw DimensionMismatch(i, "answer index out of range");
        }
    }
    const std::uint64_t own_answers = game.answer_counts()[responder];
    const std::uint64_t own_questions = game.question_counts()[responder];
    std::vector<double> scores(own_questions * own_answers, 0.0);
    std::vector<std::uint64_t> index(2 * k, 0);
    std::span<std::uint64_t> ys(index.data(), k);
    do {
        for (std::size_t i = 0; i < k; ++i) {
            if (i != responder) index[k + i] = profile.players[i][ys[i]];
        }
        for (std::uint64_t r = 0; r < own_answers; ++r) {
            index[k + responder] = r;
            scores[ys[responder] * own_answers + r] += game.payoff(index);
        }
    } while (next_tuple(ys, game.question_counts()));

    BestResponse result;
    result.response.resize(own_questions);
    double total = 0.0;
    for (std::uint64_t q = 0; q < own_questions; ++q) {
        std::span<const double> row(scores.data() + q * own_answers, own_answers);
        const std::size_t best = argmax_lowest(row);
        result.response[q] = best;
        total += row[best];
    }
    result.value = std::clamp(total / static_cast<double>(game.question_tuples()), 0.0, 1.0);
    return result;
}

// ---------------------------------------------------------------------------
// exact_value

namespace {

// The two-prover game seen from the enumerated player ("row" player) whose
// strategy is searched, against the "column" player who best-responds.
class OrientedGame {
public:
    OrientedGame(const TwoProverGame& game, bool transpose) : game_(game), transpose_(transpose) {
        rows_ = transpose ? game.y_count() : game.x_count();
        row_answers_ = transpose ? game.b_count() : game.a_count();
        cols_ = transpose ? game.x_count() : game.y_count();
        col_answers_ = transpose ? game.a_count() : game.b_count();
        width_ = cols_ * col_answers_;
        const double entries = static_cast<double>(rows_) * static_cast<double>(row_answers_) *
                               static_cast<double>(width_);
        if (entries <= kMaxContributionEntries) {
            table_.resize(rows_ * row_answers_ * width_);
            for (std::uint64_t r = 0; r < rows_; ++r) {
                for (std::uint64_t a = 0; a < row_answers_; ++a) {
                    compute_row(r, a, std::span<double>(table_.data() + (r * row_answers_ + a) * width_, width_));
                }
            }
        }
    }

    std::uint64_t rows() const { return rows_; }
    std::uint64_t row_answers() const { return row_answers_; }
    std::uint64_t cols() const { return cols_; }
    std::uint64_t col_answers() const { return col_answers_; }
    std::uint64_t width() const { return width_; }
    bool tabulated() const { return !table_.empty(); }

    // Adds the contribution w(x,y) V(x,y,a,b) of row r answering a, for every (col, col answer).
    void add_row(std::uint64_t r, std::uint64_t a, std::span<const double> in, std::span<double> out,
                 std::vector<double>& scratch) const {
        const double* row;
        if (tabulated()) {
            row = table_.data() + (r * row_answers_ + a) * width_;
        } else {
            scratch.resize(width_);
            compute_row(r, a, scratch);
            row = scratch.data();
        }
        for (std::uint64_t i = 0; i < width_; ++i) out[i] = in[i] + row[i];
    }

    void compute_row(std::uint64_t r, std::uint64_t a, std::span<double> out) const {
        for (std::uint64_t c = 0; c < cols_; ++c) {
            const std::uint64_t x = transpose_ ? c : r;
            const std::uint64_t y = transpose_ ? r : c;
            const double w = raw_weight(game_, x, y);
            for (std::uint64_t b = 0; b < col_answers_; ++b) {
                out[c * col_answers_ + b] =
                    w == 0.0 ? 0.0 : w * (transpose_ ? game_.payoff(x, y, b, a) : game_.payoff(x, y, a, b));
            }
        }
    }

    // sum over columns of the best column answer.
    double best_total(std::span<const double> score) const {
        double total = 0.0;
        for (std::uint64_t c = 0; c < cols_; ++c) {
            total += *std::max_element(score.begin() + c * col_answers_, score.begin() + (c + 1) * col_answers_);
        }
        return total;
    }

    double bound(std::span<const double> score, std::span<const double> rest) const {
        double total = 0.0;
        for (std::uint64_t c = 0; c < cols_; ++c) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::uint64_t b = 0; b < col_answers_; ++b) {
                best = std::max(best, score[c * col_answers_ + b] + rest[c * col_answers_ + b]);
            }
            total += best;
        }
        return total;
    }

    std::vector<std::uint64_t> responses(std::span<const double> score) const {
        std::vector<std::uint64_t> out(cols_);
        for (std::uint64_t c = 0; c < cols_; ++c) {
            out[c] = argmax_lowest(score.subspan(c * col_answers_, col_answers_));
        }
        return out;
    }

private:
    const TwoProverGame& game_;
    bool transpose_;
    std::uint64_t rows_, row_answers_, cols_, col_answers_, width_;
    std::vector<double> table_;
};

struct Leaf {
    double value = -std::numeric_limits<double>::infinity();
    std::vector<std::uint64_t> rows;
    bool found = false;
};

}  // namespace

double exact_value_cost(const TwoProverGame& game) {
    const double xa = std::pow(static_cast<double>(game.a_count()), static_cast<double>(game.x_count())) *
                      static_cast<double>(game.y_count() * game.b_count());
    const double yb = std::pow(static_cast<double>(game.b_count()), static_cast<double>(game.y_count())) *
                      static_cast<double>(game.x_count() * game.a_count());
    return std::min(xa, yb);
}

GameValue exact_value(const TwoProverGame& game, const ExactOptions& options) {
    const bool transpose = static_cast<double>(game.y_count()) * std::log(static_cast<double>(game.b_count())) <
                           static_cast<double>(game.x_count()) * std::log(static_cast<double>(game.a_count()));
    const double estimated = exact_value_cost(game);
    const double setup = static_cast<double>(game.x_count() * game.y_count()) *
                         static_cast<double>(game.a_count() * game.b_count());
    require_budget("exact_value setup", setup, options.budget);
    WorkMeter meter("exact_value", options.budget, estimated + setup);
    meter.charge(static_cast<std::uint64_t>(setup));

    const OrientedGame og(game, transpose);
    const double scale = weight_scale(game);
    const double tol = kTieTolerance * scale;
    const std::uint64_t rows = og.rows(), answers = og.row_answers(), width = og.width();

    // rest[r] = sum over rows >= r of the best contribution per (col, col answer).
    std::vector<double> rest((rows + 1) * width, 0.0);
    {
        std::vector<double> row(width), scratch;
        for (std::uint64_t r = rows; r-- > 0;) {
            std::span<double> dst(rest.data() + r * width, width);
            std::span<const double> src(rest.data() + (r + 1) * width, width);
            std::vector<double> best(width, 0.0);
            for (std::uint64_t a = 0; a < answers; ++a) {
                og.compute_row(r, a, row);
                for (std::uint64_t i = 0; i < width; ++i) best[i] = std::max(best[i], row[i]);
            }
            for (std::uint64_t i = 0; i < width; ++i) dst[i] = src[i] + best[i];
        }
    }

    // Incumbent from alternating best responses starting at the all-zero strategy.
    double incumbent;
    std::vector<std::uint64_t> incumbent_rows(rows, 0);
    {
        std::vector<std::uint64_t> strat(rows, 0);
        std::vector<double> score(width), row(width), scratch;
        incumbent = -1.0;
        for (int round = 0; round < 32; ++round) {
            std::fill(score.begin(), score.end(), 0.0);
            for (std::uint64_t r = 0; r < rows; ++r) og.add_row(r, strat[r], score, score, scratch);
            const double value = og.best_total(score);
            if (value <= incumbent + tol) break;
            incumbent = value;
            incumbent_rows = strat;
            const auto resp = og.responses(score);
            bool changed = false;
            for (std::uint64_t r = 0; r < rows; ++r) {
                double best = -1.0;
                std::uint64_t best_a = 0;
                for (std::uint64_t a = 0; a < answers; ++a) {
                    og.compute_row(r, a, row);
                    double s = 0.0;
                    for (std::uint64_t c = 0; c < og.cols(); ++c) s += row[c * og.col_answers() + resp[c]];
                    if (s > best) best = s, best_a = a;
                }
                changed |= best_a != strat[r];
                strat[r] = best_a;
            }
            if (!changed) break;
        }
    }

    // Fixed partition into subtrees by the answers of the first `prefix` rows.
    std::uint64_t prefix = 0, chunks = 1;
    while (prefix < rows && chunks < 64) {
        if (chunks > std::numeric_limits<std::uint64_t>::max() / answers) break;
        chunks *= answers;
        ++prefix;
    }

    std::vector<Leaf> results(chunks);
    parallel_chunks(chunks, options.threads, [&](std::size_t chunk) {
        Leaf& best = results[chunk];
        std::vector<std::uint64_t> strat(rows, 0);
        std::uint64_t rem = chunk;
        for (std::uint64_t r = prefix; r-- > 0;) {
            strat[r] = rem % answers;
            rem /= answers;
        }
        std::vector<double> scores((rows + 1) * width, 0.0), scratch;
        auto level = [&](std::uint64_t r) { return std::span<double>(scores.data() + r * width, width); };
        auto rest_at = [&](std::uint64_t r) { return std::span<const double>(rest.data() + r * width, width); };
        for (std::uint64_t r = 0; r < prefix; ++r) og.add_row(r, strat[r], level(r), level(r + 1), scratch);
        std::uint64_t pending = prefix * width;

        const auto prunable = [&](double bound) { return bound <= std::max(best.value, incumbent) + tol; };
        if (prunable(og.bound(level(prefix), rest_at(prefix)))) {
            meter.charge(pending);
            return;
        }
        // Depth-first over rows prefix..rows-1, answers in increasing order.
        auto dfs = [&](auto&& self, std::uint64_t r) -> void {
            if (r == rows) {
                const double value = og.best_total(level(rows));
                if (value > std::max(best.value, incumbent) + tol) {
                    best.value = value;
                    best.rows = strat;
                    best.found = true;
                }
                return;
            }
            for (std::uint64_t a = 0; a < answers; ++a) {
                og.add_row(r, a, level(r), level(r + 1), scratch);
                pending += width;
                if (pending >= (1u << 16)) {
                    meter.charge(pending);
                    pending = 0;
                }
                if (prunable(og.bound(level(r + 1), rest_at(r + 1)))) continue;
                strat[r] = a;
                self(self, r + 1);
            }
        };
        dfs(dfs, prefix);
        meter.charge(pending);
    });

    // Leaves only count when they beat the incumbent, which wins all ties.
    Leaf incumbent_leaf;
    incumbent_leaf.value = incumbent;
    incumbent_leaf.rows = incumbent_rows;
    incumbent_leaf.found = true;
    const Leaf* winner = &incumbent_leaf;
    for (const auto& leaf : results) {
        if (leaf.found && leaf.value > winner->value + tol) winner = &leaf;
    }

    std::vector<double> score(width, 0.0), scratch;
    for (std::uint64_t r = 0; r < rows; ++r) og.add_row(r, winner->rows[r], score, score, scratch);
    auto cols = og.responses(score);
    GameValue out;
    out.exact = true;
    out.witness = transpose ? StrategyProfile::two(std::move(cols), winner->rows)
                            : StrategyProfile::two(winner->rows, std::move(cols));
    out.value = std::clamp(winner->value / scale, 0.0, 1.0);
    return out;
}

// ---------------------------------------------------------------------------
// exact_value_k

double exact_value_k_cost(const KFreeGame& game) {
    const std::size_t k = game.players();
    double best_log = -1.0;
    std::size_t free_player = k - 1;
    for (std::size_t i = k; i-- > 0;) {
        const double lg = static_cast<double>(game.question_counts()[i]) *
                          std::log(static_cast<double>(game.answer_counts()[i]));
        if (lg > best_log) best_log = lg, free_player = i;
    }
    double cost = static_cast<double>(game.question_tuples()) * static_cast<double>(game.answer_counts()[free_player]);
    for (std::size_t i = 0; i < k; ++i) {
        if (i == free_player) continue;
        cost *= std::pow(static_cast<double>(game.answer_counts()[i]), static_cast<double>(game.question_counts()[i]));
    }
    return cost;
}

GameValue exact_value_k(const KFreeGame& game, const ExactOptions& options) {
    const std::size_t k = game.players();
    const auto& qs = game.question_counts();
    const auto& as = game.answer_counts();
    // The player with the largest strategy space answers per question; ties go to the later player.
    std::size_t free_player = k - 1;
    {
        double best_log = -1.0;
        for (std::size_t i = k; i-- > 0;) {
            const double lg = static_cast<double>(qs[i]) * std::log(static_cast<double>(as[i]));
            if (lg > best_log) best_log = lg, free_player = i;
        }
    }
    const double cost = exact_value_k_cost(game);
    require_budget("exact_value_k", cost, options.budget);

    // Digits of the joint strategy of the enumerated players, most significant first.
    std::vector<std::size_t> digit_player;
    std::vector<std::uint64_t> digit_question, digit_radix;
    for (std::size_t i = 0; i < k; ++i) {
        if (i == free_player) continue;
        for (std::uint64_t q = 0; q < qs[i]; ++q) {
            digit_player.push_back(i);
            digit_question.push_back(q);
            digit_radix.push_back(as[i]);
        }
    }
    const std::size_t digits = digit_radix.size();
    std::uint64_t total = 1;
    for (auto r : digit_radix) total *= r;

    const std::uint64_t own_answers = as[free_player];
    const std::uint64_t own_questions = qs[free_player];
    const double inv_tuples = 1.0 / static_cast<double>(game.question_tuples());
    const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(total, 256));

    struct ChunkBest {
        double value = -std::numeric_limits<double>::infinity();
        std::vector<std::uint64_t> digits;
    };
    std::vector<ChunkBest> results(chunks);

    parallel_chunks(chunks, options.threads, [&](std::size_t chunk) {
        auto [begin, end] = chunk_range(total, chunks, chunk);
        std::vector<std::uint64_t> d(digits, 0);
        std::uint64_t rem = begin;
        for (std::size_t i = digits; i-- > 0;) {
            d[i] = rem % digit_radix[i];
            rem /= digit_radix[i];
        }
        StrategyProfile profile;
        profile.players.resize(k);
        for (std::size_t i = 0; i < k; ++i) profile.players[i].assign(qs[i], 0);
        std::vector<double> scores(own_questions * own_answers);
        std::vector<std::uint64_t> index(2 * k, 0);
        std::span<std::uint64_t> ys(index.data(), k);
        ChunkBest& best = results[chunk];
        for (std::uint64_t n = begin; n < end; ++n) {
            for (std::size_t i = 0; i < digits; ++i) profile.players[digit_player[i]][digit_question[i]] = d[i];
            std::fill(scores.begin(), scores.end(), 0.0);
            std::fill(index.begin(), index.end(), 0);
            do {
                for (std::size_t i = 0; i < k; ++i) {
                    if (i != free_player) index[k + i] = profile.players[i][ys[i]];
                }
                double* row = scores.data() + ys[free_player] * own_answers;
                for (std::uint64_t r = 0; r < own_answers; ++r) {
                    index[k + free_player] = r;
                    row[r] += game.payoff(index);
                }
            } while (next_tuple(ys, qs));
            double value = 0.0;
            for (std::uint64_t q = 0; q < own_questions; ++q) {
                value += *std::max_element(scores.begin() + q * own_answers, scores.begin() + (q + 1) * own_answers);
            }
            value *= inv_tuples;
            if (value > best.value + kTieTolerance) {
                best.value = value;
                best.digits = d;
            }
            // Increment, least significant digit last.
            for (std::size_t i = digits; i-- > 0;) {
                if (++d[i] < digit_radix[i]) break;
                d[i] = 0;
            }
        }
    });

    const ChunkBest* winner = nullptr;
    for (const auto& r : results) {
        if (!winner || r.value > winner->value + kTieTolerance) winner = &r;
    }
    StrategyProfile profile;
    profile.players.resize(k);
    for (std::size_t i = 0; i < k; ++i) profile.players[i].assign(qs[i], 0);
    for (std::size_t i = 0; i < digits; ++i) profile.players[digit_player[i]][digit_question[i]] = winner->digits[i];
    const auto response = best_response_k(game, free_player, profile);
    profile.players[free_player] = response.response;

    GameValue out;
    out.exact = true;
    out.value = std::clamp(winner->value, 0.0, 1.0);
    out.witness = std::move(profile);
    return out;
}

// ---------------------------------------------------------------------------
// restriction

template <typename Game>
StrategyProfile Subgame<Game>::lift(const StrategyProfile& sub, std::span<const std::uint64_t> parent_questions,
                                    std::uint64_t fill) const {
    if (sub.players.size() != kept.size() || parent_questions.size() != kept.size()) {
        throw InvalidArgument("lift: player count mismatch");
    }
    StrategyProfile out;
    out.players.resize(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (sub.players[i].size() != kept[i].size()) throw DimensionMismatch(i, "lift: strategy size mismatch");
        out.players[i].assign(parent_questions[i], fill);
        for (std::size_t q = 0; q < kept[i].size(); ++q) out.players[i][kept[i][q]] = sub.players[i][q];
    }
    return out;
}

template struct Subgame<FreeGame>;
template struct Subgame<KFreeGame>;

Subgame<KFreeGame> restrict_subgame(const KFreeGame& game, std::span<const std::vector<std::uint64_t>> subsets) {
    const std::size_t k = game.players();
    if (subsets.size() != k) throw InvalidArgument("need one question subset per player");
    for (std::size_t i = 0; i < k; ++i) validate_subset(subsets[i], game.question_counts()[i], i);

    std::vector<std::uint64_t> sizes(k);
    for (std::size_t i = 0; i < k; ++i) sizes[i] = subsets[i].size();
    std::vector<std::vector<std::uint64_t>> kept(subsets.begin(), subsets.end());
    std::vector<std::uint64_t> dims = sizes;
    dims.insert(dims.end(), game.answer_counts().begin(), game.answer_counts().end());

    VerificationOracle oracle = [&] {
        if (game.verifier().is_dense()) {
            std::vector<double> table;
            table.reserve(checked_product(dims));
            std::vector<std::uint64_t> sub(2 * k, 0), parent(2 * k, 0);
            // Row-major over the subgame tuple, last index fastest.
            for (;;) {
                for (std::size_t i = 0; i < k; ++i) parent[i] = kept[i][sub[i]];
                for (std::size_t i = k; i < 2 * k; ++i) parent[i] = sub[i];
                table.push_back(game.payoff(parent));
                std::size_t i = 2 * k;
                while (i-- > 0) {
                    if (++sub[i] < dims[i]) break;
                    sub[i] = 0;
                }
                if (i == static_cast<std::size_t>(-1)) break;
            }
            return VerificationOracle::dense(dims, std::move(table));
        }
        auto parent = game.verifier();
        auto map = kept;
        return VerificationOracle::rule(
            dims,
            [parent, map, k](std::span<const std::uint64_t> idx) {
                std::vector<std::uint64_t> full(idx.begin(), idx.end());
                for (std::size_t i = 0; i < k; ++i) full[i] = map[i][idx[i]];
                return parent(full);
            },
            game.verifier().evaluation_cost());
    }();
    return Subgame<KFreeGame>{KFreeGame(sizes, game.answer_counts(), std::move(oracle)), std::move(kept)};
}

Subgame<FreeGame> restrict_subgame(const FreeGame& game, std::span<const std::uint64_t> s,
                                   std::span<const std::uint64_t> t) {
    const std::array subsets{std::vector<std::uint64_t>(s.begin(), s.end()),
                             std::vector<std::uint64_t>(t.begin(), t.end())};
    auto sub = restrict_subgame(to_kfree(game), subsets);
    return Subgame<FreeGame>{to_free2(sub.game), std::move(sub.kept)};
}

}  // namespace fgame

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "fgame/game.hpp"
#include "fgame/rng.hpp"
#include "fgame/strategy.hpp"

namespace fgame::testing {

// Payoffs on a 1/8 grid so sums of a few of them are exact in binary.
inline std::vector<double> random_table(Rng& rng, std::uint64_t size, bool boolean = false) {
    std::vector<double> table(size);
    for (auto& v : table) v = boolean ? static_cast<double>(rng.below(2)) : static_cast<double>(rng.below(9)) / 8.0;
    return table;
}

inline FreeGame random_free_game(std::uint64_t seed, GameShape shape, bool boolean = false) {
    Rng rng(seed);
    return make_free_game(shape, random_table(rng, shape.x_count * shape.y_count * shape.a_count * shape.b_count, boolean));
}

inline KFreeGame random_kfree_game(std::uint64_t seed, std::vector<std::uint64_t> q, std::vector<std::uint64_t> a,
                                   bool boolean = false) {
    Rng rng(seed);
    std::uint64_t size = 1;
    for (auto v : q) size *= v;
    for (auto v : a) size *= v;
    return make_kfree_game(std::move(q), std::move(a), random_table(rng, size, boolean));
}

inline FreeGame constant_game(GameShape shape, double c) {
    return make_free_game(shape, std::vector<double>(shape.x_count * shape.y_count * shape.a_count * shape.b_count, c));
}

inline std::vector<std::uint64_t> random_map(Rng& rng, std::uint64_t questions, std::uint64_t answers) {
    std::vector<std::uint64_t> out(questions);
    for (auto& v : out) v = rng.below(answers);
    return out;
}

// Direct double sum of w(x,y) V(x,y,a(x),b(y)).
inline double naive_value(const TwoProverGame& g, const std::vector<std::uint64_t>& a,
                          const std::vector<std::uint64_t>& b) {
    double total = 0.0;
    for (std::uint64_t x = 0; x < g.x_count(); ++x) {
        for (std::uint64_t y = 0; y < g.y_count(); ++y) total += g.weight(x, y) * g.verifier()({x, y, a[x], b[y]});
    }
    return total;
}

// Maximum over every pair of strategy maps.
inline double brute_value(const TwoProverGame& g) {
    std::vector<std::uint64_t> a(g.x_count(), 0);
    double best = 0.0;
    do {
        std::vector<std::uint64_t> b(g.y_count(), 0);
        do {
            best = std::max(best, naive_value(g, a, b));
            std::uint64_t i = 0;
            for (; i < b.size(); ++i) {
                if (++b[i] < g.b_count()) break;
                b[i] = 0;
            }
            if (i == b.size()) break;
        } while (true);
        std::uint64_t i = 0;
        for (; i < a.size(); ++i) {
            if (++a[i] < g.a_count()) break;
            a[i] = 0;
        }
        if (i == a.size()) break;
    } while (true);
    return best;
}

// Average over question tuples of V along a full profile.
inline double naive_value_k(const KFreeGame& g, const std::vector<std::vector<std::uint64_t>>& s) {
    const std::size_t k = g.players();
    std::vector<std::uint64_t> idx(2 * k, 0);
    double total = 0.0;
    std::uint64_t count = 0;
    for (;;) {
        for (std::size_t i = 0; i < k; ++i) idx[k + i] = s[i][idx[i]];
        total += g.verifier()(idx);
        ++count;
        std::size_t i = 0;
        for (; i < k; ++i) {
            if (++idx[i] < g.question_counts()[i]) break;
            idx[i] = 0;
        }
        if (i == k) break;
    }
    return total / static_cast<double>(count);
}

// Maximum over every joint strategy of all k players.
inline double brute_value_k(const KFreeGame& g) {
    const std::size_t k = g.players();
    std::vector<std::vector<std::uint64_t>> s(k);
    for (std::size_t i = 0; i < k; ++i) s[i].assign(g.question_counts()[i], 0);
    double best = 0.0;
    for (;;) {
        best = std::max(best, naive_value_k(g, s));
        bool advanced = false;
        for (std::size_t i = 0; i < k && !advanced; ++i) {
            for (auto& d : s[i]) {
                if (++d < g.answer_counts()[i]) {
                    advanced = true;
                    break;
                }
                d = 0;
            }
        }
        if (!advanced) return best;
    }
}

}  // namespace fgame::testing

#include "fgame/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fgame/error.hpp"

namespace fgame {

namespace {

std::uint64_t literal_variable(std::int64_t lit) { return static_cast<std::uint64_t>(lit < 0 ? -lit : lit) - 1; }

void require_boolean(const TwoProverGame& base, double max_entries, const char* what) {
    if (!base.verifier().is_boolean(max_entries)) {
        throw InvalidArgument(std::string(what) + " needs a 0/1-valued base verifier");
    }
}

// Distribution of the m-fold product of `base`.
Distribution product_distribution(const TwoProverGame& base, std::uint64_t m, std::uint64_t xs, std::uint64_t ys) {
    if (base.is_free()) return UniformProduct{};
    if (const auto* support = std::get_if<UniformOverSupport>(&base.distribution())) {
        const std::uint64_t z = support->support.size();
        UniformOverSupport out;
        std::vector<std::uint64_t> pick(m, 0);
        do {
            std::uint64_t x = 0, y = 0;
            for (std::uint64_t i = m; i-- > 0;) {
                x = x * base.x_count() + support->support[pick[i]].first;
                y = y * base.y_count() + support->support[pick[i]].second;
            }
            out.support.emplace_back(x, y);
        } while (next_tuple(pick, z));
        std::sort(out.support.begin(), out.support.end());
        return out;
    }
    Weighted out;
    out.weights.resize(xs * ys);
    for (std::uint64_t x = 0; x < xs; ++x) {
        for (std::uint64_t y = 0; y < ys; ++y) {
            double w = 1.0;
            std::uint64_t rx = x, ry = y;
            for (std::uint64_t i = 0; i < m; ++i) {
                w *= base.weight(rx % base.x_count(), ry % base.y_count());
                rx /= base.x_count();
                ry /= base.y_count();
            }
            out.weights[x * ys + y] = w;
        }
    }
    // Renormalize away rounding so the product passes the sum-to-one check.
    const double total = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
    for (auto& w : out.weights) w /= total;
    return out;
}

// Dense m-fold table where each coordinate's payoff is combined by `combine`.
template <typename Combine>
TwoProverGame repeated_game(const TwoProverGame& base, std::uint64_t m, double max_entries, const char* what,
                            Combine combine) {
    if (m == 0) throw InvalidArgument(std::string(what) + " needs at least one coordinate");
    const double entries = std::pow(static_cast<double>(base.x_count()) * static_cast<double>(base.y_count()) *
                                        static_cast<double>(base.a_count()) * static_cast<double>(base.b_count()),
                                    static_cast<double>(m));
    if (entries > max_entries) throw BudgetExceeded(what, entries, max_entries);
    const std::uint64_t xs = checked_pow(base.x_count(), m), ys = checked_pow(base.y_count(), m);
    const std::uint64_t as = checked_pow(base.a_count(), m), bs = checked_pow(base.b_count(), m);
    const auto base_table = base.verifier().materialize(max_entries);
    const auto& bt = base_table.table();
    std::vector<double> table(xs * ys * as * bs);
    std::vector<double> coords(m);
    std::size_t flat = 0;
    for (std::uint64_t x = 0; x < xs; ++x)
        for (std::uint64_t y = 0; y < ys; ++y)
            for (std::uint64_t a = 0; a < as; ++a)
                for (std::uint64_t b = 0; b < bs; ++b) {
                    std::uint64_t rx = x, ry = y, ra = a, rb = b;
                    for (std::uint64_t i = 0; i < m; ++i) {
                        const std::uint64_t cx = rx % base.x_count(), cy = ry % base.y_count();
                        const std::uint64_t ca = ra % base.a_count(), cb = rb % base.b_count();
                        coords[i] = bt[((cx * base.y_count() + cy) * base.a_count() + ca) * base.b_count() + cb];
                        rx /= base.x_count();
                        ry /= base.y_count();
                        ra /= base.a_count();
                        rb /= base.b_count();
                    }
                    table[flat++] = combine(coords);
                }
    return TwoProverGame(GameShape{xs, ys, as, bs}, product_distribution(base, m, xs, ys),
                         VerificationOracle::dense({xs, ys, as, bs}, std::move(table)));
}

}  // namespace

// ---------------------------------------------------------------------------

TwoProverGame clause_variable_game(const CnfFormula& formula) {
    const std::uint64_t m = formula.m(), n = formula.n_vars();
    if (m == 0) throw InvalidArgument("clause/variable game needs at least one clause");
    for (std::uint64_t v = 0; v < n; ++v) {
        if (formula.occurrences()[v] == 0) {
            throw InvalidArgument("variable " + std::to_string(v + 1) + " occurs in no clause");
        }
    }
    UniformOverSupport support;
    std::vector<double> table(m * n * 8 * 2, 0.0);
    for (std::uint64_t i = 0; i < m; ++i) {
        const auto& clause = formula.clauses()[i];
        for (std::size_t p = 0; p < 3; ++p) {
            const std::uint64_t j = literal_variable(clause[p]);
            support.support.emplace_back(i, j);
            for (std::uint64_t a = 0; a < 8; ++a) {
                bool satisfied = false;
                for (std::size_t q = 0; q < 3; ++q) satisfied |= (((a >> q) & 1) != 0) == (clause[q] > 0);
                if (!satisfied) continue;
                const std::uint64_t b = (a >> p) & 1;
                table[((i * n + j) * 8 + a) * 2 + b] = 1.0;
            }
        }
    }
    std::sort(support.support.begin(), support.support.end());
    return TwoProverGame(GameShape{m, n, 8, 2}, std::move(support),
                         VerificationOracle::dense({m, n, 8, 2}, std::move(table)));
}

FreeGame counterexample_game(std::uint64_t n) {
    if (n < 2) throw InvalidArgument("counterexample game needs n >= 2");
    const std::uint64_t block = n * n * n;
    std::vector<double> table(n * block, 1.0);
    std::fill(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(block), 0.0);
    return make_free_game(GameShape{n, n, n, n}, std::move(table));
}

// ---------------------------------------------------------------------------
// birthday repetition

namespace {

std::vector<bool> support_mask(const TwoProverGame& base) {
    std::vector<bool> mask(base.x_count() * base.y_count(), true);
    if (base.is_free()) return mask;
    const auto* support = std::get_if<UniformOverSupport>(&base.distribution());
    if (!support) throw InvalidArgument("birthday repetition needs a distribution uniform over its support");
    std::fill(mask.begin(), mask.end(), false);
    for (const auto& [x, y] : support->support) mask[x * base.y_count() + y] = true;
    return mask;
}

FreeGame birthday_rule_game(const TwoProverGame& base, std::uint64_t k, std::uint64_t l, const SubsetIndex& left,
                            const SubsetIndex& right, const std::vector<bool>& support) {
    const std::uint64_t as = checked_pow(base.a_count(), k), bs = checked_pow(base.b_count(), l);
    auto rule = [base, k, l, left, right, support](std::span<const std::uint64_t> idx) {
        std::uint64_t s[64], t[64];
        left.unrank_into(idx[0], std::span<std::uint64_t>(s, k));
        right.unrank_into(idx[1], std::span<std::uint64_t>(t, l));
        std::uint64_t a[64], b[64];
        std::uint64_t ra = idx[2], rb = idx[3];
        for (std::uint64_t i = 0; i < k; ++i) a[i] = ra % base.a_count(), ra /= base.a_count();
        for (std::uint64_t j = 0; j < l; ++j) b[j] = rb % base.b_count(), rb /= base.b_count();
        for (std::uint64_t i = 0; i < k; ++i) {
            for (std::uint64_t j = 0; j < l; ++j) {
                if (!support[s[i] * base.y_count() + t[j]]) continue;
                if (base.payoff(s[i], t[j], a[i], b[j]) == 0.0) return 0.0;
            }
        }
        return 1.0;
    };
    const GameShape shape{left.count(), right.count(), as, bs};
    return FreeGame(shape, VerificationOracle::rule({shape.x_count, shape.y_count, shape.a_count, shape.b_count},
                                                    std::move(rule), static_cast<double>(k * l)));
}

}  // namespace

BirthdayGame::BirthdayGame(TwoProverGame base, std::uint64_t k, std::uint64_t l)
    : base_(std::move(base)),
      k_(k),
      l_(l),
      left_(base_.x_count(), k),
      right_(base_.y_count(), l),
      support_(support_mask(base_)),
      game_([&]() -> FreeGame {
          if (k == 0 || l == 0) throw InvalidArgument("birthday repetition needs k, l >= 1");
          if (k > 64 || l > 64) throw InvalidArgument("birthday repetition supports k, l <= 64");
          require_boolean(base_, kMaxDenseEntries, "birthday repetition");
          return birthday_rule_game(base_, k, l, left_, right_, support_);
      }()) {}

FreeGame BirthdayGame::materialize(double max_entries) const {
    const auto dense = game_.verifier().materialize(max_entries);
    return FreeGame(GameShape{game_.x_count(), game_.y_count(), game_.a_count(), game_.b_count()}, dense);
}

BirthdayGame birthday_repetition(const TwoProverGame& base, std::uint64_t k, std::uint64_t l) {
    if (k == 0 || k > base.x_count()) throw InvalidArgument("k must lie in [1, |X|]");
    if (l == 0 || l > base.y_count()) throw InvalidArgument("l must lie in [1, |Y|]");
    return BirthdayGame(base, k, l);
}

// ---------------------------------------------------------------------------
// repetition

TwoProverGame parallel_repetition(const TwoProverGame& base, std::uint64_t m, double max_entries) {
    return repeated_game(base, m, max_entries, "parallel repetition", [](const std::vector<double>& v) {
        double p = 1.0;
        for (double x : v) p *= x;
        return p;
    });
}

std::uint64_t threshold_count(std::uint64_t n, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw InvalidArgument("threshold must lie in [0, 1]");
    const double need = std::ceil(threshold * static_cast<double>(n) - 1e-9);
    return static_cast<std::uint64_t>(std::max(0.0, need));
}

TwoProverGame threshold_repetition(const TwoProverGame& base, std::uint64_t n, double threshold,
                                   double max_entries) {
    const std::uint64_t need = threshold_count(n, threshold);
    require_boolean(base, max_entries, "threshold repetition");
    return repeated_game(base, n, max_entries, "threshold repetition", [need](const std::vector<double>& v) {
        std::uint64_t won = 0;
        for (double x : v) won += x == 1.0;
        return won >= need ? 1.0 : 0.0;
    });
}

// ---------------------------------------------------------------------------
// CSP encodings

DenseCsp free_to_2csp(const FreeGame& game, double budget) {
    const std::uint64_t xs = game.x_count(), ys = game.y_count(), as = game.a_count(), bs = game.b_count();
    const std::uint64_t l = std::lcm(xs, ys);
    const std::uint64_t r1 = l / xs, r2 = l / ys, sigma = as + bs;
    const double cost = static_cast<double>(l) * static_cast<double>(l) +
                        static_cast<double>(xs * ys) * static_cast<double>(sigma * sigma);
    require_budget("free_to_2csp", cost, budget);

    // One payoff table per question pair, shared by all copies.
    std::vector<VerificationOracle> payoffs;
    payoffs.reserve(xs * ys);
    for (std::uint64_t x = 0; x < xs; ++x) {
        for (std::uint64_t y = 0; y < ys; ++y) {
            std::vector<double> table(sigma * sigma, 0.0);
            for (std::uint64_t a = 0; a < as; ++a)
                for (std::uint64_t b = 0; b < bs; ++b) table[a * sigma + as + b] = game.payoff(x, y, a, b);
            payoffs.push_back(VerificationOracle::dense({sigma, sigma}, std::move(table)));
        }
    }
    std::vector<CspConstraint> constraints;
    constraints.reserve(l * l);
    for (std::uint64_t u = 0; u < l; ++u) {
        for (std::uint64_t w = 0; w < l; ++w) {
            constraints.push_back(CspConstraint{{u, l + w}, 1.0, payoffs[(u / r1) * ys + w / r2]});
        }
    }
    return DenseCsp(2 * l, sigma, 2, std::move(constraints));
}

DenseCsp kfree_to_kcsp(const KFreeGame& game, double budget) {
    const std::size_t k = game.players();
    if (k < 2 || k > 5) throw InvalidArgument("k-CSP encoding needs 2 <= k <= 5 players");
    const auto& qs = game.question_counts();
    const auto& as = game.answer_counts();
    const std::uint64_t tuples = game.question_tuples();
    const std::uint64_t sigma = checked_product(as);
    if (tuples < k) throw InvalidArgument("k-CSP encoding needs at least k question tuples");

    std::uint64_t perms = 1;
    for (std::size_t i = 2; i <= k; ++i) perms *= i;
    const double cost = binomial_approx(static_cast<double>(tuples), static_cast<double>(k)) *
                        std::pow(static_cast<double>(sigma), static_cast<double>(k)) * static_cast<double>(perms);
    require_budget("kfree_to_kcsp", cost, budget);

    auto decode = [](std::uint64_t v, std::span<const std::uint64_t> radices, std::span<std::uint64_t> out) {
        for (std::size_t i = 0; i < radices.size(); ++i) out[i] = v % radices[i], v /= radices[i];
    };
    std::vector<std::size_t> perm(k);
    std::vector<std::uint64_t> scope(k);
    std::iota(scope.begin(), scope.end(), 0);
    std::vector<std::vector<std::uint64_t>> ys(k, std::vector<std::uint64_t>(k)), bs(k, std::vector<std::uint64_t>(k));
    std::vector<std::uint64_t> symbols(k, 0), index(2 * k);
    const std::vector<std::uint64_t> dims(k, sigma);
    const std::uint64_t table_size = checked_pow(sigma, k);

    std::vector<CspConstraint> constraints;
    do {
        for (std::size_t j = 0; j < k; ++j) decode(scope[j], qs, ys[j]);
        std::vector<double> table(table_size);
        std::fill(symbols.begin(), symbols.end(), 0);
        // Payoff table row-major over the symbols of scope[0..k-1], last fastest.
        for (std::uint64_t flat = 0; flat < table_size; ++flat) {
            std::uint64_t rem = flat;
            for (std::size_t j = k; j-- > 0;) symbols[j] = rem % sigma, rem /= sigma;
            for (std::size_t j = 0; j < k; ++j) decode(symbols[j], as, bs[j]);
            std::iota(perm.begin(), perm.end(), 0);
            double total = 0.0;
            do {
                // Player i is asked the i-th question of tuple perm[i] and answers
                // with the i-th component of that tuple's symbol.
                for (std::size_t i = 0; i < k; ++i) {
                    index[i] = ys[perm[i]][i];
                    index[k + i] = bs[perm[i]][i];
                }
                total += game.payoff(index);
            } while (std::next_permutation(perm.begin(), perm.end()));
            table[flat] = total / static_cast<double>(perms);
        }
        constraints.push_back(CspConstraint{scope, 1.0, VerificationOracle::dense(dims, std::move(table))});
    } while (next_combination(scope, tuples));
    return DenseCsp(tuples, sigma, k, std::move(constraints));
}

}  // namespace fgame

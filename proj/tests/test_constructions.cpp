#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fgame/combinatorics.hpp"
#include "fgame/constructions.hpp"
#include "fgame/error.hpp"
#include "fgame/strategy.hpp"
#include "support.hpp"

using namespace fgame;
using namespace fgame::testing;

namespace {

const char* kAllSigns =
    "p cnf 3 8\n1 2 3 0\n-1 2 3 0\n1 -2 3 0\n1 2 -3 0\n-1 -2 3 0\n-1 2 -3 0\n1 -2 -3 0\n-1 -2 -3 0\n";

// Every 3-CNF over at most 4 variables with at most `max_clauses` clauses
// drawn from a small seeded pool, keeping only the satisfiable ones.
std::vector<CnfFormula> satisfiable_formulas() {
    std::vector<CnfFormula> out;
    for (std::uint64_t seed = 1; out.size() < 25 && seed < 500; ++seed) {
        Rng rng(seed);
        const std::uint64_t n = 3 + rng.below(2);
        const std::uint64_t m = 1 + rng.below(6);
        std::vector<CnfFormula::Clause> clauses;
        std::vector<std::uint64_t> seen(n, 0);
        for (std::uint64_t i = 0; i < m; ++i) {
            const auto vars = rng.subset(n, 3);
            CnfFormula::Clause c{};
            for (int j = 0; j < 3; ++j) {
                c[j] = static_cast<std::int64_t>(vars[j] + 1) * (rng.below(2) ? 1 : -1);
                ++seen[vars[j]];
            }
            clauses.push_back(c);
        }
        if (std::count(seen.begin(), seen.end(), 0) > 0) continue;
        CnfFormula f(n, clauses);
        if (sat_value_cnf(f).value == 1.0) out.push_back(f);
    }
    return out;
}

// Whether some profile of the base game wins every pair in its support.
bool has_perfect_profile(const TwoProverGame& g) {
    std::vector<std::uint64_t> a(g.x_count(), 0);
    do {
        std::vector<std::uint64_t> b(g.y_count(), 0);
        do {
            bool ok = true;
            for (std::uint64_t x = 0; x < g.x_count() && ok; ++x)
                for (std::uint64_t y = 0; y < g.y_count() && ok; ++y)
                    if (g.weight(x, y) > 0 && g.payoff(x, y, a[x], b[y]) != 1.0) ok = false;
            if (ok) return true;
        } while (next_tuple(b, g.b_count()));
    } while (next_tuple(a, g.a_count()));
    return false;
}

TwoProverGame random_support_game(std::uint64_t seed, GameShape shape) {
    Rng rng(seed);
    UniformOverSupport support;
    for (std::uint64_t x = 0; x < shape.x_count; ++x)
        for (std::uint64_t y = 0; y < shape.y_count; ++y)
            if (rng.below(3) != 0) support.support.emplace_back(x, y);
    if (support.support.empty()) support.support.emplace_back(0, 0);
    const std::vector<std::uint64_t> dims{shape.x_count, shape.y_count, shape.a_count, shape.b_count};
    return TwoProverGame(shape, support,
                         VerificationOracle::dense(dims, random_table(rng, checked_product(dims), true)));
}

}  // namespace

TEST_CASE("subset ranking round-trips in colex order") {
    for (std::uint64_t n = 1; n <= 7; ++n)
        for (std::uint64_t k = 0; k <= n; ++k) {
            const SubsetIndex index(n, k);
            CHECK(index.count() == binomial(n, k));
            std::vector<std::uint64_t> s(k);
            std::iota(s.begin(), s.end(), 0);
            std::uint64_t r = 0;
            do {
                CHECK(index.rank(s) == r);
                CHECK(index.unrank(r) == s);
                ++r;
            } while (next_combination(s, n));
            CHECK(r == index.count());
        }
    CHECK_THROWS_AS(SubsetIndex(3, 4), InvalidArgument);
}

TEST_CASE("counterexample game") {
    CHECK(exact_value(counterexample_game(2)).value == 0.5);
    CHECK(exact_value(counterexample_game(4)).value == 0.75);
    CHECK_THROWS_AS(counterexample_game(1), InvalidArgument);
}

TEST_CASE("clause/variable game") {
    const auto all = parse_dimacs(kAllSigns);
    const auto g = clause_variable_game(all);
    CHECK(g.x_count() == 8);
    CHECK(g.y_count() == 3);
    CHECK(g.a_count() == 8);
    CHECK(g.b_count() == 2);
    const auto& support = std::get<UniformOverSupport>(g.distribution()).support;
    CHECK(support.size() == 24);
    const double omega = exact_value(g).value;
    CHECK(omega < 1.0);
    CHECK(omega <= 1.0 - (1.0 / 8) / 3 + 1e-12);

    for (const auto& f : satisfiable_formulas()) CHECK(exact_value(clause_variable_game(f)).value == 1.0);

    CHECK_THROWS_AS(clause_variable_game(parse_dimacs("p cnf 4 1\n1 2 3 0\n")), InvalidArgument);
}

TEST_CASE("clause/variable payoff semantics") {
    const auto f = parse_dimacs("p cnf 3 1\n1 -2 3 0\n");
    const auto g = clause_variable_game(f);
    // Bits (x1, x2, x3) = (0, 1, 0) violate the clause.
    CHECK(g.payoff(0, 0, 0b010, 0) == 0.0);
    // (1, 1, 0) satisfies it; x2 is bit 1.
    CHECK(g.payoff(0, 1, 0b011, 1) == 1.0);
    CHECK(g.payoff(0, 1, 0b011, 0) == 0.0);
}

TEST_CASE("birthday repetition") {
    SUBCASE("footnote counterexample") {
        for (std::uint64_t n = 2; n <= 4; ++n)
            for (std::uint64_t k = 1; k < n; ++k)
                for (std::uint64_t l = 1; l <= 2; ++l) {
                    const auto bd = birthday_repetition(counterexample_game(n), k, l);
                    const double expected = 1.0 - static_cast<double>(k) / static_cast<double>(n);
                    CHECK(std::abs(exact_value(bd.game()).value - expected) <= 1e-12);
                }
    }
    SUBCASE("empty overlap with the support accepts everything") {
        const std::vector<std::uint64_t> dims{2, 2, 2, 2};
        const TwoProverGame base({2, 2, 2, 2}, UniformOverSupport{{{0, 0}}},
                                 VerificationOracle::dense(dims, std::vector<double>(16, 0.0)));
        const auto bd = birthday_repetition(base, 1, 1);
        for (std::uint64_t a = 0; a < 2; ++a)
            for (std::uint64_t b = 0; b < 2; ++b) {
                CHECK(bd.game().payoff(1, 1, a, b) == 1.0);
                CHECK(bd.game().payoff(0, 0, a, b) == 0.0);
            }
    }
    SUBCASE("k = l = 1 is the promise-free base game") {
        const auto base = random_support_game(3, {3, 3, 2, 2});
        const auto bd = birthday_repetition(base, 1, 1);
        for (std::uint64_t x = 0; x < 3; ++x)
            for (std::uint64_t y = 0; y < 3; ++y)
                for (std::uint64_t a = 0; a < 2; ++a)
                    for (std::uint64_t b = 0; b < 2; ++b) {
                        const double expected = base.weight(x, y) > 0 ? base.payoff(x, y, a, b) : 1.0;
                        CHECK(bd.game().payoff(x, y, a, b) == expected);
                    }
    }
    SUBCASE("answer encoding follows the sorted subset") {
        const auto f = parse_dimacs(kAllSigns);
        const auto bd = birthday_repetition(clause_variable_game(f), 2, 2);
        // S = {0, 1} (rank 0), T = {0, 2} (rank 1). Clause 0 = (x1 x2 x3), clause 1 = (-x1 x2 x3).
        // Both clauses answered x1 = x2 = x3 = 1; variable answers x1 = 1, x3 = 1.
        const std::uint64_t alpha = 0b111 + 8 * 0b111, beta = 1 + 2 * 1;
        CHECK(bd.game().payoff(0, 1, alpha, beta) == 1.0);
        CHECK(bd.game().payoff(0, 1, alpha, 1) == 0.0);
        CHECK(bd.game().payoff(0, 1, 0b111 + 8 * 0b110, beta) == 0.0);
    }
    SUBCASE("full subsets decide perfect satisfiability") {
        for (std::uint64_t seed = 1; seed <= 12; ++seed) {
            const auto base = random_support_game(seed, {2, 3, 2, 2});
            const auto bd = birthday_repetition(base, 2, 3);
            const double v = exact_value(bd.game()).value;
            CHECK((v == 0.0 || v == 1.0));
            CHECK((v == 1.0) == has_perfect_profile(base));
        }
    }
    SUBCASE("perfect completeness on satisfiable formulas") {
        for (const auto& f : satisfiable_formulas()) {
            const auto g = clause_variable_game(f);
            for (std::uint64_t k = 1; k <= std::min<std::uint64_t>(2, f.m()); ++k)
                for (std::uint64_t l = 1; l <= 2; ++l) CHECK(exact_value(birthday_repetition(g, k, l).game()).value == 1.0);
        }
    }
    SUBCASE("materialized table matches the rule") {
        const auto bd = birthday_repetition(clause_variable_game(parse_dimacs(kAllSigns)), 2, 1);
        const auto dense = bd.materialize();
        CHECK(dense.verifier().is_dense());
        CHECK(exact_value(dense).value == exact_value(bd.game()).value);
        CHECK_THROWS_AS(bd.materialize(100), BudgetExceeded);
    }
    SUBCASE("validation") {
        const auto g = counterexample_game(3);
        CHECK_THROWS_AS(birthday_repetition(g, 0, 1), InvalidArgument);
        CHECK_THROWS_AS(birthday_repetition(g, 4, 1), InvalidArgument);
        CHECK_THROWS_AS(birthday_repetition(random_free_game(1, {2, 2, 2, 2}), 1, 1), InvalidArgument);
    }
}

TEST_CASE("the guessing bound holds below k = n and fails at k = n") {
    for (std::uint64_t n = 2; n <= 4; ++n) {
        for (std::uint64_t k = 1; k < n; ++k) {
            const double bound = std::max(std::pow(n, -static_cast<double>(k)), std::pow(n, -1.0));
            CHECK(exact_value(birthday_repetition(counterexample_game(n), k, 1).game()).value >= bound - 1e-12);
        }
        CHECK(exact_value(birthday_repetition(counterexample_game(n), n, 1).game()).value == 0.0);
    }
}

TEST_CASE("parallel repetition") {
    const auto g = random_free_game(7, {2, 2, 2, 2});
    SUBCASE("one coordinate") {
        const auto g1 = parallel_repetition(g, 1);
        CHECK(g1.verifier().table() == g.verifier().table());
        CHECK(exact_value(g1).value == exact_value(g).value);
    }
    SUBCASE("constant one") {
        CHECK(exact_value(parallel_repetition(constant_game({2, 2, 2, 2}, 1.0), 3)).value == 1.0);
    }
    SUBCASE("product payoff and little-endian coordinates") {
        const auto g2 = parallel_repetition(g, 2);
        CHECK(g2.x_count() == 4);
        // x = (1, 0), y = (0, 1), a = (1, 1), b = (0, 1)
        CHECK(g2.payoff(1, 2, 3, 2) == g.payoff(1, 0, 1, 0) * g.payoff(0, 1, 1, 1));
    }
    SUBCASE("sandwich") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto base = random_free_game(seed, {2, 2, 2, 2});
            const double w = exact_value(base).value;
            const double w2 = exact_value(parallel_repetition(base, 2)).value;
            CHECK(w2 <= w + 1e-9);
            CHECK(w2 >= w * w - 1e-9);
            CHECK(std::abs(w2 - brute_value(parallel_repetition(base, 2))) <= 1e-12);
        }
    }
    SUBCASE("non-free distributions") {
        const auto base = random_support_game(5, {2, 2, 2, 2});
        const auto g2 = parallel_repetition(base, 2);
        CHECK(std::abs(exact_value(g2).value - brute_value(g2)) <= 1e-12);
        CHECK(exact_value(g2).value <= exact_value(base).value + 1e-12);
    }
    SUBCASE("budget") {
        CHECK_THROWS_AS(parallel_repetition(g, 8), BudgetExceeded);
        CHECK_THROWS_AS(parallel_repetition(g, 0), InvalidArgument);
    }
}

TEST_CASE("threshold repetition") {
    const auto base = random_free_game(11, {2, 2, 2, 2}, true);
    CHECK(threshold_count(3, 0.5) == 2);
    CHECK(threshold_count(4, 0.5) == 2);
    CHECK(threshold_count(3, 1.0 / 3) == 1);
    CHECK(threshold_count(5, 0.0) == 0);
    CHECK(threshold_repetition(base, 3, 1.0).verifier().table() == parallel_repetition(base, 3).verifier().table());
    CHECK(exact_value(threshold_repetition(base, 2, 0.0)).value == 1.0);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto b = random_free_game(seed, {2, 2, 2, 2}, true);
        const auto t2 = threshold_repetition(b, 2, 0.5);
        CHECK(std::abs(exact_value(t2).value - brute_value(t2)) <= 1e-12);
    }
    CHECK_THROWS_AS(threshold_repetition(random_free_game(1, {2, 2, 2, 2}), 2, 0.5), InvalidArgument);
    CHECK_THROWS_AS(threshold_repetition(base, 2, 1.5), InvalidArgument);
}

TEST_CASE("free_to_2csp") {
    SUBCASE("sizes") {
        const auto square = free_to_2csp(random_free_game(1, {3, 3, 2, 2}));
        CHECK(square.n_vars() == 6);
        CHECK(square.constraints().size() == 9);
        const auto skew = free_to_2csp(random_free_game(1, {2, 3, 2, 2}));
        CHECK(skew.n_vars() == 12);
        CHECK(skew.alphabet() == 4);
        // a-variable 0 * 3 + 2 copies question 0; b-variable 6 + 1 * 2 + 1 copies question 1.
        CHECK(skew.constraints()[2 * 6 + 3].scope == std::vector<std::uint64_t>{2, 9});
    }
    SUBCASE("value is preserved on the grid") {
        for (std::uint64_t x = 1; x <= 3; ++x)
            for (std::uint64_t y = 1; y <= 3; ++y)
                for (std::uint64_t a = 1; a <= 3; ++a)
                    for (std::uint64_t b = 1; b <= 3; ++b) {
                        const auto g = random_free_game(x * 1000 + y * 100 + a * 10 + b, {x, y, a, b});
                        CHECK(std::abs(csp_sat_value(free_to_2csp(g)).value - exact_value(g).value) <= 1e-9);
                    }
    }
}

TEST_CASE("kfree_to_kcsp") {
    SUBCASE("sizes and validation") {
        const auto g = random_kfree_game(1, {2, 2}, {2, 2});
        const auto csp = kfree_to_kcsp(g);
        CHECK(csp.n_vars() == 4);
        CHECK(csp.alphabet() == 4);
        CHECK(csp.constraints().size() == binomial(4, 2));
        const auto g3 = random_kfree_game(2, {2, 1, 2}, {1, 2, 1});
        CHECK(kfree_to_kcsp(g3).constraints().size() == binomial(4, 3));
        CHECK_THROWS_AS(kfree_to_kcsp(random_kfree_game(3, {3}, {2})), InvalidArgument);
    }
    SUBCASE("the encoding never loses value") {
        for (std::uint64_t seed = 1; seed <= 60; ++seed) {
            const auto g = random_kfree_game(seed, {2, 1 + seed % 3}, {2, 1 + seed % 2}, seed % 2 == 0);
            CHECK(csp_sat_value(kfree_to_kcsp(g)).value >= exact_value_k(g).value - 1e-9);
        }
    }
    SUBCASE("product assignments reproduce strategy values") {
        const auto g = random_kfree_game(5, {2, 3}, {2, 2});
        const auto csp = kfree_to_kcsp(g);
        const auto w = exact_value_k(g);
        std::vector<std::uint64_t> assignment(6);
        for (std::uint64_t t = 0; t < 6; ++t) {
            const std::uint64_t y1 = t % 2, y2 = t / 2;
            assignment[t] = w.witness->players[0][y1] + 2 * w.witness->players[1][y2];
        }
        // Sets of distinct tuples: the value of a product assignment differs from
        // the game value only through pairs sharing a coordinate.
        CHECK(csp.evaluate(assignment) >= 0.0);
        CHECK(csp.evaluate(assignment) <= 1.0);
    }
    SUBCASE("the encoding can exceed the game value") {
        std::uint64_t above = 0;
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            const auto g = random_kfree_game(seed, {2, 2}, {2, 2});
            above += csp_sat_value(kfree_to_kcsp(g)).value > exact_value_k(g).value + 1e-9;
        }
        CHECK(above > 0);
    }
}

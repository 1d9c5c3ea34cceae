#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "fgame/combinatorics.hpp"
#include "fgame/constructions.hpp"
#include "fgame/corpus.hpp"
#include "fgame/error.hpp"
#include "fgame/experiments.hpp"
#include "fgame/strategy.hpp"
#include "support.hpp"

using namespace fgame;
using namespace fgame::testing;

namespace {

using Mask = std::uint64_t;

Mask mask_of(const std::vector<std::uint64_t>& items) {
    Mask m = 0;
    for (auto i : items) m |= Mask{1} << i;
    return m;
}

void extend(std::uint64_t universe, std::uint64_t k, std::uint64_t from, Mask m, std::vector<Mask>& out) {
    if (k == 0) {
        out.push_back(m);
        return;
    }
    for (std::uint64_t i = from; i + k <= universe; ++i) extend(universe, k - 1, i + 1, m | Mask{1} << i, out);
}

std::vector<Mask> masks_of_size(std::uint64_t universe, std::uint64_t k) {
    std::vector<Mask> out;
    extend(universe, k, 0, 0, out);
    return out;
}

std::vector<Mask> neighbourhoods(const BipartiteGraph& g) {
    std::vector<Mask> adj(g.left, 0);
    for (const auto& [u, v] : g.edges) adj[u] |= Mask{1} << v;
    return adj;
}

std::uint64_t edges_inside(const std::vector<Mask>& adj, Mask is, Mask js) {
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < adj.size(); ++i) {
        if (is >> i & 1) count += static_cast<std::uint64_t>(__builtin_popcountll(adj[i] & js));
    }
    return count;
}

// D(I, J) proportional to the incidences inside I x J, keyed by bitmasks.
std::map<std::pair<Mask, Mask>, Rational> proportional_oracle(const CnfFormula& f, std::uint64_t k, std::uint64_t l) {
    const auto adj = neighbourhoods(incidence_graph(f));
    std::map<std::pair<Mask, Mask>, Rational> d;
    std::uint64_t total = 0;
    for (auto is : masks_of_size(f.m(), k)) {
        for (auto js : masks_of_size(f.n_vars(), l)) {
            const auto s = edges_inside(adj, is, js);
            d[{is, js}] = Rational(static_cast<std::int64_t>(s));
            total += s;
        }
    }
    for (auto& [key, v] : d) v /= static_cast<std::int64_t>(total);
    return d;
}

Rational collision_oracle(const BipartiteGraph& g, std::uint64_t k, std::uint64_t l) {
    const auto adj = neighbourhoods(g);
    std::int64_t hit = 0, total = 0;
    for (auto is : masks_of_size(g.left, k)) {
        for (auto js : masks_of_size(g.right, l)) {
            ++total;
            if (edges_inside(adj, is, js) > 0) ++hit;
        }
    }
    return Rational(hit, total);
}

// Enumerates the second prover's strategies; the first best-responds per question.
double second_side_oracle(const TwoProverGame& g) {
    std::vector<std::uint64_t> b(g.y_count(), 0);
    double best = 0.0;
    for (;;) {
        double total = 0.0;
        for (std::uint64_t x = 0; x < g.x_count(); ++x) {
            double row = 0.0;
            for (std::uint64_t a = 0; a < g.a_count(); ++a) {
                double v = 0.0;
                for (std::uint64_t y = 0; y < g.y_count(); ++y) {
                    const double w = g.weight(x, y);
                    if (w > 0.0) v += w * g.verifier()({x, y, a, b[y]});
                }
                row = std::max(row, v);
            }
            total += row;
        }
        best = std::max(best, total);
        std::uint64_t i = 0;
        for (; i < b.size(); ++i) {
            if (++b[i] < g.b_count()) break;
            b[i] = 0;
        }
        if (i == b.size()) return best;
    }
}

// Value of the free game restricted to S x T, by the same enumeration.
double restricted_oracle(const FreeGame& g, Mask s, Mask t) {
    std::vector<std::uint64_t> xs, ys;
    for (std::uint64_t x = 0; x < g.x_count(); ++x)
        if (s >> x & 1) xs.push_back(x);
    for (std::uint64_t y = 0; y < g.y_count(); ++y)
        if (t >> y & 1) ys.push_back(y);
    std::vector<double> table;
    for (auto x : xs)
        for (auto y : ys)
            for (std::uint64_t a = 0; a < g.a_count(); ++a)
                for (std::uint64_t b = 0; b < g.b_count(); ++b) table.push_back(g.payoff(x, y, a, b));
    return second_side_oracle(make_free_game({xs.size(), ys.size(), g.a_count(), g.b_count()}, std::move(table)));
}

// Two-coordinate repetition that needs `need` wins, built from the base payoffs.
FreeGame two_fold_threshold(const FreeGame& base, std::uint64_t need) {
    const std::uint64_t x = base.x_count(), y = base.y_count(), a = base.a_count(), b = base.b_count();
    std::vector<double> table;
    for (std::uint64_t xx = 0; xx < x * x; ++xx)
        for (std::uint64_t yy = 0; yy < y * y; ++yy)
            for (std::uint64_t aa = 0; aa < a * a; ++aa)
                for (std::uint64_t bb = 0; bb < b * b; ++bb) {
                    const double w0 = base.payoff(xx % x, yy % y, aa % a, bb % b);
                    const double w1 = base.payoff(xx / x, yy / y, aa / a, bb / b);
                    table.push_back(w0 + w1 >= static_cast<double>(need) ? 1.0 : 0.0);
                }
    return make_free_game({x * x, y * y, a * a, b * b}, std::move(table));
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("closed-form distribution is proportional to incidences") {
    for (const auto& [name, f] : formula_corpus()) {
        if (!f.balance_degree()) continue;
        for (std::uint64_t k = 1; k <= std::min<std::uint64_t>(2, f.m()); ++k) {
            for (std::uint64_t l = 1; l <= 2; ++l) {
                INFO(name << " k=" << k << " l=" << l);
                const auto pair = closed_form_distribution(f, k, l);
                const auto oracle = proportional_oracle(f, k, l);
                REQUIRE(pair.d_prob.size() == oracle.size());
                const SubsetIndex left(f.m(), k), right(f.n_vars(), l);
                Rational sum_d, sum_u, tv;
                for (std::size_t e = 0; e < pair.d_prob.size(); ++e) {
                    const auto [ri, rj] = pair.support[e];
                    const auto key = std::make_pair(mask_of(left.unrank(ri)), mask_of(right.unrank(rj)));
                    CHECK(pair.d_prob[e] == oracle.at(key));
                    sum_d += pair.d_prob[e];
                    sum_u += pair.u_prob[e];
                    const Rational diff = pair.d_prob[e] - pair.u_prob[e];
                    tv += diff < 0 ? Rational(-diff) : diff;
                }
                CHECK(sum_d == 1);
                CHECK(sum_u == 1);
                const auto vd = variation_distance(f, k, l);
                CHECK(vd.process_matches);
                CHECK(vd.distance == tv / 2);
            }
        }
    }
}

TEST_CASE("process enumeration matches the closed form") {
    const auto& f = corpus_formula("all_signs");
    const auto pair = closed_form_distribution(f, 2, 2);
    const auto process = process_distribution(f, 2, 2);
    REQUIRE(process.size() == pair.d_prob.size());
    for (std::size_t e = 0; e < process.size(); ++e) CHECK(process[e] == pair.d_prob[e]);
    CHECK(process_distribution(f, 2, 2, {kDefaultBudget, 4}) == process);
}

TEST_CASE("process distribution of an unbalanced formula") {
    const auto& f = corpus_formula("chain_4");
    REQUIRE_FALSE(f.balance_degree());
    CHECK_THROWS_AS(closed_form_distribution(f, 1, 1), InvalidArgument);
    const auto process = process_distribution(f, 2, 1);
    const auto oracle = proportional_oracle(f, 2, 1);
    const SubsetIndex left(f.m(), 2), right(f.n_vars(), 1);
    REQUIRE(process.size() == oracle.size());
    for (std::size_t e = 0; e < process.size(); ++e) {
        const auto key = std::make_pair(mask_of(left.unrank(e / right.count())), mask_of(right.unrank(e % right.count())));
        CHECK(process[e] == oracle.at(key));
    }
}

TEST_CASE("variation distance vanishes on the full subsets") {
    for (const auto& [name, f] : formula_corpus()) {
        if (!f.balance_degree() || f.m() > 12) continue;
        INFO(name);
        const auto vd = variation_distance(f, f.m(), f.n_vars());
        CHECK(vd.distance == 0);
        CHECK(vd.pair.d_prob.size() == 1);
    }
}

TEST_CASE("distribution sizes are validated") {
    const auto& f = corpus_formula("all_signs");
    CHECK_THROWS_AS(closed_form_distribution(f, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(closed_form_distribution(f, 1, 0), InvalidArgument);
    CHECK_THROWS_AS(closed_form_distribution(f, 9, 1), InvalidArgument);
    CHECK_THROWS_AS(process_distribution(f, 1, 4), InvalidArgument);
    CHECK_THROWS_AS(closed_form_distribution(f, 4, 3, {10.0, 1}), BudgetExceeded);
}

TEST_CASE("collision probability against subset enumeration") {
    for (const auto& [name, g] : graph_corpus()) {
        if (g.left > 64 || g.right > 64) continue;
        for (std::uint64_t k = 1; k <= 2; ++k) {
            for (std::uint64_t l = 1; l <= 2; ++l) {
                INFO(name << " k=" << k << " l=" << l);
                const auto rec = collision_probability(g, k, l);
                CHECK(rec.probability == collision_oracle(g, k, l));
                CHECK(rec.holds);
            }
        }
    }
}

TEST_CASE("collision probability edge cases") {
    const BipartiteGraph k22{2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
    CHECK(collision_probability(k22, 1, 1).probability == 1);
    const auto& matching = graph_corpus()[3].graph;
    REQUIRE(regular_degrees(matching).left == 1);
    CHECK(collision_probability(matching, matching.left, matching.right).probability == 1);
    CHECK(collision_probability(matching, 1, 1).probability == Rational(1, static_cast<std::int64_t>(matching.left)));
    CHECK_THROWS_AS(collision_probability(k22, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(collision_probability(k22, 1, 0), InvalidArgument);
    const BipartiteGraph irregular{2, 2, {{0, 0}, {0, 1}, {1, 0}}};
    CHECK_THROWS_AS(collision_probability(irregular, 1, 1), InvalidArgument);
    CHECK_THROWS_AS(regular_degrees(BipartiteGraph{2, 2, {{0, 0}, {0, 0}, {1, 1}}}), InvalidArgument);
}

TEST_CASE("collision on the all-signs incidence graph") {
    const auto g = incidence_graph(corpus_formula("all_signs"));
    const auto deg = regular_degrees(g);
    CHECK(deg.left == 3);
    CHECK(deg.right == 8);
    const auto rec = collision_probability(g, 2, 2);
    CHECK(rec.probability == 1);
    CHECK(rec.probability >= Rational(23, 24));
}

TEST_CASE("birthday gap on satisfiable formulas") {
    for (const std::string name : {"single", "opposite_pair", "triples_4"}) {
        const auto& f = corpus_formula(name);
        INFO(name);
        const auto rec = birthday_gap(f, 1, 1);
        CHECK(rec.base_value == 1);
        CHECK(rec.repeated_value == 1);
        CHECK(rec.gap == 0);
        CHECK(rec.holds);
    }
}

TEST_CASE("birthday gap on the all-signs formula") {
    const auto& f = corpus_formula("all_signs");
    const auto base = clause_variable_game(f);
    CHECK(as_fraction(second_side_oracle(base), 24) == Rational(23, 24));
    const auto bd = birthday_repetition(base, 2, 2);
    const Rational repeated = as_fraction(second_side_oracle(bd.game()), 28 * 3);
    CHECK(repeated == Rational(5, 6));

    const auto rec = birthday_gap(f, 2, 2);
    CHECK(rec.base_value == Rational(23, 24));
    CHECK(rec.repeated_value == repeated);
    CHECK(rec.gap == repeated - Rational(23, 24));
    CHECK(rec.distance == 0);
    CHECK(rec.holds);
    CHECK(rec.small_subset_ratio == doctest::Approx(1.0 / 6.0 * 3.0 / 4.0));
}

TEST_CASE("as_fraction") {
    CHECK(as_fraction(6.0 / 9.0, 9) == Rational(2, 3));
    CHECK(as_fraction(1.0, 7) == 1);
    CHECK_THROWS_AS(as_fraction(0.3, 4), Error);
    CHECK(to_string(Rational(6, 8)) == "3/4");
    CHECK(to_string(Rational(4, 2)) == "2");
}

TEST_CASE("subsample gap curve against restricted values") {
    const auto game = seeded_free_game(kSubsampleCurveSeed, {6, 6, 2, 2}, 4);
    const double omega = second_side_oracle(game);
    const std::vector<std::uint64_t> ks{1, 2, 3, 6};
    const auto rows = subsample_gap_curve(game, ks);
    REQUIRE(rows.size() == ks.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto k = ks[r];
        INFO("kappa=" << k);
        double total = 0.0;
        std::uint64_t count = 0;
        const auto masks = masks_of_size(6, k);
        for (auto s : masks)
            for (auto t : masks) {
                total += restricted_oracle(game, s, t);
                ++count;
            }
        CHECK(rows[r].kappa == k);
        CHECK(rows[r].omega == doctest::Approx(omega).epsilon(1e-12));
        CHECK(rows[r].mean == doctest::Approx(total / static_cast<double>(count)).epsilon(1e-12));
        CHECK(rows[r].upper_gap == doctest::Approx(rows[r].mean - omega).epsilon(1e-12));
        CHECK(rows[r].lower_holds);
        CHECK(rows[r].implied_epsilon == doctest::Approx(std::cbrt(std::log(4.0) / static_cast<double>(k))));
    }
    CHECK(rows.back().upper_gap == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("subsample gap curve on constant and k-player games") {
    const auto flat = constant_game({4, 4, 2, 3}, 0.5);
    const std::vector<std::uint64_t> ks{1, 2, 4};
    for (const auto& r : subsample_gap_curve(flat, ks)) {
        CHECK(r.mean == doctest::Approx(0.5));
        CHECK(r.upper_gap == doctest::Approx(0.0).epsilon(1e-12));
    }
    const auto kg = seeded_kfree_game(5, {3, 3, 3}, {2, 2, 2});
    const auto rows = subsample_gap_curve(kg, ks);
    for (const auto& r : rows) CHECK(r.lower_holds);
    CHECK(rows.back().upper_gap == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rows.back().omega == doctest::Approx(exact_value_k(kg).value));
}

TEST_CASE("amplification curves") {
    const std::vector<std::uint64_t> ns{1, 2, 3};
    const auto one = amplification_curve(constant_game({2, 2, 2, 2}, 1.0), ns, 0.5);
    CHECK(one.expected == Direction::non_decreasing);
    for (const auto& [n, v] : one.values) CHECK(v == 1.0);
    CHECK(one.holds);
    const auto zero = amplification_curve(constant_game({2, 2, 2, 2}, 0.0), ns, 0.5);
    CHECK(zero.expected == Direction::non_increasing);
    for (const auto& [n, v] : zero.values) CHECK(v == 0.0);
    CHECK(zero.holds);

    // Seed 1 has value 3/4 above the threshold, yet three coordinates do worse than two.
    const auto& base = game_corpus()[0];
    REQUIRE(base.seed == 1);
    CHECK(brute_value(base.game) == 0.75);
    const double two = brute_value(two_fold_threshold(base.game, 1));
    CHECK(two == 0.9375);
    const auto curve = amplification_curve(base.game, ns, 0.5);
    REQUIRE(curve.values.size() == 3);
    CHECK(curve.values[0].second == 0.75);
    CHECK(curve.values[1].second == two);
    CHECK(curve.values[2].second == 0.84375);
    CHECK_FALSE(curve.holds);
    CHECK(amplification_csv(curve) == "n,value\n1,0.75\n2,0.9375\n3,0.84375\n");
}

TEST_CASE("csv headers") {
    const auto& f = corpus_formula("all_signs");
    CHECK(first_line(distribution_csv(closed_form_distribution(f, 1, 1))) == "i_rank,j_rank,s,u_prob,d_prob");
    const std::vector<CollisionRecord> c{collision_probability(graph_corpus()[0].graph, 1, 1)};
    CHECK(first_line(collision_csv(c)) == "m,n,c,d,k,l,probability,bound,bound_positive,holds");
    const std::vector<BirthdayGapRecord> b{birthday_gap(f, 1, 1)};
    CHECK(first_line(birthday_gap_csv(b)) == "k,l,base_value,repeated_value,gap,distance,holds,small_subset_ratio");
    const std::vector<std::uint64_t> ks{1};
    CHECK(first_line(subsample_gap_csv(subsample_gap_curve(constant_game({2, 2, 2, 2}, 1.0), ks))) ==
          "kappa,mean,omega,upper_gap,implied_epsilon,lower_holds");
}

TEST_CASE("edge list round trip") {
    for (const auto& [name, g] : graph_corpus()) {
        const auto back = parse_edge_list(to_edge_list(g));
        CHECK(back.left == g.left);
        CHECK(back.right == g.right);
        CHECK(back.edges == g.edges);
    }
    CHECK(parse_edge_list("# comment\n2 1\n\n0 0\n1 0\n").edges.size() == 2);
    CHECK_THROWS_AS(parse_edge_list(""), ParseError);
    CHECK_THROWS_AS(parse_edge_list("2 2\n0 2\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("2 2\n0 1 1\n"), ParseError);
}

TEST_CASE("pinned corpus files match the built-in corpus") {
    const std::filesystem::path root = FGAME_DATA_DIR;
    for (const auto& [name, f] : formula_corpus()) {
        INFO(name);
        const auto text = read_file(root / "corpus" / "formulas" / (name + ".cnf"));
        CHECK(text == to_dimacs(f));
        CHECK(parse_dimacs(text).clauses() == f.clauses());
    }
    for (const auto& [name, g] : graph_corpus()) {
        INFO(name);
        CHECK(read_file(root / "corpus" / "graphs" / (name + ".txt")) == to_edge_list(g));
    }
}

TEST_CASE("experiment report") {
    const auto report = run_report();
    std::vector<std::string> failed;
    for (const auto& a : report.assertions)
        if (!a.passed) failed.push_back(a.experiment + " / " + a.instance);
    REQUIRE(failed.size() == 1);
    CHECK(failed[0] == "amplification direction / seed 1 (omega 3/4)");
    CHECK_FALSE(report.all_passed());
    CHECK(report.markdown.find("of " + std::to_string(report.assertions.size()) + " assertions passed") !=
          std::string::npos);
    CHECK(run_report({kDefaultBudget, 4}).markdown == report.markdown);
}

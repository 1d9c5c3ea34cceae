#include "fgame/corpus.hpp"

#include "fgame/combinatorics.hpp"
#include "fgame/error.hpp"
#include "fgame/rng.hpp"

namespace fgame {

namespace {

std::vector<double> seeded_table(std::uint64_t seed, std::uint64_t size, std::uint64_t levels) {
    if (levels == 0) throw InvalidArgument("payoff levels must be positive");
    Rng rng(seed);
    std::vector<double> table(size);
    for (auto& v : table) v = static_cast<double>(rng.below(levels + 1)) / static_cast<double>(levels);
    return table;
}

using Clauses = std::vector<CnfFormula::Clause>;

// The eight sign patterns on variables (a, b, c).
Clauses all_signs(std::int64_t a, std::int64_t b, std::int64_t c) {
    Clauses out;
    for (int mask = 0; mask < 8; ++mask) {
        out.push_back({mask & 1 ? -a : a, mask & 2 ? -b : b, mask & 4 ? -c : c});
    }
    return out;
}

Clauses concat(std::initializer_list<Clauses> parts) {
    Clauses out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

BipartiteGraph circulant(std::uint64_t n, std::initializer_list<std::uint64_t> offsets) {
    BipartiteGraph g{n, n, {}};
    for (std::uint64_t i = 0; i < n; ++i) {
        for (auto o : offsets) g.edges.emplace_back(i, (i + o) % n);
    }
    return g;
}

BipartiteGraph complete(std::uint64_t m, std::uint64_t n) {
    BipartiteGraph g{m, n, {}};
    for (std::uint64_t i = 0; i < m; ++i)
        for (std::uint64_t j = 0; j < n; ++j) g.edges.emplace_back(i, j);
    return g;
}

}  // namespace

FreeGame seeded_free_game(std::uint64_t seed, GameShape shape, std::uint64_t levels) {
    const std::uint64_t size =
        checked_product(std::array{shape.x_count, shape.y_count, shape.a_count, shape.b_count});
    return make_free_game(shape, seeded_table(seed, size, levels));
}

KFreeGame seeded_kfree_game(std::uint64_t seed, std::vector<std::uint64_t> question_counts,
                            std::vector<std::uint64_t> answer_counts, std::uint64_t levels) {
    std::uint64_t size = checked_product(question_counts);
    size = checked_product(std::array{size, checked_product(answer_counts)});
    return make_kfree_game(std::move(question_counts), std::move(answer_counts), seeded_table(seed, size, levels));
}

const std::vector<NamedFormula>& formula_corpus() {
    static const std::vector<NamedFormula> corpus = [] {
        Clauses seven = all_signs(1, 2, 3);
        seven.pop_back();
        return std::vector<NamedFormula>{
            {"all_signs", CnfFormula(3, all_signs(1, 2, 3))},
            {"single", CnfFormula(3, {{1, 2, 3}})},
            {"opposite_pair", CnfFormula(3, {{1, 2, 3}, {-1, -2, -3}})},
            {"four_signs", CnfFormula(3, {{1, 2, 3}, {-1, 2, 3}, {1, -2, 3}, {1, 2, -3}})},
            {"seven_signs", CnfFormula(3, seven)},
            {"triples_4", CnfFormula(4, {{1, 2, 3}, {-1, 2, 4}, {1, -3, -4}, {-2, 3, 4}})},
            {"paired_triples_4", CnfFormula(4, {{1, 2, 3},
                                                {-1, -2, -3},
                                                {1, 2, 4},
                                                {-1, -2, -4},
                                                {1, 3, 4},
                                                {-1, -3, -4},
                                                {2, 3, 4},
                                                {-2, -3, -4}})},
            {"all_signs_4",
             CnfFormula(4, concat({all_signs(1, 2, 3), all_signs(1, 2, 4), all_signs(1, 3, 4), all_signs(2, 3, 4)}))},
            {"chain_4", CnfFormula(4, {{1, 2, 3}, {-2, 3, 4}})},
            {"mixed_4", CnfFormula(4, {{1, 2, 3}, {1, -2, 4}, {-1, 3, -4}, {2, 3, 4}, {-1, -2, -3}})},
            {"all_signs_plus_4", CnfFormula(4, concat({all_signs(1, 2, 3), {{1, 2, 4}}}))},
        };
    }();
    return corpus;
}

const CnfFormula& corpus_formula(const std::string& name) {
    for (const auto& f : formula_corpus()) {
        if (f.name == name) return f.formula;
    }
    throw InvalidArgument("no corpus formula named '" + name + "'");
}

const std::vector<NamedGraph>& graph_corpus() {
    static const std::vector<NamedGraph> corpus{
        {"complete_2_2", complete(2, 2)},
        {"complete_3_3", complete(3, 3)},
        {"complete_2_3", complete(2, 3)},
        {"matching_20", circulant(20, {0})},
        {"cycle_64", circulant(32, {0, 1})},
        {"circulant_3_24", circulant(24, {0, 1, 3})},
        {"incidence_all_signs", incidence_graph(corpus_formula("all_signs"))},
        {"incidence_triples_4", incidence_graph(corpus_formula("triples_4"))},
    };
    return corpus;
}

const std::vector<SeededGame>& game_corpus() {
    static const std::vector<SeededGame> corpus = [] {
        std::vector<SeededGame> out;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) out.push_back({seed, seeded_free_game(seed, {2, 2, 2, 2})});
        return out;
    }();
    return corpus;
}

}  // namespace fgame

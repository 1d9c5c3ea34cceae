#include "fgame/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "fgame/combinatorics.hpp"
#include "fgame/constructions.hpp"
#include "fgame/corpus.hpp"
#include "fgame/error.hpp"
#include "fgame/format.hpp"
#include "fgame/parallel.hpp"
#include "fgame/solvers.hpp"
#include "fgame/strategy.hpp"

namespace fgame {

std::string to_string(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational as_fraction(double value, std::uint64_t denominator) {
    const double scaled = value * static_cast<double>(denominator);
    const double count = std::round(scaled);
    if (std::abs(scaled - count) > 1e-6) {
        throw Error("value " + format_double(value) + " is not a multiple of 1/" + std::to_string(denominator));
    }
    return Rational(static_cast<std::int64_t>(count), static_cast<std::int64_t>(denominator));
}

BipartiteGraph parse_edge_list(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::optional<BipartiteGraph> g;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::uint64_t u = 0, v = 0;
        std::string extra;
        if (!(fields >> u >> v) || (fields >> extra)) {
            throw ParseError(line_no, "expected two integers");
        }
        if (!g) {
            g = BipartiteGraph{u, v, {}};
            continue;
        }
        if (u >= g->left || v >= g->right) {
            throw ParseError(line_no, "edge endpoint out of range");
        }
        g->edges.emplace_back(u, v);
    }
    if (!g) throw ParseError(line_no, "edge list has no header line");
    return *g;
}

std::string to_edge_list(const BipartiteGraph& graph) {
    std::ostringstream os;
    os << graph.left << ' ' << graph.right << '\n';
    for (const auto& [u, v] : graph.edges) os << u << ' ' << v << '\n';
    return os.str();
}

BipartiteGraph incidence_graph(const CnfFormula& formula) {
    BipartiteGraph g{formula.m(), formula.n_vars(), {}};
    for (std::uint64_t i = 0; i < formula.m(); ++i) {
        for (auto lit : formula.clauses()[i]) g.edges.emplace_back(i, static_cast<std::uint64_t>(std::abs(lit)) - 1);
    }
    return g;
}

Degrees regular_degrees(const BipartiteGraph& graph) {
    if (graph.left == 0 || graph.right == 0) throw InvalidArgument("graph needs vertices on both sides");
    std::vector<std::uint64_t> left(graph.left, 0), right(graph.right, 0);
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    for (const auto& [u, v] : graph.edges) {
        if (u >= graph.left || v >= graph.right) throw InvalidArgument("edge endpoint out of range");
        if (!seen.insert({u, v}).second) throw InvalidArgument("graph has a repeated edge");
        ++left[u];
        ++right[v];
    }
    if (std::adjacent_find(left.begin(), left.end(), std::not_equal_to<>()) != left.end()) {
        throw InvalidArgument("left vertices have unequal degrees");
    }
    if (std::adjacent_find(right.begin(), right.end(), std::not_equal_to<>()) != right.end()) {
        throw InvalidArgument("right vertices have unequal degrees");
    }
    return {left[0], right[0]};
}

namespace {

constexpr std::size_t kChunks = 64;

void check_sizes(std::uint64_t m, std::uint64_t n, std::uint64_t k, std::uint64_t l) {
    if (k == 0 || l == 0) throw InvalidArgument("subset sizes k and l must be positive");
    if (k > m) throw InvalidArgument("k exceeds the number of left elements");
    if (l > n) throw InvalidArgument("l exceeds the number of right elements");
}

std::vector<std::vector<char>> adjacency(const BipartiteGraph& g) {
    std::vector<std::vector<char>> a(g.left, std::vector<char>(g.right, 0));
    for (const auto& [u, v] : g.edges) a[u][v] = 1;
    return a;
}

// Incidences inside I x J for every (I, J), I-major.
std::vector<std::uint64_t> overlap_counts(const BipartiteGraph& g, std::uint64_t k, std::uint64_t l,
                                          unsigned threads) {
    const auto a = adjacency(g);
    const SubsetIndex left(g.left, k), right(g.right, l);
    std::vector<std::uint64_t> s(left.count() * right.count());
    const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(left.count(), kChunks));
    parallel_chunks(chunks, threads, [&](std::size_t chunk) {
        auto [begin, end] = chunk_range(left.count(), chunks, chunk);
        for (std::uint64_t ri = begin; ri < end; ++ri) {
            const auto is = left.unrank(ri);
            std::vector<std::uint64_t> js(l);
            std::iota(js.begin(), js.end(), 0);
            std::uint64_t rj = 0;
            do {
                std::uint64_t count = 0;
                for (auto i : is)
                    for (auto j : js) count += static_cast<std::uint64_t>(a[i][j]);
                s[ri * right.count() + rj++] = count;
            } while (next_combination(js, g.right));
        }
    });
    return s;
}

}  // namespace

DistributionPair closed_form_distribution(const CnfFormula& formula, std::uint64_t k, std::uint64_t l,
                                          const ExperimentOptions& options) {
    const auto degree = formula.balance_degree();
    if (!degree) throw InvalidArgument("formula is not balanced: variables occur in different numbers of clauses");
    const std::uint64_t m = formula.m(), n = formula.n_vars();
    check_sizes(m, n, k, l);
    const double pairs = binomial_approx(double(m), double(k)) * binomial_approx(double(n), double(l));
    require_budget("closed_form_distribution", pairs * static_cast<double>(k * l), options.budget);

    DistributionPair out;
    out.m = m, out.n = n, out.k = k, out.l = l;
    out.row_degree = 3;
    out.column_degree = *degree;
    const auto graph = incidence_graph(formula);
    out.s = overlap_counts(graph, k, l, options.threads);
    const std::uint64_t cj = binomial(n, l);
    const std::uint64_t total = out.s.size();
    const Rational u(1, static_cast<std::int64_t>(total));
    // Pr_U * S / (3 k l / n)
    const Rational scale = u * Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(3 * k * l));
    out.support.reserve(total);
    out.u_prob.assign(total, u);
    out.d_prob.reserve(total);
    for (std::uint64_t e = 0; e < total; ++e) {
        out.support.emplace_back(e / cj, e % cj);
        out.d_prob.push_back(scale * static_cast<std::int64_t>(out.s[e]));
    }
    return out;
}

std::vector<Rational> process_distribution(const CnfFormula& formula, std::uint64_t k, std::uint64_t l,
                                           const ExperimentOptions& options) {
    const std::uint64_t m = formula.m(), n = formula.n_vars();
    check_sizes(m, n, k, l);
    const auto graph = incidence_graph(formula);
    const std::uint64_t completions = binomial(m - 1, k - 1) * binomial(n - 1, l - 1);
    const double cost = static_cast<double>(graph.edges.size()) * static_cast<double>(completions) *
                        static_cast<double>(k + l);
    require_budget("process_distribution", cost, options.budget);

    const SubsetIndex left(m, k), right(n, l);
    const std::uint64_t total = left.count() * right.count();
    const std::size_t chunks = std::min<std::size_t>(graph.edges.size(), kChunks);
    std::vector<std::vector<std::uint64_t>> counts(chunks);
    parallel_chunks(chunks, options.threads, [&](std::size_t chunk) {
        auto& local = counts[chunk];
        local.assign(total, 0);
        auto [begin, end] = chunk_range(graph.edges.size(), chunks, chunk);
        std::vector<std::uint64_t> is(k), js(l);
        for (std::uint64_t e = begin; e < end; ++e) {
            const auto [i, j] = graph.edges[e];
            // Completions: (k-1)-subsets of [m] \ {i} and (l-1)-subsets of [n] \ {j}.
            std::vector<std::uint64_t> ri(k - 1), rj(l - 1);
            std::iota(ri.begin(), ri.end(), 0);
            do {
                for (std::uint64_t t = 0; t + 1 < k; ++t) is[t] = ri[t] + (ri[t] >= i ? 1 : 0);
                is[k - 1] = i;
                std::sort(is.begin(), is.end());
                const std::uint64_t rank_i = left.rank(is);
                std::iota(rj.begin(), rj.end(), 0);
                do {
                    for (std::uint64_t t = 0; t + 1 < l; ++t) js[t] = rj[t] + (rj[t] >= j ? 1 : 0);
                    js[l - 1] = j;
                    std::sort(js.begin(), js.end());
                    ++local[rank_i * right.count() + right.rank(js)];
                } while (l > 1 && next_combination(rj, n - 1));
            } while (k > 1 && next_combination(ri, m - 1));
        }
    });
    std::vector<std::uint64_t> sum(total, 0);
    for (const auto& local : counts)
        for (std::uint64_t e = 0; e < total; ++e) sum[e] += local[e];
    const Rational unit(1, static_cast<std::int64_t>(graph.edges.size() * completions));
    std::vector<Rational> out;
    out.reserve(total);
    for (auto c : sum) out.push_back(unit * static_cast<std::int64_t>(c));
    return out;
}

VariationDistance variation_distance(const CnfFormula& formula, std::uint64_t k, std::uint64_t l,
                                     const ExperimentOptions& options) {
    VariationDistance out;
    out.pair = closed_form_distribution(formula, k, l, options);
    const auto process = process_distribution(formula, k, l, options);
    out.process_matches = process == out.pair.d_prob;
    Rational sum = 0;
    for (std::size_t e = 0; e < out.pair.d_prob.size(); ++e) sum += abs(out.pair.d_prob[e] - out.pair.u_prob[e]);
    out.distance = sum / 2;
    out.bound_rhs = std::sqrt(static_cast<double>(out.pair.n) / static_cast<double>(k * l));
    return out;
}

std::string distribution_csv(const DistributionPair& pair) {
    std::ostringstream os;
    os << "i_rank,j_rank,s,u_prob,d_prob\n";
    for (std::size_t e = 0; e < pair.support.size(); ++e) {
        os << pair.support[e].first << ',' << pair.support[e].second << ',' << pair.s[e] << ','
           << to_string(pair.u_prob[e]) << ',' << to_string(pair.d_prob[e]) << '\n';
    }
    return os.str();
}

CollisionRecord collision_probability(const BipartiteGraph& graph, std::uint64_t k, std::uint64_t l,
                                      const ExperimentOptions& options) {
    const Degrees deg = regular_degrees(graph);
    check_sizes(graph.left, graph.right, k, l);
    const double pairs =
        binomial_approx(double(graph.left), double(k)) * binomial_approx(double(graph.right), double(l));
    require_budget("collision_probability", pairs * static_cast<double>(k * l), options.budget);

    CollisionRecord out;
    out.m = graph.left, out.n = graph.right, out.c = deg.left, out.d = deg.right, out.k = k, out.l = l;
    const auto s = overlap_counts(graph, k, l, options.threads);
    const auto hits = static_cast<std::int64_t>(std::count_if(s.begin(), s.end(), [](auto v) { return v > 0; }));
    out.probability = Rational(hits, static_cast<std::int64_t>(s.size()));
    const auto n = static_cast<std::int64_t>(graph.right);
    const auto c = static_cast<std::int64_t>(deg.left);
    const auto kk = static_cast<std::int64_t>(k), ll = static_cast<std::int64_t>(l);
    const Rational x(c * kk * ll, n);
    out.bound = x * (Rational(1) - Rational(c * c * kk * kk, n) - x);
    out.bound_positive = out.bound > 0;
    out.holds = !out.bound_positive || out.probability >= out.bound;
    return out;
}

std::string collision_csv(std::span<const CollisionRecord> rows) {
    std::ostringstream os;
    os << "m,n,c,d,k,l,probability,bound,bound_positive,holds\n";
    for (const auto& r : rows) {
        os << r.m << ',' << r.n << ',' << r.c << ',' << r.d << ',' << r.k << ',' << r.l << ','
           << to_string(r.probability) << ',' << to_string(r.bound) << ',' << (r.bound_positive ? 1 : 0) << ','
           << (r.holds ? 1 : 0) << '\n';
    }
    return os.str();
}

BirthdayGapRecord birthday_gap(const CnfFormula& formula, std::uint64_t k, std::uint64_t l,
                               const ExperimentOptions& options) {
    BirthdayGapRecord out;
    out.k = k, out.l = l;
    const ExactOptions exact{options.budget, options.threads};
    const auto vd = variation_distance(formula, k, l, options);
    out.distance = vd.distance;

    const auto base = clause_variable_game(formula);
    out.base_value = as_fraction(exact_value(base, exact).value, 3 * formula.m());

    const auto bd = birthday_repetition(base, k, l);
    const auto& shape = bd.game().game().shape();
    const double entries = static_cast<double>(shape.x_count) * static_cast<double>(shape.y_count) *
                           static_cast<double>(shape.a_count) * static_cast<double>(shape.b_count);
    const double repeated = entries <= std::min(kMaxDenseEntries, options.budget)
                                ? exact_value(bd.materialize(), exact).value
                                : exact_value(bd.game(), exact).value;
    out.repeated_value = as_fraction(repeated, shape.x_count * shape.y_count);
    out.gap = out.repeated_value - out.base_value;
    out.holds = out.gap <= out.distance;
    out.small_subset_ratio = to_double((1 - out.repeated_value) * static_cast<std::int64_t>(formula.n_vars()) /
                                       static_cast<std::int64_t>(k * l));
    return out;
}

std::string birthday_gap_csv(std::span<const BirthdayGapRecord> rows) {
    std::ostringstream os;
    os << "k,l,base_value,repeated_value,gap,distance,holds,small_subset_ratio\n";
    for (const auto& r : rows) {
        os << r.k << ',' << r.l << ',' << to_string(r.base_value) << ',' << to_string(r.repeated_value) << ','
           << to_string(r.gap) << ',' << to_string(r.distance) << ',' << (r.holds ? 1 : 0) << ','
           << format_double(r.small_subset_ratio) << '\n';
    }
    return os.str();
}

namespace {

std::vector<SubsampleGapRow> subsample_curve(const KFreeGame& game, double omega,
                                             std::span<const std::uint64_t> kappas,
                                             const ExperimentOptions& options) {
    double log_answers = 0.0;
    for (auto b : game.answer_counts()) log_answers += std::log(static_cast<double>(b));
    std::vector<SubsampleGapRow> rows;
    for (auto kappa : kappas) {
        if (kappa == 0) throw InvalidArgument("kappa must be positive");
        EstimateOptions opts;
        opts.budget = options.budget;
        opts.threads = options.threads;
        opts.kappa = kappa;
        // epsilon and lambda only feed the overridden sample size.
        const auto est = subsample_estimate(game, 0.5, 3.0, ExactMode{}, opts);
        SubsampleGapRow row;
        row.kappa = kappa;
        row.mean = est.mean;
        row.omega = omega;
        row.upper_gap = est.mean - omega;
        row.implied_epsilon = std::cbrt(log_answers / static_cast<double>(kappa));
        row.lower_holds = est.mean >= omega - 1e-12;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

std::vector<SubsampleGapRow> subsample_gap_curve(const KFreeGame& game, std::span<const std::uint64_t> kappas,
                                                 const ExperimentOptions& options) {
    const double omega = exact_value_k(game, ExactOptions{options.budget, options.threads}).value;
    return subsample_curve(game, omega, kappas, options);
}

std::vector<SubsampleGapRow> subsample_gap_curve(const FreeGame& game, std::span<const std::uint64_t> kappas,
                                                 const ExperimentOptions& options) {
    const double omega = exact_value(game, ExactOptions{options.budget, options.threads}).value;
    return subsample_curve(to_kfree(game), omega, kappas, options);
}

std::string subsample_gap_csv(std::span<const SubsampleGapRow> rows) {
    std::ostringstream os;
    os << "kappa,mean,omega,upper_gap,implied_epsilon,lower_holds\n";
    for (const auto& r : rows) {
        os << r.kappa << ',' << format_double(r.mean) << ',' << format_double(r.omega) << ','
           << format_double(r.upper_gap) << ',' << format_double(r.implied_epsilon) << ','
           << (r.lower_holds ? 1 : 0) << '\n';
    }
    return os.str();
}

AmplificationCurve amplification_curve(const TwoProverGame& base, std::span<const std::uint64_t> ns,
                                       double threshold, const ExperimentOptions& options) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw InvalidArgument("threshold must lie in [0, 1]");
    std::vector<std::uint64_t> sorted(ns.begin(), ns.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.empty() || sorted.front() == 0) throw InvalidArgument("repetition counts must be positive");

    const ExactOptions exact{options.budget, options.threads};
    AmplificationCurve out;
    out.threshold = threshold;
    out.base_value = exact_value(base, exact).value;
    if (out.base_value > threshold) {
        out.expected = Direction::non_decreasing;
    } else if (out.base_value < threshold) {
        out.expected = Direction::non_increasing;
    }
    for (auto n : sorted) {
        const auto repeated = threshold_repetition(base, n, threshold, std::min(kMaxDenseEntries, options.budget));
        out.values.emplace_back(n, exact_value(repeated, exact).value);
    }
    for (std::size_t i = 1; i < out.values.size(); ++i) {
        const double prev = out.values[i - 1].second, cur = out.values[i].second;
        if (out.expected == Direction::non_decreasing && cur < prev - 1e-12) out.holds = false;
        if (out.expected == Direction::non_increasing && cur > prev + 1e-12) out.holds = false;
    }
    return out;
}

std::string amplification_csv(const AmplificationCurve& curve) {
    std::ostringstream os;
    os << "n,value\n";
    for (const auto& [n, v] : curve.values) os << n << ',' << format_double(v) << '\n';
    return os.str();
}

bool ExperimentReport::all_passed() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

namespace {

const char* direction_name(Direction d) {
    switch (d) {
        case Direction::non_decreasing: return "non-decreasing";
        case Direction::non_increasing: return "non-increasing";
        case Direction::none: return "none";
    }
    return "none";
}

std::string kl_name(const std::string& base, std::uint64_t k, std::uint64_t l) {
    return base + " k=" + std::to_string(k) + " l=" + std::to_string(l);
}

}  // namespace

ExperimentReport run_report(const ExperimentOptions& options) {
    ExperimentReport report;
    std::vector<std::string> skipped;
    auto add = [&](std::string experiment, std::string instance, bool passed, std::string detail) {
        report.assertions.push_back({std::move(experiment), std::move(instance), passed, std::move(detail)});
    };

    for (const auto& [name, formula] : formula_corpus()) {
        const double sat = sat_value_cnf(formula, {options.budget, options.threads}).value;
        const double omega = exact_value(clause_variable_game(formula), {options.budget, options.threads}).value;
        const bool ok = sat == 1.0 ? omega == 1.0 : omega <= 1.0 - (1.0 - sat) / 3.0 + 1e-12;
        add("clause-variable soundness", name, ok,
            "SAT=" + format_double(sat) + " omega=" + format_double(omega));
    }

    for (const auto& [name, formula] : formula_corpus()) {
        if (!formula.balance_degree()) continue;
        for (std::uint64_t k = 1; k <= std::min<std::uint64_t>(2, formula.m()); ++k) {
            for (std::uint64_t l = 1; l <= std::min<std::uint64_t>(2, formula.n_vars()); ++l) {
                const auto vd = variation_distance(formula, k, l, options);
                Rational su = 0, sd = 0, norm = 0;
                for (std::size_t e = 0; e < vd.pair.u_prob.size(); ++e) {
                    su += vd.pair.u_prob[e];
                    sd += vd.pair.d_prob[e];
                    norm += vd.pair.u_prob[e] * static_cast<std::int64_t>(vd.pair.s[e]);
                }
                const Rational expected_norm(static_cast<std::int64_t>(3 * k * l),
                                             static_cast<std::int64_t>(formula.n_vars()));
                add("variation distance", kl_name(name, k, l),
                    vd.process_matches && su == 1 && sd == 1 && norm == expected_norm,
                    "distance=" + to_string(vd.distance) + " sqrt(n/kl)=" + format_double(vd.bound_rhs));
                try {
                    const auto bg = birthday_gap(formula, k, l, options);
                    add("birthday gap", kl_name(name, k, l), bg.holds,
                        "base=" + to_string(bg.base_value) + " repeated=" + to_string(bg.repeated_value) +
                            " gap=" + to_string(bg.gap) + " distance=" + to_string(bg.distance) +
                            " (1-repeated)n/kl=" + format_double(bg.small_subset_ratio));
                } catch (const BudgetExceeded&) {
                    skipped.push_back("birthday gap " + kl_name(name, k, l) + " (budget)");
                }
            }
        }
    }

    for (const auto& [name, graph] : graph_corpus()) {
        for (std::uint64_t k = 1; k <= std::min<std::uint64_t>(2, graph.left); ++k) {
            for (std::uint64_t l = 1; l <= std::min<std::uint64_t>(2, graph.right); ++l) {
                const auto r = collision_probability(graph, k, l, options);
                add("collision bound", kl_name(name, k, l), r.holds,
                    "probability=" + to_string(r.probability) + " bound=" + to_string(r.bound) +
                        (r.bound_positive ? "" : " (bound not positive)"));
            }
        }
    }

    for (std::uint64_t n = 2; n <= 5; ++n) {
        const auto g = counterexample_game(n);
        const auto nn = static_cast<std::int64_t>(n);
        const Rational omega = as_fraction(exact_value(g, {options.budget, options.threads}).value, n * n);
        bool ok = omega == Rational(nn - 1, nn);
        std::string detail = "omega=" + to_string(omega);
        for (std::uint64_t k = 1; k < n; ++k) {
            for (std::uint64_t l = 1; l <= 2; ++l) {
                const auto bd = birthday_repetition(g, k, l);
                const auto& shape = bd.game().game().shape();
                const Rational v = as_fraction(exact_value(bd.game(), {options.budget, options.threads}).value,
                                               shape.x_count * shape.y_count);
                ok = ok && v == Rational(nn - static_cast<std::int64_t>(k), nn);
            }
        }
        add("counterexample birthday values", "n=" + std::to_string(n), ok, detail);
    }

    {
        const std::vector<std::uint64_t> kappas{1, 2, 3, 4, 5, 6};
        const auto curve = subsample_gap_curve(seeded_free_game(kSubsampleCurveSeed, {6, 6, 2, 2}, 4), kappas, options);
        std::string detail = "upper gaps:";
        bool ok = true;
        for (const auto& r : curve) {
            ok = ok && r.lower_holds;
            detail += " " + format_double(r.upper_gap);
        }
        add("subsampling lower direction", "6x6x2x2 seed " + std::to_string(kSubsampleCurveSeed), ok, detail);
        for (const auto& [seed, game] : game_corpus()) {
            const std::vector<std::uint64_t> ks{1, 2};
            bool lower = true;
            for (const auto& r : subsample_gap_curve(game, ks, options)) lower = lower && r.lower_holds;
            add("subsampling lower direction", "2x2x2x2 seed " + std::to_string(seed), lower, "");
        }
    }

    for (const auto& [seed, game] : game_corpus()) {
        const double omega = exact_value(game, {options.budget, options.threads}).value;
        const double rep = exact_value(parallel_repetition(game, 2), {options.budget, options.threads}).value;
        add("repetition sandwich", "seed " + std::to_string(seed),
            omega * omega <= rep + 1e-9 && rep <= omega + 1e-9,
            "omega=" + format_double(omega) + " omega(G^2)=" + format_double(rep));
    }

    {
        const std::vector<std::uint64_t> ns{1, 2, 3};
        std::vector<std::pair<std::string, FreeGame>> bases;
        for (const auto& [seed, game] : game_corpus()) {
            if (exact_value(game).value == 0.75) {
                bases.emplace_back("seed " + std::to_string(seed) + " (omega 3/4)", game);
                break;
            }
        }
        bases.emplace_back("constant 1", make_free_game({2, 2, 2, 2}, std::vector<double>(16, 1.0)));
        bases.emplace_back("constant 0", make_free_game({2, 2, 2, 2}, std::vector<double>(16, 0.0)));
        for (const auto& [name, base] : bases) {
            const auto curve = amplification_curve(base, ns, 0.5, options);
            std::string detail = std::string("expected ") + direction_name(curve.expected) + ", values";
            for (const auto& [n, v] : curve.values) detail += " " + format_double(v);
            add("amplification direction", name, curve.holds, detail);
        }
    }

    std::ostringstream md;
    std::size_t passed = 0;
    for (const auto& a : report.assertions) passed += a.passed ? 1 : 0;
    md << "# Experiment report\n\n";
    md << passed << " of " << report.assertions.size() << " assertions passed.\n\n";
    md << "| experiment | instance | result | detail |\n|---|---|---|---|\n";
    for (const auto& a : report.assertions) {
        md << "| " << a.experiment << " | " << a.instance << " | " << (a.passed ? "pass" : "FAIL") << " | "
           << a.detail << " |\n";
    }
    if (!skipped.empty()) {
        md << "\nSkipped:\n\n";
        for (const auto& s : skipped) md << "- " << s << "\n";
    }
    report.markdown = md.str();
    return report;
}

}  // namespace fgame

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "fgame/constructions.hpp"
#include "fgame/error.hpp"
#include "fgame/experiments.hpp"
#include "fgame/format.hpp"
#include "fgame/json_io.hpp"
#include "fgame/solvers.hpp"
#include "fgame/strategy.hpp"
#include "fgame/version.hpp"

using namespace fgame;

namespace {

enum ExitCode { kValueOne = 0, kBelowGap = 1, kFailure = 2, kUsage = 64, kBudget = 65 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Common {
    double budget = kDefaultBudget;
    unsigned threads = 1;
    std::uint64_t seed = 0;
    std::string input = "-";
    std::string output = "-";
    std::string format;
};

const CLI::Validator kOpenUnit(
    [](std::string& s) -> std::string {
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(s, &used);
            if (used != s.size()) return "must be a number in (0, 1)";
        } catch (...) {
            return "must be a number in (0, 1)";
        }
        return v > 0.0 && v < 1.0 ? "" : "must be in (0, 1)";
    },
    "(0,1)");

std::string read_input(const std::string& path) {
    std::ostringstream os;
    if (path == "-") {
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

bool looks_like_json(const std::string& text) {
    const auto p = text.find_first_not_of(" \t\r\n");
    return p != std::string::npos && text[p] == '{';
}

// Every option of the subcommand as given or defaulted; threads and output
// paths are left out so results do not depend on them.
Json config_echo(const CLI::App* sub) {
    Json cfg = Json::object();
    auto options = sub->get_options();
    for (const CLI::App* group : sub->get_subcommands([](const CLI::App* a) { return a->get_name().empty(); })) {
        const auto more = group->get_options();
        options.insert(options.end(), more.begin(), more.end());
    }
    for (const CLI::Option* opt : options) {
        const auto& name = opt->get_single_name();
        if (name == "help" || name == "threads" || name == "output" || name == "json-out") continue;
        if (opt->get_type_size() == 0) {
            if (opt->count() > 0) cfg[name] = true;
            continue;
        }
        std::string value;
        if (opt->count() > 0) {
            const auto& results = opt->results();
            for (std::size_t i = 0; i < results.size(); ++i) value += (i ? "," : "") + results[i];
        } else {
            value = opt->get_default_str();
        }
        if (!value.empty()) cfg[name] = value;
    }
    return cfg;
}

Json make_meta(const CLI::App* sub, const Common& c) {
    std::string command = sub->get_name();
    for (auto* p = sub->get_parent(); p && p->get_parent(); p = p->get_parent()) command = p->get_name() + " " + command;
    return {{"tool", "fgame"},   {"version", kVersion},      {"schema", kSchemaVersion},
            {"command", command}, {"config", config_echo(sub)}, {"seed", c.seed}};
}

std::string csv_preamble(const Json& meta) {
    return "# fgame " + std::string(kVersion) + " schema " + std::to_string(kSchemaVersion) + "\n# command " +
           meta["command"].get<std::string>() + "\n# config " + meta["config"].dump() + "\n# seed " +
           std::to_string(meta["seed"].get<std::uint64_t>()) + "\n";
}

std::string with_meta(Json doc, const Json& meta) {
    doc["meta"] = meta;
    return dump_json(doc);
}

Artifact load_artifact(const std::string& text) { return artifact_from_json(parse_json(text)); }

TwoProverGame two_prover(const Artifact& a) {
    if (const auto* g = std::get_if<TwoProverGame>(&a)) return *g;
    if (const auto* b = std::get_if<BirthdayGame>(&a)) return b->game().game();
    throw UsageError("input must be a two-prover game");
}

KFreeGame k_player(const Artifact& a) {
    if (const auto* k = std::get_if<KFreeGame>(&a)) return *k;
    if (const auto* b = std::get_if<BirthdayGame>(&a)) return to_kfree(b->game());
    if (const auto* g = std::get_if<TwoProverGame>(&a); g && g->is_free()) return to_kfree(FreeGame::from(*g));
    throw UsageError("input must be a free game");
}

FreeGame free_two(const Artifact& a) {
    if (const auto* b = std::get_if<BirthdayGame>(&a)) return b->game();
    if (const auto* g = std::get_if<TwoProverGame>(&a); g && g->is_free()) return FreeGame::from(*g);
    throw UsageError("input must be a free two-prover game");
}

double dense_cap(const Common& c) { return std::min(c.budget, kMaxDenseEntries); }

Json profile_json(const StrategyProfile& p) { return p.players; }

std::string human(const Json& doc) {
    std::ostringstream os;
    for (const auto& [key, value] : doc.items()) {
        if (key == "meta") continue;
        os << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
    return os.str();
}

void add_common(CLI::App* sub, Common& c, bool input, std::vector<std::string> formats) {
    sub->add_option("--budget", c.budget, "Ceiling on verifier evaluations (default from FGAME_BUDGET)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--seed", c.seed, "Seed for randomized procedures");
    sub->add_option("-o,--output", c.output, "Output path, - for stdout");
    if (input) sub->add_option("input", c.input, "Input path, - for stdin");
    if (!formats.empty()) {
        c.format = formats.front();
        sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember(formats));
    }
}

// ---- gen ----

int gen_output(const CLI::App* sub, const Common& c, const Json& doc) {
    write_output(c.output, with_meta(doc, make_meta(sub, c)));
    return 0;
}

TwoProverGame base_from(const std::string& text) {
    if (looks_like_json(text)) return two_prover(load_artifact(text));
    return clause_variable_game(parse_dimacs(text));
}

// ---- solve ----

struct SolveParams {
    bool exact = false, est = false, rest = false, gap = false, delta_mode = false, est_k = false, subsample = false;
    std::optional<double> eps, delta;
    double lambda = 3.0;
    std::optional<std::uint64_t> kappa, trials;
    std::size_t max_refutation = 1000;
    std::string json_out;
};

void require_only(const CLI::App* sub, const std::string& method, std::set<std::string> allowed) {
    static const std::set<std::string> params{"eps", "delta", "lambda", "kappa", "trials", "max-refutation"};
    for (const auto& p : params) {
        if (sub->count("--" + p) > 0 && !allowed.count(p)) {
            throw UsageError("--" + p + " does not apply to --" + method);
        }
    }
}

double need(const std::optional<double>& v, const std::string& name, const std::string& method) {
    if (!v) throw UsageError("--" + method + " requires --" + name);
    return *v;
}

Json estimate_json(const std::string& method, const EstimateReport& r) {
    Json doc{{"method", method},        {"estimate", r.estimate},     {"lower_bound", r.lower_bound},
             {"epsilon", r.epsilon},    {"kappa", r.kappa},           {"candidates", r.candidates},
             {"subsets", r.subsets},    {"witness", profile_json(r.witness)}};
    if (!r.sampled_subset.empty()) doc["sampled_subset"] = r.sampled_subset;
    return doc;
}

Json decision_json(const std::string& method, const DecisionReport& r) {
    Json doc{{"method", method},
             {"verdict", r.verdict == Verdict::value_one ? "value-one" : "below-gap"},
             {"kappa", r.kappa},
             {"candidates", r.candidates},
             {"best_value", r.best_value},
             {"perfect", r.perfect ? profile_json(*r.perfect) : Json(nullptr)},
             {"refutation_truncated", r.refutation_truncated}};
    Json refs = Json::array();
    for (const auto& e : r.refutation) {
        refs.push_back({{"subset", e.subset}, {"alpha", e.alpha}, {"questions", e.questions}, {"answers", e.answers}});
    }
    doc["refutation"] = std::move(refs);
    return doc;
}

int run_solve(const CLI::App* sub, const Common& c, const SolveParams& p) {
    const auto art = load_artifact(read_input(c.input));
    Json doc;
    int code = 0;
    if (p.exact) {
        require_only(sub, "exact", {});
        const ExactOptions opt{c.budget, c.threads};
        if (const auto* csp = std::get_if<DenseCsp>(&art)) {
            CspSolveOptions co;
            co.budget = c.budget;
            co.threads = c.threads;
            co.allow_vacuous = true;
            const auto v = csp_sat_value(*csp, co);
            doc = {{"method", "exact"}, {"value", v.value}, {"vacuous", v.vacuous}};
            if (v.witness) doc["witness"] = *v.witness;
        } else {
            const auto v = std::holds_alternative<KFreeGame>(art) ? exact_value_k(std::get<KFreeGame>(art), opt)
                                                                   : exact_value(two_prover(art), opt);
            doc = {{"method", "exact"}, {"value", v.value}};
            if (v.witness) doc["witness"] = profile_json(*v.witness);
        }
    } else if (p.est || p.rest) {
        const std::string m = p.est ? "est" : "rest";
        require_only(sub, m, {"eps", "kappa"});
        const double eps = need(p.eps, "eps", m);
        const EstimateOptions opt{c.budget, c.threads, p.kappa};
        const auto g = two_prover(art);
        doc = estimate_json(m, p.est ? est_deterministic(g, eps, opt) : est_randomized(g, eps, c.seed, opt));
    } else if (p.gap || p.delta_mode) {
        const std::string m = p.gap ? "decide-gap" : "decide-delta";
        require_only(sub, m, {p.gap ? "eps" : "delta", "kappa", "max-refutation"});
        const DecisionOptions opt{c.budget, c.threads, p.kappa, p.max_refutation};
        DecisionReport r;
        if (p.gap) {
            const double eps = need(p.eps, "eps", m);
            const auto* k = std::get_if<KFreeGame>(&art);
            r = k && k->players() != 2 ? est_k_perfect(*k, eps, opt) : decide_one_vs_gap(two_prover(art), eps, opt);
        } else {
            r = decide_one_vs_delta(two_prover(art), need(p.delta, "delta", m), opt);
        }
        doc = decision_json(m, r);
        code = r.verdict == Verdict::value_one ? kValueOne : kBelowGap;
    } else if (p.est_k) {
        require_only(sub, "est-k", {"eps", "kappa"});
        doc = estimate_json("est-k", est_k(k_player(art), need(p.eps, "eps", "est-k"), {c.budget, c.threads, p.kappa}));
    } else {
        require_only(sub, "subsample", {"eps", "lambda", "trials"});
        SubsampleMode mode = ExactMode{};
        if (p.trials) mode = MonteCarloMode{*p.trials, c.seed};
        const auto s = subsample_estimate(k_player(art), need(p.eps, "eps", "subsample"), p.lambda, mode,
                                          {c.budget, c.threads, std::nullopt});
        doc = {{"method", "subsample"}, {"mean", s.mean}, {"kappa", s.kappa}, {"samples", s.samples}};
        if (s.stderr_estimate) doc["stderr"] = *s.stderr_estimate;
    }
    const auto meta = make_meta(sub, c);
    if (!p.json_out.empty()) write_output(p.json_out, with_meta(doc, meta));
    if (c.format == "json") {
        write_output(c.output, with_meta(doc, meta));
    } else {
        write_output(c.output, "# fgame " + std::string(kVersion) + " seed " + std::to_string(c.seed) + "\n" +
                                   human(doc));
    }
    return code;
}

// ---- experiment ----

struct ExperimentParams {
    std::vector<std::uint64_t> k{1}, l{1}, kappa{1}, n{1, 2, 3};
    double threshold = 0.5;
    bool cnf = false;
    bool strict = false;
};

Json rational_json(const Rational& r) { return to_string(r); }

int emit_rows(const CLI::App* sub, const Common& c, const std::string& csv, const Json& rows) {
    const auto meta = make_meta(sub, c);
    if (c.format == "json") {
        write_output(c.output, with_meta(Json{{"rows", rows}}, meta));
    } else {
        write_output(c.output, csv_preamble(meta) + csv);
    }
    return 0;
}

int run_vardist(const CLI::App* sub, const Common& c, const ExperimentParams& p) {
    if (p.k.size() != 1 || p.l.size() != 1) throw UsageError("vardist takes a single --k and --l");
    const auto f = parse_dimacs(read_input(c.input));
    const auto vd = variation_distance(f, p.k[0], p.l[0], {c.budget, c.threads});
    const Json summary{{"m", vd.pair.m},
                       {"n", vd.pair.n},
                       {"k", vd.pair.k},
                       {"l", vd.pair.l},
                       {"distance", rational_json(vd.distance)},
                       {"distance_value", to_double(vd.distance)},
                       {"bound_rhs", vd.bound_rhs},
                       {"process_matches", vd.process_matches}};
    return emit_rows(sub, c, distribution_csv(vd.pair), Json::array({summary}));
}

int run_collision(const CLI::App* sub, const Common& c, const ExperimentParams& p) {
    const auto text = read_input(c.input);
    const auto graph = p.cnf ? incidence_graph(parse_dimacs(text)) : parse_edge_list(text);
    regular_degrees(graph);
    std::vector<CollisionRecord> recs;
    for (auto k : p.k)
        for (auto l : p.l) recs.push_back(collision_probability(graph, k, l, {c.budget, c.threads}));
    Json rows = Json::array();
    for (const auto& r : recs) {
        rows.push_back({{"m", r.m}, {"n", r.n}, {"c", r.c}, {"d", r.d}, {"k", r.k}, {"l", r.l},
                        {"probability", rational_json(r.probability)}, {"bound", rational_json(r.bound)},
                        {"bound_positive", r.bound_positive}, {"holds", r.holds}});
    }
    return emit_rows(sub, c, collision_csv(recs), rows);
}

int run_birthday_gap(const CLI::App* sub, const Common& c, const ExperimentParams& p) {
    const auto f = parse_dimacs(read_input(c.input));
    std::vector<BirthdayGapRecord> recs;
    for (auto k : p.k)
        for (auto l : p.l) recs.push_back(birthday_gap(f, k, l, {c.budget, c.threads}));
    Json rows = Json::array();
    for (const auto& r : recs) {
        rows.push_back({{"k", r.k}, {"l", r.l}, {"base_value", rational_json(r.base_value)},
                        {"repeated_value", rational_json(r.repeated_value)}, {"gap", rational_json(r.gap)},
                        {"distance", rational_json(r.distance)}, {"holds", r.holds},
                        {"small_subset_ratio", r.small_subset_ratio}});
    }
    return emit_rows(sub, c, birthday_gap_csv(recs), rows);
}

int run_subsample(const CLI::App* sub, const Common& c, const ExperimentParams& p) {
    const auto art = load_artifact(read_input(c.input));
    const ExperimentOptions opt{c.budget, c.threads};
    const auto rows_v = std::holds_alternative<KFreeGame>(art) ? subsample_gap_curve(std::get<KFreeGame>(art), p.kappa, opt)
                                                               : subsample_gap_curve(free_two(art), p.kappa, opt);
    Json rows = Json::array();
    for (const auto& r : rows_v) {
        rows.push_back({{"kappa", r.kappa}, {"mean", r.mean}, {"omega", r.omega}, {"upper_gap", r.upper_gap},
                        {"implied_epsilon", r.implied_epsilon}, {"lower_holds", r.lower_holds}});
    }
    return emit_rows(sub, c, subsample_gap_csv(rows_v), rows);
}

int run_amplify(const CLI::App* sub, const Common& c, const ExperimentParams& p) {
    const auto g = two_prover(load_artifact(read_input(c.input)));
    const auto curve = amplification_curve(g, p.n, p.threshold, {c.budget, c.threads});
    Json rows = Json::array();
    for (const auto& [n, v] : curve.values) rows.push_back({{"n", n}, {"value", v}});
    if (c.format == "json") {
        const Json doc{{"base_value", curve.base_value},
                       {"threshold", curve.threshold},
                       {"expected",
                        curve.expected == Direction::non_decreasing   ? "non-decreasing"
                        : curve.expected == Direction::non_increasing ? "non-increasing"
                                                                      : "none"},
                       {"holds", curve.holds},
                       {"rows", rows}};
        write_output(c.output, with_meta(doc, make_meta(sub, c)));
        return 0;
    }
    return emit_rows(sub, c, amplification_csv(curve), rows);
}

int run_report_cmd(const CLI::App* sub, const Common& c, const ExperimentParams& p) {
    const auto report = run_report({c.budget, c.threads});
    const auto meta = make_meta(sub, c);
    if (c.format == "json") {
        Json rows = Json::array();
        for (const auto& a : report.assertions) {
            rows.push_back({{"experiment", a.experiment}, {"instance", a.instance}, {"passed", a.passed},
                            {"detail", a.detail}});
        }
        write_output(c.output, with_meta(Json{{"assertions", rows}, {"all_passed", report.all_passed()}}, meta));
    } else {
        write_output(c.output, "<!-- fgame " + std::string(kVersion) + " seed " + std::to_string(c.seed) +
                                   " -->\n" + report.markdown);
    }
    return p.strict && !report.all_passed() ? 1 : 0;
}

// ---- convert ----

int run_convert(const CLI::App* sub, const Common& c, const std::string& from, const std::string& to) {
    const auto text = read_input(c.input);
    const auto meta = make_meta(sub, c);
    if (from == "dimacs") {
        if (to != "cvgame") throw UsageError("dimacs converts only to cvgame");
        write_output(c.output, with_meta(game_json(clause_variable_game(parse_dimacs(text)), dense_cap(c)), meta));
        return 0;
    }
    const auto doc = parse_json(text);
    const auto art = artifact_from_json(doc);
    const bool is_csp = std::holds_alternative<DenseCsp>(art);
    if (from == "csp-json" ? !is_csp : is_csp) throw UsageError("input kind does not match --from " + from);
    // Same-format conversions keep the source's metadata so canonical files round-trip unchanged.
    auto keep_meta = [&](Json out) {
        if (doc.contains("meta")) out["meta"] = doc["meta"];
        return dump_json(out);
    };
    if (to == "csp-json" && is_csp) {
        write_output(c.output, keep_meta(csp_json(std::get<DenseCsp>(art), dense_cap(c))));
    } else if (to == "game-json" && !is_csp) {
        if (const auto* b = std::get_if<BirthdayGame>(&art)) {
            write_output(c.output, with_meta(game_json(b->materialize(dense_cap(c))), meta));
        } else if (const auto* k = std::get_if<KFreeGame>(&art)) {
            write_output(c.output, keep_meta(game_json(*k, dense_cap(c))));
        } else {
            write_output(c.output, keep_meta(game_json(std::get<TwoProverGame>(art), dense_cap(c))));
        }
    } else if (to == "2csp" && !is_csp) {
        write_output(c.output, with_meta(csp_json(free_to_2csp(free_two(art), dense_cap(c)), dense_cap(c)), meta));
    } else if (to == "kcsp" && !is_csp) {
        write_output(c.output, with_meta(csp_json(kfree_to_kcsp(k_player(art), dense_cap(c)), dense_cap(c)), meta));
    } else {
        throw UsageError("unsupported conversion " + from + " -> " + to);
    }
    return 0;
}

double default_budget() {
    const char* env = std::getenv("FGAME_BUDGET");
    if (!env) return kDefaultBudget;
    try {
        std::size_t used = 0;
        const double v = std::stod(env, &used);
        if (used == std::string(env).size() && v > 0.0 && std::isfinite(v)) return v;
    } catch (...) {
    }
    throw UsageError("FGAME_BUDGET must be a positive number");
}

int run(int argc, char** argv) {
    Common c;
    c.budget = default_budget();

    CLI::App app{"Two-prover and k-prover free games: constructions, solvers and experiments", "fgame"};
    app.option_defaults()->always_capture_default();
    app.set_version_flag("--version", std::string("fgame ") + kVersion + " (schema " +
                                          std::to_string(kSchemaVersion) + ")");
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Build a game and print it as JSON");
    gen->require_subcommand(1);
    std::uint64_t n = 2, k = 1, l = 1, m = 2;
    double threshold = 0.5;
    auto* g_cex = gen->add_subcommand("counterexample", "Free game on [n]^4 lost exactly on question 0");
    g_cex->add_option("--n", n, "Size n")->required()->check(CLI::Range(2u, 64u));
    add_common(g_cex, c, false, {});
    auto* g_cv = gen->add_subcommand("cvgame", "Clause/variable game of a DIMACS 3-CNF formula");
    add_common(g_cv, c, true, {});
    auto* g_bd = gen->add_subcommand("birthday", "Birthday repetition descriptor (input: DIMACS or game JSON)");
    g_bd->add_option("--k", k, "First-prover subset size")->required()->check(CLI::PositiveNumber);
    g_bd->add_option("--l", l, "Second-prover subset size")->required()->check(CLI::PositiveNumber);
    add_common(g_bd, c, true, {});
    auto* g_par = gen->add_subcommand("parrep", "Parallel repetition");
    g_par->add_option("--m", m, "Number of coordinates")->required()->check(CLI::Range(1u, 16u));
    add_common(g_par, c, true, {});
    auto* g_thr = gen->add_subcommand("threshold", "Threshold repetition");
    g_thr->add_option("--n", n, "Number of coordinates")->required()->check(CLI::Range(1u, 16u));
    g_thr->add_option("--threshold", threshold, "Fraction of coordinates to win")->check(CLI::Range(0.0, 1.0));
    add_common(g_thr, c, true, {});

    // solve
    SolveParams sp;
    auto* solve = app.add_subcommand("solve", "Compute or approximate a game value");
    auto* method = solve->add_option_group("method");
    method->add_flag("--exact", sp.exact, "Exact value");
    method->add_flag("--est", sp.est, "Deterministic subsampling estimate");
    method->add_flag("--rest", sp.rest, "Estimate from one random subset");
    method->add_flag("--decide-gap", sp.gap, "Decide value 1 vs at most 1 - eps");
    method->add_flag("--decide-delta", sp.delta_mode, "Decide value 1 vs below delta");
    method->add_flag("--est-k", sp.est_k, "k-player estimate");
    method->add_flag("--subsample", sp.subsample, "Mean value of random product subgames");
    method->require_option(1);
    solve->add_option("--eps", sp.eps, "Additive error or gap")->check(kOpenUnit);
    solve->add_option("--delta", sp.delta, "Soundness threshold")->check(kOpenUnit);
    solve->add_option("--lambda", sp.lambda, "Subsample exponent")->check(CLI::PositiveNumber);
    solve->add_option("--kappa", sp.kappa, "Override the sample-set size")->check(CLI::PositiveNumber);
    solve->add_option("--trials", sp.trials, "Random subsets for --subsample (exact when absent)")
        ->check(CLI::PositiveNumber);
    solve->add_option("--max-refutation", sp.max_refutation, "Refutation entries kept")->check(CLI::NonNegativeNumber);
    solve->add_option("--json-out", sp.json_out, "Also write the JSON result here");
    add_common(solve, c, true, {"human", "json"});

    // experiment
    ExperimentParams ep;
    auto* exp = app.add_subcommand("experiment", "Run an experiment and print CSV");
    exp->require_subcommand(1);
    auto list = [](CLI::App* s, const std::string& name, std::vector<std::uint64_t>& v, const std::string& help) {
        s->add_option(name, v, help)->delimiter(',')->allow_extra_args(false)->check(CLI::PositiveNumber);
    };
    auto* e_vd = exp->add_subcommand("vardist", "Distribution pair and variation distance (input: DIMACS)");
    list(e_vd, "--k", ep.k, "Clause subset size");
    list(e_vd, "--l", ep.l, "Variable subset size");
    add_common(e_vd, c, true, {"csv", "json"});
    auto* e_col = exp->add_subcommand("collision", "Edge probability of random subsets (input: edge list)");
    list(e_col, "--k", ep.k, "Left subset sizes");
    list(e_col, "--l", ep.l, "Right subset sizes");
    e_col->add_flag("--cnf", ep.cnf, "Input is DIMACS; use its incidence graph");
    add_common(e_col, c, true, {"csv", "json"});
    auto* e_bg = exp->add_subcommand("birthday-gap", "Base and birthday-repeated values (input: DIMACS)");
    list(e_bg, "--k", ep.k, "Clause subset sizes");
    list(e_bg, "--l", ep.l, "Variable subset sizes");
    add_common(e_bg, c, true, {"csv", "json"});
    auto* e_sub = exp->add_subcommand("subsample", "Mean subgame value by sample size (input: free game JSON)");
    list(e_sub, "--kappa", ep.kappa, "Sample sizes");
    add_common(e_sub, c, true, {"csv", "json"});
    auto* e_amp = exp->add_subcommand("amplify", "Threshold repetition values (input: game JSON)");
    list(e_amp, "--n", ep.n, "Coordinate counts");
    e_amp->add_option("--threshold", ep.threshold, "Fraction of coordinates to win")->check(CLI::Range(0.0, 1.0));
    add_common(e_amp, c, true, {"csv", "json"});
    auto* e_rep = exp->add_subcommand("report", "Run every experiment on the pinned corpus");
    e_rep->add_flag("--strict", ep.strict, "Exit 1 when an assertion fails");
    add_common(e_rep, c, false, {"human", "json"});

    // convert
    std::string from, to;
    auto* conv = app.add_subcommand("convert", "Convert between formats");
    conv->add_option("--from", from, "Source format")
        ->required()
        ->check(CLI::IsMember({"dimacs", "game-json", "csp-json"}));
    conv->add_option("--to", to, "Target format")
        ->required()
        ->check(CLI::IsMember({"cvgame", "2csp", "kcsp", "game-json", "csp-json"}));
    add_common(conv, c, true, {});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    for (CLI::App* leaf : {g_cex, g_cv, g_bd, g_par, g_thr, solve, e_vd, e_col, e_bg, e_sub, e_amp, e_rep, conv}) {
        if (!leaf->parsed()) continue;
        if (const auto* f = leaf->get_option_no_throw("--format"); f && f->count() == 0) c.format = f->get_default_str();
    }

    if (g_cex->parsed()) return gen_output(g_cex, c, game_json(counterexample_game(n), dense_cap(c)));
    if (g_cv->parsed()) {
        return gen_output(g_cv, c, game_json(clause_variable_game(parse_dimacs(read_input(c.input))), dense_cap(c)));
    }
    if (g_bd->parsed()) {
        return gen_output(g_bd, c, birthday_json(birthday_repetition(base_from(read_input(c.input)), k, l), dense_cap(c)));
    }
    if (g_par->parsed()) {
        return gen_output(g_par, c, game_json(parallel_repetition(two_prover(load_artifact(read_input(c.input))), m,
                                                                  dense_cap(c))));
    }
    if (g_thr->parsed()) {
        return gen_output(g_thr, c, game_json(threshold_repetition(two_prover(load_artifact(read_input(c.input))), n,
                                                                   threshold, dense_cap(c))));
    }
    if (solve->parsed()) return run_solve(solve, c, sp);
    if (e_vd->parsed()) return run_vardist(e_vd, c, ep);
    if (e_col->parsed()) return run_collision(e_col, c, ep);
    if (e_bg->parsed()) return run_birthday_gap(e_bg, c, ep);
    if (e_sub->parsed()) return run_subsample(e_sub, c, ep);
    if (e_amp->parsed()) return run_amplify(e_amp, c, ep);
    if (e_rep->parsed()) return run_report_cmd(e_rep, c, ep);
    if (conv->parsed()) return run_convert(conv, c, from, to);
    return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n'
                  << "estimated cost: " << format_double(e.estimated_cost()) << '\n'
                  << "budget: " << format_double(e.budget()) << '\n';
        return kBudget;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const PromiseViolation& e) {
        std::cerr << "promise violated: " << e.what() << " (found value " << format_double(e.found_value())
                  << ")\n";
        return kFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}

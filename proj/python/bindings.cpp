#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fgame/constructions.hpp"
#include "fgame/error.hpp"
#include "fgame/experiments.hpp"
#include "fgame/json_io.hpp"
#include "fgame/solvers.hpp"
#include "fgame/strategy.hpp"
#include "fgame/version.hpp"

namespace py = pybind11;
using namespace fgame;

namespace {

py::dict estimate_dict(const EstimateReport& r) {
    py::dict d;
    d["estimate"] = r.estimate;
    d["lower_bound"] = r.lower_bound;
    d["epsilon"] = r.epsilon;
    d["kappa"] = r.kappa;
    d["candidates"] = r.candidates;
    d["witness"] = r.witness.players;
    if (!r.sampled_subset.empty()) d["sampled_subset"] = r.sampled_subset;
    return d;
}

py::dict decision_dict(const DecisionReport& r) {
    py::dict d;
    d["value_one"] = r.verdict == Verdict::value_one;
    d["kappa"] = r.kappa;
    d["candidates"] = r.candidates;
    d["best_value"] = r.best_value;
    d["perfect"] = r.perfect ? py::cast(r.perfect->players) : py::none();
    d["refutation_size"] = r.refutation.size();
    d["refutation_truncated"] = r.refutation_truncated;
    return d;
}

const TwoProverGame& as_two(const py::object& g) {
    if (py::isinstance<FreeGame>(g)) return g.cast<const FreeGame&>().game();
    if (py::isinstance<BirthdayGame>(g)) return g.cast<const BirthdayGame&>().game().game();
    return g.cast<const TwoProverGame&>();
}

py::object artifact_object(Artifact a) {
    return std::visit([](auto&& v) { return py::cast(std::move(v)); }, std::move(a));
}

}  // namespace

PYBIND11_MODULE(_fgame, m) {
    m.doc() = "Free games: constructions, exact values, subsampling estimators and experiments";
    m.attr("__version__") = kVersion;
    m.attr("DEFAULT_BUDGET") = kDefaultBudget;

    auto& error = py::register_exception<Error>(m, "FgameError");
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", error.ptr());
    py::register_exception<PromiseViolation>(m, "PromiseViolation", error.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InvalidArgument& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const ParseError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<TwoProverGame>(m, "TwoProverGame")
        .def_property_readonly("shape", [](const TwoProverGame& g) {
            return py::make_tuple(g.x_count(), g.y_count(), g.a_count(), g.b_count());
        })
        .def_property_readonly("is_free", &TwoProverGame::is_free)
        .def("weight", &TwoProverGame::weight, py::arg("x"), py::arg("y"))
        .def("payoff", &TwoProverGame::payoff, py::arg("x"), py::arg("y"), py::arg("a"), py::arg("b"))
        .def("to_json", [](const TwoProverGame& g) { return dump_json(game_json(g)); });

    py::class_<FreeGame>(m, "FreeGame")
        .def_property_readonly("shape", [](const FreeGame& g) {
            return py::make_tuple(g.x_count(), g.y_count(), g.a_count(), g.b_count());
        })
        .def("payoff", &FreeGame::payoff, py::arg("x"), py::arg("y"), py::arg("a"), py::arg("b"))
        .def("to_json", [](const FreeGame& g) { return dump_json(game_json(g.game())); });

    py::class_<KFreeGame>(m, "KFreeGame")
        .def_property_readonly("question_counts", &KFreeGame::question_counts)
        .def_property_readonly("answer_counts", &KFreeGame::answer_counts)
        .def("to_json", [](const KFreeGame& g) { return dump_json(game_json(g)); });

    py::class_<BirthdayGame>(m, "BirthdayGame")
        .def_property_readonly("k", &BirthdayGame::k)
        .def_property_readonly("l", &BirthdayGame::l)
        .def_property_readonly("game", &BirthdayGame::game)
        .def("to_json", [](const BirthdayGame& g) { return dump_json(birthday_json(g)); });

    py::class_<DenseCsp>(m, "DenseCsp")
        .def_property_readonly("n_vars", &DenseCsp::n_vars)
        .def_property_readonly("alphabet", &DenseCsp::alphabet)
        .def_property_readonly("arity", &DenseCsp::arity)
        .def("to_json", [](const DenseCsp& c) { return dump_json(csp_json(c)); });

    m.def("free_game", [](std::uint64_t x, std::uint64_t y, std::uint64_t a, std::uint64_t b,
                          std::vector<double> table) { return make_free_game({x, y, a, b}, std::move(table)); },
          py::arg("x"), py::arg("y"), py::arg("a"), py::arg("b"), py::arg("table"),
          "Free game from a table row-major over (x, y, a, b).");
    m.def("kfree_game", [](std::vector<std::uint64_t> q, std::vector<std::uint64_t> a, std::vector<double> table) {
              return make_kfree_game(std::move(q), std::move(a), std::move(table));
          },
          py::arg("questions"), py::arg("answers"), py::arg("table"));
    m.def("counterexample_game", &counterexample_game, py::arg("n"));
    m.def("clause_variable_game", [](const std::string& dimacs) { return clause_variable_game(parse_dimacs(dimacs)); },
          py::arg("dimacs"));
    m.def("birthday_repetition",
          [](const py::object& base, std::uint64_t k, std::uint64_t l) { return birthday_repetition(as_two(base), k, l); },
          py::arg("base"), py::arg("k"), py::arg("l"));
    m.def("load_json", [](const std::string& text) { return artifact_object(artifact_from_json(parse_json(text))); },
          py::arg("text"));

    m.def("exact_value",
          [](const py::object& g, double budget, unsigned threads) {
              const ExactOptions opt{budget, threads};
              const auto v = py::isinstance<KFreeGame>(g) ? exact_value_k(g.cast<const KFreeGame&>(), opt)
                                                          : exact_value(as_two(g), opt);
              return py::make_tuple(v.value, v.witness ? py::cast(v.witness->players) : py::none());
          },
          py::arg("game"), py::arg("budget") = kDefaultBudget, py::arg("threads") = 1u,
          "(value, witness) by exhaustive search.");
    m.def("est",
          [](const py::object& g, double eps, std::optional<std::uint64_t> kappa, double budget, unsigned threads) {
              return estimate_dict(est_deterministic(as_two(g), eps, {budget, threads, kappa}));
          },
          py::arg("game"), py::arg("eps"), py::arg("kappa") = py::none(), py::arg("budget") = kDefaultBudget,
          py::arg("threads") = 1u);
    m.def("est_randomized",
          [](const py::object& g, double eps, std::uint64_t seed, std::optional<std::uint64_t> kappa, double budget,
             unsigned threads) { return estimate_dict(est_randomized(as_two(g), eps, seed, {budget, threads, kappa})); },
          py::arg("game"), py::arg("eps"), py::arg("seed"), py::arg("kappa") = py::none(),
          py::arg("budget") = kDefaultBudget, py::arg("threads") = 1u);
    m.def("decide_one_vs_gap",
          [](const py::object& g, double eps, std::optional<std::uint64_t> kappa, double budget, unsigned threads) {
              return decision_dict(decide_one_vs_gap(as_two(g), eps, {budget, threads, kappa, 1000}));
          },
          py::arg("game"), py::arg("eps"), py::arg("kappa") = py::none(), py::arg("budget") = kDefaultBudget,
          py::arg("threads") = 1u);
    m.def("decide_one_vs_delta",
          [](const py::object& g, double delta, std::optional<std::uint64_t> kappa, double budget, unsigned threads) {
              return decision_dict(decide_one_vs_delta(as_two(g), delta, {budget, threads, kappa, 1000}));
          },
          py::arg("game"), py::arg("delta"), py::arg("kappa") = py::none(), py::arg("budget") = kDefaultBudget,
          py::arg("threads") = 1u);
    m.def("est_k",
          [](const KFreeGame& g, double eps, double budget, unsigned threads) {
              return estimate_dict(est_k(g, eps, {budget, threads, std::nullopt}));
          },
          py::arg("game"), py::arg("eps"), py::arg("budget") = kDefaultBudget, py::arg("threads") = 1u);
    m.def("subsample_estimate",
          [](const KFreeGame& g, double eps, double lambda, std::optional<std::uint64_t> trials, std::uint64_t seed,
             double budget, unsigned threads) {
              SubsampleMode mode = ExactMode{};
              if (trials) mode = MonteCarloMode{*trials, seed};
              const auto s = subsample_estimate(g, eps, lambda, mode, {budget, threads, std::nullopt});
              py::dict d;
              d["mean"] = s.mean;
              d["kappa"] = s.kappa;
              d["samples"] = s.samples;
              d["stderr"] = s.stderr_estimate ? py::cast(*s.stderr_estimate) : py::none();
              return d;
          },
          py::arg("game"), py::arg("eps"), py::arg("lam") = 3.0, py::arg("trials") = py::none(),
          py::arg("seed") = 0, py::arg("budget") = kDefaultBudget, py::arg("threads") = 1u);
    m.def("to_kfree", [](const FreeGame& g) { return to_kfree(g); }, py::arg("game"));

    m.def("birthday_gap",
          [](const std::string& dimacs, std::uint64_t k, std::uint64_t l) {
              const auto r = birthday_gap(parse_dimacs(dimacs), k, l);
              py::dict d;
              d["base_value"] = to_string(r.base_value);
              d["repeated_value"] = to_string(r.repeated_value);
              d["gap"] = to_string(r.gap);
              d["distance"] = to_string(r.distance);
              d["holds"] = r.holds;
              return d;
          },
          py::arg("dimacs"), py::arg("k"), py::arg("l"), "Exact values as 'p/q' strings.");
    m.def("variation_distance",
          [](const std::string& dimacs, std::uint64_t k, std::uint64_t l) {
              const auto v = variation_distance(parse_dimacs(dimacs), k, l);
              return py::make_tuple(to_string(v.distance), v.process_matches);
          },
          py::arg("dimacs"), py::arg("k"), py::arg("l"));
    m.def("collision_probability",
          [](const std::string& edge_list, std::uint64_t k, std::uint64_t l) {
              const auto r = collision_probability(parse_edge_list(edge_list), k, l);
              return py::make_tuple(to_string(r.probability), to_string(r.bound), r.holds);
          },
          py::arg("edge_list"), py::arg("k"), py::arg("l"));
    m.def("run_report",
          [](unsigned threads) {
              const auto r = run_report({kDefaultBudget, threads});
              return py::make_tuple(r.markdown, r.all_passed());
          },
          py::arg("threads") = 1u, "(markdown, all_passed) for the pinned corpus.");
}

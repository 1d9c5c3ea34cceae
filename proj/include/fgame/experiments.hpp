#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fgame/budget.hpp"
#include "fgame/csp.hpp"
#include "fgame/game.hpp"

namespace fgame {

using Rational = boost::multiprecision::cpp_rational;

// "p/q" in lowest terms, or "p" for integers.
std::string to_string(const Rational& r);
double to_double(const Rational& r);

// The fraction count/denominator closest to value; throws Error unless
// value * denominator is within 1e-6 of an integer. Game values computed by
// the exact solvers over uniform distributions are such fractions.
Rational as_fraction(double value, std::uint64_t denominator);

struct ExperimentOptions {
    double budget = kDefaultBudget;
    unsigned threads = 1;
};

// Bipartite graph on left vertices [0, left) and right vertices [0, right).
struct BipartiteGraph {
    std::uint64_t left = 0;
    std::uint64_t right = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
};

// Text form: a header line "left right" then one "u v" line per edge;
// blank lines and lines starting with '#' are ignored.
BipartiteGraph parse_edge_list(std::string_view text);
std::string to_edge_list(const BipartiteGraph& graph);

// Clause i is joined to the variables it contains.
BipartiteGraph incidence_graph(const CnfFormula& formula);

struct Degrees {
    std::uint64_t left = 0;
    std::uint64_t right = 0;
};

// Common left and right degrees; throws InvalidArgument on repeated edges,
// out-of-range endpoints or unequal degrees on either side.
Degrees regular_degrees(const BipartiteGraph& graph);

// Two distributions over (I, J) with |I| = k clauses and |J| = l variables.
// Entry e of every column is the pair (support[e].first, support[e].second)
// of colex ranks, I-major.
struct DistributionPair {
    std::uint64_t m = 0, n = 0, k = 0, l = 0;
    std::uint64_t row_degree = 0, column_degree = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> support;
    // Number of clause/variable incidences inside I x J.
    std::vector<std::uint64_t> s;
    std::vector<Rational> u_prob;
    // Pr_U[(I, J)] * S_IJ / (row_degree * k * l / n).
    std::vector<Rational> d_prob;
};

// Closed-form pair for a balanced formula; throws InvalidArgument otherwise.
DistributionPair closed_form_distribution(const CnfFormula& formula, std::uint64_t k, std::uint64_t l,
                                          const ExperimentOptions& options = {});

// The distribution of (I, J) produced by drawing an incident clause/variable
// pair uniformly and completing each side with a uniform subset, by exact
// enumeration of every draw. Indexed like DistributionPair::support.
std::vector<Rational> process_distribution(const CnfFormula& formula, std::uint64_t k, std::uint64_t l,
                                           const ExperimentOptions& options = {});

struct VariationDistance {
    Rational distance;
    // sqrt(n / (k l)), the order of the upper bound.
    double bound_rhs = 0.0;
    bool process_matches = false;
    DistributionPair pair;
};

VariationDistance variation_distance(const CnfFormula& formula, std::uint64_t k, std::uint64_t l,
                                     const ExperimentOptions& options = {});

// Rows "i_rank,j_rank,s,u_prob,d_prob" with exact fractions.
std::string distribution_csv(const DistributionPair& pair);

struct CollisionRecord {
    std::uint64_t m = 0, n = 0, c = 0, d = 0, k = 0, l = 0;
    // Probability that random k left and l right vertices span an edge.
    Rational probability;
    // (c k l / n)(1 - c^2 k^2 / n - c k l / n).
    Rational bound;
    bool bound_positive = false;
    // probability >= bound, checked only when the bound is positive.
    bool holds = true;
};

CollisionRecord collision_probability(const BipartiteGraph& graph, std::uint64_t k, std::uint64_t l,
                                      const ExperimentOptions& options = {});

std::string collision_csv(std::span<const CollisionRecord> rows);

struct BirthdayGapRecord {
    std::uint64_t k = 0, l = 0;
    Rational base_value;
    Rational repeated_value;
    // repeated_value - base_value.
    Rational gap;
    Rational distance;
    // gap <= distance.
    bool holds = false;
    // (1 - repeated_value) * n / (k l).
    double small_subset_ratio = 0.0;
};

BirthdayGapRecord birthday_gap(const CnfFormula& formula, std::uint64_t k, std::uint64_t l,
                               const ExperimentOptions& options = {});

std::string birthday_gap_csv(std::span<const BirthdayGapRecord> rows);

struct SubsampleGapRow {
    std::uint64_t kappa = 0;
    // Exact mean of omega over all product subsets with |S_i| = min(kappa, |Y_i|).
    double mean = 0.0;
    double omega = 0.0;
    double upper_gap = 0.0;
    // Error implied by inverting kappa = eps^-3 ln(|B_1| ... |B_k|).
    double implied_epsilon = 0.0;
    bool lower_holds = false;
};

std::vector<SubsampleGapRow> subsample_gap_curve(const KFreeGame& game, std::span<const std::uint64_t> kappas,
                                                 const ExperimentOptions& options = {});
std::vector<SubsampleGapRow> subsample_gap_curve(const FreeGame& game, std::span<const std::uint64_t> kappas,
                                                 const ExperimentOptions& options = {});

std::string subsample_gap_csv(std::span<const SubsampleGapRow> rows);

enum class Direction { non_decreasing, non_increasing, none };

struct AmplificationCurve {
    double base_value = 0.0;
    double threshold = 0.0;
    // Direction required by the base value relative to the threshold.
    Direction expected = Direction::none;
    std::vector<std::pair<std::uint64_t, double>> values;
    bool holds = true;
};

// Exact values of the threshold repetition for each N (taken in increasing order).
AmplificationCurve amplification_curve(const TwoProverGame& base, std::span<const std::uint64_t> ns,
                                       double threshold, const ExperimentOptions& options = {});

std::string amplification_csv(const AmplificationCurve& curve);

struct Assertion {
    std::string experiment;
    std::string instance;
    bool passed = false;
    std::string detail;
};

struct ExperimentReport {
    std::vector<Assertion> assertions;
    std::string markdown;

    bool all_passed() const;
};

// Runs every experiment on the pinned corpus.
ExperimentReport run_report(const ExperimentOptions& options = {});

}  // namespace fgame

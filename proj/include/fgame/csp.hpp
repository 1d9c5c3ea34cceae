#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fgame/budget.hpp"
#include "fgame/oracle.hpp"

namespace fgame {

// 3-CNF formula. Literals are signed 1-based variable indices.
class CnfFormula {
public:
    using Clause = std::array<std::int64_t, 3>;

    // Throws InvalidArgument unless every clause has three distinct in-range variables.
    CnfFormula(std::uint64_t n_vars, std::vector<Clause> clauses);

    std::uint64_t n_vars() const noexcept { return n_vars_; }
    const std::vector<Clause>& clauses() const noexcept { return clauses_; }
    std::uint64_t m() const noexcept { return clauses_.size(); }

    // Clause count containing each variable (0-based).
    const std::vector<std::uint64_t>& occurrences() const noexcept { return occurrences_; }
    // d when every variable occurs in exactly d >= 1 clauses.
    std::optional<std::uint64_t> balance_degree() const noexcept { return balance_; }

    // assignment[v - 1] is the 0/1 value of variable v.
    bool satisfies(std::size_t c, std::span<const std::uint8_t> assignment) const;

private:
    std::uint64_t n_vars_;
    std::vector<Clause> clauses_;
    std::vector<std::uint64_t> occurrences_;
    std::optional<std::uint64_t> balance_;
};

CnfFormula parse_dimacs(std::string_view text);
std::string to_dimacs(const CnfFormula& formula);

struct SatValue {
    double value = 0.0;
    std::optional<std::vector<std::uint64_t>> witness;
    // Set when there was nothing to satisfy and the value is 1 by convention.
    bool vacuous = false;
};

struct SolveOptions {
    double budget = kDefaultBudget;
    unsigned threads = 1;
};

// Maximum fraction of satisfied clauses over all 2^n assignments.
SatValue sat_value_cnf(const CnfFormula& formula, const SolveOptions& options = {});

struct CspConstraint {
    std::vector<std::uint64_t> scope;
    double weight = 1.0;
    // Indexed by the symbols of the scope variables, in scope order.
    VerificationOracle payoff;
};

class DenseCsp {
public:
    DenseCsp(std::uint64_t n_vars, std::uint64_t alphabet, std::uint64_t arity, std::vector<CspConstraint> constraints);

    std::uint64_t n_vars() const noexcept { return n_vars_; }
    std::uint64_t alphabet() const noexcept { return alphabet_; }
    std::uint64_t arity() const noexcept { return arity_; }
    const std::vector<CspConstraint>& constraints() const noexcept { return constraints_; }
    double total_weight() const noexcept { return total_weight_; }

    // Weighted average payoff of a full assignment; 1 when there are no constraints.
    double evaluate(std::span<const std::uint64_t> assignment) const;

private:
    std::uint64_t n_vars_;
    std::uint64_t alphabet_;
    std::uint64_t arity_;
    std::vector<CspConstraint> constraints_;
    double total_weight_ = 0.0;
};

struct CspSolveOptions : SolveOptions {
    // Score an instance without constraints as 1 (flagged) instead of throwing.
    bool allow_vacuous = false;
};

SatValue csp_sat_value(const DenseCsp& csp, const CspSolveOptions& options = {});

// Worst-case evaluation count of csp_sat_value.
double csp_sat_value_cost(const DenseCsp& csp);

// Keeps the constraints whose scope lies inside `vars`; variables are renumbered
// by their position in the sorted subset.
DenseCsp csp_restrict(const DenseCsp& csp, std::span<const std::uint64_t> vars);

struct ExactMode {};
struct MonteCarloMode {
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
};
using SubsampleMode = std::variant<ExactMode, MonteCarloMode>;

struct SubsampleMean {
    std::uint64_t t = 0;
    double mean = 0.0;
    std::uint64_t samples = 0;
    std::optional<double> stderr_estimate;
    // Subsets with no surviving constraint (each scored 1).
    std::uint64_t vacuous = 0;
};

// E_I[SAT(csp restricted to I)] over uniformly random t-subsets I of the variables.
SubsampleMean csp_subsample_mean(const DenseCsp& csp, std::uint64_t t, const SubsampleMode& mode,
                                 const SolveOptions& options = {});

// CSV with header t,mean,stderr,n_samples.
std::string subsample_csv(std::span<const SubsampleMean> rows);

}  // namespace fgame

#include "fgame/csp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "fgame/combinatorics.hpp"
#include "fgame/error.hpp"
#include "fgame/format.hpp"
#include "fgame/parallel.hpp"
#include "fgame/rng.hpp"

namespace fgame {

namespace {

constexpr double kTieTolerance = 1e-12;

std::uint64_t variable_of(std::int64_t literal) {
    return static_cast<std::uint64_t>(literal < 0 ? -literal : literal);
}

}  // namespace

// ---------------------------------------------------------------------------
// CNF

CnfFormula::CnfFormula(std::uint64_t n_vars, std::vector<Clause> clauses)
    : n_vars_(n_vars), clauses_(std::move(clauses)), occurrences_(n_vars, 0) {
    if (n_vars_ == 0) throw InvalidArgument("formula needs at least one variable");
    for (std::size_t c = 0; c < clauses_.size(); ++c) {
        const auto& clause = clauses_[c];
        for (std::size_t i = 0; i < 3; ++i) {
            const auto v = variable_of(clause[i]);
            if (clause[i] == 0 || v > n_vars_) {
                throw InvalidArgument("clause " + std::to_string(c + 1) + " has literal " +
                                      std::to_string(clause[i]) + " out of range");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (variable_of(clause[j]) == v) {
                    throw InvalidArgument("clause " + std::to_string(c + 1) + " repeats variable " +
                                          std::to_string(v));
                }
            }
            ++occurrences_[v - 1];
        }
    }
    const auto d = occurrences_.front();
    if (d > 0 && std::all_of(occurrences_.begin(), occurrences_.end(), [d](auto o) { return o == d; })) {
        balance_ = d;
    }
}

bool CnfFormula::satisfies(std::size_t c, std::span<const std::uint8_t> assignment) const {
    for (auto lit : clauses_[c]) {
        const bool value = assignment[variable_of(lit) - 1] != 0;
        if (value == (lit > 0)) return true;
    }
    return false;
}

CnfFormula parse_dimacs(std::string_view text) {
    std::optional<std::uint64_t> n_vars, n_clauses;
    std::size_t header_line = 0;
    std::vector<CnfFormula::Clause> clauses;
    std::vector<std::int64_t> current;
    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
        if (line.empty() || line.front() == 'c') continue;
        if (line.front() == '%') break;
        std::istringstream in{std::string(line)};
        if (line.front() == 'p') {
            std::string p, fmt;
            long long n = -1, m = -1;
            std::string extra;
            if (n_vars) throw ParseError(line_no, "duplicate problem line");
            if (!(in >> p >> fmt >> n >> m) || p != "p" || fmt != "cnf" || (in >> extra) || n <= 0 || m < 0) {
                throw ParseError(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
            }
            n_vars = static_cast<std::uint64_t>(n);
            n_clauses = static_cast<std::uint64_t>(m);
            header_line = line_no;
            continue;
        }
        if (!n_vars) throw ParseError(line_no, "clause before the problem line");
        std::string token;
        while (in >> token) {
            std::int64_t lit = 0;
            const auto res = std::from_chars(token.data(), token.data() + token.size(), lit);
            if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
                throw ParseError(line_no, "invalid literal '" + token + "'");
            }
            if (lit == 0) {
                if (current.size() != 3) {
                    throw ParseError(line_no, "clause has " + std::to_string(current.size()) +
                                                  " literals, expected 3");
                }
                clauses.push_back({current[0], current[1], current[2]});
                current.clear();
                continue;
            }
            const auto v = variable_of(lit);
            if (v > *n_vars) throw ParseError(line_no, "literal " + token + " exceeds variable count");
            for (auto prev : current) {
                if (variable_of(prev) == v) throw ParseError(line_no, "clause repeats variable " + std::to_string(v));
            }
            if (current.size() == 3) throw ParseError(line_no, "clause has more than 3 literals");
            current.push_back(lit);
        }
    }
    if (!n_vars) throw ParseError(line_no, "missing problem line");
    if (!current.empty()) throw ParseError(line_no, "unterminated clause");
    if (clauses.size() != *n_clauses) {
        throw ParseError(header_line, "header declares " + std::to_string(*n_clauses) + " clauses, found " +
                                          std::to_string(clauses.size()));
    }
    return CnfFormula(*n_vars, std::move(clauses));
}

std::string to_dimacs(const CnfFormula& formula) {
    std::string out = "p cnf " + std::to_string(formula.n_vars()) + " " + std::to_string(formula.m()) + "\n";
    for (const auto& c : formula.clauses()) {
        out += std::to_string(c[0]) + " " + std::to_string(c[1]) + " " + std::to_string(c[2]) + " 0\n";
    }
    return out;
}

SatValue sat_value_cnf(const CnfFormula& formula, const SolveOptions& options) {
    SatValue out;
    const std::uint64_t n = formula.n_vars();
    if (formula.m() == 0) {
        out.value = 1.0;
        out.vacuous = true;
        out.witness = std::vector<std::uint64_t>(n, 0);
        return out;
    }
    if (n >= 63) throw BudgetExceeded("sat_value_cnf", std::ldexp(static_cast<double>(formula.m()), 63), options.budget);
    const std::uint64_t total = std::uint64_t{1} << n;
    require_budget("sat_value_cnf", static_cast<double>(total) * static_cast<double>(formula.m()), options.budget);

    // Clause masks: bit v-1 of `pos` / `neg` marks a positive / negative literal.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> masks;
    for (const auto& c : formula.clauses()) {
        std::uint64_t pos = 0, neg = 0;
        for (auto lit : c) (lit > 0 ? pos : neg) |= std::uint64_t{1} << (variable_of(lit) - 1);
        masks.emplace_back(pos, neg);
    }
    const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(total, 64));
    std::vector<std::pair<std::uint64_t, std::uint64_t>> best(chunks, {0, 0});
    parallel_chunks(chunks, options.threads, [&](std::size_t chunk) {
        const auto [begin, end] = chunk_range(total, chunks, chunk);
        std::uint64_t top = 0, arg = begin;
        for (std::uint64_t a = begin; a < end; ++a) {
            std::uint64_t sat = 0;
            for (const auto& [pos, neg] : masks) sat += ((a & pos) | (~a & neg)) != 0;
            if (sat > top) top = sat, arg = a;
        }
        best[chunk] = {top, arg};
    });
    auto winner = best.front();
    for (const auto& b : best) {
        if (b.first > winner.first) winner = b;
    }
    out.value = static_cast<double>(winner.first) / static_cast<double>(formula.m());
    out.witness = std::vector<std::uint64_t>(n);
    for (std::uint64_t v = 0; v < n; ++v) (*out.witness)[v] = (winner.second >> v) & 1;
    return out;
}

// ---------------------------------------------------------------------------
// Dense CSP

DenseCsp::DenseCsp(std::uint64_t n_vars, std::uint64_t alphabet, std::uint64_t arity,
                   std::vector<CspConstraint> constraints)
    : n_vars_(n_vars), alphabet_(alphabet), arity_(arity), constraints_(std::move(constraints)) {
    if (n_vars_ == 0) throw InvalidArgument("CSP needs at least one variable");
    if (alphabet_ == 0) throw InvalidArgument("alphabet must be nonempty");
    if (arity_ < 2) throw InvalidArgument("CSP arity must be at least 2");
    const std::vector<std::uint64_t> dims(arity_, alphabet_);
    for (std::size_t c = 0; c < constraints_.size(); ++c) {
        const auto& con = constraints_[c];
        const std::string where = "constraint " + std::to_string(c) + ": ";
        if (con.scope.size() != arity_) throw InvalidArgument(where + "scope size differs from arity");
        std::set<std::uint64_t> seen;
        for (auto v : con.scope) {
            if (v >= n_vars_) throw InvalidArgument(where + "variable " + std::to_string(v) + " out of range");
            if (!seen.insert(v).second) throw InvalidArgument(where + "scope repeats variable " + std::to_string(v));
        }
        if (!(con.weight > 0.0) || !std::isfinite(con.weight)) throw InvalidArgument(where + "weight must be positive");
        if (con.payoff.dims() != dims) throw InvalidArgument(where + "payoff dimensions must be alphabet^arity");
        total_weight_ += con.weight;
    }
}

namespace {

// Payoff lookup shared by evaluation and the solver.
class ConstraintEval {
public:
    explicit ConstraintEval(const DenseCsp& csp) : csp_(csp), index_(csp.arity()) {
        for (const auto& c : csp.constraints()) tables_.push_back(c.payoff.is_dense() ? c.payoff.table().data() : nullptr);
    }

    double operator()(std::size_t c, std::span<const std::uint64_t> assignment) {
        const auto& con = csp_.constraints()[c];
        if (tables_[c]) {
            std::uint64_t flat = 0;
            for (auto v : con.scope) flat = flat * csp_.alphabet() + assignment[v];
            return tables_[c][flat];
        }
        for (std::size_t j = 0; j < con.scope.size(); ++j) index_[j] = assignment[con.scope[j]];
        return con.payoff(index_);
    }

private:
    const DenseCsp& csp_;
    std::vector<const double*> tables_;
    std::vector<std::uint64_t> index_;
};

// Variables that share no constraint with each other; their optimum
// decomposes once the remaining variables are fixed. Greedy by degree.
std::vector<bool> independent_variables(const DenseCsp& csp) {
    const auto n = csp.n_vars();
    std::vector<std::vector<std::size_t>> incident(n);
    for (std::size_t c = 0; c < csp.constraints().size(); ++c) {
        for (auto v : csp.constraints()[c].scope) incident[v].push_back(c);
    }
    std::vector<std::uint64_t> order(n);
    for (std::uint64_t v = 0; v < n; ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return incident[a].size() < incident[b].size(); });
    std::vector<bool> free(n, false), blocked(n, false);
    for (auto v : order) {
        if (blocked[v]) continue;
        free[v] = true;
        for (auto c : incident[v]) {
            for (auto u : csp.constraints()[c].scope) blocked[u] = true;
        }
    }
    return free;
}

}  // namespace

double DenseCsp::evaluate(std::span<const std::uint64_t> assignment) const {
    if (assignment.size() != n_vars_) throw InvalidArgument("assignment size differs from variable count");
    for (auto s : assignment) {
        if (s >= alphabet_) throw InvalidArgument("assignment symbol out of range");
    }
    if (constraints_.empty()) return 1.0;
    ConstraintEval eval(*this);
    double total = 0.0;
    for (std::size_t c = 0; c < constraints_.size(); ++c) total += constraints_[c].weight * eval(c, assignment);
    return std::clamp(total / total_weight_, 0.0, 1.0);
}

double csp_sat_value_cost(const DenseCsp& csp) {
    const auto free = independent_variables(csp);
    double enumerated = 0.0, per_leaf = 0.0;
    for (std::uint64_t v = 0; v < csp.n_vars(); ++v) enumerated += free[v] ? 0.0 : 1.0;
    for (const auto& c : csp.constraints()) {
        const bool touches_free = std::any_of(c.scope.begin(), c.scope.end(), [&](auto v) { return free[v]; });
        per_leaf += touches_free ? static_cast<double>(csp.alphabet()) : 1.0;
    }
    return std::pow(static_cast<double>(csp.alphabet()), enumerated) * std::max(per_leaf, 1.0);
}

SatValue csp_sat_value(const DenseCsp& csp, const CspSolveOptions& options) {
    SatValue out;
    if (csp.constraints().empty()) {
        if (!options.allow_vacuous) throw InvalidArgument("CSP has no constraints; its value is undefined");
        out.value = 1.0;
        out.vacuous = true;
        out.witness = std::vector<std::uint64_t>(csp.n_vars(), 0);
        return out;
    }
    require_budget("csp_sat_value", csp_sat_value_cost(csp), options.budget);

    const auto n = csp.n_vars();
    const auto sigma = csp.alphabet();
    const auto free = independent_variables(csp);
    std::vector<std::uint64_t> enumerated, free_vars;
    for (std::uint64_t v = 0; v < n; ++v) (free[v] ? free_vars : enumerated).push_back(v);
    // owner[c] = index into free_vars of the free variable in constraint c, or -1.
    std::vector<std::ptrdiff_t> owner(csp.constraints().size(), -1);
    std::vector<std::ptrdiff_t> free_slot(n, -1);
    for (std::size_t i = 0; i < free_vars.size(); ++i) free_slot[free_vars[i]] = static_cast<std::ptrdiff_t>(i);
    for (std::size_t c = 0; c < csp.constraints().size(); ++c) {
        for (auto v : csp.constraints()[c].scope) {
            if (free[v]) owner[c] = free_slot[v];
        }
    }

    const std::uint64_t total = checked_pow(sigma, enumerated.size());
    const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(total, 64));
    const double tol = kTieTolerance * csp.total_weight();
    struct ChunkBest {
        double value = -std::numeric_limits<double>::infinity();
        std::vector<std::uint64_t> assignment;
    };
    std::vector<ChunkBest> results(chunks);

    parallel_chunks(chunks, options.threads, [&](std::size_t chunk) {
        const auto [begin, end] = chunk_range(total, chunks, chunk);
        ConstraintEval eval(csp);
        std::vector<std::uint64_t> assignment(n, 0);
        // Enumerated variables form a counter, the first one most significant.
        std::uint64_t rem = begin;
        for (std::size_t i = enumerated.size(); i-- > 0;) {
            assignment[enumerated[i]] = rem % sigma;
            rem /= sigma;
        }
        std::vector<double> scores(free_vars.size() * sigma);
        ChunkBest& best = results[chunk];
        for (std::uint64_t it = begin; it < end; ++it) {
            double base = 0.0;
            std::fill(scores.begin(), scores.end(), 0.0);
            for (std::size_t c = 0; c < csp.constraints().size(); ++c) {
                const double w = csp.constraints()[c].weight;
                if (owner[c] < 0) {
                    base += w * eval(c, assignment);
                    continue;
                }
                const auto v = free_vars[static_cast<std::size_t>(owner[c])];
                double* row = scores.data() + static_cast<std::size_t>(owner[c]) * sigma;
                for (std::uint64_t s = 0; s < sigma; ++s) {
                    assignment[v] = s;
                    row[s] += w * eval(c, assignment);
                }
            }
            double value = base;
            for (std::size_t i = 0; i < free_vars.size(); ++i) {
                const double* row = scores.data() + i * sigma;
                std::uint64_t arg = 0;
                for (std::uint64_t s = 1; s < sigma; ++s) {
                    if (row[s] > row[arg]) arg = s;
                }
                assignment[free_vars[i]] = arg;
                value += row[arg];
            }
            if (value > best.value + tol) {
                best.value = value;
                best.assignment = assignment;
            }
            for (std::size_t i = enumerated.size(); i-- > 0;) {
                if (++assignment[enumerated[i]] < sigma) break;
                assignment[enumerated[i]] = 0;
            }
        }
    });

    const ChunkBest* winner = &results.front();
    for (const auto& r : results) {
        if (r.value > winner->value + tol) winner = &r;
    }
    out.value = std::clamp(winner->value / csp.total_weight(), 0.0, 1.0);
    out.witness = winner->assignment;
    return out;
}

DenseCsp csp_restrict(const DenseCsp& csp, std::span<const std::uint64_t> vars) {
    if (vars.empty()) throw InvalidArgument("restriction needs a nonempty variable subset");
    std::vector<std::uint64_t> sorted(vars.begin(), vars.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidArgument("restriction subset has duplicates");
    }
    if (sorted.back() >= csp.n_vars()) throw InvalidArgument("restriction subset out of range");
    std::vector<std::int64_t> rename(csp.n_vars(), -1);
    for (std::size_t i = 0; i < sorted.size(); ++i) rename[sorted[i]] = static_cast<std::int64_t>(i);
    std::vector<CspConstraint> kept;
    for (const auto& c : csp.constraints()) {
        if (std::any_of(c.scope.begin(), c.scope.end(), [&](auto v) { return rename[v] < 0; })) continue;
        CspConstraint copy = c;
        for (auto& v : copy.scope) v = static_cast<std::uint64_t>(rename[v]);
        kept.push_back(std::move(copy));
    }
    return DenseCsp(sorted.size(), csp.alphabet(), csp.arity(), std::move(kept));
}

SubsampleMean csp_subsample_mean(const DenseCsp& csp, std::uint64_t t, const SubsampleMode& mode,
                                 const SolveOptions& options) {
    if (t == 0 || t > csp.n_vars()) throw InvalidArgument("subset size must lie in [1, n]");
    CspSolveOptions inner;
    inner.budget = options.budget;
    inner.allow_vacuous = true;
    SubsampleMean out;
    out.t = t;
    const SubsetIndex index(csp.n_vars(), t);

    if (std::holds_alternative<ExactMode>(mode)) {
        const double cost = static_cast<double>(index.count()) * std::pow(static_cast<double>(csp.alphabet()), t);
        require_budget("csp_subsample_mean", cost, options.budget);
        const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(index.count(), 64));
        std::vector<double> sums(chunks, 0.0);
        std::vector<std::uint64_t> vacuous(chunks, 0);
        parallel_chunks(chunks, options.threads, [&](std::size_t chunk) {
            const auto [begin, end] = chunk_range(index.count(), chunks, chunk);
            auto subset = index.unrank(begin);
            for (std::uint64_t r = begin; r < end; ++r) {
                const auto v = csp_sat_value(csp_restrict(csp, subset), inner);
                sums[chunk] += v.value;
                vacuous[chunk] += v.vacuous;
                next_combination(subset, csp.n_vars());
            }
        });
        double total = 0.0;
        for (std::size_t c = 0; c < chunks; ++c) total += sums[c], out.vacuous += vacuous[c];
        out.samples = index.count();
        out.mean = total / static_cast<double>(out.samples);
        return out;
    }

    const auto& mc = std::get<MonteCarloMode>(mode);
    if (mc.trials == 0) throw InvalidArgument("Monte Carlo mode needs at least one trial");
    std::vector<double> values(mc.trials);
    std::vector<std::uint8_t> flags(mc.trials);
    const Rng root(mc.seed);
    const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(mc.trials, 64));
    parallel_chunks(chunks, options.threads, [&](std::size_t chunk) {
        const auto [begin, end] = chunk_range(mc.trials, chunks, chunk);
        for (std::uint64_t i = begin; i < end; ++i) {
            auto rng = root.split(i);
            const auto v = csp_sat_value(csp_restrict(csp, rng.subset(csp.n_vars(), t)), inner);
            values[i] = v.value;
            flags[i] = v.vacuous;
        }
    });
    double total = 0.0;
    for (std::uint64_t i = 0; i < mc.trials; ++i) total += values[i], out.vacuous += flags[i];
    out.samples = mc.trials;
    out.mean = total / static_cast<double>(mc.trials);
    if (mc.trials >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.stderr_estimate = std::sqrt(ss / static_cast<double>(mc.trials - 1) / static_cast<double>(mc.trials));
    }
    return out;
}

std::string subsample_csv(std::span<const SubsampleMean> rows) {
    std::string out = "t,mean,stderr,n_samples\n";
    for (const auto& r : rows) {
        out += std::to_string(r.t) + "," + format_double(r.mean) + "," +
               (r.stderr_estimate ? format_double(*r.stderr_estimate) : std::string()) + "," +
               std::to_string(r.samples) + "\n";
    }
    return out;
}

}  // namespace fgame

#pragma once

#include <atomic>
#include <cstdint>
#include <string>

namespace fgame {

// Default ceiling on verifier evaluations for exhaustive procedures.
inline constexpr double kDefaultBudget = 1e8;

// Shared evaluation counter. Workers charge work in batches and the first
// charge that crosses the ceiling throws BudgetExceeded.
class WorkMeter {
public:
    WorkMeter(std::string what, double budget, double estimated_cost)
        : what_(std::move(what)), budget_(budget), estimated_(estimated_cost) {}

    WorkMeter(const WorkMeter&) = delete;
    WorkMeter& operator=(const WorkMeter&) = delete;

    void charge(std::uint64_t units);

    std::uint64_t used() const noexcept { return used_.load(std::memory_order_relaxed); }
    double budget() const noexcept { return budget_; }

private:
    std::string what_;
    double budget_;
    double estimated_;
    std::atomic<std::uint64_t> used_{0};
};

// Throws BudgetExceeded when cost > budget.
void require_budget(const std::string& what, double cost, double budget);

}  // namespace fgame

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace fgame {

// Pure payoff map from a full index tuple to [0,1].
//
// The index tuple is laid out as the game describes it: (x, y, a, b) for two
// provers and (y_1..y_k, b_1..b_k) for k provers. Dense tables are row-major
// over that tuple, last index fastest. Copies share the underlying storage.
class VerificationOracle {
public:
    using Rule = std::function<double(std::span<const std::uint64_t>)>;

    static VerificationOracle dense(std::vector<std::uint64_t> dims, std::vector<double> table);
    // `cost` is the declared number of primitive evaluations one call performs.
    static VerificationOracle rule(std::vector<std::uint64_t> dims, Rule fn, double cost = 1.0);

    double operator()(std::span<const std::uint64_t> index) const;
    double operator()(std::initializer_list<std::uint64_t> index) const {
        return (*this)(std::span<const std::uint64_t>(index.begin(), index.size()));
    }

    bool is_dense() const noexcept;
    const std::vector<std::uint64_t>& dims() const noexcept;
    std::uint64_t size() const noexcept;
    double evaluation_cost() const noexcept;

    // Dense storage; throws InvalidArgument for rule oracles.
    const std::vector<double>& table() const;
    double at_flat(std::uint64_t flat) const { return table()[flat]; }

    std::uint64_t flatten(std::span<const std::uint64_t> index) const;

    // Tabulates a rule oracle (copy for dense ones). Validates the [0,1] range.
    VerificationOracle materialize(double max_entries) const;

    // True when every entry is exactly 0 or 1 (dense only; rules are tabulated first).
    bool is_boolean(double max_entries) const;

    struct Impl;

private:
    explicit VerificationOracle(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

}  // namespace fgame

#include "fgame/oracle.hpp"

#include <cmath>
#include <string>

#include "fgame/combinatorics.hpp"
#include "fgame/error.hpp"

namespace fgame {

struct VerificationOracle::Impl {
    std::vector<std::uint64_t> dims;
    std::vector<std::uint64_t> strides;
    std::uint64_t size = 1;
    std::vector<double> table;
    Rule rule;
    double cost = 1.0;
};

namespace {

void check_payoff(double v, std::uint64_t flat) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidArgument("verifier value " + std::to_string(v) + " at flat index " +
                              std::to_string(flat) + " is outside [0,1]");
    }
}

std::shared_ptr<VerificationOracle::Impl> make_impl(std::vector<std::uint64_t> dims) {
    auto impl = std::make_shared<VerificationOracle::Impl>();
    for (auto d : dims) {
        if (d == 0) throw InvalidArgument("verifier dimensions must be positive");
    }
    impl->size = checked_product(dims);
    impl->strides.assign(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) impl->strides[i - 1] = impl->strides[i] * dims[i];
    impl->dims = std::move(dims);
    return impl;
}

}  // namespace

VerificationOracle VerificationOracle::dense(std::vector<std::uint64_t> dims, std::vector<double> table) {
    auto impl = make_impl(std::move(dims));
    if (table.size() != impl->size) {
        throw InvalidArgument("verifier table has " + std::to_string(table.size()) +
                              " entries, expected " + std::to_string(impl->size));
    }
    for (std::uint64_t i = 0; i < table.size(); ++i) check_payoff(table[i], i);
    impl->table = std::move(table);
    return VerificationOracle(std::move(impl));
}

VerificationOracle VerificationOracle::rule(std::vector<std::uint64_t> dims, Rule fn, double cost) {
    if (!fn) throw InvalidArgument("rule oracle needs a callable");
    auto impl = make_impl(std::move(dims));
    impl->rule = std::move(fn);
    impl->cost = cost;
    return VerificationOracle(std::move(impl));
}

double VerificationOracle::operator()(std::span<const std::uint64_t> index) const {
    if (impl_->rule) return impl_->rule(index);
    return impl_->table[flatten(index)];
}

bool VerificationOracle::is_dense() const noexcept { return !impl_->rule; }
const std::vector<std::uint64_t>& VerificationOracle::dims() const noexcept { return impl_->dims; }
std::uint64_t VerificationOracle::size() const noexcept { return impl_->size; }
double VerificationOracle::evaluation_cost() const noexcept { return impl_->cost; }

const std::vector<double>& VerificationOracle::table() const {
    if (impl_->rule) throw InvalidArgument("rule oracle has no dense table");
    return impl_->table;
}

std::uint64_t VerificationOracle::flatten(std::span<const std::uint64_t> index) const {
    std::uint64_t flat = 0;
    for (std::size_t i = 0; i < index.size(); ++i) flat += index[i] * impl_->strides[i];
    return flat;
}

VerificationOracle VerificationOracle::materialize(double max_entries) const {
    if (!impl_->rule) return *this;
    if (static_cast<double>(impl_->size) > max_entries) {
        throw BudgetExceeded("materializing verifier table", static_cast<double>(impl_->size), max_entries);
    }
    std::vector<double> table(impl_->size);
    std::vector<std::uint64_t> index(impl_->dims.size(), 0);
    // Row-major order: last index fastest.
    for (std::uint64_t flat = 0; flat < impl_->size; ++flat) {
        const double v = impl_->rule(index);
        check_payoff(v, flat);
        table[flat] = v;
        for (std::size_t i = index.size(); i-- > 0;) {
            if (++index[i] < impl_->dims[i]) break;
            index[i] = 0;
        }
    }
    return dense(impl_->dims, std::move(table));
}

bool VerificationOracle::is_boolean(double max_entries) const {
    const auto dense_oracle = materialize(max_entries);
    for (double v : dense_oracle.table()) {
        if (v != 0.0 && v != 1.0) return false;
    }
    return true;
}

}  // namespace fgame

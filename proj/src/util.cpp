#include <algorithm>
#include <charconv>
#include <atomic>
#include <limits>
#include <cmath>
#include <exception>
#include <iomanip>
#include <sstream>
#include <thread>
#include <vector>

#include "fgame/budget.hpp"
#include "fgame/combinatorics.hpp"
#include "fgame/error.hpp"
#include "fgame/format.hpp"
#include "fgame/parallel.hpp"
#include "fgame/rng.hpp"

namespace fgame {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string BudgetExceeded::format_cost(double c) {
    std::ostringstream out;
    out << std::setprecision(6) << c;
    return out.str();
}

void WorkMeter::charge(std::uint64_t units) {
    const auto total = used_.fetch_add(units, std::memory_order_relaxed) + units;
    if (static_cast<double>(total) > budget_) {
        throw BudgetExceeded(what_, std::max(estimated_, static_cast<double>(total)), budget_);
    }
}

void require_budget(const std::string& what, double cost, double budget) {
    if (!(cost <= budget)) throw BudgetExceeded(what, cost, budget);
}

// ---------------------------------------------------------------------------
// combinatorics

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > std::numeric_limits<std::uint64_t>::max()) {
            throw InvalidArgument("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                                  ") overflows 64 bits");
        }
    }
    return static_cast<std::uint64_t>(result);
}

double binomial_approx(double n, double k) {
    if (k < 0 || k > n) return 0.0;
    return std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1));
}

std::uint64_t checked_product(std::span<const std::uint64_t> factors) {
    std::uint64_t result = 1;
    for (auto f : factors) {
        if (f != 0 && result > std::numeric_limits<std::uint64_t>::max() / f) {
            throw InvalidArgument("index space overflows 64 bits");
        }
        result *= f;
    }
    return result;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t result = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) {
            throw InvalidArgument("index space overflows 64 bits");
        }
        result *= base;
    }
    return result;
}

SubsetIndex::SubsetIndex(std::uint64_t universe, std::uint64_t k)
    : universe_(universe), k_(k), count_(0) {
    if (k > universe) {
        throw InvalidArgument("subset size " + std::to_string(k) + " exceeds universe " +
                              std::to_string(universe));
    }
    count_ = binomial(universe, k);
}

std::uint64_t SubsetIndex::rank(std::span<const std::uint64_t> subset) const {
    if (subset.size() != k_) throw InvalidArgument("subset has wrong size");
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] >= universe_ || (i > 0 && subset[i] <= subset[i - 1])) {
            throw InvalidArgument("subset must be sorted, duplicate-free and in range");
        }
        r += binomial(subset[i], i + 1);
    }
    return r;
}

void SubsetIndex::unrank_into(std::uint64_t rank, std::span<std::uint64_t> out) const {
    if (rank >= count_) throw InvalidArgument("subset rank out of range");
    if (out.size() != k_) throw InvalidArgument("output span has wrong size");
    // Greedy: largest c with C(c, i) <= remaining, for i = k..1.
    std::uint64_t upper = universe_;
    for (std::uint64_t i = k_; i >= 1; --i) {
        std::uint64_t lo = i - 1, hi = upper - 1;
        while (lo < hi) {
            const std::uint64_t mid = lo + (hi - lo + 1) / 2;
            if (binomial(mid, i) <= rank) lo = mid; else hi = mid - 1;
        }
        out[i - 1] = lo;
        rank -= binomial(lo, i);
        upper = lo;
    }
}

std::vector<std::uint64_t> SubsetIndex::unrank(std::uint64_t rank) const {
    std::vector<std::uint64_t> out(k_);
    unrank_into(rank, out);
    return out;
}

bool next_combination(std::span<std::uint64_t> subset, std::uint64_t n) {
    const std::size_t k = subset.size();
    for (std::size_t i = 0; i < k; ++i) {
        const std::uint64_t limit = (i + 1 < k) ? subset[i + 1] : n;
        if (subset[i] + 1 < limit) {
            ++subset[i];
            for (std::size_t j = 0; j < i; ++j) subset[j] = j;
            return true;
        }
    }
    return false;
}

bool next_tuple(std::span<std::uint64_t> digits, std::span<const std::uint64_t> radices) {
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (++digits[i] < radices[i]) return true;
        digits[i] = 0;
    }
    return false;
}

bool next_tuple(std::span<std::uint64_t> digits, std::uint64_t radix) {
    for (auto& d : digits) {
        if (++d < radix) return true;
        d = 0;
    }
    return false;
}

// ---------------------------------------------------------------------------
// parallel

void parallel_chunks(std::size_t chunks, unsigned threads, const std::function<void(std::size_t)>& task) {
    if (chunks == 0) return;
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, chunks));
    std::vector<std::exception_ptr> errors(chunks);
    if (workers == 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            try {
                task(c);
            } catch (...) {
                errors[c] = std::current_exception();
                break;
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t c = next.fetch_add(1);
                    if (c >= chunks || failed.load()) return;
                    try {
                        task(c);
                    } catch (...) {
                        errors[c] = std::current_exception();
                        failed.store(true);
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::pair<std::uint64_t, std::uint64_t> chunk_range(std::uint64_t total, std::size_t chunks, std::size_t c) {
    const std::uint64_t base = total / chunks, extra = total % chunks;
    const std::uint64_t begin = c * base + std::min<std::uint64_t>(c, extra);
    return {begin, begin + base + (c < extra ? 1 : 0)};
}

// ---------------------------------------------------------------------------
// rng

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("Rng::below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    for (;;) {
        const std::uint64_t v = engine_();
        if (v < limit) return v % n;
    }
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::vector<std::uint64_t> Rng::subset(std::uint64_t n, std::uint64_t k) {
    if (k > n) throw InvalidArgument("sample size exceeds population");
    // Floyd's algorithm.
    std::vector<std::uint64_t> chosen;
    chosen.reserve(k);
    for (std::uint64_t j = n - k; j < n; ++j) {
        const std::uint64_t t = below(j + 1);
        if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
        else chosen.push_back(j);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

Rng Rng::split(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

}  // namespace fgame

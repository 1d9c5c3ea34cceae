#pragma once

#include <cstdint>
#include <variant>

#include "fgame/game.hpp"

namespace fgame::detail {

// Uniform distributions are summed with unit weights and normalized once at
// the end, so payoffs on a dyadic grid give exact results.
inline double raw_weight(const TwoProverGame& game, std::uint64_t x, std::uint64_t y) {
    if (std::holds_alternative<Weighted>(game.distribution())) return game.weight(x, y);
    return game.weight(x, y) > 0.0 ? 1.0 : 0.0;
}

inline double weight_scale(const TwoProverGame& game) {
    if (game.is_free()) return static_cast<double>(game.x_count()) * static_cast<double>(game.y_count());
    if (const auto* s = std::get_if<UniformOverSupport>(&game.distribution())) {
        return static_cast<double>(s->support.size());
    }
    return 1.0;
}

// Values within this distance (times the weight scale) are treated as ties.
inline constexpr double kTieTolerance = 1e-12;

}  // namespace fgame::detail

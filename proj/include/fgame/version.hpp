#pragma once

namespace fgame {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace fgame

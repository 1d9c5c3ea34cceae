#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "fgame/constructions.hpp"
#include "fgame/csp.hpp"
#include "fgame/game.hpp"

namespace fgame {

using Json = nlohmann::json;

// Version of the JSON layouts below.
inline constexpr int kSchemaVersion = 1;

// Games:
//   {"kind": "free2" | "general2", "x", "y", "a", "b", "distribution", "table"}
//   {"kind": "freek", "questions": [...], "answers": [...], "table"}
// with distribution {"type": "uniform"}, {"type": "support", "pairs": [[x, y], ...]}
// or {"type": "weighted", "weights": [...]} (row-major in x), and the verifier
// table row-major over (x, y, a, b) or (y_1..y_k, b_1..b_k), last index fastest.
// Birthday games: {"kind": "birthday", "base": <game>, "k", "l"}.
// CSPs: {"kind": "csp", "n_vars", "alphabet", "arity",
//        "constraints": [{"scope": [...], "weight", "table": [...]}, ...]}.
// Any document may carry a "meta" object, which readers ignore.
//
// Writers tabulate rule verifiers, throwing BudgetExceeded above max_entries.
Json game_json(const TwoProverGame& game, double max_entries = kMaxDenseEntries);
Json game_json(const KFreeGame& game, double max_entries = kMaxDenseEntries);
Json birthday_json(const BirthdayGame& game, double max_entries = kMaxDenseEntries);
Json csp_json(const DenseCsp& csp, double max_entries = kMaxDenseEntries);

using Artifact = std::variant<TwoProverGame, KFreeGame, BirthdayGame, DenseCsp>;

// Throws InvalidArgument naming the offending field.
Artifact artifact_from_json(const Json& doc);

// Throws ParseError on malformed JSON text.
Json parse_json(std::string_view text);

// Compact, keys sorted, one trailing newline.
std::string dump_json(const Json& doc);

}  // namespace fgame

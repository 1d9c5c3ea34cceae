#include "fgame/json_io.hpp"

#include <algorithm>
#include <set>

#include "fgame/error.hpp"

namespace fgame {

namespace {

Json table_of(const VerificationOracle& v, double max_entries) {
    return v.is_dense() ? Json(v.table()) : Json(v.materialize(max_entries).table());
}

const Json& field(const Json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw InvalidArgument(where + ": missing field \"" + key + "\"");
    return *it;
}

std::uint64_t count_field(const Json& obj, const std::string& key, const std::string& where) {
    const auto& v = field(obj, key, where);
    if (!v.is_number_unsigned()) throw InvalidArgument(where + ": \"" + key + "\" must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::vector<std::uint64_t> count_list(const Json& v, const std::string& what) {
    if (!v.is_array()) throw InvalidArgument(what + " must be an array of nonnegative integers");
    std::vector<std::uint64_t> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number_unsigned()) throw InvalidArgument(what + " must be an array of nonnegative integers");
        out.push_back(e.get<std::uint64_t>());
    }
    return out;
}

std::vector<double> number_list(const Json& v, const std::string& what) {
    if (!v.is_array()) throw InvalidArgument(what + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) throw InvalidArgument(what + " must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

void only_keys(const Json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    if (!obj.is_object()) throw InvalidArgument(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        if (key == "meta") continue;
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
            throw InvalidArgument(where + ": unknown field \"" + key + "\"");
        }
    }
}

Distribution distribution_from(const Json& d, std::uint64_t x, std::uint64_t y) {
    const std::string where = "distribution";
    if (!d.is_object()) throw InvalidArgument(where + " must be a JSON object");
    const auto& type = field(d, "type", where);
    if (!type.is_string()) throw InvalidArgument(where + ": \"type\" must be a string");
    const auto t = type.get<std::string>();
    if (t == "uniform") {
        only_keys(d, {"type"}, where);
        return UniformProduct{};
    }
    if (t == "support") {
        only_keys(d, {"type", "pairs"}, where);
        const auto& pairs = field(d, "pairs", where);
        if (!pairs.is_array()) throw InvalidArgument(where + ": \"pairs\" must be an array");
        UniformOverSupport s;
        for (const auto& p : pairs) {
            const auto xy = count_list(p, where + " pair");
            if (xy.size() != 2) throw InvalidArgument(where + ": each pair must have two entries");
            if (xy[0] >= x || xy[1] >= y) throw InvalidArgument(where + ": pair out of range");
            s.support.emplace_back(xy[0], xy[1]);
        }
        return s;
    }
    if (t == "weighted") {
        only_keys(d, {"type", "weights"}, where);
        return Weighted{number_list(field(d, "weights", where), where + " weights")};
    }
    throw InvalidArgument(where + ": unknown type \"" + t + "\"");
}

TwoProverGame two_prover_from(const Json& doc, bool require_free) {
    const std::string where = require_free ? "free2 game" : "general2 game";
    only_keys(doc, {"kind", "x", "y", "a", "b", "distribution", "table"}, where);
    const GameShape shape{count_field(doc, "x", where), count_field(doc, "y", where), count_field(doc, "a", where),
                          count_field(doc, "b", where)};
    Distribution dist = UniformProduct{};
    if (auto it = doc.find("distribution"); it != doc.end()) {
        dist = distribution_from(*it, shape.x_count, shape.y_count);
    } else if (!require_free) {
        throw InvalidArgument(where + ": missing field \"distribution\"");
    }
    if (require_free && !std::holds_alternative<UniformProduct>(dist)) {
        throw InvalidArgument(where + ": distribution must be uniform");
    }
    auto table = number_list(field(doc, "table", where), where + " table");
    if (shape.x_count == 0 || shape.y_count == 0 || shape.a_count == 0 || shape.b_count == 0) {
        throw InvalidArgument(where + ": question and answer counts must be positive");
    }
    return TwoProverGame(shape, std::move(dist),
                         VerificationOracle::dense({shape.x_count, shape.y_count, shape.a_count, shape.b_count},
                                                   std::move(table)));
}

KFreeGame kfree_from(const Json& doc) {
    const std::string where = "freek game";
    only_keys(doc, {"kind", "questions", "answers", "table"}, where);
    auto q = count_list(field(doc, "questions", where), where + " questions");
    auto a = count_list(field(doc, "answers", where), where + " answers");
    if (q.size() != a.size()) throw InvalidArgument(where + ": questions and answers differ in length");
    return make_kfree_game(std::move(q), std::move(a), number_list(field(doc, "table", where), where + " table"));
}

DenseCsp csp_from(const Json& doc) {
    const std::string where = "csp";
    only_keys(doc, {"kind", "n_vars", "alphabet", "arity", "constraints"}, where);
    const auto n = count_field(doc, "n_vars", where);
    const auto alphabet = count_field(doc, "alphabet", where);
    const auto arity = count_field(doc, "arity", where);
    const auto& cons = field(doc, "constraints", where);
    if (!cons.is_array()) throw InvalidArgument(where + ": \"constraints\" must be an array");
    std::vector<CspConstraint> out;
    out.reserve(cons.size());
    for (std::size_t c = 0; c < cons.size(); ++c) {
        const std::string cw = "constraint " + std::to_string(c);
        only_keys(cons[c], {"scope", "weight", "table"}, cw);
        auto scope = count_list(field(cons[c], "scope", cw), cw + " scope");
        const auto& w = field(cons[c], "weight", cw);
        if (!w.is_number()) throw InvalidArgument(cw + ": \"weight\" must be a number");
        out.push_back({std::move(scope), w.get<double>(),
                       VerificationOracle::dense(std::vector<std::uint64_t>(arity, alphabet),
                                                 number_list(field(cons[c], "table", cw), cw + " table"))});
    }
    return DenseCsp(n, alphabet, arity, std::move(out));
}

}  // namespace

Json game_json(const TwoProverGame& game, double max_entries) {
    Json doc;
    doc["kind"] = game.is_free() ? "free2" : "general2";
    doc["x"] = game.x_count();
    doc["y"] = game.y_count();
    doc["a"] = game.a_count();
    doc["b"] = game.b_count();
    Json dist;
    if (game.is_free()) {
        dist["type"] = "uniform";
    } else if (const auto* s = std::get_if<UniformOverSupport>(&game.distribution())) {
        dist["type"] = "support";
        dist["pairs"] = Json::array();
        for (const auto& [x, y] : s->support) dist["pairs"].push_back({x, y});
    } else {
        dist["type"] = "weighted";
        dist["weights"] = std::get<Weighted>(game.distribution()).weights;
    }
    doc["distribution"] = std::move(dist);
    doc["table"] = table_of(game.verifier(), max_entries);
    return doc;
}

Json game_json(const KFreeGame& game, double max_entries) {
    Json doc;
    doc["kind"] = "freek";
    doc["questions"] = game.question_counts();
    doc["answers"] = game.answer_counts();
    doc["table"] = table_of(game.verifier(), max_entries);
    return doc;
}

Json birthday_json(const BirthdayGame& game, double max_entries) {
    Json doc;
    doc["kind"] = "birthday";
    doc["base"] = game_json(game.base(), max_entries);
    doc["k"] = game.k();
    doc["l"] = game.l();
    return doc;
}

Json csp_json(const DenseCsp& csp, double max_entries) {
    Json doc;
    doc["kind"] = "csp";
    doc["n_vars"] = csp.n_vars();
    doc["alphabet"] = csp.alphabet();
    doc["arity"] = csp.arity();
    doc["constraints"] = Json::array();
    double entries = 0.0;
    for (const auto& con : csp.constraints()) {
        entries += static_cast<double>(con.payoff.size());
        if (entries > max_entries) throw BudgetExceeded("csp_json", entries, max_entries);
        Json c;
        c["scope"] = con.scope;
        c["weight"] = con.weight;
        c["table"] = table_of(con.payoff, max_entries);
        doc["constraints"].push_back(std::move(c));
    }
    return doc;
}

Artifact artifact_from_json(const Json& doc) {
    if (!doc.is_object()) throw InvalidArgument("document must be a JSON object");
    const auto& kind = field(doc, "kind", "document");
    if (!kind.is_string()) throw InvalidArgument("document: \"kind\" must be a string");
    const auto k = kind.get<std::string>();
    if (k == "free2") return two_prover_from(doc, true);
    if (k == "general2") return two_prover_from(doc, false);
    if (k == "freek") return kfree_from(doc);
    if (k == "csp") return csp_from(doc);
    if (k == "birthday") {
        only_keys(doc, {"kind", "base", "k", "l"}, "birthday game");
        const auto base = artifact_from_json(field(doc, "base", "birthday game"));
        const auto* g = std::get_if<TwoProverGame>(&base);
        if (!g) throw InvalidArgument("birthday game: base must be a two-prover game");
        return birthday_repetition(*g, count_field(doc, "k", "birthday game"), count_field(doc, "l", "birthday game"));
    }
    throw InvalidArgument("document: unknown kind \"" + k + "\"");
}

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
        throw ParseError(line, "malformed JSON");
    }
}

std::string dump_json(const Json& doc) { return doc.dump() + "\n"; }

}  // namespace fgame

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fgame/constructions.hpp"
#include "fgame/corpus.hpp"
#include "fgame/error.hpp"
#include "fgame/json_io.hpp"
#include "fgame/strategy.hpp"
#include "support.hpp"

using namespace fgame;
using namespace fgame::testing;

namespace {

std::string round_trip(const std::string& text) {
    const auto art = artifact_from_json(parse_json(text));
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, BirthdayGame>) return dump_json(birthday_json(v));
            else if constexpr (std::is_same_v<T, DenseCsp>) return dump_json(csp_json(v));
            else return dump_json(game_json(v));
        },
        art);
}

Json free_doc() {
    return Json::parse(R"({"kind":"free2","x":1,"y":2,"a":1,"b":2,"table":[1,0,0.5,1]})");
}

}  // namespace

TEST_CASE("game documents round trip byte for byte") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto g = random_free_game(seed, {3, 2, 2, 3});
        const auto text = dump_json(game_json(g));
        CHECK(round_trip(text) == text);
        const auto loaded = std::get<TwoProverGame>(artifact_from_json(parse_json(text)));
        CHECK(loaded.is_free());
        CHECK(exact_value(loaded).value == exact_value(g).value);
    }
    const auto k = random_kfree_game(3, {2, 3, 2}, {2, 1, 2});
    const auto ktext = dump_json(game_json(k));
    CHECK(round_trip(ktext) == ktext);
    CHECK(exact_value_k(std::get<KFreeGame>(artifact_from_json(parse_json(ktext)))).value == exact_value_k(k).value);

    const auto cv = clause_variable_game(corpus_formula("four_signs"));
    const auto cvtext = dump_json(game_json(cv));
    CHECK(cvtext.find("\"general2\"") != std::string::npos);
    CHECK(round_trip(cvtext) == cvtext);
    CHECK(exact_value(std::get<TwoProverGame>(artifact_from_json(parse_json(cvtext)))).value ==
          exact_value(cv).value);

    const TwoProverGame weighted({2, 1, 1, 2}, Weighted{{0.25, 0.75}},
                                 VerificationOracle::dense({2, 1, 1, 2}, {1, 0, 0, 1}));
    const auto wtext = dump_json(game_json(weighted));
    CHECK(round_trip(wtext) == wtext);
    CHECK(exact_value(std::get<TwoProverGame>(artifact_from_json(parse_json(wtext)))).value == 0.75);
}

TEST_CASE("birthday descriptor stays implicit") {
    const auto base = clause_variable_game(corpus_formula("all_signs"));
    const auto bd = birthday_repetition(base, 2, 2);
    const auto doc = birthday_json(bd);
    CHECK(doc["kind"] == "birthday");
    CHECK(doc["k"] == 2);
    CHECK(doc["base"]["kind"] == "general2");
    CHECK_FALSE(doc.contains("table"));
    const auto text = dump_json(doc);
    CHECK(round_trip(text) == text);
    const auto loaded = std::get<BirthdayGame>(artifact_from_json(doc));
    CHECK(exact_value(loaded.game()).value == exact_value(bd.game()).value);
}

TEST_CASE("csp documents round trip") {
    const auto csp = free_to_2csp(random_free_game(4, {2, 3, 2, 2}));
    const auto text = dump_json(csp_json(csp));
    CHECK(round_trip(text) == text);
    const auto loaded = std::get<DenseCsp>(artifact_from_json(parse_json(text)));
    CHECK(csp_sat_value(loaded).value == csp_sat_value(csp).value);
    CHECK_THROWS_AS(csp_json(csp, 4.0), BudgetExceeded);
}

TEST_CASE("meta is ignored and output is canonical") {
    auto doc = free_doc();
    doc["meta"] = {{"tool", "x"}};
    const auto g = std::get<TwoProverGame>(artifact_from_json(doc));
    CHECK(g.x_count() == 1);
    const auto text = dump_json(game_json(g));
    CHECK(text.back() == '\n');
    CHECK(text.find('\n') == text.size() - 1);
    CHECK(text.rfind("{\"a\":1,\"b\":2,\"distribution\":{\"type\":\"uniform\"}", 0) == 0);
}

TEST_CASE("schema violations are rejected") {
    auto bad = [](auto edit) {
        auto doc = free_doc();
        edit(doc);
        return doc;
    };
    CHECK_THROWS_AS(artifact_from_json(Json::array()), InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(bad([](Json& d) { d.erase("kind"); })), InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(bad([](Json& d) { d["kind"] = "free3"; })), InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(bad([](Json& d) { d["x"] = -1; })), InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(bad([](Json& d) { d["x"] = 0; })), InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(bad([](Json& d) { d["x"] = 1.5; })), InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(bad([](Json& d) { d["table"].push_back(1); })), InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(bad([](Json& d) { d["table"][0] = 1.5; })), InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(bad([](Json& d) { d["table"][0] = "1"; })), InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(bad([](Json& d) { d["extra"] = 1; })), InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(bad([](Json& d) {
                        d["distribution"] = {{"type", "support"}, {"pairs", {{0, 0}}}};
                    })),
                    InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(bad([](Json& d) {
                        d["kind"] = "general2";
                        d["distribution"] = {{"type", "support"}, {"pairs", {{0, 2}}}};
                    })),
                    InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(bad([](Json& d) {
                        d["kind"] = "general2";
                        d["distribution"] = {{"type", "weighted"}, {"weights", {0.5, 0.6}}};
                    })),
                    InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(bad([](Json& d) { d["kind"] = "general2"; })), InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(Json::parse(R"({"kind":"freek","questions":[2],"answers":[2,2],"table":[]})")),
                    InvalidArgument);
    CHECK_THROWS_AS(
        artifact_from_json(Json::parse(R"({"kind":"birthday","base":{"kind":"freek","questions":[1,1],"answers":[1,1],"table":[1]},"k":1,"l":1})")),
        InvalidArgument);
    CHECK_THROWS_AS(artifact_from_json(Json::parse(
                        R"({"kind":"csp","n_vars":2,"alphabet":2,"arity":2,"constraints":[{"scope":[0,0],"weight":1,"table":[1,1,1,1]}]})")),
                    InvalidArgument);
}

TEST_CASE("malformed JSON reports the line") {
    try {
        parse_json("{\n\"kind\":\n}");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("pinned seeded games match the built-in corpus") {
    const std::filesystem::path root = FGAME_DATA_DIR;
    for (const auto& [seed, game] : game_corpus()) {
        INFO(seed);
        std::ifstream in(root / "corpus" / "games" / ("seed_" + std::to_string(seed) + ".json"));
        REQUIRE(in.good());
        std::ostringstream os;
        os << in.rdbuf();
        CHECK(os.str() == dump_json(game_json(game)));
    }
}

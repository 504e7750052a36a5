#include <doctest.h>

#include <fstream>
#include <json.hpp>

#include "mergekit/config.hpp"

using namespace mk;
using nlohmann::json;

#ifndef MERGEKIT_SOURCE_DIR
#define MERGEKIT_SOURCE_DIR "."
#endif

TEST_CASE("the embedded demo configuration matches the shipped file") {
    json embedded = json::parse(demo_config_text());
    std::ifstream in(std::string(MERGEKIT_SOURCE_DIR) + "/config/demo.json");
    REQUIRE(in.good());
    json file;
    in >> file;
    CHECK(embedded == file);
}

TEST_CASE("demo configuration fields load as declared") {
    AppConfig cfg = config_from_json(json::parse(demo_config_text()));
    CHECK(cfg.lexicon.size() == 19);
    CHECK(cfg.lexicon.category_of("bites") == "V");
    CHECK(cfg.lexicon.category_of("man") == "N");
    CHECK(cfg.space.dimension == 3);
    CHECK(cfg.space.embedding.count("bites") == 1);
    CHECK(cfg.precedence == std::vector<std::string>{"V", "N", "A", "P"});
    CHECK(cfg.probe.size() == 3);
    CHECK(cfg.truth_table.at("{france {is republic}}") == 1);
    CHECK(cfg.tolerance == doctest::Approx(1e-9));
    CHECK(cfg.threshold_lambda == doctest::Approx(0.5));
    // The derived head function is usable out of the box.
    auto h = cfg.head_function();
    auto hl = h->head_leaf(parse_tree("{man {bites dog}}"));
    REQUIRE(hl.has_value());
    CHECK((*hl)->item == "bites");
}

TEST_CASE("lexicon parsing: categories, comments, duplicates") {
    Lexicon lx = Lexicon::parse("cat:N runs:V # trailing comment\nplain\n# full comment line\n");
    CHECK(lx.size() == 3);
    CHECK(lx.category_of("cat") == "N");
    CHECK(lx.category_of("plain") == "");
    CHECK_FALSE(lx.contains("comment"));
    CHECK_THROWS_AS(Lexicon::parse("dup dup"), std::invalid_argument);
    CHECK_THROWS_AS(lx.at("missing"), std::out_of_range);
}

TEST_CASE("malformed configurations are rejected") {
    json j = json::parse(R"({"vectors": {"a": [1, 0, 0], "b": [1, 0]}})");
    CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), std::invalid_argument);
}

TEST_CASE("proximity tables are stored order-insensitively") {
    json j = json::parse(R"({
        "vectors": {"x": [1, 0], "y": [0, 1]},
        "proximity": {"clamp_eps": 0.01, "tables": {"generic": [["y", "x", 0.7]]}}
    })");
    AppConfig cfg = config_from_json(j);
    CHECK(cfg.prox.clamp_eps == doctest::Approx(0.01));
    TreeP x = make_item("x"), y = make_item("y");
    CHECK(cfg.prox.eval(x, y, cfg.space.vec_of("x"), cfg.space.vec_of("y")) ==
          doctest::Approx(0.7));
    CHECK(cfg.prox.eval(y, x, cfg.space.vec_of("y"), cfg.space.vec_of("x")) ==
          doctest::Approx(0.7));
}

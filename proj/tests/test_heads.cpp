#include <doctest.h>

#include <json.hpp>

#include "mergekit/config.hpp"
#include "mergekit/heads.hpp"

using namespace mk;

namespace {
const AppConfig& demo() {
    static AppConfig cfg = config_from_json(nlohmann::json::parse(demo_config_text()));
    return cfg;
}
} // namespace

TEST_CASE("side-choice tables are exactly the valid head tables") {
    TreeP t = parse_tree("{a {b {c d}}}");
    auto tables = enumerate_head_functions(t);
    CHECK(tables.size() == 8); // 2^(#internal vertices)
    for (auto& tb : tables) CHECK(check_head_axiom(tb, t));
    // Corrupting the table breaks the axiom: the head of vertex "1" claims to
    // lie inside T_"11" while disagreeing with the head assigned there.
    HeadTable bad = tables[0];
    bad[""] = "10";
    bad["1"] = "110";
    bad["11"] = "111";
    CHECK_FALSE(check_head_axiom(bad, t));
}

TEST_CASE("projection by category precedence: verbs head their phrases") {
    auto h = demo().head_function();
    TreeP t = parse_tree("{man {bites dog}}");
    REQUIRE(h->in_domain(t));
    auto hl = h->head_leaf(t);
    REQUIRE(hl.has_value());
    CHECK((*hl)->item == "bites");
    CHECK(*h->head_address(t) == "10");
    // Head-side-first planarization.
    CHECK((*h->planarize(t))->enc == "((bites dog) man)");
}

TEST_CASE("ties and unknown categories are exocentric (off-domain)") {
    auto h = demo().head_function();
    CHECK_FALSE(h->in_domain(parse_tree("{apple republic}"))); // N vs N tie
    CHECK_FALSE(h->in_domain(parse_tree("{man unknown_item}")));
    CHECK(h->in_domain(make_item("unknown_item"))); // leaves carry no constraint
}

TEST_CASE("pair-table overrides beat precedence") {
    ProjectionRule rule;
    rule.precedence = demo().precedence;
    rule.lexicon = demo().lexicon;
    rule.pair_table[{"N", "V"}] = 0; // noun heads, overriding V > N
    auto h = HeadFunction::projection(rule);
    TreeP t = parse_tree("{man bites}"); // canonical order: bites(V) man(N)... check both slots
    auto hl = h.head_leaf(t);
    REQUIRE(hl.has_value());
    // Stored order is (bites, man): categories (V, N); no override for (V,N),
    // precedence V > N applies, so bites heads.
    CHECK((*hl)->item == "bites");
    TreeP t2 = parse_tree("{dog man}"); // (N, N) tie, no override: off-domain
    CHECK_FALSE(h.in_domain(t2));
    rule.pair_table[{"N", "N"}] = 1;
    auto h2 = HeadFunction::projection(rule);
    auto hl2 = h2.head_leaf(t2);
    REQUIRE(hl2.has_value());
    CHECK((*hl2)->item == "man"); // second stored child of {dog man}
}

TEST_CASE("traces project through their payload") {
    auto h = demo().head_function();
    TreeP t = quotient_contract(parse_tree("{man {bites dog}}"), {"10"}, {{"10", "bites"}});
    REQUIRE(h->in_domain(t));
    auto hl = h->head_leaf(t);
    REQUIRE(hl.has_value());
    CHECK((*hl)->kind == Tree::Kind::Trace);
    CHECK((*hl)->payload == "bites");
    // A trace without payload has no category: off-domain.
    TreeP bare = quotient_contract(parse_tree("{man {bites dog}}"), {"10"});
    CHECK_FALSE(h->in_domain(bare));
}

TEST_CASE("explicit tables and planar side reading") {
    TreeP t = parse_tree("{a {b c}}");
    SideChoice sides{{"", 1}, {"1", 0}};
    auto h = HeadFunction::explicit_tables({{t->enc, sides}});
    CHECK(*h.head_address(t) == "10");
    CHECK_FALSE(h.in_domain(parse_tree("{a b}")));
    // Planar trees read off the all-left convention.
    TreeP p = parse_tree("((a b) c)");
    SideChoice sp = sides_of_planar(p);
    CHECK(sp.size() == 2);
    for (auto& [v, s] : sp) CHECK(s == 0);
    CHECK(table_from_sides(p, sp).at("") == "00");
}

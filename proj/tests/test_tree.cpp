#include <doctest.h>

#include "mergekit/tree.hpp"

using namespace mk;

TEST_CASE("parsing and canonical form") {
    CHECK(parse_tree("{b a}")->enc == "{a b}");
    CHECK(parse_tree("{{c d} {a b}}")->enc == "{{a b} {c d}}");
    CHECK(parse_tree("(b a)")->enc == "(b a)"); // planar nodes keep order
    CHECK(tree_equal(make_node(make_item("a"), make_item("b")),
                     make_node(make_item("b"), make_item("a"))));
    CHECK(parse_tree("*2")->enc == "*2");
    CHECK_THROWS_AS(parse_tree("{a"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tree("{a b} c"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tree(""), std::invalid_argument);
}

TEST_CASE("counts and leaf traversal") {
    TreeP t = parse_tree("{a {b c}}");
    CHECK(t->n_leaves == 3);
    CHECK(t->n_nontrace == 3);
    CHECK(t->n_vertices == 5);
    auto lv = leaves_of(t);
    REQUIRE(lv.size() == 3);
    CHECK(lv[0].first == "0");
    CHECK(lv[1].first == "10");
    CHECK(lv[2].first == "11");
    CHECK(accessible_terms(t).size() == 4); // 2n - 2
}

TEST_CASE("admissible selections are nonempty prefix-free non-root sets") {
    TreeP t = parse_tree("{a {b c}}");
    auto sels = admissible_selections(t);
    CHECK(sels.size() == 9); // {0},{1},{10},{11},{0,1},{0,10},{0,11},{10,11},{0,10,11}
    for (auto& s : sels) CHECK(selection_valid(t, s));
}

TEST_CASE("subtrees made only of traces are not selectable") {
    TreeP q = quotient_contract(parse_tree("{a {b c}}"), {"1"}); // {*0 a}
    auto sels = admissible_selections(q);
    REQUIRE(sels.size() == 1);
    CHECK(subtree_at(q, sels[0][0])->enc == "a");
}

TEST_CASE("contract quotient replaces selections by numbered traces") {
    TreeP t = parse_tree("{a {b c}}");
    CHECK(quotient_contract(t, {"10"})->enc == "{a {*0 c}}");
    CHECK(quotient_contract(t, {"0", "10"})->enc == "{*0 {*1 c}}");
    CHECK(quotient_contract(t, {"1"}, {{"1", "b"}})->enc == "{*0:b a}");
}

TEST_CASE("delete quotient contracts unary vertices") {
    TreeP t = parse_tree("{a {b c}}");
    CHECK(quotient_delete(t, {"10"})->enc == "{a c}");
    CHECK(quotient_delete(t, {"1"})->enc == "a");
    CHECK(quotient_delete(parse_tree("{a b}"), {"0", "1"}) == nullptr);
}

TEST_CASE("trace renumbering is a normal form independent of input numbering") {
    // Two numberings of the same shape {* {{* *} {* a}}}.
    auto tr = [](int i) { return make_trace(i); };
    TreeP a = make_item("a");
    TreeP t1 = make_node(tr(0), make_node(make_node(tr(1), tr(2)), make_node(tr(3), a)));
    TreeP t2 = make_node(tr(0), make_node(make_node(tr(1), a), make_node(tr(2), tr(3))));
    CHECK(renumber_traces(t1)->enc == renumber_traces(t2)->enc);
    // Renumbering is idempotent.
    TreeP r = renumber_traces(t1);
    CHECK(renumber_traces(r)->enc == r->enc);
    // Payloads survive.
    TreeP p = renumber_traces(make_node(make_trace(7, "dog"), a));
    CHECK(p->enc == "{*0:dog a}");
}

TEST_CASE("digit runs in encodings compare numerically") {
    CHECK(enc_less("*2", "*10"));
    CHECK_FALSE(enc_less("*10", "*2"));
    CHECK(enc_less("*2", "*3"));
    CHECK(enc_less("{*1 a}", "{*2 a}"));
}

TEST_CASE("operad grafting substitutes leaves in canonical order") {
    TreeP shape = parse_tree("{x {y z}}");
    TreeP g = operad_graft(shape, {parse_tree("{a b}"), make_item("c"), make_item("d")});
    CHECK(g->enc == "{{a b} {c d}}");
    CHECK_THROWS_AS(operad_graft(shape, {make_item("a")}), std::invalid_argument);
}

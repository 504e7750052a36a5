#include <doctest.h>

#include <cmath>
#include <json.hpp>

#include "mergekit/config.hpp"
#include "mergekit/moduli.hpp"

using namespace mk;

namespace {
const AppConfig& demo() {
    static AppConfig cfg = config_from_json(nlohmann::json::parse(demo_config_text()));
    return cfg;
}
} // namespace

TEST_CASE("enumeration counts: Catalan and odd double factorial") {
    CHECK(planar_trees(numbered_leaves(3)).size() == 2);
    CHECK(planar_trees(numbered_leaves(4)).size() == 5);
    CHECK(abstract_trees(numbered_leaves(4)).size() == 15);
    for (int n = 2; n <= 6; ++n) {
        ModuliCounts c = moduli_counts(n);
        CHECK(c.catalan == catalan(n - 1));
        CHECK(c.trees == double_factorial_odd(2 * n - 3));
        CHECK(c.fiber == (uint64_t(1) << (n - 1)));
        CHECK(c.identity); // n! * C_{n-1} = 2^{n-1} * (2n-3)!!
    }
    CHECK_THROWS_AS(moduli_counts(1), std::invalid_argument);
}

TEST_CASE("the 4-leaf associahedron is a pentagon") {
    AssocGraph g = associahedron_graph(4);
    CHECK(g.vertices.size() == 5);
    CHECK(g.edges.size() == 5);
    std::vector<int> deg(g.vertices.size(), 0);
    for (auto& [a, b] : g.edges) {
        ++deg[a];
        ++deg[b];
    }
    for (int d : deg) CHECK(d == 2);
}

TEST_CASE("origin links in tree space at n = 3 and 4") {
    LinkGraph l3 = bhv_link(3);
    CHECK(l3.vertices.size() == 3);
    CHECK(l3.edges.empty());
    LinkGraph l4 = bhv_link(4);
    CHECK(l4.vertices.size() == 10);
    CHECK(l4.edges.size() == 15); // the Petersen graph: 3-regular
    std::vector<int> deg(l4.vertices.size(), 0);
    for (auto& [a, b] : l4.edges) {
        ++deg[a];
        ++deg[b];
    }
    for (int d : deg) CHECK(d == 3);
    CHECK_THROWS_AS(bhv_link(5), std::invalid_argument);
}

TEST_CASE("semantic edge weights come from the proximity of the two sides") {
    auto h = demo().head_function();
    MetricTree m =
        metric_tree_from_semantics(parse_tree("{man {bites dog}}"), demo().space, demo().prox, *h);
    REQUIRE(m.weights.size() == 1);
    CHECK(m.weights.at("1") == doctest::Approx(0.9)); // P(bites, dog) from the pair table
    // Only non-root internal edges carry weights, so the exocentric (N, N)
    // pair must sit below the root to be hit.
    CHECK_THROWS_WITH_AS(metric_tree_from_semantics(parse_tree("{man {dog {apple republic}}}"),
                                                    demo().space, demo().prox, *h),
                         "metric_tree_from_semantics: tree off Dom(h)", std::invalid_argument);
    MetricTree mn = metric_tree_from_semantics(parse_tree("{man {bites dog}}"), demo().space,
                                               demo().prox, *h, true);
    CHECK(mn.normalized);
    CHECK(mn.weights.at("1") == doctest::Approx(1.0));
}

TEST_CASE("projection and fiber are inverse up to planarity, weights ride along") {
    auto h = demo().head_function();
    TreeP t = parse_tree("{man {bites dog}}");
    MetricTree at = metric_tree_from_semantics(t, demo().space, demo().prox, *h);
    auto planars = fiber(at);
    CHECK(planars.size() == 4); // 2^{n-1} for n = 3
    for (auto& pt : planars) {
        MetricTree back = project_pi(pt);
        CHECK(back.tree->enc == at.tree->enc);
        REQUIRE(back.weights.size() == at.weights.size());
        for (auto& [v, w] : at.weights) CHECK(back.weights.at(v) == doctest::Approx(w));
    }
}

TEST_CASE("externalization picks the planarization realizing a leaf order") {
    MetricTree at{parse_tree("{{alpha beta} {gamma delta}}"), {}, false};
    MetricTree pt = section_externalization({"alpha", "beta", "gamma", "delta"}, at);
    CHECK(leaf_order(pt.tree) == std::vector<std::string>{"alpha", "beta", "gamma", "delta"});
    // Planarizations keep subtree leaves contiguous: interleaving the two
    // blocks is not realizable.
    CHECK_THROWS_WITH_AS(section_externalization({"alpha", "gamma", "beta", "delta"}, at),
                         "order not realizable", std::invalid_argument);
}

TEST_CASE("covering permutation between the two sections") {
    auto h = demo().head_function();
    TreeP t = parse_tree("{{alpha beta} {gamma delta}}");
    auto perm = lca_transform(t, {"alpha", "beta", "gamma", "delta"}, *h);
    CHECK(perm == std::vector<int>{3, 4, 2, 1});
    // Repeated leaf labels make positions ambiguous.
    TreeP rep = parse_tree("{{alpha beta} {gamma alpha}}");
    CHECK_THROWS_AS(lca_transform(rep, leaf_order(rep), *h), std::invalid_argument);
}

TEST_CASE("leaf configuration coordinates are e^{-W} along root paths") {
    MetricTree pt{parse_tree("((a b) c)"), {{"0", 0.5}}, false};
    auto cfg = leaf_configuration(pt);
    REQUIRE(cfg.size() == 3);
    CHECK(cfg[0] == doctest::Approx(std::exp(-0.5))); // a, below the weighted edge
    CHECK(cfg[1] == doctest::Approx(std::exp(-0.5))); // b
    CHECK(cfg[2] == doctest::Approx(1.0));            // c, no internal edge on its path
}

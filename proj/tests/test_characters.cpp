#include <doctest.h>

#include <json.hpp>

#include "mergekit/characters.hpp"
#include "mergekit/config.hpp"
#include "mergekit/enumerate.hpp"

using namespace mk;

namespace {
const AppConfig& demo() {
    static AppConfig cfg = config_from_json(nlohmann::json::parse(demo_config_text()));
    return cfg;
}
} // namespace

TEST_CASE("truth-table character and its Boolean factorization") {
    auto phi = char_boolean(demo().truth_table);
    TreeP t = parse_tree("{france {is {hexagonal republic}}}");
    CHECK(phi(t) == 0);
    auto tr = birkhoff_semiring(phi, rb_id_bool(), ws_single(t), QuotientMode::Delete);
    CHECK(tr.phi == 0);
    CHECK(tr.phitilde == 1);
    CHECK(tr.phiminus == 1);
    CHECK(tr.phiplus == 1);
    // Exactly the two single-adjunct removals witness the truth.
    REQUIRE(tr.chains.size() == 2);
    CHECK(tr.chains[0].find("sel: hexagonal | quot: {france {is republic}}") != std::string::npos);
    CHECK(tr.chains[1].find("sel: republic | quot: {france {hexagonal is}}") != std::string::npos);
}

TEST_CASE("head-probe character is stable under contract quotients") {
    auto h = demo().head_function();
    auto phi = char_head_probe(demo().space, demo().probe, h);
    TreeP t = parse_tree("{man {bites dog}}");
    REQUIRE(phi(t) != MaxPlus::NEG_INF);
    for (auto& sel : admissible_selections(t)) {
        Workspace q = detail::char_quotient(phi, t, sel, QuotientMode::Contract);
        REQUIRE(q.size() == 1);
        // Contracting subtrees (head payloads on traces) never moves the head
        // value: the probe of the quotient equals the probe of the tree.
        CHECK(phi(q.components[0]) == doctest::Approx(phi(t)).epsilon(1e-12));
    }
}

TEST_CASE("factorization equals the direct chain oracles") {
    auto h = demo().head_function();
    auto phi = char_head_probe(demo().space, demo().probe, h);
    for (auto& t : all_trees_upto({"man", "bites", "dog"}, 3)) {
        auto tr_id = birkhoff_semiring(phi, rb_id_maxplus(), ws_single(t));
        CHECK(MaxPlus::eq(tr_id.phiminus, chain_oracle_id(phi, t), 1e-9));
        auto tr_relu = birkhoff_semiring(phi, rb_relu(), ws_single(t));
        CHECK(MaxPlus::eq(tr_relu.phiminus, chain_oracle_relu(phi, t), 1e-9));
    }
}

TEST_CASE("phi_plus = phi_minus (+) phi_tilde and multiplicativity over unions") {
    auto h = demo().head_function();
    auto phi = char_head_probe(demo().space, demo().probe, h);
    Workspace f1 = ws_single(parse_tree("{bites dog}"));
    Workspace f2 = ws_single(parse_tree("{man apple}"));
    auto t1 = birkhoff_semiring(phi, rb_relu(), f1);
    auto t2 = birkhoff_semiring(phi, rb_relu(), f2);
    auto tu = birkhoff_semiring(phi, rb_relu(), ws_union(f1, f2));
    CHECK(MaxPlus::eq(tu.phiplus, MaxPlus::add(tu.phiminus, tu.phitilde), 1e-9));
    CHECK(MaxPlus::eq(tu.phiminus, MaxPlus::mul(t1.phiminus, t2.phiminus), 1e-9));
    CHECK(MaxPlus::eq(tu.phiplus, MaxPlus::mul(t1.phiplus, t2.phiplus), 1e-9));
}

TEST_CASE("weight -1 operators require R1 for semiring factorization") {
    auto h = demo().head_function();
    auto phi = char_head_probe(demo().space, demo().probe, h);
    RBOperator<MaxPlus> bad{"id-no-r1", -1, false, [](double x) { return x; }};
    CHECK_THROWS_AS(birkhoff_semiring(phi, bad, ws_single(parse_tree("{bites dog}"))),
                    std::invalid_argument);
}

TEST_CASE("convex character follows the proximity pair table") {
    auto h = demo().head_function();
    auto phi = char_convex(demo().space, demo().prox, h);
    // P(man, {bites dog}) = 0.8 vs P(dog, {bites man}) = 0.3 in the demo table.
    CHECK(phi(parse_tree("{man {bites dog}}")) == doctest::Approx(0.8));
    CHECK(phi(parse_tree("{dog {bites man}}")) == doctest::Approx(0.3));
    CHECK(phi(make_item("man")) == 1.0); // leaves are the unit
    CHECK(phi(parse_tree("{apple republic}")) == 0.0); // off-domain
}

TEST_CASE("formal combinations respect their declared domains") {
    auto h = demo().head_function();
    auto phim = char_head_probe(demo().space, demo().probe, h);
    Workspace f = ws_single(parse_tree("{bites dog}"));
    CHECK_THROWS_AS(combine_semi_maxplus(phim, {{-0.5, f}}), std::invalid_argument);
    CHECK(combine_semi_maxplus(phim, {{1.0, f}}) == doctest::Approx(phim(f)));
    auto phic = char_convex(demo().space, demo().prox, h);
    CHECK_THROWS_AS(combine_cone(phic, {{0.4, f}}), std::invalid_argument); // sums to 0.4
    CHECK(combine_cone(phic, {{0.25, f}, {0.75, f}}) == doctest::Approx(0.75 * phic(f)));
}

TEST_CASE("attention matrices are row-stochastic and detect planted relations") {
    Matrix Q{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    Matrix K = Q;
    std::vector<std::string> items{"man", "bites", "dog"};
    auto A = attention_matrix(Q, K, demo().space, items);
    for (auto& l : items) {
        double row = 0;
        for (auto& lp : items) row += A[l][lp];
        CHECK(row == doctest::Approx(1.0).epsilon(1e-9));
    }
    auto h = demo().head_function();
    TreeP t = parse_tree("{man {bites dog}}");
    LeafRelation rho;
    // Partner the head with every leaf: necessarily exact.
    for (auto& l : items) rho[t->enc][{"bites", l}] = 1;
    auto r = detect_relation(rho, Q, K, demo().space, *h, {t});
    CHECK(r.exact);
    CHECK(r.score == doctest::Approx(1.0));
    // Empty relation: never exact, relation-weighted character is 0.
    auto r0 = detect_relation({}, Q, K, demo().space, *h, {t});
    CHECK_FALSE(r0.exact);
    CHECK(phi_attention_relation({}, Q, K, demo().space, *h, t) == 0.0);
}

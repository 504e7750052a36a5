#include <doctest.h>

#include <json.hpp>

#include "mergekit/config.hpp"
#include "mergekit/space.hpp"

using namespace mk;

namespace {
const AppConfig& demo() {
    static AppConfig cfg = config_from_json(nlohmann::json::parse(demo_config_text()));
    return cfg;
}
} // namespace

TEST_CASE("vector primitives") {
    Vec a{1, 0, 0}, b{0, 1, 0};
    CHECK(dot(a, b) == 0.0);
    CHECK(norm(a) == 1.0);
    CHECK(dist(a, b) == doctest::Approx(std::sqrt(2.0)));
    CHECK(cosine(a, a) == doctest::Approx(1.0));
    CHECK(cosine(a, Vec{0, 0, 0}) == 0.0); // degenerate: defined as 0
    Vec m = lerp(a, b, 0.25);
    CHECK(m[0] == doctest::Approx(0.75));
    CHECK(m[1] == doctest::Approx(0.25));
}

TEST_CASE("proximity: pair tables win, fallback is clamped logistic cosine") {
    const ProximityFn& P = demo().prox;
    TreeP bites = make_item("bites"), dog = make_item("dog"), apple = make_item("apple");
    const SemSpace& sp = demo().space;
    CHECK(P.eval(bites, dog, sp.vec_of("bites"), sp.vec_of("dog")) == doctest::Approx(0.9));
    // Symmetric lookup.
    CHECK(P.eval(dog, bites, sp.vec_of("dog"), sp.vec_of("bites")) == doctest::Approx(0.9));
    double fb = P.eval(apple, dog, sp.vec_of("apple"), sp.vec_of("dog"));
    CHECK(fb == doctest::Approx(P.clamp(logistic(cosine(sp.vec_of("apple"), sp.vec_of("dog"))))));
    CHECK(fb >= P.clamp_eps);
    CHECK(fb <= 1.0 - P.clamp_eps);
}

TEST_CASE("convex extension interpolates with the head side weighted by P") {
    auto h = demo().head_function();
    const SemSpace& sp = demo().space;
    TreeP t = parse_tree("{bites dog}");
    auto s = extend_s_convex(*h, demo().prox, sp, t);
    REQUIRE(s.has_value());
    // Head is bites (V > N); P(bites, dog) = 0.9 from the table.
    Vec expect = lerp(sp.vec_of("dog"), sp.vec_of("bites"), 0.9);
    for (size_t i = 0; i < expect.size(); ++i) CHECK((*s)[i] == doctest::Approx(expect[i]));
    CHECK_FALSE(extend_s_convex(*h, demo().prox, sp, parse_tree("{apple republic}")).has_value());
}

TEST_CASE("leaf-coefficient expansion certifies hull membership") {
    auto h = demo().head_function();
    const SemSpace& sp = demo().space;
    TreeP t = parse_tree("{man {bites dog}}");
    std::map<std::string, double> coeffs;
    REQUIRE(extend_s_convex_coeffs(*h, demo().prox, sp, t, coeffs));
    double total = 0;
    for (auto& [addr, c] : coeffs) {
        CHECK(c >= 0.0);
        total += c;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // Reconstruction matches the recursive value.
    auto s = extend_s_convex(*h, demo().prox, sp, t);
    REQUIRE(s.has_value());
    Vec recon(s->size(), 0.0);
    for (auto& [addr, c] : coeffs) {
        const Vec& lv = sp.vec_of_leaf(subtree_at(t, addr));
        for (size_t i = 0; i < recon.size(); ++i) recon[i] += c * lv[i];
    }
    for (size_t i = 0; i < recon.size(); ++i) CHECK(recon[i] == doctest::Approx((*s)[i]).epsilon(1e-9));
}

TEST_CASE("agreement extension reports the first-child coefficient") {
    auto h = demo().head_function();
    const SemSpace& sp = demo().space;
    TreeP t = parse_tree("{bites dog}");
    auto r = extend_s_vec(*h, demo().agree, sp, t);
    REQUIRE(r.has_value());
    double c = cosine(sp.vec_of("bites"), sp.vec_of("dog"));
    // Head is the first stored child (bites): t_T = 1 - c.
    CHECK(r->t_T == doctest::Approx(1.0 - c));
    Vec expect = lerp(sp.vec_of("dog"), sp.vec_of("bites"), r->t_T);
    for (size_t i = 0; i < expect.size(); ++i) CHECK(r->s[i] == doctest::Approx(expect[i]));
}

TEST_CASE("tree embedding: one segment per internal vertex, incidents reported") {
    auto h = demo().head_function();
    auto emb = embed_tree(*h, demo().prox, demo().space, parse_tree("{man {bites dog}}"));
    REQUIRE(emb.has_value());
    CHECK(emb->segments.size() == 2);
    CHECK(emb->incidents.empty());
    for (auto& seg : emb->segments) {
        CHECK(seg.param > 0.0);
        CHECK(seg.param < 1.0);
        // The marked point lies on the segment.
        Vec on = lerp(seg.a, seg.b, seg.param);
        for (size_t i = 0; i < on.size(); ++i) CHECK(seg.point[i] == doctest::Approx(on[i]));
    }
    // Coincident endpoints: two leaves sharing one vector.
    SemSpace sp2;
    sp2.dimension = 2;
    sp2.embedding["bites"] = {1.0, 0.0};
    sp2.embedding["dog"] = {1.0, 0.0};
    auto emb2 = embed_tree(*h, demo().prox, sp2, parse_tree("{bites dog}"));
    REQUIRE(emb2.has_value());
    REQUIRE_FALSE(emb2->incidents.empty());
    CHECK(emb2->incidents[0].find("coincident endpoints") != std::string::npos);
}

TEST_CASE("arrangement chambers and Vietoris-Rips at fixed scale") {
    SemSpace sp;
    sp.dimension = 2;
    sp.embedding["u"] = {1.0, 0.0};
    sp.embedding["v"] = {0.0, 1.0};
    sp.embedding["zero"] = {0.0, 0.0}; // excluded from the arrangement
    CHECK(hyperplane_arrangement(sp).size() == 2);
    auto sign = chamber_sign(sp, {2.0, -3.0});
    CHECK(sign == std::vector<int>{1, -1});
    std::vector<Vec> pts{{0, 0}, {1, 0}, {10, 10}};
    auto simpl = vietoris_rips(pts, 0.6, 2); // pairwise threshold 1.2
    // Singletons {0},{1},{2}, the pair {0,1}: 4 simplices.
    CHECK(simpl.size() == 4);
}

TEST_CASE("operad action returns infinity off-domain or on unrecorded points") {
    auto h = demo().head_function();
    const SemSpace& sp = demo().space;
    TreeP bites = make_item("bites"), dog = make_item("dog");
    SpacePoint pb{false, sp.vec_of("bites"), bites};
    SpacePoint pd{false, sp.vec_of("dog"), dog};
    SpacePoint c = combine(pb, pd, *h, demo().prox, sp);
    REQUIRE_FALSE(c.infinity);
    auto expect = extend_s_convex(*h, demo().prox, sp, parse_tree("{bites dog}"));
    REQUIRE(expect.has_value());
    for (size_t i = 0; i < c.v.size(); ++i) CHECK(c.v[i] == doctest::Approx((*expect)[i]));
    // Tampered point value: not a recorded extension.
    SpacePoint bad = pb;
    bad.v[0] += 0.5;
    CHECK(combine(bad, pd, *h, demo().prox, sp).infinity);
    CHECK(combine(sp_infinity(), pd, *h, demo().prox, sp).infinity);
}

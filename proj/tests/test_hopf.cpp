#include <doctest.h>

#include <map>

#include "mergekit/enumerate.hpp"
#include "mergekit/hopf.hpp"

using namespace mk;

namespace {

/// Coefficient of a (left, right) tensor term.
Rational coeff_of(const TensorVec& v, const std::string& l, const std::string& r) {
    auto it = v.terms.find({l, r});
    return it == v.terms.end() ? Rational(0) : it->second.coeff;
}

/// Triple tensor coefficients of (D (x) id) D and (id (x) D) D.
using Key3 = std::map<std::tuple<std::string, std::string, std::string>, Rational>;

Key3 triple(const Workspace& f, QuotientMode mode, bool left_leg) {
    Key3 out;
    for (auto& [k, t] : coproduct(f, mode).terms) {
        TensorVec inner = coproduct(left_leg ? t.left : t.right, mode);
        for (auto& [k2, t2] : inner.terms) {
            auto key = left_leg ? std::make_tuple(t2.left.enc, t2.right.enc, t.right.enc)
                                : std::make_tuple(t.left.enc, t2.left.enc, t2.right.enc);
            auto it = out.find(key);
            if (it == out.end())
                out.emplace(key, t.coeff * t2.coeff);
            else
                it->second += t.coeff * t2.coeff;
        }
    }
    return out;
}

} // namespace

TEST_CASE("counit axiom in both quotient modes") {
    for (auto mode : {QuotientMode::Contract, QuotientMode::Delete}) {
        for (auto& t : all_trees_upto({"a", "b"}, 4)) {
            Workspace w = ws_single(t);
            // (id (x) counit) D(T) = T: collect terms with empty right leg.
            ForestVec left;
            for (auto& [k, term] : coproduct(w, mode).terms)
                if (term.right.empty()) left.add(term.left, term.coeff);
            CHECK(left == fv_of(w));
        }
    }
}

TEST_CASE("coassociativity in both quotient modes, trees up to 4 leaves") {
    for (auto mode : {QuotientMode::Contract, QuotientMode::Delete}) {
        for (auto& t : all_trees_upto({"a", "b"}, 4)) {
            Workspace w = ws_single(t);
            CHECK(triple(w, mode, true) == triple(w, mode, false));
        }
    }
}

TEST_CASE("delete mode drops sibling-pair selections, keeps the parent cut") {
    TensorVec d = coproduct(ws_single(parse_tree("{x {y z}}")), QuotientMode::Delete);
    CHECK(coeff_of(d, "y | z", "x") == Rational(0)); // same cut as selecting {y z}
    CHECK(coeff_of(d, "{y z}", "x") == Rational(1));
    CHECK(coeff_of(d, "y", "{x z}") == Rational(1));
    CHECK(coeff_of(d, "x | y", "z") == Rational(1)); // not siblings: kept
}

TEST_CASE("contract mode keeps both cuts (traces keep quotients distinct)") {
    TensorVec d = coproduct(ws_single(parse_tree("{x {y z}}")), QuotientMode::Contract);
    CHECK(coeff_of(d, "y | z", "{x {*0 *1}}") == Rational(1));
    CHECK(coeff_of(d, "{y z}", "{*0 x}") == Rational(1));
}

TEST_CASE("coproduct is multiplicative over disjoint union") {
    Workspace f1 = ws_single(parse_tree("{a b}"));
    Workspace f2 = ws_single(parse_tree("c"));
    TensorVec prod;
    for (auto& [k1, t1] : coproduct(f1, QuotientMode::Delete).terms)
        for (auto& [k2, t2] : coproduct(f2, QuotientMode::Delete).terms)
            prod.add(ws_union(t1.left, t2.left), ws_union(t1.right, t2.right),
                     t1.coeff * t2.coeff);
    CHECK(prod == coproduct(ws_union(f1, f2), QuotientMode::Delete));
}

TEST_CASE("antipode on small trees") {
    // S(leaf) = -leaf.
    ForestVec sa = antipode(ws_single(make_item("a")));
    CHECK(sa == Rational(-1) * fv_of(ws_single(make_item("a"))));
    // S is multiplicative: S(a u b) = S(a) S(b).
    Workspace ab = ws_union(ws_single(make_item("a")), ws_single(make_item("b")));
    CHECK(antipode(ab) == fv_of(ab));
    // Contract mode is rejected.
    CHECK_THROWS_AS(antipode(ws_single(make_item("a")), QuotientMode::Contract),
                    std::invalid_argument);
}

TEST_CASE("antipode convolution law on trees up to 4 leaves") {
    for (auto& t : all_trees_upto({"a", "b"}, 4)) {
        ForestVec conv = antipode_convolution(ws_single(t));
        CHECK(conv.is_zero()); // counit of a tree with >= 1 leaf is 0
    }
}

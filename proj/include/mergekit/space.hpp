#pragma once

/**
 * @file space.hpp
 * @brief Euclidean semantic spaces: lexical embeddings, proximity and
 *        agreement functions, recursive tree-to-space extensions, geometric
 *        tree embeddings, hyperplane arrangements, a fixed-scale
 *        Vietoris-Rips complex, and the semantic operad action.
 *
 * Geometry is Euclidean R^d throughout (geodesics are segments); the
 * constructions only use interpolation and distance.
 */

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "heads.hpp"
#include "tree.hpp"

namespace mk {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }
inline double dist(const Vec& a, const Vec& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}
inline double cosine(const Vec& a, const Vec& b) {
    double na = norm(a), nb = norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}
inline Vec lerp(const Vec& a, const Vec& b, double t) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = (1.0 - t) * a[i] + t * b[i];
    return r;
}

struct SemSpace {
    int dimension = 0;
    std::map<std::string, Vec> embedding; // item name -> vector

    const Vec& vec_of(const std::string& name) const {
        auto it = embedding.find(name);
        if (it == embedding.end()) throw std::out_of_range("semantic space: no vector for '" + name + "'");
        return it->second;
    }
    /// Leaf embedding; traces evaluate through their payload item.
    const Vec& vec_of_leaf(const TreeP& leaf) const {
        if (leaf->kind == Tree::Kind::Trace) {
            if (leaf->payload.empty())
                throw std::out_of_range("semantic space: trace without payload has no vector");
            return vec_of(leaf->payload);
        }
        return vec_of(leaf->item);
    }
};

// ---------------------------------------------------------------------------
// Proximity (P) and agreement (c) functions
// ---------------------------------------------------------------------------

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/**
 * Proximity P in [eps, 1-eps]: how likely two space points name features of a
 * common entity.  Either derived (clamped logistic of cosine) or read from a
 * relation-keyed symmetric pair table (keys are canonical tree encodings;
 * default relation key "generic").
 */
struct ProximityFn {
    double clamp_eps = 1e-3;
    // relation -> (encoding pair, sorted) -> value
    std::map<std::string, std::map<std::pair<std::string, std::string>, double>> tables;

    double clamp(double p) const { return std::min(1.0 - clamp_eps, std::max(clamp_eps, p)); }

    double eval(const TreeP& t1, const TreeP& t2, const Vec& s1, const Vec& s2,
                const std::string& relation = "generic") const {
        auto rt = tables.find(relation);
        if (rt != tables.end()) {
            auto key = t1->enc <= t2->enc ? std::make_pair(t1->enc, t2->enc)
                                          : std::make_pair(t2->enc, t1->enc);
            auto it = rt->second.find(key);
            if (it != rt->second.end()) return clamp(it->second);
        }
        return clamp(logistic(cosine(s1, s2)));
    }
};

/// Agreement c: symmetric real-valued (default: cosine of the two points).
struct AgreementFn {
    std::map<std::pair<std::string, std::string>, double> table; // optional overrides

    double eval(const TreeP& t1, const TreeP& t2, const Vec& s1, const Vec& s2) const {
        auto key = t1->enc <= t2->enc ? std::make_pair(t1->enc, t2->enc)
                                      : std::make_pair(t2->enc, t1->enc);
        auto it = table.find(key);
        if (it != table.end()) return it->second;
        return cosine(s1, s2);
    }
};

// ---------------------------------------------------------------------------
// Recursive extensions of s to trees
// ---------------------------------------------------------------------------

/**
 * Convex extension: s(T) = p*s(T1) + (1-p)*s(T2) with p = P(s(T1),s(T2)) when
 * the head lies in T1, else 1-P.  The head side is always weighted by P.
 * Returns nullopt off Dom(h).
 */
inline std::optional<Vec> extend_s_convex(const HeadFunction& h, const ProximityFn& P,
                                          const SemSpace& sp, const TreeP& t,
                                          const std::string& relation = "generic") {
    if (t->kind != Tree::Kind::Node) {
        if (t->kind == Tree::Kind::Trace && t->payload.empty()) return std::nullopt;
        return sp.vec_of_leaf(t);
    }
    if (!h.in_domain(t)) return std::nullopt;
    auto s1 = extend_s_convex(h, P, sp, t->left, relation);
    auto s2 = extend_s_convex(h, P, sp, t->right, relation);
    if (!s1 || !s2) return std::nullopt;
    double prox = P.eval(t->left, t->right, *s1, *s2, relation);
    auto sides = h.sides_for(t);
    double p = (sides->at("") == 0) ? prox : 1.0 - prox;
    Vec r(s1->size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = p * (*s1)[i] + (1.0 - p) * (*s2)[i];
    return r;
}

/// Symbolic leaf-coefficient expansion of the convex extension:
/// s(T) = sum over leaves of coeff * s(leaf).  Used for hull certificates.
inline bool extend_s_convex_coeffs(const HeadFunction& h, const ProximityFn& P,
                                   const SemSpace& sp, const TreeP& t,
                                   std::map<std::string, double>& out, double scale = 1.0,
                                   const std::string& addr = "",
                                   const std::string& relation = "generic") {
    if (t->kind != Tree::Kind::Node) {
        out[addr] += scale;
        return true;
    }
    if (!h.in_domain(t)) return false;
    auto s1 = extend_s_convex(h, P, sp, t->left, relation);
    auto s2 = extend_s_convex(h, P, sp, t->right, relation);
    if (!s1 || !s2) return false;
    double prox = P.eval(t->left, t->right, *s1, *s2, relation);
    auto sides = h.sides_for(t);
    double p = (sides->at("") == 0) ? prox : 1.0 - prox;
    return extend_s_convex_coeffs(h, P, sp, t->left, out, scale * p, addr + "0", relation) &&
           extend_s_convex_coeffs(h, P, sp, t->right, out, scale * (1.0 - p), addr + "1", relation);
}

/**
 * Agreement-driven extension: s(T) = c*s(non-head child) + (1-c)*s(head child)
 * with c = agreement of the two child values (may leave the segment's [0,1]
 * parameter range).  The companion scalar t_T is the coefficient of the first
 * canonical child: t_T = c if the head is the second child, 1-c otherwise.
 * Presentation dependence is resolved by always evaluating in canonical child
 * order.
 */
struct VecExtResult {
    Vec s;
    double t_T; // coefficient of the first canonical child
};

inline std::optional<VecExtResult> extend_s_vec(const HeadFunction& h, const AgreementFn& C,
                                                const SemSpace& sp, const TreeP& t) {
    if (t->kind != Tree::Kind::Node) {
        if (t->kind == Tree::Kind::Trace && t->payload.empty()) return std::nullopt;
        return VecExtResult{sp.vec_of_leaf(t), 1.0};
    }
    if (!h.in_domain(t)) return std::nullopt;
    auto r1 = extend_s_vec(h, C, sp, t->left);
    auto r2 = extend_s_vec(h, C, sp, t->right);
    if (!r1 || !r2) return std::nullopt;
    double c = C.eval(t->left, t->right, r1->s, r2->s);
    auto sides = h.sides_for(t);
    double tT = (sides->at("") == 0) ? 1.0 - c : c; // coefficient of the first child
    Vec s(r1->s.size());
    for (size_t i = 0; i < s.size(); ++i) s[i] = tT * r1->s[i] + (1.0 - tT) * r2->s[i];
    return VecExtResult{s, tT};
}

// ---------------------------------------------------------------------------
// Geometric tree embedding
// ---------------------------------------------------------------------------

struct Segment {
    std::string vertex;   // internal vertex address
    Vec a, b;             // child values
    Vec point;            // the vertex's own value, on [a,b]
    double param;         // position of point along a->b
};

struct TreeEmbedding {
    std::vector<Segment> segments;
    Vec root_point;
    std::vector<std::string> incidents; // degeneracies found, not repaired
};

/**
 * Embed a tree: one segment per internal vertex with endpoints at the child
 * values and a marked point at the vertex value.  Coincident endpoints,
 * boundary-parameter points, and crossings between non-adjacent segments are
 * reported as incidents; the embedding is never perturbed.
 */
inline std::optional<TreeEmbedding> embed_tree(const HeadFunction& h, const ProximityFn& P,
                                               const SemSpace& sp, const TreeP& t,
                                               double tol = 1e-9,
                                               const std::string& relation = "generic") {
    if (!h.in_domain(t)) return std::nullopt;
    TreeEmbedding out;
    struct Rec {
        const HeadFunction& h;
        const ProximityFn& P;
        const SemSpace& sp;
        const std::string& relation;
        TreeEmbedding& out;
        double tol;
        bool ok = true;
        Vec walk(const TreeP& u, const std::string& addr) {
            if (u->kind != Tree::Kind::Node) return sp.vec_of_leaf(u);
            Vec a = walk(u->left, addr + "0");
            Vec b = walk(u->right, addr + "1");
            auto sv = extend_s_convex(h, P, sp, u, relation);
            if (!sv) { ok = false; return a; }
            double prox = P.eval(u->left, u->right, a, b, relation);
            auto sides = h.sides_for(u);
            double p = (sides->at("") == 0) ? prox : 1.0 - prox;
            // point = p*a + (1-p)*b, parameter along a->b is (1-p)
            Segment seg{addr, a, b, *sv, 1.0 - p};
            if (dist(a, b) <= tol) out.incidents.push_back("coincident endpoints at " + (addr.empty() ? std::string("root") : addr));
            if (seg.param <= tol || seg.param >= 1.0 - tol)
                out.incidents.push_back("degenerate interior point at " + (addr.empty() ? std::string("root") : addr));
            out.segments.push_back(std::move(seg));
            return *sv;
        }
    } rec{h, P, sp, relation, out, tol};
    out.root_point = rec.walk(t, "");
    if (!rec.ok) return std::nullopt;

    // Crossing detection between non-adjacent segments (closest-distance test).
    auto seg_dist = [](const Segment& s1, const Segment& s2) {
        // Sample-based closest distance: adequate for incident *reporting* at
        // the tolerances used (exact segment-segment distance in R^d).
        // Use the standard quadratic program on parameters (u,v) in [0,1]^2.
        size_t d = s1.a.size();
        Vec d1(d), d2(d), r(d);
        for (size_t i = 0; i < d; ++i) {
            d1[i] = s1.b[i] - s1.a[i];
            d2[i] = s2.b[i] - s2.a[i];
            r[i] = s1.a[i] - s2.a[i];
        }
        double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
        double c = dot(d1, r), b = dot(d1, d2);
        double denom = a * e - b * b;
        double u = 0, v = 0;
        if (denom > 1e-15) u = std::min(1.0, std::max(0.0, (b * f - c * e) / denom));
        v = (b * u + f) / (e > 1e-15 ? e : 1.0);
        if (v < 0) { v = 0; u = std::min(1.0, std::max(0.0, -c / (a > 1e-15 ? a : 1.0))); }
        else if (v > 1) { v = 1; u = std::min(1.0, std::max(0.0, (b - c) / (a > 1e-15 ? a : 1.0))); }
        Vec p1(d), p2(d);
        for (size_t i = 0; i < d; ++i) {
            p1[i] = s1.a[i] + u * d1[i];
            p2[i] = s2.a[i] + v * d2[i];
        }
        return dist(p1, p2);
    };
    for (size_t i = 0; i < out.segments.size(); ++i)
        for (size_t j = i + 1; j < out.segments.size(); ++j) {
            const auto& si = out.segments[i];
            const auto& sj = out.segments[j];
            // Adjacent segments legitimately share points (a vertex value lies
            // on its parent's segment endpoint): skip ancestor-descendant pairs.
            if (si.vertex.compare(0, sj.vertex.size(), sj.vertex) == 0 ||
                sj.vertex.compare(0, si.vertex.size(), si.vertex) == 0)
                continue;
            if (seg_dist(si, sj) <= tol)
                out.incidents.push_back("segment crossing between " + si.vertex + " and " + sj.vertex);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Hyperplane arrangement and Vietoris-Rips
// ---------------------------------------------------------------------------

/// One hyperplane (through the origin) normal to each nonzero lexical vector.
inline std::vector<std::string> hyperplane_arrangement(const SemSpace& sp) {
    std::vector<std::string> items;
    for (auto& [name, v] : sp.embedding)
        if (norm(v) > 0) items.push_back(name);
    return items;
}

/// Sign of <v, s(item)> per arrangement hyperplane: the chamber of v.
inline std::vector<int> chamber_sign(const SemSpace& sp, const Vec& v) {
    std::vector<int> out;
    for (auto& name : hyperplane_arrangement(sp)) {
        double d = dot(v, sp.vec_of(name));
        out.push_back(d > 0 ? 1 : (d < 0 ? -1 : 0));
    }
    return out;
}

/// Fixed-scale Vietoris-Rips: simplices = subsets with pairwise distance
/// <= 2*eps (balls of radius eps pairwise intersecting), up to dim maxdim.
inline std::vector<std::vector<int>> vietoris_rips(const std::vector<Vec>& pts, double eps,
                                                   int maxdim = 2) {
    size_t n = pts.size();
    std::vector<std::vector<bool>> near(n, std::vector<bool>(n, false));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) near[i][j] = dist(pts[i], pts[j]) <= 2 * eps;
    std::vector<std::vector<int>> simplices;
    std::vector<int> cur;
    struct Rec {
        size_t n;
        int maxdim;
        const std::vector<std::vector<bool>>& near;
        std::vector<std::vector<int>>& simplices;
        std::vector<int>& cur;
        void go(size_t start) {
            if (!cur.empty()) simplices.push_back(cur);
            if ((int)cur.size() > maxdim) return;
            for (size_t i = start; i < n; ++i) {
                bool ok = true;
                for (int j : cur)
                    if (!near[(size_t)j][i]) { ok = false; break; }
                if (!ok) continue;
                cur.push_back((int)i);
                go(i + 1);
                cur.pop_back();
            }
        }
    } rec{n, maxdim, near, simplices, cur};
    rec.go(0);
    return simplices;
}

// ---------------------------------------------------------------------------
// Semantic operad action
// ---------------------------------------------------------------------------

/// A space point tagged with the tree it came from; `infinity` is the added
/// base point of the one-point compactification.
struct SpacePoint {
    bool infinity = false;
    Vec v;
    TreeP origin; // null when untagged
};

inline SpacePoint sp_infinity() { return SpacePoint{true, {}, nullptr}; }

/**
 * Operad action on the compactified space: graft the argument trees into the
 * shape; if every argument is a recorded s(T_i) value and the grafted tree is
 * in Dom(h), return its extension; otherwise the point at infinity.
 */
inline SpacePoint gamma_S(const TreeP& shape, const std::vector<SpacePoint>& args,
                          const HeadFunction& h, const ProximityFn& P, const SemSpace& sp,
                          double tol = 1e-9) {
    std::vector<TreeP> trees;
    for (const auto& a : args) {
        if (a.infinity || !a.origin) return sp_infinity();
        auto sv = extend_s_convex(h, P, sp, a.origin);
        if (!sv) return sp_infinity();
        if (a.v.size() != sv->size() || dist(a.v, *sv) > tol) return sp_infinity();
        trees.push_back(a.origin);
    }
    TreeP graft = operad_graft(shape, trees);
    auto sv = extend_s_convex(h, P, sp, graft);
    if (!sv) return sp_infinity();
    return SpacePoint{false, *sv, graft};
}

/// Combine = s of the merge of two recorded trees (label-then-concatenate).
inline SpacePoint combine(const SpacePoint& a, const SpacePoint& b, const HeadFunction& h,
                          const ProximityFn& P, const SemSpace& sp) {
    TreeP shape = make_node(make_item("x1"), make_item("x2"));
    return gamma_S(shape, {a, b}, h, P, sp);
}

} // namespace mk

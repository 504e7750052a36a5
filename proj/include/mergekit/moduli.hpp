#pragma once

/**
 * @file moduli.hpp
 * @brief Associahedron and tree-space combinatorics, metric trees with
 *        semantically induced edge weights, the planarity-forgetting
 *        projection and its fibers, externalization sections, and the
 *        covering permutation between sections.
 *
 * Conventions: the associahedron K_n is represented combinatorially; vertices
 * are planar binary trees on n ordered leaves, edges are single rotations
 * (one associativity application).  Tree-space links are represented by their
 * small-n skeleta: vertices are the trees with exactly one internal edge
 * (equivalently, leaf subsets of size 2..n-1), top simplices are the binary
 * trees.  Metric trees carry one nonnegative weight per internal edge (the
 * edge into each non-root internal vertex; n-2 weights for n leaves).
 *
 * Covering permutations are reported in one-line notation on leaf positions:
 * entry i is the position, in the externalized order, of the i-th leaf of the
 * head planarization.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "heads.hpp"
#include "space.hpp"
#include "tree.hpp"

namespace mk {

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// All planar binary trees over the given ordered leaf sequence (Catalan many).
inline std::vector<TreeP> planar_trees(const std::vector<TreeP>& leaves) {
    if (leaves.empty()) throw std::invalid_argument("planar_trees: empty leaf sequence");
    std::vector<TreeP> out;
    if (leaves.size() == 1) {
        out.push_back(leaves[0]);
        return out;
    }
    for (size_t k = 1; k < leaves.size(); ++k) {
        std::vector<TreeP> lpart(leaves.begin(), leaves.begin() + k);
        std::vector<TreeP> rpart(leaves.begin() + k, leaves.end());
        for (auto& a : planar_trees(lpart))
            for (auto& b : planar_trees(rpart)) out.push_back(make_planar(a, b));
    }
    return out;
}

/// All abstract (unordered) binary trees over the given distinct leaves
/// ((2n-3)!! many for n leaves).
inline std::vector<TreeP> abstract_trees(const std::vector<TreeP>& leaves) {
    if (leaves.empty()) throw std::invalid_argument("abstract_trees: empty leaf sequence");
    std::vector<TreeP> out;
    if (leaves.size() == 1) {
        out.push_back(leaves[0]);
        return out;
    }
    // Split on the subset containing the first leaf (avoids double counting).
    size_t n = leaves.size();
    for (uint64_t mask = 0; mask < (uint64_t(1) << (n - 1)); ++mask) {
        std::vector<TreeP> with_first{leaves[0]}, rest;
        for (size_t i = 1; i < n; ++i)
            ((mask >> (i - 1)) & 1 ? with_first : rest).push_back(leaves[i]);
        if (rest.empty()) continue;
        for (auto& a : abstract_trees(with_first))
            for (auto& b : abstract_trees(rest)) out.push_back(make_node(a, b));
    }
    std::sort(out.begin(), out.end(), [](const TreeP& a, const TreeP& b) { return a->enc < b->enc; });
    out.erase(std::unique(out.begin(), out.end(), tree_equal), out.end());
    return out;
}

inline std::vector<TreeP> numbered_leaves(int n, const std::string& prefix = "x") {
    std::vector<TreeP> out;
    for (int i = 1; i <= n; ++i) out.push_back(make_item(prefix + std::to_string(i)));
    return out;
}

// ---------------------------------------------------------------------------
// Associahedron
// ---------------------------------------------------------------------------

struct AssocGraph {
    std::vector<TreeP> vertices;                    // planar binary trees
    std::vector<std::pair<size_t, size_t>> edges;   // rotation pairs, i < j
};

namespace detail {
/// All trees one rotation away: ((AB)C) <-> (A(BC)) at each internal edge.
inline void rotations_at(const TreeP& t, std::vector<TreeP>& out,
                         const std::function<TreeP(TreeP)>& rebuild) {
    if (t->kind != Tree::Kind::Node) return;
    const TreeP &L = t->left, &R = t->right;
    if (L->kind == Tree::Kind::Node)
        out.push_back(rebuild(make_planar(L->left, make_planar(L->right, R))));
    if (R->kind == Tree::Kind::Node)
        out.push_back(rebuild(make_planar(make_planar(L, R->left), R->right)));
    rotations_at(L, out, [&](TreeP nl) { return rebuild(make_planar(nl, R)); });
    rotations_at(R, out, [&](TreeP nr) { return rebuild(make_planar(L, nr)); });
}
} // namespace detail

inline std::vector<TreeP> rotations(const TreeP& t) {
    std::vector<TreeP> out;
    detail::rotations_at(t, out, [](TreeP x) { return x; });
    return out;
}

/// The associahedron K_n as a graph: vertices are planar binary trees on n
/// ordered leaves, edges are single rotations.
inline AssocGraph associahedron_graph(int n) {
    if (n < 2) throw std::invalid_argument("associahedron_graph: need n >= 2");
    AssocGraph g;
    g.vertices = planar_trees(numbered_leaves(n));
    std::map<std::string, size_t> index;
    for (size_t i = 0; i < g.vertices.size(); ++i) index[g.vertices[i]->enc] = i;
    std::set<std::pair<size_t, size_t>> edges;
    for (size_t i = 0; i < g.vertices.size(); ++i)
        for (auto& r : rotations(g.vertices[i])) {
            size_t j = index.at(r->enc);
            edges.insert({std::min(i, j), std::max(i, j)});
        }
    g.edges.assign(edges.begin(), edges.end());
    return g;
}

// ---------------------------------------------------------------------------
// Counting identities
// ---------------------------------------------------------------------------

inline uint64_t catalan(int k) { // C_k
    uint64_t c = 1;
    for (int i = 0; i < k; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
    return c;
}
inline uint64_t double_factorial_odd(int m) { // m!! for odd m >= -1 (m = -1, 1 -> 1)
    uint64_t r = 1;
    for (int i = m; i >= 3; i -= 2) r *= (uint64_t)i;
    return r;
}
inline uint64_t factorial(int n) {
    uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= (uint64_t)i;
    return r;
}

struct ModuliCounts {
    uint64_t catalan;  // C_{n-1}: planar binary trees on n ordered leaves
    uint64_t trees;    // (2n-3)!!: abstract binary trees on n labeled leaves
    uint64_t fiber;    // 2^{n-1}: planarizations of one abstract tree
    bool identity;     // n! * C_{n-1} = 2^{n-1} * (2n-3)!!
};

inline ModuliCounts moduli_counts(int n) {
    if (n < 2) throw std::invalid_argument("moduli_counts: need n >= 2");
    ModuliCounts c;
    c.catalan = catalan(n - 1);
    c.trees = double_factorial_odd(2 * n - 3);
    c.fiber = uint64_t(1) << (n - 1);
    c.identity = factorial(n) * c.catalan == c.fiber * c.trees;
    return c;
}

// ---------------------------------------------------------------------------
// Tree-space link (small n)
// ---------------------------------------------------------------------------

struct LinkGraph {
    std::vector<std::string> vertices; // one-internal-edge trees, as leaf subsets "a,b,c"
    std::vector<std::pair<size_t, size_t>> edges; // one per binary tree (n = 4)
};

namespace detail {
/// The leaf subsets carved out by internal edges (one per non-root internal
/// vertex) of an abstract binary tree.
inline std::vector<std::set<std::string>> internal_edge_subsets(const TreeP& t) {
    std::vector<std::set<std::string>> out;
    for (auto& v : internal_vertices(t)) {
        if (v.empty()) continue; // root vertex has no parent edge
        std::set<std::string> s;
        for (auto& [addr, leaf] : leaves_of(subtree_at(t, v))) s.insert(leaf->item);
        out.push_back(std::move(s));
    }
    return out;
}
inline std::string subset_key(const std::set<std::string>& s) {
    std::string k;
    for (auto& x : s) {
        if (!k.empty()) k += ",";
        k += x;
    }
    return k;
}
} // namespace detail

/**
 * The link of the origin in the space of n-leaf metric trees, as a graph
 * (supported for n = 3, 4): vertices are trees with exactly one internal
 * edge, i.e. leaf subsets of size 2..n-1; for n = 4 each binary tree
 * contributes the edge joining its two internal-edge subsets (n = 3 gives
 * isolated points).
 */
inline LinkGraph bhv_link(int n) {
    if (n != 3 && n != 4) throw std::invalid_argument("bhv_link: supported for n = 3, 4 only");
    LinkGraph g;
    auto leaves = numbered_leaves(n);
    std::map<std::string, size_t> index;
    for (uint64_t mask = 1; mask < (uint64_t(1) << n); ++mask) {
        std::set<std::string> s;
        for (int i = 0; i < n; ++i)
            if ((mask >> i) & 1) s.insert(leaves[i]->item);
        if ((int)s.size() < 2 || (int)s.size() > n - 1) continue;
        std::string key = detail::subset_key(s);
        if (!index.count(key)) {
            index[key] = g.vertices.size();
            g.vertices.push_back(key);
        }
    }
    if (n == 4) {
        std::set<std::pair<size_t, size_t>> edges;
        for (auto& t : abstract_trees(leaves)) {
            auto subs = detail::internal_edge_subsets(t);
            if (subs.size() != 2) throw std::logic_error("bhv_link: expected two internal edges");
            size_t a = index.at(detail::subset_key(subs[0]));
            size_t b = index.at(detail::subset_key(subs[1]));
            edges.insert({std::min(a, b), std::max(a, b)});
        }
        g.edges.assign(edges.begin(), edges.end());
    }
    return g;
}

// ---------------------------------------------------------------------------
// Metric trees
// ---------------------------------------------------------------------------

struct MetricTree {
    TreeP tree;                            // abstract or planar
    std::map<std::string, double> weights; // non-root internal vertex address -> weight
    bool normalized = false;
};

/// Weights from semantics: the edge into each non-root internal vertex v gets
/// p_v = P(s(T_{v,1}), s(T_{v,2})) over the extension of s along h.
inline MetricTree metric_tree_from_semantics(const TreeP& t, const SemSpace& sp,
                                             const ProximityFn& P, const HeadFunction& h,
                                             bool normalize = false,
                                             const std::string& relation = "generic") {
    MetricTree m;
    m.tree = t;
    for (auto& v : internal_vertices(t)) {
        if (v.empty()) continue;
        TreeP sub = subtree_at(t, v);
        auto s1 = extend_s_convex(h, P, sp, sub->left, relation);
        auto s2 = extend_s_convex(h, P, sp, sub->right, relation);
        if (!s1 || !s2) throw std::invalid_argument("metric_tree_from_semantics: tree off Dom(h)");
        m.weights[v] = P.eval(sub->left, sub->right, *s1, *s2, relation);
    }
    if (normalize) {
        double total = 0;
        for (auto& [v, w] : m.weights) total += w;
        if (total > 0)
            for (auto& [v, w] : m.weights) w /= total;
        m.normalized = true;
    }
    return m;
}

namespace detail {
/// Rebuild a tree via a node transformer while tracking address renaming of
/// its internal vertices, so edge weights follow their vertices.
struct Rebuilt {
    TreeP tree;
    std::map<std::string, std::string> addr_map; // old internal addr -> new addr
};

/// Forget planar structure (canonical unordered rebuild) with address tracking.
inline Rebuilt unordered_tracked(const TreeP& t) {
    struct Rec {
        std::map<std::string, std::string>& amap;
        TreeP walk(const TreeP& u, const std::string& oaddr, const std::string& naddr) {
            amap[oaddr] = naddr;
            if (u->kind != Tree::Kind::Node) return u;
            // Decide order first (canonical: smaller unordered encoding first).
            TreeP lu = unordered_of(u->left), ru = unordered_of(u->right);
            bool swap = ru->enc < lu->enc;
            TreeP a = walk(swap ? u->right : u->left, oaddr + (swap ? "1" : "0"), naddr + "0");
            TreeP b = walk(swap ? u->left : u->right, oaddr + (swap ? "0" : "1"), naddr + "1");
            return make_node(a, b);
        }
    };
    Rebuilt r;
    Rec rec{r.addr_map};
    r.tree = rec.walk(t, "", "");
    return r;
}

/// Planarize by a side-choice mask over internal vertices, with tracking.
inline Rebuilt planarize_tracked(const TreeP& t, const std::map<std::string, int>& sides) {
    struct Rec {
        const std::map<std::string, int>& sides;
        std::map<std::string, std::string>& amap;
        TreeP walk(const TreeP& u, const std::string& oaddr, const std::string& naddr) {
            amap[oaddr] = naddr;
            if (u->kind != Tree::Kind::Node) return u;
            bool swap = sides.at(oaddr) == 1; // 1: second stored child comes first
            TreeP a = walk(swap ? u->right : u->left, oaddr + (swap ? "1" : "0"), naddr + "0");
            TreeP b = walk(swap ? u->left : u->right, oaddr + (swap ? "0" : "1"), naddr + "1");
            return make_planar(a, b);
        }
    };
    Rebuilt r;
    Rec rec{sides, r.addr_map};
    r.tree = rec.walk(t, "", "");
    return r;
}

inline MetricTree remap_weights(const MetricTree& m, const Rebuilt& r) {
    MetricTree out;
    out.tree = r.tree;
    out.normalized = m.normalized;
    for (auto& [v, w] : m.weights) out.weights[r.addr_map.at(v)] = w;
    return out;
}
} // namespace detail

/// Forget planarity; weights ride along to the canonical addresses.
inline MetricTree project_pi(const MetricTree& pt) {
    return detail::remap_weights(pt, detail::unordered_tracked(pt.tree));
}

/// All planarizations of an abstract metric tree (2^{#internal vertices}),
/// weights preserved; deterministic order by planar encoding.
inline std::vector<MetricTree> fiber(const MetricTree& at) {
    auto iv = internal_vertices(at.tree);
    std::vector<MetricTree> out;
    for (uint64_t mask = 0; mask < (uint64_t(1) << iv.size()); ++mask) {
        std::map<std::string, int> sides;
        for (size_t i = 0; i < iv.size(); ++i) sides[iv[i]] = (mask >> i) & 1;
        out.push_back(detail::remap_weights(at, detail::planarize_tracked(at.tree, sides)));
    }
    std::sort(out.begin(), out.end(),
              [](const MetricTree& a, const MetricTree& b) { return a.tree->enc < b.tree->enc; });
    return out;
}

inline std::vector<std::string> leaf_order(const TreeP& t) {
    std::vector<std::string> out;
    for (auto& [addr, leaf] : leaves_of(t)) out.push_back(leaf->item);
    return out;
}

/// Externalization section: the planarization realizing the target leaf order.
inline MetricTree section_externalization(const std::vector<std::string>& order,
                                          const MetricTree& at) {
    for (auto& pt : fiber(at))
        if (leaf_order(pt.tree) == order) return pt;
    throw std::invalid_argument("order not realizable");
}

/// Semantic section: the head planarization (head-side child first).
inline MetricTree section_semantic(const HeadFunction& h, const MetricTree& at) {
    auto sides = h.sides_for(at.tree);
    if (!sides) throw std::invalid_argument("section_semantic: tree off Dom(h)");
    return detail::remap_weights(at, detail::planarize_tracked(at.tree, *sides));
}

/**
 * The covering permutation between the externalization section and the head
 * planarization, in one-line notation: entry i is the position in the
 * externalized leaf order of the i-th leaf of the head planarization.
 * Requires distinct leaf labels and both sections defined.
 */
inline std::vector<int> lca_transform(const TreeP& t, const std::vector<std::string>& order,
                                      const HeadFunction& h) {
    MetricTree at{t, {}, false};
    auto ext = leaf_order(section_externalization(order, at).tree);
    auto sem = leaf_order(section_semantic(h, at).tree);
    std::map<std::string, int> pos;
    for (size_t i = 0; i < ext.size(); ++i) {
        if (pos.count(ext[i]))
            throw std::invalid_argument("lca_transform: repeated leaf labels unsupported");
        pos[ext[i]] = (int)i + 1;
    }
    std::vector<int> perm;
    for (auto& l : sem) perm.push_back(pos.at(l));
    return perm;
}

/// Per-leaf coordinate e^{-W}, W the sum of internal-edge weights on the
/// root-to-leaf path; order matches the tree's stored (planar) leaf order.
inline std::vector<double> leaf_configuration(const MetricTree& pt) {
    std::vector<double> out;
    for (auto& [addr, leaf] : leaves_of(pt.tree)) {
        double w = 0;
        for (size_t k = 1; k <= addr.size(); ++k) {
            auto it = pt.weights.find(addr.substr(0, k));
            if (it != pt.weights.end()) w += it->second;
        }
        out.push_back(std::exp(-w));
    }
    return out;
}

} // namespace mk

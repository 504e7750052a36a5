#pragma once

/**
 * @file graphs.hpp
 * @brief Semiring parsing over diagrams of Merge derivations: directed graphs
 *        whose edges map to derivation arrows and carry semiring weights,
 *        with a graph-level Birkhoff evaluation summing nested R-applications
 *        over all factorizations of a target arrow.
 *
 * An arrow is a Derivation (nonempty composable chain of Merge steps);
 * composition is chain concatenation when the intermediate workspaces match.
 * A factorization of a target arrow gamma along the graph is an edge sequence
 * e_1 ... e_k whose images concatenate, in order, to gamma's step chain while
 * following a directed path.  The evaluated weight of one factorization is
 *     R( ... ( R(a_{e_1}) . a_{e_2} ) ... . a_{e_k} )
 * and the graph value is the semiring sum over factorizations.  With the
 * Boolean carrier and R = id this is OR over paths of AND along paths; with
 * probability weights, (+,*) and R = id, the total probability of realizing
 * gamma.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "msearch.hpp"
#include "semirings.hpp"
#include "workspace.hpp"

namespace mk {

/// Ordinary probability semiring ([0,inf), +, *) for total-probability parsing.
struct ProbSR {
    using V = double;
    static V zero() { return 0.0; }
    static V one() { return 1.0; }
    static V add(V a, V b) { return a + b; }
    static V mul(V a, V b) { return a * b; }
    static bool eq(V a, V b, double tol) { return std::abs(a - b) <= tol; }
};
inline RBOperator<ProbSR> rb_id_prob() { return {"id", -1, true, [](double x) { return x; }}; }

inline const Workspace& deriv_source(const Derivation& d) { return d.steps.front().source; }
inline const Workspace& deriv_target(const Derivation& d) { return d.steps.back().target; }

/// Composition gamma1 after gamma2: defined when target(gamma2) = source(gamma1).
inline std::optional<Derivation> compose_arrows(const Derivation& g1, const Derivation& g2) {
    if (g1.steps.empty() || g2.steps.empty()) return std::nullopt;
    if (!(deriv_target(g2) == deriv_source(g1))) return std::nullopt;
    Derivation out = g2;
    out.steps.insert(out.steps.end(), g1.steps.begin(), g1.steps.end());
    return out;
}

struct GraphEdge {
    size_t from, to;   // vertex indices
    Derivation gamma;  // image arrow; source/target must match the endpoints
    double weight;     // semiring weight (interpreted by the chosen carrier)
};

struct DerivGraph {
    std::vector<Workspace> vertices;
    std::vector<GraphEdge> edges;

    void validate() const {
        for (auto& e : edges) {
            if (e.from >= vertices.size() || e.to >= vertices.size())
                throw std::invalid_argument("derivation graph: edge endpoint out of range");
            if (e.gamma.steps.empty())
                throw std::invalid_argument("derivation graph: empty edge derivation");
            if (!(deriv_source(e.gamma) == vertices[e.from]) ||
                !(deriv_target(e.gamma) == vertices[e.to]))
                throw std::invalid_argument(
                    "derivation graph: edge image does not match its endpoints");
        }
    }
};

/// Maximal factorization length of an arrow: each factor is a nonempty chain,
/// so the length is bounded by the step count.
inline int arrow_degree(const Derivation& g) { return (int)g.steps.size(); }

namespace detail {
inline bool steps_match(const std::vector<MergeStep>& chain, size_t at,
                        const std::vector<MergeStep>& piece) {
    if (at + piece.size() > chain.size()) return false;
    for (size_t i = 0; i < piece.size(); ++i) {
        const MergeStep &a = chain[at + i], &b = piece[i];
        if (a.kind != b.kind || !(a.source == b.source) || !(a.target == b.target) ||
            a.operands != b.operands)
            return false;
    }
    return true;
}
} // namespace detail

/// All edge sequences e_1..e_k (k <= maxk) along directed paths whose images
/// concatenate to gamma.
inline std::vector<std::vector<size_t>> enumerate_factorizations(const DerivGraph& g,
                                                                 const Derivation& gamma,
                                                                 int maxk = -1) {
    g.validate();
    if (gamma.steps.empty()) throw std::invalid_argument("enumerate_factorizations: empty target");
    if (maxk < 0) maxk = arrow_degree(gamma);
    std::vector<std::vector<size_t>> out;
    std::vector<size_t> cur;
    struct Rec {
        const DerivGraph& g;
        const Derivation& gamma;
        int maxk;
        std::vector<size_t>& cur;
        std::vector<std::vector<size_t>>& out;
        void go(size_t consumed, std::optional<size_t> at_vertex) {
            if (consumed == gamma.steps.size()) {
                if (!cur.empty()) out.push_back(cur);
                return;
            }
            if ((int)cur.size() == maxk) return;
            for (size_t ei = 0; ei < g.edges.size(); ++ei) {
                const GraphEdge& e = g.edges[ei];
                if (at_vertex && e.from != *at_vertex) continue;
                if (!detail::steps_match(gamma.steps, consumed, e.gamma.steps)) continue;
                cur.push_back(ei);
                go(consumed + e.gamma.steps.size(), e.to);
                cur.pop_back();
            }
        }
    } rec{g, gamma, maxk, cur, out};
    rec.go(0, std::nullopt);
    return out;
}

/**
 * Graph Birkhoff evaluation: semiring sum over all factorizations of gamma of
 * the nested R-application of the edge weights, R(...(R(a_1).a_2)....a_k).
 * Weights are read through @p lift (double edge data -> carrier value).
 */
template <typename S>
typename S::V graph_birkhoff(const DerivGraph& g, const Derivation& gamma,
                             const RBOperator<S>& R,
                             const std::function<typename S::V(double)>& lift, int maxk = -1) {
    auto facts = enumerate_factorizations(g, gamma, maxk);
    typename S::V total = S::zero();
    for (auto& f : facts) {
        typename S::V acc = R.apply(lift(g.edges[f[0]].weight));
        for (size_t i = 1; i < f.size(); ++i) acc = R.apply(S::mul(acc, lift(g.edges[f[i]].weight)));
        total = S::add(total, acc);
    }
    return total;
}

/// Boolean brute-force oracle: OR over factorizations of AND along the path.
inline int graph_paths_boolean(const DerivGraph& g, const Derivation& gamma, int maxk = -1) {
    auto facts = enumerate_factorizations(g, gamma, maxk);
    for (auto& f : facts) {
        int v = 1;
        for (size_t ei : f) v &= (g.edges[ei].weight != 0.0) ? 1 : 0;
        if (v) return 1;
    }
    return 0;
}

} // namespace mk

#pragma once

/**
 * @file characters.hpp
 * @brief Semiring-valued characters on workspaces, Bogolyubov preparation,
 *        Birkhoff factorization (semiring and algebra regimes), closed-form
 *        chain-enumeration oracles, and attention-based characters.
 *
 * A character is a multiplicative map from workspaces into a semiring:
 * phi(F1 u F2) = phi(F1) . phi(F2).  Formal combinations are admitted on a
 * declared domain only: `Semi` (nonnegative coefficients, folded as
 * max{phi(F_i) + log c_i} on max-plus) or `Cone` (convex combinations,
 * folded as max a_i phi(F_i)).
 *
 * Birkhoff factorization (semiring): phi_minus = R(phi_tilde),
 * phi_plus = phi_minus (+) phi_tilde, with the Bogolyubov preparation
 *     phi_tilde(T) = phi(T) (+) max over admissible selections of
 *                    [ prod_c phi_minus(c) . phi(T/sel) ]
 * recursing on the grading.  Quotients default to the contract convention
 * (trace leaves carry the removed subtree's head label so head-driven
 * characters are quotient-stable); delete mode is available for truth-table
 * style characters.
 */

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "heads.hpp"
#include "hopf.hpp"
#include "semirings.hpp"
#include "space.hpp"
#include "workspace.hpp"

namespace mk {

// ---------------------------------------------------------------------------
// Characters
// ---------------------------------------------------------------------------

enum class CombPolicy { Semi, Cone };

template <typename S>
struct Character {
    using V = typename S::V;
    std::string name;
    CombPolicy policy = CombPolicy::Semi;
    std::function<V(const TreeP&)> on_tree;
    /// Payload written onto a trace when a subtree is contracted away
    /// (the head label for head-driven characters); empty = no payload.
    std::function<std::string(const TreeP&)> contract_payload;

    V operator()(const TreeP& t) const { return on_tree(t); }
    V operator()(const Workspace& f) const {
        V v = S::one();
        for (const auto& c : f.components) v = S::mul(v, on_tree(c));
        return v;
    }
};

/// Fold a formal nonnegative combination sum c_i F_i on max-plus:
/// max_i { phi(F_i) + log c_i }.
inline double combine_semi_maxplus(const Character<MaxPlus>& phi,
                                   const std::vector<std::pair<double, Workspace>>& comb) {
    double best = MaxPlus::NEG_INF;
    for (auto& [c, f] : comb) {
        if (c < 0) throw std::invalid_argument("combination outside semiring domain: negative coefficient");
        if (c == 0) continue;
        best = std::max(best, MaxPlus::mul(phi(f), std::log(c)));
    }
    return best;
}

/// Fold a convex combination sum a_i F_i on the unit interval: max_i a_i phi(F_i).
inline double combine_cone(const Character<Viterbi>& phi,
                           const std::vector<std::pair<double, Workspace>>& comb) {
    double total = 0, best = 0;
    for (auto& [a, f] : comb) {
        if (a < 0) throw std::invalid_argument("combination outside cone domain: negative coefficient");
        total += a;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("combination outside cone domain: coefficients must sum to 1");
    for (auto& [a, f] : comb) best = std::max(best, a * phi(f));
    return best;
}

// ---------------------------------------------------------------------------
// Shipped characters
// ---------------------------------------------------------------------------

namespace detail {
/// Label carried by a leaf for semantic purposes (trace payloads pass through).
inline std::string leaf_label(const TreeP& leaf) {
    return leaf->kind == Tree::Kind::Trace ? leaf->payload : leaf->item;
}
} // namespace detail

/// Head-probe character on max-plus: T -> <s(head label), v_probe>, -inf off
/// Dom(h); leaves probe their own label.
inline Character<MaxPlus> char_head_probe(const SemSpace& sp, const Vec& v_probe,
                                          std::shared_ptr<const HeadFunction> h) {
    Character<MaxPlus> phi;
    phi.name = "head_probe";
    phi.policy = CombPolicy::Semi;
    phi.contract_payload = [h](const TreeP& sub) -> std::string {
        auto hl = h->head_leaf(sub);
        return hl ? detail::leaf_label(*hl) : std::string{};
    };
    phi.on_tree = [&sp, v_probe, h](const TreeP& t) -> double {
        auto hl = h->head_leaf(t);
        if (!hl) return MaxPlus::NEG_INF;
        std::string label = detail::leaf_label(*hl);
        if (label.empty() || !sp.embedding.count(label)) return MaxPlus::NEG_INF;
        return dot(sp.vec_of(label), v_probe);
    };
    return phi;
}

/// Convex-proximity character on [0,1]: phi(M(T1,T2)) = P(s(T1),s(T2)) in
/// Dom(h), 0 off-domain; leaves -> 1.
inline Character<Viterbi> char_convex(const SemSpace& sp, const ProximityFn& P,
                                      std::shared_ptr<const HeadFunction> h,
                                      std::string relation = "generic") {
    Character<Viterbi> phi;
    phi.name = "convex";
    phi.policy = CombPolicy::Cone;
    phi.contract_payload = [h](const TreeP& sub) -> std::string {
        auto hl = h->head_leaf(sub);
        return hl ? detail::leaf_label(*hl) : std::string{};
    };
    phi.on_tree = [&sp, &P, h, relation](const TreeP& t) -> double {
        if (t->kind != Tree::Kind::Node) return 1.0; // multiplicative unit on leaves
        if (!h->in_domain(t)) return 0.0;
        auto s1 = extend_s_convex(*h, P, sp, t->left, relation);
        auto s2 = extend_s_convex(*h, P, sp, t->right, relation);
        if (!s1 || !s2) return 0.0;
        return P.eval(t->left, t->right, *s1, *s2, relation);
    };
    return phi;
}

/// Agreement-line character on max-plus: phi(T) = t_T (the coefficient of the
/// first canonical child in s(T) = t_T s(T1) + (1-t_T) s(T2)); -inf off-domain;
/// leaves -> 0 (the max-plus unit).
inline Character<MaxPlus> char_vec(const SemSpace& sp, const AgreementFn& C,
                                   std::shared_ptr<const HeadFunction> h) {
    Character<MaxPlus> phi;
    phi.name = "vec";
    phi.policy = CombPolicy::Semi;
    phi.contract_payload = [h](const TreeP& sub) -> std::string {
        auto hl = h->head_leaf(sub);
        return hl ? detail::leaf_label(*hl) : std::string{};
    };
    phi.on_tree = [&sp, &C, h](const TreeP& t) -> double {
        if (t->kind != Tree::Kind::Node) return 0.0;
        auto r = extend_s_vec(*h, C, sp, t);
        if (!r) return MaxPlus::NEG_INF;
        return r->t_T;
    };
    return phi;
}

/// Truth-table character on the Boolean semiring; missing entries default
/// to @p missing (0 = conservative).
inline Character<BoolSR> char_boolean(std::map<std::string, int> table, int missing = 0) {
    Character<BoolSR> phi;
    phi.name = "boolean";
    phi.policy = CombPolicy::Semi;
    phi.on_tree = [table = std::move(table), missing](const TreeP& t) -> int {
        auto it = table.find(t->enc);
        return it == table.end() ? missing : it->second;
    };
    return phi;
}

// ---------------------------------------------------------------------------
// Bogolyubov preparation and semiring Birkhoff factorization
// ---------------------------------------------------------------------------

template <typename S>
struct BirkhoffTrace {
    using V = typename S::V;
    V phi, phitilde, phiminus, phiplus;
    /// Extremal nested selections, rendered one chain per line
    /// ("sel: enc,enc | quot: enc" levels joined by " ; ").
    std::vector<std::string> chains;
};

namespace detail {

/// Contract/delete quotient of a tree by a selection for character use:
/// contract mode writes the character's payload on each trace.
template <typename S>
Workspace char_quotient(const Character<S>& phi, const TreeP& t, const Selection& sel,
                        QuotientMode mode) {
    if (mode == QuotientMode::Delete) return quotient_ws(t, sel, mode);
    std::map<std::string, std::string> payloads;
    if (phi.contract_payload)
        for (const auto& a : sel) payloads[a] = phi.contract_payload(subtree_at(t, a));
    return ws_single(quotient_contract(t, sel, payloads));
}

template <typename S>
struct SemiBirkhoff {
    const Character<S>& phi;
    const RBOperator<S>& R;
    QuotientMode mode;
    std::map<std::string, std::pair<typename S::V, std::vector<std::string>>> memo; // enc -> (phitilde, argmax chains)

    typename S::V phiminus_tree(const TreeP& t) { return R.apply(phitilde_tree(t)); }

    typename S::V phiminus_ws(const Workspace& f) {
        auto v = S::one();
        for (auto& c : f.components) v = S::mul(v, phiminus_tree(c));
        return v;
    }

    typename S::V phitilde_tree(const TreeP& t) {
        auto it = memo.find(t->enc);
        if (it != memo.end()) return it->second.first;
        typename S::V best = phi(t);
        std::vector<std::string> argmax; // selections achieving the running max
        if (t->kind == Tree::Kind::Node) {
            for (const auto& sel : admissible_selections(t)) {
                if (!selection_reduced(sel, mode)) continue;
                Workspace quot = char_quotient(phi, t, sel, mode);
                if (quot.grading() == 0) continue; // reduced-coproduct terms only
                std::vector<TreeP> picked;
                for (auto& a : sel) picked.push_back(subtree_at(t, a));
                Workspace selws(std::move(picked));
                typename S::V contrib = S::mul(phiminus_ws(selws), phi_ws(quot));
                typename S::V combined = S::add(best, contrib);
                if (!S::eq(combined, best, 1e-12)) {
                    best = combined;
                    argmax.clear();
                }
                if (S::eq(contrib, best, 1e-12)) argmax.push_back(render_level(selws, quot));
            }
        }
        memo.emplace(t->enc, std::make_pair(best, argmax));
        return best;
    }

    typename S::V phi_ws(const Workspace& f) {
        auto v = S::one();
        for (auto& c : f.components) v = S::mul(v, phi.on_tree(c));
        return v;
    }

    static std::string render_level(const Workspace& selws, const Workspace& quot) {
        return "sel: " + selws.enc + " | quot: " + (quot.enc.empty() ? "(empty)" : quot.enc);
    }

    /// Expand the recorded argmax of t into full chain strings (each level's
    /// argmax choices of the selected components appended depth-first).
    std::vector<std::string> chains_for(const TreeP& t) {
        phitilde_tree(t);
        auto& rec = memo.at(t->enc);
        std::vector<std::string> out = rec.second;
        if (out.empty()) out.push_back("(no selection)");
        return out;
    }
};

} // namespace detail

template <typename S>
typename S::V bogolyubov(const Character<S>& phi, const RBOperator<S>& R, const Workspace& f,
                         QuotientMode mode = QuotientMode::Contract) {
    detail::SemiBirkhoff<S> b{phi, R, mode, {}};
    auto v = S::one();
    for (auto& c : f.components) v = S::mul(v, b.phitilde_tree(c));
    return v;
}

/// Semiring Birkhoff factorization: phi_minus = R(phi_tilde),
/// phi_plus = phi_minus (+) phi_tilde.  Weight -1 operators must carry the
/// extra R1 property; otherwise phi_plus would not stay multiplicative.
template <typename S>
BirkhoffTrace<S> birkhoff_semiring(const Character<S>& phi, const RBOperator<S>& R,
                                   const Workspace& f, QuotientMode mode = QuotientMode::Contract) {
    if (R.weight == -1 && !R.r1)
        throw std::invalid_argument(
            "birkhoff_semiring: weight -1 operator without the R1 property cannot yield a "
            "multiplicative factorization");
    detail::SemiBirkhoff<S> b{phi, R, mode, {}};
    BirkhoffTrace<S> out;
    out.phi = phi(f);
    auto tilde = S::one();
    auto minus = S::one();
    for (auto& c : f.components) {
        auto tv = b.phitilde_tree(c);
        tilde = S::mul(tilde, tv);
        minus = S::mul(minus, R.apply(tv));
        for (auto& ch : b.chains_for(c)) out.chains.push_back(c->enc + " -> " + ch);
    }
    out.phitilde = tilde;
    out.phiminus = minus;
    out.phiplus = S::add(minus, tilde);
    return out;
}

// ---------------------------------------------------------------------------
// Algebra-case Birkhoff factorization (Laurent coefficients)
// ---------------------------------------------------------------------------

/// Algebra Birkhoff over a Laurent carrier: phi_minus = -R(phi_tilde),
/// phi_plus = (1-R)(phi_tilde), delete-mode coproduct (grade-compatible).
template <typename C>
struct AlgBirkhoff {
    std::function<Laurent<C>(const TreeP&)> phi;
    std::map<std::string, Laurent<C>> memo_tilde;

    Laurent<C> phi_ws(const Workspace& f) {
        Laurent<C> v = Laurent<C>::unit();
        for (auto& c : f.components) v = v * phi(c);
        return v;
    }
    Laurent<C> phiminus_tree(const TreeP& t) { return -(phitilde_tree(t).polar()); }
    Laurent<C> phiminus_ws(const Workspace& f) {
        Laurent<C> v = Laurent<C>::unit();
        for (auto& c : f.components) v = v * phiminus_tree(c);
        return v;
    }
    Laurent<C> phitilde_tree(const TreeP& t) {
        auto it = memo_tilde.find(t->enc);
        if (it != memo_tilde.end()) return it->second;
        Laurent<C> acc = phi(t);
        if (t->kind == Tree::Kind::Node) {
            for (const auto& sel : admissible_selections(t)) {
                if (!selection_reduced(sel, QuotientMode::Delete)) continue;
                Workspace quot = quotient_ws(t, sel, QuotientMode::Delete);
                if (quot.grading() == 0) continue; // reduced-coproduct terms only
                std::vector<TreeP> picked;
                for (auto& a : sel) picked.push_back(subtree_at(t, a));
                Workspace selws(std::move(picked));
                acc = acc + phiminus_ws(selws) * phi_ws(quot);
            }
        }
        memo_tilde.emplace(t->enc, acc);
        return acc;
    }
    Laurent<C> phiplus_tree(const TreeP& t) { return phitilde_tree(t).regular(); }
    Laurent<C> phiplus_ws(const Workspace& f) {
        Laurent<C> v = Laurent<C>::unit();
        for (auto& c : f.components) v = v * phiplus_tree(c);
        return v;
    }

    /// Convolution check phi_plus = phi_minus * phi over the full coproduct.
    /// Coproduct coefficients are positive integer multiplicities (coinciding
    /// selection terms on trees with repeated leaves).
    bool verify_factorization(const Workspace& f) {
        TensorVec d = coproduct(f, QuotientMode::Delete);
        Laurent<C> conv;
        for (auto& [k, term] : d.terms) {
            if (term.coeff.den() != 1 || term.coeff.num() <= 0)
                throw std::logic_error("unexpected coproduct coefficient");
            Laurent<C> prod = phiminus_ws(term.left) * phi_ws(term.right);
            for (std::int64_t i = 0; i < term.coeff.num(); ++i) conv = conv + prod;
        }
        return conv == phiplus_ws(f);
    }
};

// ---------------------------------------------------------------------------
// Closed-form chain oracles (max-plus, identity and ReLU operators)
// ---------------------------------------------------------------------------

namespace detail {

/// Direct evaluation over all nested selection chains: at each level the max
/// runs over the empty chain (phi of the current tree) and every admissible
/// selection, with subchains chosen independently per selected subtree.
template <typename S>
struct ChainOracle {
    const Character<S>& phi;
    QuotientMode mode;
    bool relu; // true: weight +1 ReLU wrapping; false: identity operator

    /// Best chain value over all nonempty chains below t, plus phi(t) itself.
    typename S::V phiminus(const TreeP& t) {
        typename S::V best = best_chain_value(t);
        if (relu) best = std::max(best, typename S::V(0)); // outer ReLU
        return best;
    }

    typename S::V best_chain_value(const TreeP& t) {
        // max over: the empty chain (phi(t)) and every selection with
        // recursively chosen subchains.
        typename S::V best = phi(t);
        if (t->kind == Tree::Kind::Node) {
            for (const auto& sel : admissible_selections(t)) {
                if (!selection_reduced(sel, mode)) continue;
                Workspace quot = char_quotient(phi, t, sel, mode);
                if (quot.grading() == 0) continue; // reduced-coproduct terms only
                typename S::V inner = S::one();
                for (const auto& a : sel) {
                    typename S::V sub = best_chain_value(subtree_at(t, a));
                    if (relu) sub = std::max(sub, typename S::V(0));
                    inner = S::mul(inner, sub);
                }
                typename S::V q = S::one();
                for (auto& c : quot.components) q = S::mul(q, phi.on_tree(c));
                typename S::V total = S::mul(inner, q);
                best = S::add(best, total);
            }
        }
        return best;
    }
};

} // namespace detail

/// phi_minus by direct chain enumeration, identity operator on max-plus:
/// max{ phi(T), phi(F_N) + phi(F_{N-1}/F_N) + ... + phi(T/F_1) } over nested
/// chains of subforests (telescoping combined-agreement form).
inline double chain_oracle_id(const Character<MaxPlus>& phi, const TreeP& t,
                              QuotientMode mode = QuotientMode::Contract) {
    detail::ChainOracle<MaxPlus> o{phi, mode, false};
    return o.phiminus(t);
}

/// phi_minus by direct chain enumeration, ReLU operator (weight +1):
/// nested-ReLU combination (...(phi(F_N)^+ + phi(F_{N-1}/F_N))^+ ...)^+.
inline double chain_oracle_relu(const Character<MaxPlus>& phi, const TreeP& t,
                                QuotientMode mode = QuotientMode::Contract) {
    detail::ChainOracle<MaxPlus> o{phi, mode, true};
    return o.phiminus(t);
}

// ---------------------------------------------------------------------------
// Attention
// ---------------------------------------------------------------------------

using Matrix = std::vector<Vec>;

inline Vec matvec(const Matrix& m, const Vec& v) {
    Vec r(m.size(), 0.0);
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != v.size()) throw std::invalid_argument("attention: dimension mismatch");
        r[i] = dot(m[i], v);
    }
    return r;
}

/// Row-stochastic attention matrix over an item list: row l is the softmax of
/// <Q s(l), K s(l')> over l' (no rescaling factor).
inline std::map<std::string, std::map<std::string, double>> attention_matrix(
    const Matrix& Q, const Matrix& K, const SemSpace& sp, const std::vector<std::string>& items) {
    std::map<std::string, std::map<std::string, double>> A;
    for (auto& l : items) {
        Vec q = matvec(Q, sp.vec_of(l));
        std::vector<double> scores;
        double mx = -std::numeric_limits<double>::infinity();
        for (auto& lp : items) {
            double s = dot(q, matvec(K, sp.vec_of(lp)));
            scores.push_back(s);
            mx = std::max(mx, s);
        }
        double z = 0;
        for (double s : scores) z += std::exp(s - mx);
        for (size_t j = 0; j < items.size(); ++j) A[l][items[j]] = std::exp(scores[j] - mx) / z;
    }
    return A;
}

namespace detail {
inline std::vector<std::string> distinct_leaf_labels(const TreeP& t) {
    std::vector<std::string> out;
    for (auto& [addr, leaf] : leaves_of(t)) {
        std::string lb = leaf_label(leaf);
        if (lb.empty()) continue;
        bool seen = false;
        for (auto& s : out) seen |= (s == lb);
        if (!seen) out.push_back(lb);
    }
    return out;
}
} // namespace detail

/// Attention character on [0,1]: phi_A(T) = max over leaves of A_{h(T), leaf},
/// with A the attention matrix over T's own leaf-label set; 0 off Dom(h).
inline Character<Viterbi> char_attention(const Matrix& Q, const Matrix& K, const SemSpace& sp,
                                         std::shared_ptr<const HeadFunction> h) {
    Character<Viterbi> phi;
    phi.name = "attention";
    phi.policy = CombPolicy::Cone;
    phi.contract_payload = [h](const TreeP& sub) -> std::string {
        auto hl = h->head_leaf(sub);
        return hl ? detail::leaf_label(*hl) : std::string{};
    };
    phi.on_tree = [Q, K, &sp, h](const TreeP& t) -> double {
        if (t->kind != Tree::Kind::Node) return 1.0;
        auto hl = h->head_leaf(t);
        if (!hl) return 0.0;
        std::string head = detail::leaf_label(*hl);
        auto labels = detail::distinct_leaf_labels(t);
        auto A = attention_matrix(Q, K, sp, labels);
        double best = 0;
        for (auto& l : labels) best = std::max(best, A[head][l]);
        return best;
    };
    return phi;
}

/// Pair relation on leaf labels, per tree encoding: rho[tree enc][(l,l')] = 1.
using LeafRelation = std::map<std::string, std::map<std::pair<std::string, std::string>, int>>;

struct DetectResult {
    bool exact;
    double score;
};

/// A relation is exactly attention-detectable on a corpus when the argmax of
/// the head's attention row lands on a rho-partner of the head in every tree.
inline DetectResult detect_relation(const LeafRelation& rho, const Matrix& Q, const Matrix& K,
                                    const SemSpace& sp, const HeadFunction& h,
                                    const std::vector<TreeP>& corpus) {
    if (corpus.empty()) throw std::invalid_argument("detect_relation: empty corpus");
    double hits = 0;
    for (const auto& t : corpus) {
        auto hl = h.head_leaf(t);
        if (!hl) throw std::invalid_argument("detect_relation: corpus tree off Dom(h)");
        std::string head = detail::leaf_label(*hl);
        auto labels = detail::distinct_leaf_labels(t);
        auto A = attention_matrix(Q, K, sp, labels);
        std::string argmax;
        double best = -1;
        for (auto& l : labels)
            if (A[head][l] > best) {
                best = A[head][l];
                argmax = l;
            }
        auto rt = rho.find(t->enc);
        int rel = 0;
        if (rt != rho.end()) {
            auto it = rt->second.find({head, argmax});
            if (it != rt->second.end()) rel = it->second;
        }
        hits += rel;
    }
    return {hits == (double)corpus.size(), hits / (double)corpus.size()};
}

/// Relation-weighted attention character: max over leaves of
/// rho(h(T), l) * A_{h(T), l}.
inline double phi_attention_relation(const LeafRelation& rho, const Matrix& Q, const Matrix& K,
                                     const SemSpace& sp, const HeadFunction& h, const TreeP& t) {
    auto hl = h.head_leaf(t);
    if (!hl) return 0.0;
    std::string head = detail::leaf_label(*hl);
    auto labels = detail::distinct_leaf_labels(t);
    auto A = attention_matrix(Q, K, sp, labels);
    auto rt = rho.find(t->enc);
    double best = 0;
    for (auto& l : labels) {
        int rel = 0;
        if (rt != rho.end()) {
            auto it = rt->second.find({head, l});
            if (it != rt->second.end()) rel = it->second;
        }
        best = std::max(best, rel * A[head][l]);
    }
    return best;
}

} // namespace mk

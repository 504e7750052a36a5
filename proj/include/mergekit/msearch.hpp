#pragma once

/**
 * @file msearch.hpp
 * @brief The ring of Merge derivations: single-step enumeration over the
 *        seven case rules, chain enumeration, workspace-size accounting, the
 *        Laurent-valued characters phi_t / psi_t, and Minimal Search as an
 *        algebra Birkhoff factorization over the polar projection.
 *
 * Step cases (S, S' accessible terms; components of the workspace written T,
 * T'; unaffected part omitted):
 *   EM      T u T'  ->  M(T, T')
 *   IM      T       ->  M(T_v, T/T_v)
 *   SM(i)   T u T'  ->  M(T_v, T'_w) u T/T_v u T'/T'_w
 *   SM(ii)  T u T'  ->  M(T, T'_w) u T'/T'_w
 *   CM(i)   T       ->  M(T_v, T_w) u T/T_v
 *   CM(ii)  T       ->  M(T_v, T_w) u T/T_w
 *   CM(iii) T       ->  M(T_v, T_w) u T/(T_v u T_w)
 * with delete-mode quotients throughout.  v, w range over distinct disjoint
 * accessible terms of one component; CM instances whose quotient would be
 * empty are excluded (the case rule requires a remaining syntactic object).
 *
 * Per-step size cost: delta(EM)=+1, delta(IM)=0, delta(SM(i))=-3,
 * delta(SM(ii))=-1; the CM deltas are computed per instance as the drop of
 * the size functional 3*b0 + alpha (which reproduces the published per-case
 * values, and is <= -1 always).  The published SM constants are *not* the
 * size-functional drops of the corresponding rewrites; they are kept as the
 * per-case convention and a derivation's delta is the sum over its steps.
 */

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "characters.hpp"
#include "hopf.hpp"
#include "semirings.hpp"
#include "tree.hpp"
#include "workspace.hpp"

namespace mk {

// ---------------------------------------------------------------------------
// Single Merge steps
// ---------------------------------------------------------------------------

enum class StepKind { EM, IM, SM1, SM2, CM1, CM2, CM3 };

inline const char* step_kind_name(StepKind k) {
    switch (k) {
        case StepKind::EM: return "EM";
        case StepKind::IM: return "IM";
        case StepKind::SM1: return "SM(i)";
        case StepKind::SM2: return "SM(ii)";
        case StepKind::CM1: return "CM(i)";
        case StepKind::CM2: return "CM(ii)";
        case StepKind::CM3: return "CM(iii)";
    }
    return "?";
}

inline bool is_em_im(StepKind k) { return k == StepKind::EM || k == StepKind::IM; }

struct MergeStep {
    StepKind kind;
    Workspace source, target;
    std::string operands; // human-readable operand description
    int delta;
};

namespace detail {
inline Workspace rest_of(const Workspace& f, const std::vector<size_t>& omit) {
    std::vector<TreeP> out;
    for (size_t i = 0; i < f.components.size(); ++i)
        if (std::find(omit.begin(), omit.end(), i) == omit.end()) out.push_back(f.components[i]);
    return Workspace(std::move(out));
}
inline Workspace with_extra(const Workspace& rest, std::vector<TreeP> extra) {
    std::vector<TreeP> out = rest.components;
    for (auto& t : extra)
        if (t) out.push_back(t);
    return Workspace(std::move(out));
}
} // namespace detail

/// Every single-step outcome of the seven Merge cases on F, with per-step
/// delta; outcomes deduplicated by (kind, operands, target).
inline std::vector<MergeStep> enumerate_steps(const Workspace& f) {
    std::vector<MergeStep> out;
    std::set<std::string> seen;
    auto emit = [&](StepKind k, Workspace target, std::string operands, int delta) {
        std::string key = std::string(step_kind_name(k)) + "|" + operands + "|" + target.enc;
        if (!seen.insert(key).second) return;
        out.push_back({k, f, std::move(target), std::move(operands), delta});
    };
    const auto& cs = f.components;
    const int size_f = size_functional(f);

    // EM: merge two distinct components.
    for (size_t i = 0; i < cs.size(); ++i)
        for (size_t j = i + 1; j < cs.size(); ++j) {
            Workspace tgt = detail::with_extra(detail::rest_of(f, {i, j}), {merge(cs[i], cs[j])});
            emit(StepKind::EM, std::move(tgt), cs[i]->enc + " , " + cs[j]->enc, +1);
        }

    for (size_t i = 0; i < cs.size(); ++i) {
        const TreeP& T = cs[i];
        auto acc = accessible_terms(T);
        // IM: merge an accessible term with its own quotient.
        for (auto& [addr, sub] : acc) {
            TreeP quot = quotient_delete(T, {addr});
            if (!quot) continue;
            Workspace tgt = detail::with_extra(detail::rest_of(f, {i}), {merge(sub, quot)});
            emit(StepKind::IM, std::move(tgt), T->enc + " @ " + addr, 0);
        }
        // SM: operands from two distinct components.
        for (size_t j = 0; j < cs.size(); ++j) {
            if (j == i) continue;
            const TreeP& Tp = cs[j];
            auto accp = accessible_terms(Tp);
            // SM(i): accessible term of each (unordered component pair).
            if (j > i)
                for (auto& [av, sv] : acc)
                    for (auto& [aw, sw] : accp) {
                        Workspace tgt = detail::with_extra(
                            detail::rest_of(f, {i, j}),
                            {merge(sv, sw), quotient_delete(T, {av}), quotient_delete(Tp, {aw})});
                        emit(StepKind::SM1, std::move(tgt),
                             T->enc + " @ " + av + " , " + Tp->enc + " @ " + aw, -3);
                    }
            // SM(ii): whole component T with an accessible term of T'.
            for (auto& [aw, sw] : accp) {
                Workspace tgt = detail::with_extra(detail::rest_of(f, {i, j}),
                                                   {merge(T, sw), quotient_delete(Tp, {aw})});
                emit(StepKind::SM2, std::move(tgt), T->enc + " , " + Tp->enc + " @ " + aw, -1);
            }
        }
        // CM: two distinct disjoint accessible terms of one component.
        for (size_t a = 0; a < acc.size(); ++a)
            for (size_t b = 0; b < acc.size(); ++b) {
                if (a == b) continue;
                const auto& [av, sv] = acc[a];
                const auto& [aw, sw] = acc[b];
                if (!addresses_disjoint(av, aw)) continue;
                if (av > aw) continue; // unordered pair; the two quotients below cover both roles
                auto finish = [&](StepKind k, TreeP quot, const char* which) {
                    if (!quot) return; // the case rule requires a remaining object
                    Workspace tgt =
                        detail::with_extra(detail::rest_of(f, {i}), {merge(sv, sw), quot});
                    int delta = size_f - size_functional(tgt);
                    emit(k, std::move(tgt),
                         T->enc + " @ " + av + " , " + aw + " / " + which, delta);
                };
                finish(StepKind::CM1, quotient_delete(T, {av}), "first");
                finish(StepKind::CM2, quotient_delete(T, {aw}), "second");
                finish(StepKind::CM3, quotient_delete(T, {av, aw}), "both");
            }
    }
    std::sort(out.begin(), out.end(), [](const MergeStep& a, const MergeStep& b) {
        if (a.target.enc != b.target.enc) return a.target.enc < b.target.enc;
        if (a.kind != b.kind) return (int)a.kind < (int)b.kind;
        return a.operands < b.operands;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Derivations (chains of steps)
// ---------------------------------------------------------------------------

struct Derivation {
    std::vector<MergeStep> steps; // nonempty, composable
    int delta() const {
        int d = 0;
        for (auto& s : steps) d += s.delta;
        return d;
    }
    bool em_im_only() const {
        for (auto& s : steps)
            if (!is_em_im(s.kind)) return false;
        return true;
    }
    std::string render() const {
        std::string r;
        for (auto& s : steps) {
            if (!r.empty()) r += " ; ";
            r += std::string(step_kind_name(s.kind)) + "[" + s.operands + "]";
        }
        return r;
    }
};

namespace detail {
inline std::map<std::string, int> leaf_multiset(const Workspace& f) {
    std::map<std::string, int> m;
    for (auto& c : f.components)
        for (auto& [addr, leaf] : leaves_of(c)) ++m[leaf->enc];
    return m;
}
inline bool submultiset(const std::map<std::string, int>& a, const std::map<std::string, int>& b) {
    for (auto& [k, n] : a) {
        auto it = b.find(k);
        if (it == b.end() || it->second < n) return false;
    }
    return true;
}
} // namespace detail

/// Memoized step enumeration keyed by canonical workspace encoding.
using StepCache = std::map<std::string, std::vector<MergeStep>>;

namespace detail {
inline const std::vector<MergeStep>& cached_steps(StepCache& cache, const Workspace& f) {
    auto it = cache.find(f.enc);
    if (it == cache.end()) it = cache.emplace(f.enc, enumerate_steps(f)).first;
    return it->second;
}
} // namespace detail

/// All nonempty chains F -> F' of length <= maxlen, optionally restricted to
/// EM/IM steps.  Steps never shed leaf material, so intermediate workspaces
/// whose leaf multiset exceeds L(F') are pruned.
inline std::vector<Derivation> enumerate_derivations(const Workspace& from, const Workspace& to,
                                                     int maxlen, bool em_im_only = false,
                                                     StepCache* cache = nullptr) {
    std::vector<Derivation> out;
    StepCache local;
    if (!cache) cache = &local;
    auto target_leaves = detail::leaf_multiset(to);
    std::vector<MergeStep> chain;
    struct Rec {
        const Workspace& to;
        int maxlen;
        bool em_im_only;
        const std::map<std::string, int>& target_leaves;
        StepCache& cache;
        std::vector<MergeStep>& chain;
        std::vector<Derivation>& out;
        void go(const Workspace& cur) {
            if (!chain.empty() && cur.enc == to.enc) out.push_back(Derivation{chain});
            if ((int)chain.size() == maxlen) return;
            for (auto& step : detail::cached_steps(cache, cur)) {
                if (em_im_only && !is_em_im(step.kind)) continue;
                if (!detail::submultiset(detail::leaf_multiset(step.target), target_leaves))
                    continue;
                chain.push_back(step);
                go(step.target);
                chain.pop_back();
            }
        }
    } rec{to, maxlen, em_im_only, target_leaves, *cache, chain, out};
    rec.go(from);
    return out;
}

// ---------------------------------------------------------------------------
// The algebra of Merge derivations and its Laurent series
// ---------------------------------------------------------------------------

/// Formal rational combination of derivation-set symbols (F -> F'); the
/// chains a symbol stands for are recovered extensionally on demand.
struct DMCoeff {
    struct Term {
        Rational coeff;
        Workspace src, tgt;
    };
    std::map<std::pair<std::string, std::string>, Term> terms;

    void add(const Workspace& s, const Workspace& t, const Rational& c) {
        if (c.is_zero()) return;
        auto key = std::make_pair(s.enc, t.enc);
        auto it = terms.find(key);
        if (it == terms.end()) {
            terms.emplace(key, Term{c, s, t});
        } else {
            it->second.coeff += c;
            if (it->second.coeff.is_zero()) terms.erase(it);
        }
    }
    friend DMCoeff operator+(const DMCoeff& a, const DMCoeff& b) {
        DMCoeff r = a;
        for (auto& [k, t] : b.terms) r.add(t.src, t.tgt, t.coeff);
        return r;
    }
    /// Parallel (disjoint-union) product of derivation sets.
    friend DMCoeff operator*(const DMCoeff& a, const DMCoeff& b) {
        DMCoeff r;
        for (auto& [ka, ta] : a.terms)
            for (auto& [kb, tb] : b.terms)
                r.add(ws_union(ta.src, tb.src), ws_union(ta.tgt, tb.tgt), ta.coeff * tb.coeff);
        return r;
    }
    DMCoeff operator-() const {
        DMCoeff r = *this;
        for (auto& [k, t] : r.terms) t.coeff = -t.coeff;
        return r;
    }
    friend bool operator==(const DMCoeff& a, const DMCoeff& b) {
        if (a.terms.size() != b.terms.size()) return false;
        for (auto& [k, t] : a.terms) {
            auto it = b.terms.find(k);
            if (it == b.terms.end() || !(it->second.coeff == t.coeff)) return false;
        }
        return true;
    }
    static DMCoeff unit() {
        DMCoeff r;
        r.add(Workspace{}, Workspace{}, Rational(1));
        return r;
    }
};

using LaurentDM = Laurent<DMCoeff>;
template <> inline DMCoeff LaurentDM::unit_coeff() { return DMCoeff::unit(); }

/// phi_t(F) = (L(F) -> F) t^delta, delta = drop of 3*b0+alpha from L(F) to F
/// (= leaves-1 per tree component); multiplicative over disjoint union.
inline LaurentDM phi_t(const Workspace& f) {
    Workspace L = leaf_workspace(f);
    int delta = size_functional(L) - size_functional(f);
    LaurentDM r;
    DMCoeff c;
    c.add(L, f, Rational(1));
    r.add_term(delta, c);
    return r;
}

// ---------------------------------------------------------------------------
// psi_t: all intermediate derivation pairs, graded by per-step delta
// ---------------------------------------------------------------------------

struct PsiPair {
    Workspace src, tgt;
    int exponent;
    bool em_im_reachable;  // an EM/IM-only chain src -> tgt exists (or src == tgt)
    long chain_count = 0;  // recorded chains (0 for identity pairs)
    int min_delta = 0;     // minimum chain delta among recorded chains
    std::map<std::string, int> kind_hist; // step-kind occurrences over all recorded chains
};

struct PsiData {
    std::vector<PsiPair> pairs;
    int maxlen;
};

namespace detail {
/// Step lists prefiltered by a fixed leaf-multiset bound, memoized per
/// workspace (pointers stay valid: the backing vectors are never touched
/// after insertion).
struct BoundedSteps {
    const std::map<std::string, int>& bound;
    StepCache steps;
    std::map<std::string, std::vector<const MergeStep*>> filtered;

    const std::vector<const MergeStep*>& at(const Workspace& f) {
        auto it = filtered.find(f.enc);
        if (it != filtered.end()) return it->second;
        std::vector<const MergeStep*> v;
        for (auto& s : cached_steps(steps, f))
            if (submultiset(leaf_multiset(s.target), bound)) v.push_back(&s);
        return filtered.emplace(f.enc, std::move(v)).first->second;
    }
};

/// Workspaces reachable from `start` by <= maxlen bounded steps (incl. start).
inline std::map<std::string, Workspace> reachable_set(const Workspace& start, int maxlen,
                                                      BoundedSteps& bs) {
    std::map<std::string, Workspace> seen{{start.enc, start}};
    std::map<std::string, int> depth{{start.enc, 0}};
    std::deque<Workspace> q{start};
    while (!q.empty()) {
        Workspace cur = q.front();
        q.pop_front();
        int d = depth[cur.enc];
        if (d == maxlen) continue;
        for (auto* step : bs.at(cur)) {
            if (seen.count(step->target.enc)) continue;
            seen.emplace(step->target.enc, step->target);
            depth[step->target.enc] = d + 1;
            q.push_back(step->target);
        }
    }
    return seen;
}

/// Aggregate over every chain of length <= maxlen out of `start`: per
/// reachable endpoint, the chain count, minimum delta, step-kind occurrence
/// totals, and whether an EM/IM-only chain lands there.  One depth-first
/// sweep shared by all endpoints.
struct ChainAgg {
    long count = 0;
    int min_delta = 0;
    bool emim = false;
    std::map<std::string, long> kinds;
};
inline std::map<std::string, ChainAgg> aggregate_chains(const Workspace& start, int maxlen,
                                                        BoundedSteps& bs) {
    std::map<std::string, ChainAgg> agg;
    struct Rec {
        int maxlen;
        BoundedSteps& bs;
        std::map<std::string, ChainAgg>& agg;
        std::map<std::string, long> kinds; // running occurrence counts
        int depth = 0, delta = 0, non_emim = 0;
        void go(const Workspace& cur) {
            if (depth > 0) {
                ChainAgg& a = agg[cur.enc];
                if (a.count == 0 || delta < a.min_delta) a.min_delta = delta;
                ++a.count;
                a.emim = a.emim || (non_emim == 0);
                for (auto& [k, n] : kinds)
                    if (n) a.kinds[k] += n;
            }
            if (depth == maxlen) return;
            for (auto* step : bs.at(cur)) {
                ++depth;
                delta += step->delta;
                non_emim += is_em_im(step->kind) ? 0 : 1;
                ++kinds[step_kind_name(step->kind)];
                go(step->target);
                --kinds[step_kind_name(step->kind)];
                non_emim -= is_em_im(step->kind) ? 0 : 1;
                delta -= step->delta;
                --depth;
            }
        }
    } rec{maxlen, bs, agg, {}, 0, 0, 0};
    rec.go(start);
    return agg;
}
} // namespace detail

/**
 * The intermediate-pair data of a tree T: all (F, F') with L(F) = L(F') =
 * L(T) lying on some chain L(T) -> ... -> F -> ... -> F' -> ... -> T, with
 * chain segments bounded by maxlen (default: leaves + 1).  Identity pairs
 * (F, F) are included with the empty chain at t^0 (this keeps psi_t
 * multiplicative over disjoint unions).  Non-identity pairs are graded at
 * the size-functional drop when an EM/IM-only chain exists (every such chain
 * sums to exactly that drop), else at the minimum recorded chain delta,
 * clamped into [-8, -1].
 */
inline PsiData psi_pairs(const TreeP& t, int maxlen = -1) {
    if (maxlen < 0) maxlen = t->n_leaves + 1;
    Workspace target = ws_single(t);
    Workspace L = leaf_workspace(target);
    auto bound = detail::leaf_multiset(target);
    detail::BoundedSteps bs{bound, {}, {}};
    auto reach = detail::reachable_set(L, maxlen, bs);

    // One chain-statistics sweep per reachable workspace.
    std::map<std::string, std::map<std::string, detail::ChainAgg>> agg;
    for (auto& [enc, f] : reach) agg.emplace(enc, detail::aggregate_chains(f, maxlen, bs));

    // Keep F with a chain F -> ... -> T (or F = T).
    std::map<std::string, Workspace> nodes;
    for (auto& [enc, f] : reach)
        if (enc == target.enc || agg.at(enc).count(target.enc)) nodes.emplace(enc, f);

    PsiData out;
    out.maxlen = maxlen;
    for (auto& [e1, f1] : nodes) {
        for (auto& [e2, f2] : nodes) {
            if (e1 == e2) {
                out.pairs.push_back({f1, f2, 0, true, 0, 0, {}});
                continue;
            }
            auto it = agg.at(e1).find(e2);
            if (it == agg.at(e1).end()) continue;
            const detail::ChainAgg& a = it->second;
            int expo;
            if (a.emim) {
                expo = size_functional(f1) - size_functional(f2);
            } else {
                expo = std::min(a.min_delta, -1);
                expo = std::max(expo, LaurentDM::DEFAULT_MIN);
            }
            PsiPair p{f1, f2, expo, a.emim, a.count, a.min_delta, {}};
            for (auto& [k, n] : a.kinds) p.kind_hist[k] = (int)n;
            out.pairs.push_back(std::move(p));
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end(), [](const PsiPair& a, const PsiPair& b) {
        if (a.src.enc != b.src.enc) return a.src.enc < b.src.enc;
        return a.tgt.enc < b.tgt.enc;
    });
    return out;
}

inline LaurentDM psi_t(const TreeP& t, int maxlen = -1) {
    LaurentDM r;
    for (auto& p : psi_pairs(t, maxlen).pairs) {
        DMCoeff c;
        c.add(p.src, p.tgt, Rational(1));
        r.add_term(p.exponent, c);
    }
    return r;
}

inline LaurentDM psi_t(const Workspace& f, int maxlen = -1) {
    LaurentDM r = LaurentDM::unit();
    for (auto& c : f.components) r = r * psi_t(c, maxlen);
    return r;
}

// ---------------------------------------------------------------------------
// Minimal Search as Birkhoff factorization of psi_t
// ---------------------------------------------------------------------------

struct MSPairReport {
    Workspace src, tgt;
    int exponent;
    Rational coeff;
    std::vector<std::string> chains; // EM/IM-only chains for retained pairs
};

struct MSResult {
    LaurentDM psi, psiminus, psiplus;
    std::vector<MSPairReport> regular_terms; // retained by the factorization
    std::vector<MSPairReport> removed_terms; // projected away (polar grading)
    std::map<std::string, int> removed_kinds_histogram; // step kind -> occurrences
    bool truncated = false;
    bool convolution_ok = true; // only meaningful when verify was requested
};

/**
 * Minimal Search: Birkhoff-factorize psi_t over the polar projection.  The
 * regular part psi_plus retains exactly the derivation pairs reachable by
 * EM/IM-only chains (graded at the size-functional drop, >= 0); pairs whose
 * every chain uses SM or CM steps sit at negative grades and are projected
 * away.  Retained pairs are reported with their EM/IM chains; removed pairs
 * feed a histogram of the offending step kinds.
 */
inline MSResult ms_birkhoff(const TreeP& t, int maxlen = -1, bool verify = false) {
    PsiData data = psi_pairs(t, maxlen);
    MSResult out;
    out.psi = psi_t(t, maxlen);

    AlgBirkhoff<DMCoeff> B;
    auto psi_memo = std::make_shared<std::map<std::string, LaurentDM>>();
    int ml = data.maxlen;
    B.phi = [ml, psi_memo](const TreeP& u) {
        auto it = psi_memo->find(u->enc);
        if (it != psi_memo->end()) return it->second;
        return psi_memo->emplace(u->enc, psi_t(u, ml)).first->second;
    };
    LaurentDM tilde = B.phitilde_tree(t);
    out.psiminus = -(tilde.polar());
    out.psiplus = tilde.regular();
    out.truncated = out.psi.truncated || tilde.truncated;
    if (verify) out.convolution_ok = B.verify_factorization(ws_single(t));

    StepCache cache;
    for (auto& [e, c] : out.psiplus.coeff)
        for (auto& [key, term] : c.terms) {
            MSPairReport r{term.src, term.tgt, e, term.coeff, {}};
            if (key.first == key.second) {
                r.chains.push_back("(identity)");
            } else {
                for (auto& ch :
                     enumerate_derivations(term.src, term.tgt, data.maxlen, true, &cache))
                    r.chains.push_back(ch.render());
            }
            out.regular_terms.push_back(std::move(r));
        }
    for (auto& p : data.pairs) {
        if (p.em_im_reachable) continue;
        out.removed_terms.push_back({p.src, p.tgt, p.exponent, Rational(1), {}});
        for (auto& [k, n] : p.kind_hist)
            if (k != "EM" && k != "IM") out.removed_kinds_histogram[k] += n;
    }
    return out;
}

} // namespace mk

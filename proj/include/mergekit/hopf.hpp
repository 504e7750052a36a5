#pragma once

/**
 * @file hopf.hpp
 * @brief The graded commutative Hopf algebra of workspaces.
 *
 * Product: disjoint union (bilinear).  Coproduct on a tree T:
 *
 *     D(T) = T (x) 1  +  1 (x) T  +  sum over admissible selections
 *            (forest of selected subtrees) (x) (quotient of T),
 *
 * extended multiplicatively to forests.  Two quotient conventions are
 * supported: `contract` replaces each selected subtree by a trace leaf;
 * `delete` removes it and contracts unary vertices.  The antipode uses the
 * delete convention (the grading by non-trace leaves is additive there) via
 * the standard recursion for connected graded bialgebras.  The counit is the
 * coefficient of the empty workspace.
 */

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"
#include "tree.hpp"
#include "workspace.hpp"

namespace mk {

enum class QuotientMode { Contract, Delete };

// ---------------------------------------------------------------------------
// Formal rational combinations of workspaces / tensor pairs
// ---------------------------------------------------------------------------

struct ForestVec {
    // key: workspace encoding -> (coefficient, workspace)
    std::map<std::string, std::pair<Rational, Workspace>> terms;

    void add(const Workspace& w, const Rational& c) {
        if (c.is_zero()) return;
        auto it = terms.find(w.enc);
        if (it == terms.end()) {
            terms.emplace(w.enc, std::make_pair(c, w));
        } else {
            it->second.first += c;
            if (it->second.first.is_zero()) terms.erase(it);
        }
    }
    bool is_zero() const { return terms.empty(); }

    friend ForestVec operator+(const ForestVec& a, const ForestVec& b) {
        ForestVec r = a;
        for (auto& [k, t] : b.terms) r.add(t.second, t.first);
        return r;
    }
    friend ForestVec operator*(const Rational& c, const ForestVec& v) {
        ForestVec r;
        for (auto& [k, t] : v.terms) r.add(t.second, c * t.first);
        return r;
    }
    /// Bilinear extension of disjoint union.
    friend ForestVec operator*(const ForestVec& a, const ForestVec& b) {
        ForestVec r;
        for (auto& [ka, ta] : a.terms)
            for (auto& [kb, tb] : b.terms)
                r.add(ws_union(ta.second, tb.second), ta.first * tb.first);
        return r;
    }
    friend bool operator==(const ForestVec& a, const ForestVec& b) {
        if (a.terms.size() != b.terms.size()) return false;
        for (auto& [k, t] : a.terms) {
            auto it = b.terms.find(k);
            if (it == b.terms.end() || !(it->second.first == t.first)) return false;
        }
        return true;
    }
};

inline ForestVec fv_of(const Workspace& w, const Rational& c = Rational(1)) {
    ForestVec v;
    v.add(w, c);
    return v;
}
inline ForestVec fv_unit() { return fv_of(Workspace{}); }

struct TensorVec {
    struct Term {
        Rational coeff;
        Workspace left, right;
    };
    std::map<std::pair<std::string, std::string>, Term> terms;

    void add(const Workspace& l, const Workspace& r, const Rational& c) {
        if (c.is_zero()) return;
        auto key = std::make_pair(l.enc, r.enc);
        auto it = terms.find(key);
        if (it == terms.end()) {
            terms.emplace(key, Term{c, l, r});
        } else {
            it->second.coeff += c;
            if (it->second.coeff.is_zero()) terms.erase(it);
        }
    }
    friend bool operator==(const TensorVec& a, const TensorVec& b) {
        if (a.terms.size() != b.terms.size()) return false;
        for (auto& [k, t] : a.terms) {
            auto it = b.terms.find(k);
            if (it == b.terms.end() || !(it->second.coeff == t.coeff)) return false;
        }
        return true;
    }
};

// ---------------------------------------------------------------------------
// Counit, coproduct, antipode
// ---------------------------------------------------------------------------

inline Rational counit(const ForestVec& v) {
    auto it = v.terms.find("");
    return it == v.terms.end() ? Rational(0) : it->second.first;
}

/// Quotient of a tree by a selection in the requested mode, as a workspace
/// (empty when delete mode removes everything).
inline Workspace quotient_ws(const TreeP& t, const Selection& sel, QuotientMode mode) {
    if (mode == QuotientMode::Contract) return ws_single(quotient_contract(t, sel));
    TreeP q = quotient_delete(t, sel);
    return q ? ws_single(q) : Workspace{};
}

namespace detail {
/// Delete-mode redundancy: selecting both children of a vertex removes
/// exactly the parent subtree (unary contraction collapses the remainders),
/// so such selections re-present a coarser cut and would double-count
/// coproduct terms.
inline bool has_sibling_pair(const Selection& sel) {
    for (const auto& a : sel) {
        if (a.empty() || a.back() != '0') continue;
        std::string sib = a;
        sib.back() = '1';
        if (std::find(sel.begin(), sel.end(), sib) != sel.end()) return true;
    }
    return false;
}
} // namespace detail

/// Whether a selection contributes a reduced coproduct term in the given
/// mode: delete mode drops redundant sibling-pair presentations.  (Total
/// selections are excluded separately by the grading of their quotient.)
inline bool selection_reduced(const Selection& sel, QuotientMode mode) {
    return mode != QuotientMode::Delete || !detail::has_sibling_pair(sel);
}

/// Coproduct of a single tree.  Total selections -- those leaving a grade-0
/// quotient (empty in delete mode, all-trace in contract mode) -- are
/// excluded: they would duplicate the primitive term and break the counit
/// axiom and coassociativity.  Extracted subtrees are renumbered so nested
/// coproducts compare canonically.
inline TensorVec coproduct_tree(const TreeP& t, QuotientMode mode) {
    TensorVec out;
    out.add(ws_single(t), Workspace{}, Rational(1));
    out.add(Workspace{}, ws_single(t), Rational(1));
    for (const auto& sel : admissible_selections(t)) {
        if (!selection_reduced(sel, mode)) continue;
        Workspace quot = quotient_ws(t, sel, mode);
        if (quot.grading() == 0) continue;
        std::vector<TreeP> picked;
        for (auto& a : sel) picked.push_back(renumber_traces(subtree_at(t, a)));
        out.add(Workspace(std::move(picked)), std::move(quot), Rational(1));
    }
    return out;
}

/// Coproduct of a workspace: multiplicative over components.
inline TensorVec coproduct(const Workspace& f, QuotientMode mode) {
    TensorVec acc;
    acc.add(Workspace{}, Workspace{}, Rational(1));
    for (const auto& c : f.components) {
        TensorVec dc = coproduct_tree(c, mode);
        TensorVec next;
        for (auto& [k1, t1] : acc.terms)
            for (auto& [k2, t2] : dc.terms)
                next.add(ws_union(t1.left, t2.left), ws_union(t1.right, t2.right),
                         t1.coeff * t2.coeff);
        acc = std::move(next);
    }
    return acc;
}

/// Coproduct of a formal combination (linear extension).
inline TensorVec coproduct(const ForestVec& v, QuotientMode mode) {
    TensorVec out;
    for (auto& [k, t] : v.terms) {
        TensorVec d = coproduct(t.second, mode);
        for (auto& [kk, tt] : d.terms) out.add(tt.left, tt.right, t.first * tt.coeff);
    }
    return out;
}

namespace detail {
inline ForestVec antipode_tree(const TreeP& t, std::map<std::string, ForestVec>& memo);

inline ForestVec antipode_ws(const Workspace& f, std::map<std::string, ForestVec>& memo) {
    ForestVec r = fv_unit();
    for (const auto& c : f.components) r = r * antipode_tree(c, memo);
    return r;
}

inline ForestVec antipode_tree(const TreeP& t, std::map<std::string, ForestVec>& memo) {
    auto it = memo.find(t->enc);
    if (it != memo.end()) return it->second;
    // S(T) = -T - sum over selections S(selection) * (T/selection), delete
    // mode, restricted (like the coproduct) to root-retaining selections.
    ForestVec acc = Rational(-1) * fv_of(ws_single(t));
    for (const auto& sel : admissible_selections(t)) {
        if (!selection_reduced(sel, QuotientMode::Delete)) continue;
        Workspace quot = quotient_ws(t, sel, QuotientMode::Delete);
        if (quot.grading() == 0) continue;
        std::vector<TreeP> picked;
        for (auto& a : sel) picked.push_back(renumber_traces(subtree_at(t, a)));
        Workspace selws(std::move(picked));
        acc = acc + Rational(-1) * (antipode_ws(selws, memo) * fv_of(quot));
    }
    memo.emplace(t->enc, acc);
    return acc;
}
} // namespace detail

/// Antipode (delete mode only: contract mode is not grade-compatible here).
inline ForestVec antipode(const Workspace& f, QuotientMode mode = QuotientMode::Delete) {
    if (mode != QuotientMode::Delete)
        throw std::invalid_argument("antipode: only the delete quotient convention is grade-compatible");
    std::map<std::string, ForestVec> memo;
    return detail::antipode_ws(f, memo);
}

/// Convolution check m(S (x) id)D(F): must equal counit(F) * unit.
inline ForestVec antipode_convolution(const Workspace& f) {
    TensorVec d = coproduct(f, QuotientMode::Delete);
    ForestVec acc;
    for (auto& [k, t] : d.terms)
        acc = acc + t.coeff * (antipode(t.left) * fv_of(t.right));
    return acc;
}

} // namespace mk

#pragma once

/**
 * @file tree.hpp
 * @brief Syntactic objects: the free commutative non-associative magma over a
 *        lexicon, realized as non-planar binary rooted trees.
 *
 * A tree is either a lexical leaf, a trace leaf (the residue of contracting a
 * subtree to its root), or a binary node.  Unordered nodes store the
 * canonically-smaller child first, so structural equality and hashing work on
 * a normal form and never need to quotient by child swaps.  Planar (ordered)
 * nodes keep their child order; they appear only downstream of planarization
 * and in the moduli layer.
 *
 * Every tree caches its canonical encoding plus leaf/vertex counts at
 * construction; all values are immutable and freely shareable.
 */

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mk {

struct Tree;
using TreeP = std::shared_ptr<const Tree>;

struct Tree {
    enum class Kind { Item, Trace, Node };

    Kind kind = Kind::Item;
    std::string item;        ///< lexical name (Kind::Item)
    int trace_index = 0;     ///< numbering of trace leaves (Kind::Trace)
    std::string payload;     ///< optional semantic payload carried by a trace
    TreeP left, right;       ///< children (Kind::Node)
    bool ordered = false;    ///< true for planar nodes (child order significant)

    std::string enc;         ///< canonical encoding; total order on trees
    std::string skel;        ///< index-blind encoding: traces render as "*"
    int n_leaves = 0;        ///< all leaves, traces included
    int n_nontrace = 0;      ///< non-trace leaves (the grading)
    int n_vertices = 0;      ///< total vertex count
};

/// Encoding order with digit runs compared numerically, so trace *10 sorts
/// after *2.  Used to break ties between children whose skeletons agree.
inline bool enc_less(const std::string& a, const std::string& b) {
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (std::isdigit((unsigned char)a[i]) && std::isdigit((unsigned char)b[j])) {
            size_t i2 = i, j2 = j;
            while (i2 < a.size() && std::isdigit((unsigned char)a[i2])) ++i2;
            while (j2 < b.size() && std::isdigit((unsigned char)b[j2])) ++j2;
            if (i2 - i != j2 - j) return i2 - i < j2 - j;
            int c = a.compare(i, i2 - i, b, j, j2 - j);
            if (c != 0) return c < 0;
            i = i2;
            j = j2;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return (a.size() - i) < (b.size() - j);
}

inline TreeP make_item(const std::string& name) {
    auto t = std::make_shared<Tree>();
    t->kind = Tree::Kind::Item;
    t->item = name;
    t->enc = name;
    t->skel = name;
    t->n_leaves = 1;
    t->n_nontrace = 1;
    t->n_vertices = 1;
    return t;
}

inline TreeP make_trace(int index, const std::string& payload = "") {
    auto t = std::make_shared<Tree>();
    t->kind = Tree::Kind::Trace;
    t->trace_index = index;
    t->payload = payload;
    t->enc = "*" + std::to_string(index) + (payload.empty() ? "" : (":" + payload));
    t->skel = "*" + (payload.empty() ? std::string{} : (":" + payload));
    t->n_leaves = 1;
    t->n_nontrace = 0;
    t->n_vertices = 1;
    return t;
}

/// Unordered (commutative) merge node.  Children are ordered by their
/// index-blind skeletons (trace numbers broken as ties) so that the stored
/// order -- and hence the encoding -- does not depend on how traces happen to
/// be numbered; renumbering traces in traversal order is then a normal form.
inline TreeP make_node(TreeP a, TreeP b) {
    assert(a && b);
    if (b->skel != a->skel ? b->skel < a->skel : enc_less(b->enc, a->enc)) std::swap(a, b);
    auto t = std::make_shared<Tree>();
    t->kind = Tree::Kind::Node;
    t->left = a;
    t->right = b;
    t->ordered = false;
    t->enc = "{" + a->enc + " " + b->enc + "}";
    t->skel = "{" + a->skel + " " + b->skel + "}";
    t->n_leaves = a->n_leaves + b->n_leaves;
    t->n_nontrace = a->n_nontrace + b->n_nontrace;
    t->n_vertices = a->n_vertices + b->n_vertices + 1;
    return t;
}

/// Planar node: child order kept as given.
inline TreeP make_planar(TreeP a, TreeP b) {
    assert(a && b);
    auto t = std::make_shared<Tree>();
    t->kind = Tree::Kind::Node;
    t->left = a;
    t->right = b;
    t->ordered = true;
    t->enc = "(" + a->enc + " " + b->enc + ")";
    t->skel = "(" + a->skel + " " + b->skel + ")";
    t->n_leaves = a->n_leaves + b->n_leaves;
    t->n_nontrace = a->n_nontrace + b->n_nontrace;
    t->n_vertices = a->n_vertices + b->n_vertices + 1;
    return t;
}

inline bool tree_equal(const TreeP& a, const TreeP& b) { return a->enc == b->enc; }

/// merge(t1,t2): the magma operation (alias of make_node, named per the model).
inline TreeP merge(const TreeP& a, const TreeP& b) { return make_node(a, b); }

/// Forget planar structure: rebuild every node as unordered canonical.
inline TreeP unordered_of(const TreeP& t) {
    if (t->kind != Tree::Kind::Node) return t;
    return make_node(unordered_of(t->left), unordered_of(t->right));
}

// ---------------------------------------------------------------------------
// Vertex addresses: strings over {'0','1'} indexing children in stored order.
// The empty string addresses the root.
// ---------------------------------------------------------------------------

inline TreeP subtree_at(const TreeP& t, const std::string& addr) {
    TreeP cur = t;
    for (char c : addr) {
        if (cur->kind != Tree::Kind::Node) throw std::invalid_argument("not an accessible term: bad address");
        cur = (c == '0') ? cur->left : cur->right;
    }
    return cur;
}

/// All leaves in canonical (stored left-to-right) order as (address, tree).
inline void collect_leaves(const TreeP& t, const std::string& addr,
                           std::vector<std::pair<std::string, TreeP>>& out) {
    if (t->kind != Tree::Kind::Node) {
        out.emplace_back(addr, t);
        return;
    }
    collect_leaves(t->left, addr + "0", out);
    collect_leaves(t->right, addr + "1", out);
}

inline std::vector<std::pair<std::string, TreeP>> leaves_of(const TreeP& t) {
    std::vector<std::pair<std::string, TreeP>> out;
    collect_leaves(t, "", out);
    return out;
}

/// Accessible terms: every full subtree rooted at a non-root vertex.
/// A tree with n leaves yields 2n-2 entries.
inline std::vector<std::pair<std::string, TreeP>> accessible_terms(const TreeP& t) {
    std::vector<std::pair<std::string, TreeP>> out;
    struct Rec {
        std::vector<std::pair<std::string, TreeP>>& out;
        void walk(const TreeP& u, const std::string& addr) {
            if (!addr.empty()) out.emplace_back(addr, u);
            if (u->kind == Tree::Kind::Node) {
                walk(u->left, addr + "0");
                walk(u->right, addr + "1");
            }
        }
    } rec{out};
    rec.walk(t, "");
    // Deterministic order: by (encoding, address).
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second->enc != b.second->enc) return a.second->enc < b.second->enc;
        return a.first < b.first;
    });
    return out;
}

/// A selection: nonempty, pairwise disjoint (prefix-free), non-root addresses.
using Selection = std::vector<std::string>; // sorted, prefix-free

inline bool addresses_disjoint(const std::string& a, const std::string& b) {
    const std::string& s = a.size() <= b.size() ? a : b;
    const std::string& l = a.size() <= b.size() ? b : a;
    return l.compare(0, s.size(), s) != 0;
}

inline bool selection_valid(const TreeP& t, const Selection& sel) {
    if (sel.empty()) return false;
    for (size_t i = 0; i < sel.size(); ++i) {
        if (sel[i].empty()) return false; // root not selectable
        try { (void)subtree_at(t, sel[i]); } catch (...) { return false; }
        for (size_t j = i + 1; j < sel.size(); ++j)
            if (!addresses_disjoint(sel[i], sel[j])) return false;
    }
    return true;
}

/// All nonempty pairwise-disjoint sets of accessible terms, in a
/// deterministic order (by the sorted address tuples).  Accessible terms made
/// entirely of trace leaves (grade 0) are not selectable: selecting them
/// would break the grading that drives the coproduct recursion.
inline std::vector<Selection> admissible_selections(const TreeP& t) {
    std::vector<std::string> addrs;
    for (auto& [a, s] : accessible_terms(t))
        if (s->n_nontrace > 0) addrs.push_back(a);
    std::sort(addrs.begin(), addrs.end());
    std::vector<Selection> out;
    Selection cur;
    // Depth-first over sorted addresses keeping prefix-freeness.
    struct Rec {
        const std::vector<std::string>& addrs;
        std::vector<Selection>& out;
        Selection& cur;
        void go(size_t i) {
            if (i == addrs.size()) {
                if (!cur.empty()) out.push_back(cur);
                return;
            }
            go(i + 1);
            for (const auto& a : cur)
                if (!addresses_disjoint(a, addrs[i])) return;
            cur.push_back(addrs[i]);
            go(i + 1);
            cur.pop_back();
        }
    } rec{addrs, out, cur};
    rec.go(0);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Quotients
// ---------------------------------------------------------------------------

/// Re-number all trace leaves 0,1,2,... in canonical traversal order and
/// rebuild the tree (payloads kept).  Makes nested quotients comparable.
inline TreeP renumber_traces(const TreeP& t) {
    int next = 0;
    struct Rec {
        int& next;
        TreeP walk(const TreeP& u) {
            if (u->kind == Tree::Kind::Trace) return make_trace(next++, u->payload);
            if (u->kind != Tree::Kind::Node) return u;
            TreeP a = walk(u->left);
            TreeP b = walk(u->right);
            return u->ordered ? make_planar(a, b) : make_node(a, b);
        }
    } rec{next};
    return rec.walk(t);
}

/**
 * Contract-mode quotient: each selected subtree collapses to a trace leaf.
 * Traces are numbered canonically over the result; @p payloads optionally
 * assigns a payload per selected address (e.g. the removed subtree's head).
 */
inline TreeP quotient_contract(const TreeP& t, const Selection& sel,
                               const std::map<std::string, std::string>& payloads = {}) {
    if (!selection_valid(t, sel)) throw std::invalid_argument("not an accessible term: invalid selection");
    struct Rec {
        const Selection& sel;
        const std::map<std::string, std::string>& payloads;
        TreeP walk(const TreeP& u, const std::string& addr) {
            auto it = std::find(sel.begin(), sel.end(), addr);
            if (it != sel.end()) {
                auto p = payloads.find(addr);
                return make_trace(0, p == payloads.end() ? "" : p->second);
            }
            if (u->kind != Tree::Kind::Node) return u;
            return make_node(walk(u->left, addr + "0"), walk(u->right, addr + "1"));
        }
    } rec{sel, payloads};
    return renumber_traces(rec.walk(t, ""));
}

/**
 * Delete-mode quotient: selected subtrees are removed outright and every
 * resulting unary vertex contracted, leaving the unique maximal binary tree.
 * Returns nullptr when nothing remains.
 */
inline TreeP quotient_delete(const TreeP& t, const Selection& sel) {
    if (!selection_valid(t, sel)) throw std::invalid_argument("not an accessible term: invalid selection");
    struct Rec {
        const Selection& sel;
        TreeP walk(const TreeP& u, const std::string& addr) {
            if (std::find(sel.begin(), sel.end(), addr) != sel.end()) return nullptr;
            if (u->kind != Tree::Kind::Node) return u;
            TreeP a = walk(u->left, addr + "0");
            TreeP b = walk(u->right, addr + "1");
            if (a && b) return make_node(a, b);
            return a ? a : b; // unary contraction
        }
    } rec{sel};
    return rec.walk(t, "");
}

// ---------------------------------------------------------------------------
// Operad grafting
// ---------------------------------------------------------------------------

/// Replace the i-th leaf of @p shape (canonical leaf order) by args[i].
inline TreeP operad_graft(const TreeP& shape, const std::vector<TreeP>& args) {
    auto lv = leaves_of(shape);
    if (lv.size() != args.size()) throw std::invalid_argument("operad_graft: arity mismatch");
    size_t idx = 0;
    struct Rec {
        const std::vector<TreeP>& args;
        size_t& idx;
        TreeP walk(const TreeP& u) {
            if (u->kind != Tree::Kind::Node) return args[idx++];
            TreeP a = walk(u->left);
            TreeP b = walk(u->right);
            return make_node(a, b);
        }
    } rec{args, idx};
    return rec.walk(shape);
}

// ---------------------------------------------------------------------------
// Tree literal parser
//   tree := ITEM | '*' INT? | '{' tree tree '}' | '(' tree tree ')'
// ---------------------------------------------------------------------------

namespace detail {
inline void skip_ws(const std::string& s, size_t& i) {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
}
inline TreeP parse_tree_at(const std::string& s, size_t& i) {
    skip_ws(s, i);
    if (i >= s.size()) throw std::invalid_argument("tree parse error: unexpected end");
    char c = s[i];
    if (c == '{' || c == '(') {
        bool planar = (c == '(');
        ++i;
        TreeP a = parse_tree_at(s, i);
        TreeP b = parse_tree_at(s, i);
        skip_ws(s, i);
        char close = planar ? ')' : '}';
        if (i >= s.size() || s[i] != close) throw std::invalid_argument("tree parse error: expected closing bracket");
        ++i;
        return planar ? make_planar(a, b) : make_node(a, b);
    }
    if (c == '*') {
        ++i;
        int idx = 0;
        bool any = false;
        while (i < s.size() && std::isdigit((unsigned char)s[i])) {
            idx = idx * 10 + (s[i] - '0');
            ++i;
            any = true;
        }
        (void)any;
        return make_trace(idx);
    }
    size_t j = i;
    while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
    if (j == i) throw std::invalid_argument(std::string("tree parse error: unexpected character '") + c + "'");
    std::string name = s.substr(i, j - i);
    i = j;
    return make_item(name);
}
} // namespace detail

inline TreeP parse_tree(const std::string& s) {
    size_t i = 0;
    TreeP t = detail::parse_tree_at(s, i);
    detail::skip_ws(s, i);
    if (i != s.size()) throw std::invalid_argument("tree parse error: trailing input");
    return t;
}

} // namespace mk

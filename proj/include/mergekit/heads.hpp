#pragma once

/**
 * @file heads.hpp
 * @brief Head functions: partial assignments of a distinguished leaf to each
 *        internal vertex, subject to the projection-consistency axiom, and
 *        the induced planarizations.
 *
 * Axiom: whenever T_v is a subtree of T_w and the head leaf assigned to w
 * lies inside T_v, it must equal the head assigned to v.  Equivalently, a
 * valid assignment picks, at each internal vertex, the child from which the
 * head projects; hence exactly 2^(#internal vertices) valid tables, in
 * bijection with planar embeddings (convention: head-side child first).
 *
 * Two rule flavors are supported: explicit side-choice tables, and category
 * projection rules (precedence list with optional pair overrides; ties and
 * unknown categories are exocentric, i.e. domain failures).
 */

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lexicon.hpp"
#include "tree.hpp"

namespace mk {

/// A total head table for one tree: internal vertex address -> head leaf address.
using HeadTable = std::map<std::string, std::string>;

/// Side-choice form: internal vertex address -> 0 (left child) / 1 (right child).
using SideChoice = std::map<std::string, int>;

inline std::vector<std::string> internal_vertices(const TreeP& t) {
    std::vector<std::string> out;
    struct Rec {
        std::vector<std::string>& out;
        void walk(const TreeP& u, const std::string& addr) {
            if (u->kind != Tree::Kind::Node) return;
            out.push_back(addr);
            walk(u->left, addr + "0");
            walk(u->right, addr + "1");
        }
    } rec{out};
    rec.walk(t, "");
    return out;
}

/// Expand a side-choice table into the head-leaf table it determines.
inline HeadTable table_from_sides(const TreeP& t, const SideChoice& sides) {
    HeadTable out;
    for (const auto& v : internal_vertices(t)) {
        std::string cur = v;
        TreeP node = subtree_at(t, v);
        while (node->kind == Tree::Kind::Node) {
            int s = sides.at(cur);
            cur += (s == 0 ? '0' : '1');
            node = (s == 0) ? node->left : node->right;
        }
        out[v] = cur;
    }
    return out;
}

/// The defining axiom, checked directly on a total head-leaf table.
inline bool check_head_axiom(const HeadTable& table, const TreeP& t) {
    auto iv = internal_vertices(t);
    for (const auto& w : iv) {
        auto hw = table.find(w);
        if (hw == table.end()) return false;
        // h(w) must be a leaf below w.
        if (hw->second.compare(0, w.size(), w) != 0) return false;
        for (const auto& v : iv) {
            if (v.size() <= w.size() || v.compare(0, w.size(), w) != 0) continue; // v not strictly below w
            // T_v subtree of T_w; if h(w) lies inside T_v it must equal h(v).
            if (hw->second.compare(0, v.size(), v) == 0 && table.at(v) != hw->second) return false;
        }
    }
    return true;
}

/// All valid head tables on t: one per side-choice assignment.
inline std::vector<HeadTable> enumerate_head_functions(const TreeP& t) {
    auto iv = internal_vertices(t);
    std::vector<HeadTable> out;
    size_t n = iv.size();
    for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
        SideChoice sides;
        for (size_t i = 0; i < n; ++i) sides[iv[i]] = (mask >> i) & 1;
        out.push_back(table_from_sides(t, sides));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Head functions as rules
// ---------------------------------------------------------------------------

struct ProjectionRule {
    std::vector<std::string> precedence;                   // high to low
    std::map<std::pair<std::string, std::string>, int> pair_table; // (catL,catR) -> 0/1
    Lexicon lexicon;                                       // category lookup

    int rank(const std::string& cat) const {
        for (size_t i = 0; i < precedence.size(); ++i)
            if (precedence[i] == cat) return (int)i;
        return -1;
    }
    std::string category_of_leaf(const TreeP& leaf) const {
        if (leaf->kind == Tree::Kind::Trace)
            return leaf->payload.empty() ? std::string{} : lexicon.category_of(leaf->payload);
        return lexicon.category_of(leaf->item);
    }
    /// Which child projects given the two head-leaf categories; -1 = exocentric.
    int project(const std::string& catL, const std::string& catR) const {
        auto it = pair_table.find({catL, catR});
        if (it != pair_table.end()) return it->second;
        int rl = rank(catL), rr = rank(catR);
        if (rl < 0 || rr < 0 || rl == rr) return -1;
        return rl < rr ? 0 : 1;
    }
};

class HeadFunction {
public:
    /// Explicit per-tree side-choice tables, keyed by canonical tree encoding.
    static HeadFunction explicit_tables(std::map<std::string, SideChoice> tables) {
        HeadFunction h;
        h.tables_ = std::move(tables);
        h.has_rule_ = false;
        return h;
    }
    static HeadFunction projection(ProjectionRule rule) {
        HeadFunction h;
        h.rule_ = std::move(rule);
        h.has_rule_ = true;
        return h;
    }

    /// Side choices for every internal vertex, or nullopt if t is off-domain.
    std::optional<SideChoice> sides_for(const TreeP& t) const {
        if (!has_rule_) {
            auto it = tables_.find(t->enc);
            if (it == tables_.end()) return std::nullopt;
            return it->second;
        }
        SideChoice sides;
        if (!project_rec(t, "", sides)) return std::nullopt;
        return sides;
    }

    bool in_domain(const TreeP& t) const {
        if (t->kind != Tree::Kind::Node) return true; // leaves carry no head constraint
        return sides_for(t).has_value();
    }

    /// Head leaf address of the root vertex; nullopt for leaves / off-domain.
    std::optional<std::string> head_address(const TreeP& t) const {
        if (t->kind != Tree::Kind::Node) return std::nullopt;
        auto sides = sides_for(t);
        if (!sides) return std::nullopt;
        std::string cur;
        TreeP node = t;
        while (node->kind == Tree::Kind::Node) {
            int s = sides->at(cur);
            cur += (s == 0 ? '0' : '1');
            node = (s == 0) ? node->left : node->right;
        }
        return cur;
    }

    /// The head leaf itself (for leaves: the leaf, by convention of recursion).
    std::optional<TreeP> head_leaf(const TreeP& t) const {
        if (t->kind != Tree::Kind::Node) return t;
        auto addr = head_address(t);
        if (!addr) return std::nullopt;
        return subtree_at(t, *addr);
    }

    /// Full head table (for reporting / axiom tests).
    std::optional<HeadTable> table_for(const TreeP& t) const {
        auto sides = sides_for(t);
        if (!sides) return std::nullopt;
        return table_from_sides(t, *sides);
    }

    /// Planarization: head-side child first at every vertex.
    std::optional<TreeP> planarize(const TreeP& t) const {
        auto sides = sides_for(t);
        if (t->kind != Tree::Kind::Node) return t;
        if (!sides) return std::nullopt;
        return planarize_rec(t, "", *sides);
    }

private:
    bool project_rec(const TreeP& u, const std::string& addr, SideChoice& sides) const {
        if (u->kind != Tree::Kind::Node) return true;
        if (!project_rec(u->left, addr + "0", sides)) return false;
        if (!project_rec(u->right, addr + "1", sides)) return false;
        TreeP hl = head_leaf_from_sides(u->left, addr + "0", sides);
        TreeP hr = head_leaf_from_sides(u->right, addr + "1", sides);
        int side = rule_.project(rule_.category_of_leaf(hl), rule_.category_of_leaf(hr));
        if (side < 0) return false; // exocentric
        sides[addr] = side;
        return true;
    }
    static TreeP head_leaf_from_sides(TreeP node, std::string addr, const SideChoice& sides) {
        while (node->kind == Tree::Kind::Node) {
            int s = sides.at(addr);
            addr += (s == 0 ? '0' : '1');
            node = (s == 0) ? node->left : node->right;
        }
        return node;
    }
    static TreeP planarize_rec(const TreeP& u, const std::string& addr, const SideChoice& sides) {
        if (u->kind != Tree::Kind::Node) return u;
        TreeP a = planarize_rec(u->left, addr + "0", sides);
        TreeP b = planarize_rec(u->right, addr + "1", sides);
        return sides.at(addr) == 0 ? make_planar(a, b) : make_planar(b, a);
    }

    bool has_rule_ = false;
    ProjectionRule rule_;
    std::map<std::string, SideChoice> tables_;
};

/// Read the head function off a planar tree (head-side-first convention):
/// every internal vertex chooses its left child.
inline SideChoice sides_of_planar(const TreeP& t) {
    SideChoice out;
    for (const auto& v : internal_vertices(t)) out[v] = 0;
    return out;
}

} // namespace mk

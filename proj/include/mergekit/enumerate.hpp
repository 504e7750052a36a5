#pragma once

/**
 * @file enumerate.hpp
 * @brief Exhaustive small-scale enumeration of syntactic objects and
 *        workspaces over a finite label set (test and selftest support).
 */

#include <string>
#include <vector>

#include "tree.hpp"
#include "workspace.hpp"

namespace mk {

/// All trees with exactly n leaves, leaves labeled freely from @p labels
/// (repetition allowed), deduplicated up to the commutative normal form.
inline std::vector<TreeP> all_trees_exact(const std::vector<std::string>& labels, int n) {
    std::vector<TreeP> out;
    if (n == 1) {
        for (auto& l : labels) out.push_back(make_item(l));
        return out;
    }
    std::vector<std::string> seen_encs;
    for (int k = 1; k <= n / 2; ++k) {
        for (auto& a : all_trees_exact(labels, k))
            for (auto& b : all_trees_exact(labels, n - k)) {
                TreeP t = make_node(a, b);
                bool dup = false;
                for (auto& e : seen_encs) dup |= (e == t->enc);
                if (!dup) {
                    seen_encs.push_back(t->enc);
                    out.push_back(t);
                }
            }
    }
    return out;
}

/// All trees with 1..max_leaves leaves over the label set.
inline std::vector<TreeP> all_trees_upto(const std::vector<std::string>& labels, int max_leaves) {
    std::vector<TreeP> out;
    for (int n = 1; n <= max_leaves; ++n)
        for (auto& t : all_trees_exact(labels, n)) out.push_back(t);
    return out;
}

/// All nonempty workspaces with at most max_leaves total leaves (components
/// drawn with repetition, deduplicated by canonical encoding).
inline std::vector<Workspace> all_workspaces_upto(const std::vector<std::string>& labels,
                                                  int max_leaves) {
    std::vector<Workspace> out;
    std::vector<std::string> encs;
    auto trees = all_trees_upto(labels, max_leaves);
    struct Rec {
        const std::vector<TreeP>& trees;
        int max_leaves;
        std::vector<Workspace>& out;
        std::vector<std::string>& encs;
        std::vector<TreeP> cur;
        int used = 0;
        void go(size_t from) {
            if (!cur.empty()) {
                Workspace w(cur);
                bool dup = false;
                for (auto& e : encs) dup |= (e == w.enc);
                if (!dup) {
                    encs.push_back(w.enc);
                    out.push_back(w);
                }
            }
            for (size_t i = from; i < trees.size(); ++i) {
                if (used + trees[i]->n_leaves > max_leaves) continue;
                cur.push_back(trees[i]);
                used += trees[i]->n_leaves;
                go(i); // repetition allowed
                used -= trees[i]->n_leaves;
                cur.pop_back();
            }
        }
    } rec{trees, max_leaves, out, encs, {}, 0};
    rec.go(0);
    return out;
}

} // namespace mk

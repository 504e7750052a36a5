#pragma once

/**
 * @file workspace.hpp
 * @brief Workspaces: finite multisets of syntactic objects (binary forests).
 *
 * The empty workspace is the multiplicative unit of the forest algebra; the
 * product is disjoint union.  Components are kept sorted by canonical
 * encoding, making the workspace encoding itself canonical.
 */

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "tree.hpp"

namespace mk {

struct Workspace {
    std::vector<TreeP> components; // sorted by enc
    std::string enc;               // canonical: component encodings joined

    Workspace() { enc = ""; }
    explicit Workspace(std::vector<TreeP> cs) : components(std::move(cs)) {
        std::sort(components.begin(), components.end(),
                  [](const TreeP& a, const TreeP& b) { return a->enc < b->enc; });
        rebuild_enc();
    }

    bool empty() const { return components.empty(); }
    size_t size() const { return components.size(); }

    int total_leaves() const {
        int n = 0;
        for (auto& c : components) n += c->n_leaves;
        return n;
    }
    int total_vertices() const {
        int n = 0;
        for (auto& c : components) n += c->n_vertices;
        return n;
    }
    /// Grading: total count of non-trace leaves.
    int grading() const {
        int n = 0;
        for (auto& c : components) n += c->n_nontrace;
        return n;
    }

    friend bool operator==(const Workspace& a, const Workspace& b) { return a.enc == b.enc; }
    friend bool operator<(const Workspace& a, const Workspace& b) { return a.enc < b.enc; }

private:
    void rebuild_enc() {
        enc.clear();
        for (size_t i = 0; i < components.size(); ++i) {
            if (i) enc += " | ";
            enc += components[i]->enc;
        }
    }
};

inline Workspace ws_of(std::initializer_list<TreeP> ts) {
    return Workspace(std::vector<TreeP>(ts));
}
inline Workspace ws_single(const TreeP& t) { return Workspace({t}); }

/// Disjoint union (the algebra product).
inline Workspace ws_union(const Workspace& a, const Workspace& b) {
    std::vector<TreeP> cs = a.components;
    cs.insert(cs.end(), b.components.begin(), b.components.end());
    return Workspace(std::move(cs));
}

/// The fully disassembled workspace of a tree: one component per leaf.
inline Workspace leaf_workspace(const Workspace& f) {
    std::vector<TreeP> cs;
    for (auto& c : f.components)
        for (auto& [addr, lf] : leaves_of(c)) cs.push_back(lf);
    return Workspace(std::move(cs));
}

/**
 * Workspace size measures:
 *   b0    — number of connected components,
 *   alpha — number of accessible terms (non-root vertices),
 *   sigma — b0 + alpha = total vertex count,
 *   sigma_hat — sigma + b0.
 */
struct Measures {
    int b0 = 0, alpha = 0, sigma = 0, sigma_hat = 0;
    bool operator==(const Measures&) const = default;
};

inline Measures workspace_measures(const Workspace& f) {
    Measures m;
    m.b0 = (int)f.components.size();
    m.sigma = f.total_vertices();
    m.alpha = m.sigma - m.b0;
    m.sigma_hat = m.sigma + m.b0;
    return m;
}

/// The combination 3*b0 + alpha whose decrease defines the step grading.
inline int size_functional(const Workspace& f) {
    Measures m = workspace_measures(f);
    return 3 * m.b0 + m.alpha;
}

} // namespace mk

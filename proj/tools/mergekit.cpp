/**
 * @file mergekit.cpp
 * @brief Command-line entry point: parsing, Hopf operations, Merge-step and
 *        Minimal Search reports, Birkhoff factorizations, geometric
 *        embeddings, moduli combinatorics, graph parsing, attention-relation
 *        detection, and the selftest.
 *
 * All output is JSON on standard output with stable key ordering and floats
 * serialized to 12 significant digits, so identical inputs produce
 * byte-identical results.  Exit codes: 0 success, 1 bad input (with a
 * machine-readable error object), 2 internal assertion failure.
 */

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance.hpp"
#include "mergekit/characters.hpp"
#include "mergekit/config.hpp"
#include "mergekit/enumerate.hpp"
#include "mergekit/graphs.hpp"
#include "mergekit/heads.hpp"
#include "mergekit/hopf.hpp"
#include "mergekit/moduli.hpp"
#include "mergekit/msearch.hpp"
#include "mergekit/semirings.hpp"
#include "mergekit/space.hpp"
#include "mergekit/tree.hpp"
#include "mergekit/workspace.hpp"

namespace {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Deterministic JSON emission (12 significant digits for floats)
// ---------------------------------------------------------------------------

void dump_json(const ordered_json& j, std::ostream& out, int indent, int depth) {
    auto pad = [&](int d) {
        for (int i = 0; i < d * indent; ++i) out.put(' ');
    };
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            size_t k = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++k) {
                pad(depth + 1);
                out << nlohmann::json(it.key()).dump() << ": ";
                dump_json(it.value(), out, indent, depth + 1);
                if (k + 1 < j.size()) out << ",";
                out << "\n";
            }
            pad(depth);
            out << "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            out << "[\n";
            for (size_t k = 0; k < j.size(); ++k) {
                pad(depth + 1);
                dump_json(j[k], out, indent, depth + 1);
                if (k + 1 < j.size()) out << ",";
                out << "\n";
            }
            pad(depth);
            out << "]";
            return;
        }
        case ordered_json::value_t::number_float: {
            double v = j.get<double>();
            if (!std::isfinite(v)) {
                out << (std::isnan(v) ? "null" : (v > 0 ? "\"inf\"" : "\"-inf\""));
                return;
            }
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", v);
            std::string s = buf;
            // Keep floats recognizably floats.
            if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
                s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
                s += ".0";
            out << s;
            return;
        }
        default:
            out << j.dump();
            return;
    }
}

void emit(const ordered_json& j) {
    dump_json(j, std::cout, 2, 0);
    std::cout << "\n";
}

/// A max-plus value as JSON: finite doubles as numbers, -inf as a string.
ordered_json num_or(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return nullptr;
    return v > 0 ? "inf" : "-inf";
}

// ---------------------------------------------------------------------------
// Input parsing helpers
// ---------------------------------------------------------------------------

/// Parse "t1 | t2 | ..." into a workspace (single trees allowed).
mk::Workspace parse_ws(const std::string& s) {
    std::vector<mk::TreeP> cs;
    size_t start = 0;
    while (start <= s.size()) {
        size_t bar = s.find('|', start);
        std::string piece = s.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
        // Trim.
        size_t a = piece.find_first_not_of(" \t");
        size_t b = piece.find_last_not_of(" \t");
        if (a != std::string::npos) cs.push_back(mk::parse_tree(piece.substr(a, b - a + 1)));
        if (bar == std::string::npos) break;
        start = bar + 1;
    }
    if (cs.empty()) throw std::invalid_argument("empty workspace");
    return mk::Workspace(std::move(cs));
}

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    return j;
}

ordered_json tree_json(const mk::TreeP& t) {
    ordered_json j;
    if (t->kind == mk::Tree::Kind::Item) {
        j["kind"] = "item";
        j["name"] = t->item;
    } else if (t->kind == mk::Tree::Kind::Trace) {
        j["kind"] = "trace";
        j["index"] = t->trace_index;
        if (!t->payload.empty()) j["payload"] = t->payload;
    } else {
        j["kind"] = t->ordered ? "planar" : "node";
        j["left"] = tree_json(t->left);
        j["right"] = tree_json(t->right);
    }
    return j;
}

mk::QuotientMode mode_of(const std::string& s) {
    if (s == "contract") return mk::QuotientMode::Contract;
    if (s == "delete") return mk::QuotientMode::Delete;
    throw std::invalid_argument("unknown quotient mode '" + s + "' (use contract|delete)");
}

// ---------------------------------------------------------------------------
// Laurent rendering
// ---------------------------------------------------------------------------

ordered_json laurent_dm_json(const mk::LaurentDM& l) {
    ordered_json arr = ordered_json::array();
    for (auto& [e, c] : l.coeff) {
        ordered_json terms = ordered_json::array();
        for (auto& [key, term] : c.terms) {
            ordered_json t;
            t["coeff"] = term.coeff.str();
            t["src"] = term.src.enc;
            t["tgt"] = term.tgt.enc;
            terms.push_back(std::move(t));
        }
        ordered_json entry;
        entry["exponent"] = e;
        entry["terms"] = std::move(terms);
        arr.push_back(std::move(entry));
    }
    return arr;
}

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

int cmd_parse(const std::string& input) {
    mk::Workspace w = parse_ws(input);
    ordered_json out;
    out["canonical"] = w.enc;
    out["components"] = ordered_json::array();
    for (auto& c : w.components) {
        ordered_json cj;
        cj["canonical"] = c->enc;
        cj["leaves"] = c->n_leaves;
        cj["nontrace_leaves"] = c->n_nontrace;
        cj["vertices"] = c->n_vertices;
        cj["tree"] = tree_json(c);
        ordered_json acc = ordered_json::array();
        for (auto& [addr, sub] : mk::accessible_terms(c)) {
            ordered_json a;
            a["address"] = addr;
            a["term"] = sub->enc;
            acc.push_back(std::move(a));
        }
        cj["accessible_terms"] = std::move(acc);
        out["components"].push_back(std::move(cj));
    }
    out["grading"] = w.grading();
    emit(out);
    return 0;
}

int cmd_coproduct(const std::string& input, const std::string& mode) {
    mk::Workspace w = parse_ws(input);
    mk::TensorVec d = mk::coproduct(w, mode_of(mode));
    ordered_json out;
    out["workspace"] = w.enc;
    out["mode"] = mode;
    ordered_json terms = ordered_json::array();
    for (auto& [k, t] : d.terms) {
        ordered_json tj;
        tj["coeff"] = t.coeff.str();
        tj["left"] = t.left.enc;
        tj["right"] = t.right.enc;
        terms.push_back(std::move(tj));
    }
    out["terms"] = std::move(terms);
    emit(out);
    return 0;
}

int cmd_antipode(const std::string& input) {
    mk::Workspace w = parse_ws(input);
    mk::ForestVec s = mk::antipode(w);
    ordered_json out;
    out["workspace"] = w.enc;
    ordered_json terms = ordered_json::array();
    for (auto& [k, t] : s.terms) {
        ordered_json tj;
        tj["coeff"] = t.first.str();
        tj["workspace"] = t.second.enc;
        terms.push_back(std::move(tj));
    }
    out["terms"] = std::move(terms);
    emit(out);
    return 0;
}

int cmd_merge_steps(const std::string& input) {
    mk::Workspace w = parse_ws(input);
    ordered_json out;
    out["workspace"] = w.enc;
    ordered_json steps = ordered_json::array();
    for (auto& s : mk::enumerate_steps(w)) {
        ordered_json sj;
        sj["kind"] = mk::step_kind_name(s.kind);
        sj["operands"] = s.operands;
        sj["target"] = s.target.enc;
        sj["delta"] = s.delta;
        steps.push_back(std::move(sj));
    }
    out["steps"] = std::move(steps);
    emit(out);
    return 0;
}

/// The semiring/operator combinations exposed by name: maxplus+relu,
/// maxplus+id, viterbi+threshold[:lambda], boolean+id, laurent+polar.
struct SemOp {
    std::string semiring, op;
    double lambda;
};

SemOp resolve_semop(std::string semiring, std::string op, double default_lambda) {
    // Accept the combined form "maxplus+relu" in --semiring.
    auto plus = semiring.find('+');
    if (plus != std::string::npos) {
        if (!op.empty() && op != semiring.substr(plus + 1))
            throw std::invalid_argument("conflicting --semiring and --op");
        op = semiring.substr(plus + 1);
        semiring = semiring.substr(0, plus);
    }
    SemOp r{semiring, op, default_lambda};
    auto colon = r.op.find(':');
    if (colon != std::string::npos) {
        r.lambda = std::stod(r.op.substr(colon + 1));
        r.op = r.op.substr(0, colon);
    }
    auto fail = [&] {
        throw std::invalid_argument("unsupported semiring/operator '" + r.semiring + "+" + r.op +
                                    "' (use maxplus+relu, maxplus+id, viterbi+threshold[:l], "
                                    "boolean+id, laurent+polar)");
    };
    if (r.semiring == "maxplus") {
        if (r.op != "relu" && r.op != "id") fail();
    } else if (r.semiring == "viterbi") {
        if (r.op != "threshold") fail();
    } else if (r.semiring == "boolean") {
        if (r.op != "id") fail();
    } else if (r.semiring == "laurent") {
        if (r.op != "polar") fail();
    } else {
        fail();
    }
    return r;
}

template <typename S>
ordered_json birkhoff_json(const mk::BirkhoffTrace<S>& tr,
                           const std::function<ordered_json(typename S::V)>& render) {
    ordered_json out;
    out["phi"] = render(tr.phi);
    out["phitilde"] = render(tr.phitilde);
    out["phiminus"] = render(tr.phiminus);
    out["phiplus"] = render(tr.phiplus);
    out["chains"] = tr.chains;
    return out;
}

int cmd_birkhoff(const mk::AppConfig& cfg, const std::string& charname, std::string semiring,
                 std::string op, const std::string& mode, const std::string& input) {
    SemOp so = resolve_semop(std::move(semiring), std::move(op), cfg.threshold_lambda);
    mk::Workspace w = parse_ws(input);
    mk::QuotientMode m = mode_of(mode);
    auto h = cfg.head_function();

    ordered_json out;
    out["workspace"] = w.enc;
    out["character"] = charname;
    out["semiring"] = so.semiring;
    out["operator"] = so.op;
    out["mode"] = mode;

    if (so.semiring == "maxplus") {
        mk::Character<mk::MaxPlus> phi;
        if (charname == "head_probe")
            phi = mk::char_head_probe(cfg.space, cfg.probe, h);
        else if (charname == "vec")
            phi = mk::char_vec(cfg.space, cfg.agree, h);
        else
            throw std::invalid_argument("character '" + charname +
                                        "' is not max-plus valued (use head_probe or vec)");
        auto R = so.op == "relu" ? mk::rb_relu() : mk::rb_id_maxplus();
        auto tr = mk::birkhoff_semiring(phi, R, w, m);
        out["result"] = birkhoff_json<mk::MaxPlus>(tr, [](double v) { return num_or(v); });
    } else if (so.semiring == "viterbi") {
        mk::Character<mk::Viterbi> phi;
        if (charname == "convex")
            phi = mk::char_convex(cfg.space, cfg.prox, h);
        else
            throw std::invalid_argument("character '" + charname +
                                        "' is not unit-interval valued (use convex)");
        auto tr = mk::birkhoff_semiring(phi, mk::rb_threshold(so.lambda), w, m);
        out["lambda"] = so.lambda;
        out["result"] = birkhoff_json<mk::Viterbi>(tr, [](double v) { return num_or(v); });
    } else if (so.semiring == "boolean") {
        if (charname != "boolean")
            throw std::invalid_argument("character '" + charname +
                                        "' is not Boolean valued (use boolean)");
        auto phi = mk::char_boolean(cfg.truth_table);
        auto tr = mk::birkhoff_semiring(phi, mk::rb_id_bool(), w, m);
        out["result"] = birkhoff_json<mk::BoolSR>(tr, [](int v) { return ordered_json(v); });
    } else { // laurent+polar: the derivation-series character phi_t
        if (charname != "phi_t")
            throw std::invalid_argument("the laurent+polar regime factorizes the derivation "
                                        "series (use --char phi_t)");
        mk::AlgBirkhoff<mk::DMCoeff> B;
        B.phi = [](const mk::TreeP& u) { return mk::phi_t(mk::ws_single(u)); };
        mk::LaurentDM phi = mk::LaurentDM::unit();
        mk::LaurentDM tilde = mk::LaurentDM::unit();
        mk::LaurentDM minus = mk::LaurentDM::unit();
        mk::LaurentDM plus = mk::LaurentDM::unit();
        for (auto& c : w.components) {
            phi = phi * B.phi(c);
            tilde = tilde * B.phitilde_tree(c);
            minus = minus * B.phiminus_tree(c);
            plus = plus * B.phiplus_tree(c);
        }
        ordered_json r;
        r["phi"] = laurent_dm_json(phi);
        r["phitilde"] = laurent_dm_json(tilde);
        r["phiminus"] = laurent_dm_json(minus);
        r["phiplus"] = laurent_dm_json(plus);
        r["chains"] = ordered_json::array();
        out["result"] = std::move(r);
    }
    emit(out);
    return 0;
}

int cmd_embed_tree(const mk::AppConfig& cfg, const std::string& input,
                   const std::string& relation, double tol) {
    mk::TreeP t = mk::parse_tree(input);
    auto h = cfg.head_function();
    auto emb = mk::embed_tree(*h, cfg.prox, cfg.space, t, tol, relation);
    if (!emb) throw std::invalid_argument("tree is outside the head function's domain");
    ordered_json out;
    out["tree"] = t->enc;
    out["root_point"] = emb->root_point;
    ordered_json segs = ordered_json::array();
    for (auto& s : emb->segments) {
        ordered_json sj;
        sj["vertex"] = s.vertex.empty() ? "root" : s.vertex;
        sj["a"] = s.a;
        sj["b"] = s.b;
        sj["point"] = s.point;
        sj["param"] = s.param;
        segs.push_back(std::move(sj));
    }
    out["segments"] = std::move(segs);
    out["incidents"] = emb->incidents;
    emit(out);
    return 0;
}

int cmd_minimal_search(const std::string& input, int maxlen, bool verify) {
    mk::TreeP t = mk::parse_tree(input);
    mk::MSResult r = mk::ms_birkhoff(t, maxlen, verify);
    ordered_json out;
    out["tree"] = t->enc;
    out["maxlen"] = maxlen < 0 ? t->n_leaves + 1 : maxlen;
    ordered_json reg = ordered_json::array();
    for (auto& p : r.regular_terms) {
        ordered_json pj;
        pj["src"] = p.src.enc;
        pj["tgt"] = p.tgt.enc;
        pj["exponent"] = p.exponent;
        pj["coeff"] = p.coeff.str();
        pj["chains"] = p.chains;
        reg.push_back(std::move(pj));
    }
    out["regular_terms"] = std::move(reg);
    ordered_json pol = ordered_json::array();
    for (auto& p : r.removed_terms) {
        ordered_json pj;
        pj["src"] = p.src.enc;
        pj["tgt"] = p.tgt.enc;
        pj["exponent"] = p.exponent;
        pol.push_back(std::move(pj));
    }
    out["polar_terms"] = std::move(pol);
    out["removed_kinds_histogram"] = r.removed_kinds_histogram;
    out["truncated"] = r.truncated;
    if (verify) out["convolution_ok"] = r.convolution_ok;
    emit(out);
    return 0;
}

int cmd_moduli_counts(int n) {
    mk::ModuliCounts c = mk::moduli_counts(n);
    ordered_json out;
    out["n"] = n;
    out["catalan"] = c.catalan;
    out["trees"] = c.trees;
    out["fiber"] = c.fiber;
    out["identity"] = c.identity;
    emit(out);
    return 0;
}

int cmd_moduli_lca(const mk::AppConfig& cfg, const std::string& input, const std::string& order,
                   const std::string& heads_path) {
    mk::TreeP t = mk::parse_tree(input);
    std::shared_ptr<const mk::HeadFunction> h;
    if (heads_path.empty()) {
        h = cfg.head_function();
    } else {
        nlohmann::json j = read_json_file(heads_path);
        mk::ProjectionRule rule;
        rule.lexicon = cfg.lexicon;
        if (j.contains("precedence"))
            rule.precedence = j.at("precedence").get<std::vector<std::string>>();
        if (j.contains("pairs"))
            for (auto& row : j.at("pairs"))
                rule.pair_table[{row.at(0).get<std::string>(), row.at(1).get<std::string>()}] =
                    row.at(2).get<int>();
        h = std::make_shared<const mk::HeadFunction>(mk::HeadFunction::projection(std::move(rule)));
    }
    std::vector<std::string> ord = split_words(order);
    std::vector<int> perm = mk::lca_transform(t, ord, *h);
    ordered_json out;
    out["tree"] = t->enc;
    out["order"] = ord;
    out["permutation"] = perm;
    emit(out);
    return 0;
}

// ---------------------------------------------------------------------------
// parse-graph
// ---------------------------------------------------------------------------

/// Resolve one step spec {kind, target[, operands]} against the enumerated
/// steps of the current workspace.
mk::MergeStep resolve_step(mk::StepCache& cache, const mk::Workspace& cur,
                           const nlohmann::json& spec) {
    std::string kind = spec.at("kind").get<std::string>();
    std::string target = parse_ws(spec.at("target").get<std::string>()).enc;
    std::string operands = spec.contains("operands") ? spec.at("operands").get<std::string>() : "";
    std::vector<const mk::MergeStep*> hits;
    for (auto& s : mk::detail::cached_steps(cache, cur)) {
        if (mk::step_kind_name(s.kind) != kind || s.target.enc != target) continue;
        if (!operands.empty() && s.operands != operands) continue;
        hits.push_back(&s);
    }
    if (hits.empty())
        throw std::invalid_argument("no " + kind + " step from '" + cur.enc + "' to '" + target + "'");
    if (hits.size() > 1)
        throw std::invalid_argument("ambiguous step " + kind + " from '" + cur.enc + "' to '" +
                                    target + "': add \"operands\" to disambiguate");
    return *hits[0];
}

mk::Derivation resolve_derivation(mk::StepCache& cache, const mk::Workspace& source,
                                  const nlohmann::json& steps) {
    mk::Derivation d;
    mk::Workspace cur = source;
    for (auto& spec : steps) {
        mk::MergeStep s = resolve_step(cache, cur, spec);
        cur = s.target;
        d.steps.push_back(std::move(s));
    }
    if (d.steps.empty()) throw std::invalid_argument("empty derivation");
    return d;
}

int cmd_parse_graph(const std::string& path, const std::string& semiring,
                    const std::string& target_id, int maxk) {
    nlohmann::json j = read_json_file(path);
    mk::StepCache cache;
    mk::DerivGraph g;
    for (auto& v : j.at("vertices")) g.vertices.push_back(parse_ws(v.get<std::string>()));
    for (auto& e : j.at("edges")) {
        size_t from = e.at("from").get<size_t>(), to = e.at("to").get<size_t>();
        if (from >= g.vertices.size() || to >= g.vertices.size())
            throw std::invalid_argument("edge endpoint out of range");
        mk::Derivation d = resolve_derivation(cache, g.vertices[from], e.at("derivation"));
        g.edges.push_back({from, to, std::move(d), e.at("weight").get<double>()});
    }
    g.validate();
    if (!j.contains("derivations") || !j.at("derivations").contains(target_id))
        throw std::invalid_argument("target derivation '" + target_id + "' not found in file");
    const auto& tj = j.at("derivations").at(target_id);
    mk::Workspace source = parse_ws(tj.at("source").get<std::string>());
    mk::Derivation gamma = resolve_derivation(cache, source, tj.at("steps"));

    ordered_json out;
    out["graph"] = path;
    out["target"] = target_id;
    out["semiring"] = semiring;
    out["arrow"] = gamma.render();
    out["factorizations"] = (int)mk::enumerate_factorizations(g, gamma, maxk).size();
    if (semiring == "boolean") {
        auto val = mk::graph_birkhoff<mk::BoolSR>(g, gamma, mk::rb_id_bool(),
                                                  [](double w) { return w != 0.0 ? 1 : 0; }, maxk);
        out["value"] = val;
    } else if (semiring == "probability") {
        auto val = mk::graph_birkhoff<mk::ProbSR>(g, gamma, mk::rb_id_prob(),
                                                  [](double w) { return w; }, maxk);
        out["value"] = val;
    } else {
        throw std::invalid_argument("unsupported graph semiring '" + semiring +
                                    "' (use boolean|probability)");
    }
    emit(out);
    return 0;
}

int cmd_attention_detect(const mk::AppConfig& cfg, const std::string& relation_path,
                         const std::string& qk_path, const std::string& corpus_path) {
    nlohmann::json rj = read_json_file(relation_path);
    mk::LeafRelation rho;
    for (auto& [enc, pairs] : rj.items())
        for (auto& p : pairs)
            rho[enc][{p.at(0).get<std::string>(), p.at(1).get<std::string>()}] = 1;
    nlohmann::json qkj = read_json_file(qk_path);
    mk::Matrix Q = qkj.at("Q").get<mk::Matrix>();
    mk::Matrix K = qkj.at("K").get<mk::Matrix>();
    nlohmann::json cj = read_json_file(corpus_path);
    std::vector<mk::TreeP> corpus;
    for (auto& s : cj) corpus.push_back(mk::parse_tree(s.get<std::string>()));
    auto h = cfg.head_function();
    mk::DetectResult r = mk::detect_relation(rho, Q, K, cfg.space, *h, corpus);
    ordered_json out;
    out["corpus_size"] = (int)corpus.size();
    out["exact"] = r.exact;
    out["score"] = r.score;
    emit(out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Workspace Hopf algebra, semiring characters, Birkhoff factorization, "
                 "Merge derivations, and externalization combinatorics"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON configuration file (default: built-in demo)");

    // parse
    std::string parse_input;
    auto* c_parse = app.add_subcommand("parse", "Parse a tree or workspace and report its canonical form");
    c_parse->add_option("input", parse_input, "tree or 't1 | t2' workspace literal")->required();

    // coproduct
    std::string cop_input, cop_mode = "contract";
    auto* c_cop = app.add_subcommand("coproduct", "Coproduct terms of a workspace");
    c_cop->add_option("input", cop_input)->required();
    c_cop->add_option("--mode", cop_mode, "contract|delete (default contract)");

    // antipode
    std::string ant_input;
    auto* c_ant = app.add_subcommand("antipode", "Antipode of a workspace (delete quotients)");
    c_ant->add_option("input", ant_input)->required();

    // merge-steps
    std::string ms_input;
    auto* c_ms = app.add_subcommand("merge-steps", "All single Merge steps out of a workspace");
    c_ms->add_option("input", ms_input)->required();

    // birkhoff
    std::string bk_char, bk_semiring, bk_op, bk_mode = "contract", bk_input;
    auto* c_bk = app.add_subcommand("birkhoff", "Birkhoff factorization of a character");
    c_bk->add_option("--char", bk_char, "head_probe|vec|convex|boolean|phi_t")->required();
    c_bk->add_option("--semiring", bk_semiring, "maxplus|viterbi|boolean|laurent (or combined 'maxplus+relu')")->required();
    c_bk->add_option("--op", bk_op, "relu|id|threshold[:lambda]|polar");
    c_bk->add_option("--mode", bk_mode, "contract|delete (default contract)");
    c_bk->add_option("input", bk_input)->required();

    // embed-tree
    std::string et_input, et_relation = "generic";
    double et_tol = 1e-9;
    auto* c_et = app.add_subcommand("embed-tree", "Geometric embedding of a tree in the semantic space");
    c_et->add_option("input", et_input)->required();
    c_et->add_option("--relation", et_relation, "proximity relation key (default generic)");
    c_et->add_option("--tol", et_tol, "incident tolerance (default 1e-9)");

    // minimal-search
    std::string mns_input;
    int mns_maxlen = -1;
    bool mns_verify = false;
    auto* c_mns = app.add_subcommand("minimal-search", "Minimal Search via Birkhoff factorization of the derivation series");
    c_mns->add_option("input", mns_input)->required();
    c_mns->add_option("--maxlen", mns_maxlen, "chain length bound (default leaves+1)");
    c_mns->add_flag("--verify", mns_verify, "check the convolution identity");

    // moduli
    auto* c_mod = app.add_subcommand("moduli", "Externalization combinatorics");
    int mod_n = 4;
    auto* c_mod_counts = c_mod->add_subcommand("counts", "Planar/abstract tree counts and the covering identity");
    c_mod_counts->add_option("--n", mod_n, "leaf count (default 4)");
    std::string lca_input, lca_order, lca_heads;
    auto* c_mod_lca = c_mod->add_subcommand("lca", "Covering permutation between externalized and head orders");
    c_mod_lca->add_option("input", lca_input)->required();
    c_mod_lca->add_option("--order", lca_order, "target leaf order, space separated")->required();
    c_mod_lca->add_option("--heads", lca_heads, "JSON head-rule file (default: config rule)");
    c_mod->require_subcommand(1);

    // parse-graph
    auto* c_pg = app.add_subcommand("parse-graph", "Semiring evaluation over a derivation graph");
    std::string pg_file, pg_semiring = "boolean", pg_target;
    int pg_maxk = -1;
    auto* c_pg_eval = c_pg->add_subcommand("eval", "Evaluate a target arrow over all factorizations");
    c_pg_eval->add_option("graph", pg_file, "graph JSON file")->required();
    c_pg_eval->add_option("--semiring", pg_semiring, "boolean|probability (default boolean)");
    c_pg_eval->add_option("--target", pg_target, "derivation id from the file's 'derivations' map")->required();
    c_pg_eval->add_option("--maxk", pg_maxk, "max factorization length (default: arrow degree)");
    c_pg->require_subcommand(1);

    // attention-detect
    std::string ad_relation, ad_qk, ad_corpus;
    auto* c_ad = app.add_subcommand("attention-detect", "Attention-detectability of a leaf relation on a corpus");
    c_ad->add_option("--relation", ad_relation, "JSON {tree enc: [[head, partner], ...]}")->required();
    c_ad->add_option("--qk", ad_qk, "JSON {Q: [[...]], K: [[...]]}")->required();
    c_ad->add_option("--corpus", ad_corpus, "JSON list of tree literals")->required();

    // selftest
    app.add_subcommand("selftest", "Run the full acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        ordered_json err;
        err["error"] = e.what();
        err["kind"] = "usage";
        emit(err);
        return 1;
    }

    try {
        mk::AppConfig cfg = config_path.empty()
                                ? mk::config_from_json(nlohmann::json::parse(mk::demo_config_text()))
                                : mk::load_config(config_path);
        if (app.got_subcommand("parse")) return cmd_parse(parse_input);
        if (app.got_subcommand("coproduct")) return cmd_coproduct(cop_input, cop_mode);
        if (app.got_subcommand("antipode")) return cmd_antipode(ant_input);
        if (app.got_subcommand("merge-steps")) return cmd_merge_steps(ms_input);
        if (app.got_subcommand("birkhoff"))
            return cmd_birkhoff(cfg, bk_char, bk_semiring, bk_op, bk_mode, bk_input);
        if (app.got_subcommand("embed-tree")) return cmd_embed_tree(cfg, et_input, et_relation, et_tol);
        if (app.got_subcommand("minimal-search"))
            return cmd_minimal_search(mns_input, mns_maxlen, mns_verify);
        if (app.got_subcommand("moduli")) {
            if (c_mod->got_subcommand("counts")) return cmd_moduli_counts(mod_n);
            return cmd_moduli_lca(cfg, lca_input, lca_order, lca_heads);
        }
        if (app.got_subcommand("parse-graph"))
            return cmd_parse_graph(pg_file, pg_semiring, pg_target, pg_maxk);
        if (app.got_subcommand("attention-detect"))
            return cmd_attention_detect(cfg, ad_relation, ad_qk, ad_corpus);
        if (app.got_subcommand("selftest")) return mk::run_acceptance(std::cout) ? 0 : 1;
        throw std::logic_error("unhandled subcommand");
    } catch (const std::invalid_argument& e) {
        ordered_json err;
        err["error"] = e.what();
        err["kind"] = "input";
        emit(err);
        return 1;
    } catch (const std::out_of_range& e) {
        ordered_json err;
        err["error"] = e.what();
        err["kind"] = "input";
        emit(err);
        return 1;
    } catch (const nlohmann::json::exception& e) {
        ordered_json err;
        err["error"] = e.what();
        err["kind"] = "input";
        emit(err);
        return 1;
    } catch (const std::exception& e) {
        ordered_json err;
        err["error"] = e.what();
        err["kind"] = "internal";
        emit(err);
        return 2;
    }
}

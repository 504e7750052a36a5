#pragma once

/**
 * @file config.hpp
 * @brief JSON application configuration: lexicon, embeddings, proximity /
 *        agreement tables, head-projection rules, character parameters, and
 *        numeric settings shared by the CLI and the selftest.
 */

#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "heads.hpp"
#include "lexicon.hpp"
#include "space.hpp"

namespace mk {

struct AppConfig {
    Lexicon lexicon;
    SemSpace space;
    ProximityFn prox;
    AgreementFn agree;
    std::vector<std::string> precedence;                           // head categories, high to low
    std::map<std::pair<std::string, std::string>, int> pair_table; // projection overrides
    Vec probe;                                                     // head-probe direction
    std::map<std::string, int> truth_table;                        // Boolean character
    double tolerance = 1e-9;
    double threshold_lambda = 0.5;

    std::shared_ptr<const HeadFunction> head_function() const {
        ProjectionRule rule;
        rule.precedence = precedence;
        rule.pair_table = pair_table;
        rule.lexicon = lexicon;
        return std::make_shared<const HeadFunction>(HeadFunction::projection(std::move(rule)));
    }
};

inline AppConfig config_from_json(const nlohmann::json& j) {
    AppConfig c;
    if (j.contains("lexicon")) {
        std::string lines;
        for (auto& e : j.at("lexicon")) lines += e.get<std::string>() + "\n";
        c.lexicon = Lexicon::parse(lines);
    }
    if (j.contains("vectors")) {
        for (auto& [name, arr] : j.at("vectors").items()) {
            Vec v = arr.get<Vec>();
            if (c.space.dimension == 0) c.space.dimension = (int)v.size();
            if ((int)v.size() != c.space.dimension)
                throw std::invalid_argument("config: inconsistent vector dimensions");
            c.space.embedding[name] = std::move(v);
        }
    }
    if (j.contains("proximity")) {
        const auto& p = j.at("proximity");
        if (p.contains("clamp_eps")) c.prox.clamp_eps = p.at("clamp_eps").get<double>();
        if (p.contains("tables"))
            for (auto& [relation, rows] : p.at("tables").items())
                for (auto& row : rows) {
                    std::string a = row.at(0).get<std::string>(), b = row.at(1).get<std::string>();
                    if (b < a) std::swap(a, b);
                    c.prox.tables[relation][{a, b}] = row.at(2).get<double>();
                }
    }
    if (j.contains("agreement"))
        for (auto& row : j.at("agreement")) {
            std::string a = row.at(0).get<std::string>(), b = row.at(1).get<std::string>();
            if (b < a) std::swap(a, b);
            c.agree.table[{a, b}] = row.at(2).get<double>();
        }
    if (j.contains("heads")) {
        const auto& h = j.at("heads");
        if (h.contains("precedence")) c.precedence = h.at("precedence").get<std::vector<std::string>>();
        if (h.contains("pairs"))
            for (auto& row : h.at("pairs"))
                c.pair_table[{row.at(0).get<std::string>(), row.at(1).get<std::string>()}] =
                    row.at(2).get<int>();
    }
    if (j.contains("probe")) c.probe = j.at("probe").get<Vec>();
    if (j.contains("truth_table"))
        for (auto& [enc, v] : j.at("truth_table").items()) c.truth_table[enc] = v.get<int>();
    if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
    if (j.contains("threshold_lambda")) c.threshold_lambda = j.at("threshold_lambda").get<double>();
    return c;
}

inline AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

/// The built-in demo configuration (used when no --config is given).
std::string demo_config_text();

} // namespace mk

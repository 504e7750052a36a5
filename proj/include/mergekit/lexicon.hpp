#pragma once

/**
 * @file lexicon.hpp
 * @brief Lexical items (name + optional category) and lexicon parsing.
 *
 * Lexicon file / config format: one entry per line, `name[:category]`.
 * Categories feed the head-projection rules; everything else treats items
 * as opaque names.
 */

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mk {

struct LexItem {
    std::string name;
    std::string category; // may be empty
};

class Lexicon {
public:
    void add(const std::string& name, const std::string& category = "") {
        if (name.empty()) throw std::invalid_argument("lexicon: empty item name");
        if (by_name_.count(name)) throw std::invalid_argument("lexicon: duplicate item '" + name + "'");
        by_name_[name] = LexItem{name, category};
        order_.push_back(name);
    }

    bool contains(const std::string& name) const { return by_name_.count(name) > 0; }
    const LexItem& at(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) throw std::out_of_range("lexicon: unknown item '" + name + "'");
        return it->second;
    }
    std::string category_of(const std::string& name) const {
        auto it = by_name_.find(name);
        return it == by_name_.end() ? std::string{} : it->second.category;
    }
    const std::vector<std::string>& names() const { return order_; }
    size_t size() const { return order_.size(); }

    /// Parse `name[:category]` lines; '#' starts a comment.
    static Lexicon parse(const std::string& text) {
        Lexicon lx;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok) {
                auto colon = tok.find(':');
                if (colon == std::string::npos)
                    lx.add(tok);
                else
                    lx.add(tok.substr(0, colon), tok.substr(colon + 1));
            }
        }
        return lx;
    }

private:
    std::map<std::string, LexItem> by_name_;
    std::vector<std::string> order_;
};

} // namespace mk

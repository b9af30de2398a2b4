#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "simkern/errors.hpp"

namespace simkern {

// Synchronous Boolean network, at most 64 nodes so a state fits in one
// word. Rules are parsed from a `name = expr` line format with the grammar
//   expr := term ('|' term)* ; term := factor ('&' factor)* ;
//   factor := '!' factor | '(' expr ')' | name | '0' | '1'
class BooleanNetwork {
public:
    using State = std::uint64_t;

    struct Expr {
        enum class Op { kAnd, kOr, kNot, kVar, kConst } op;
        int var = -1;
        bool value = false;
        std::unique_ptr<Expr> lhs, rhs;

        bool eval(State s) const {
            switch (op) {
                case Op::kAnd: return lhs->eval(s) && rhs->eval(s);
                case Op::kOr: return lhs->eval(s) || rhs->eval(s);
                case Op::kNot: return !lhs->eval(s);
                case Op::kVar: return (s >> var) & 1u;
                case Op::kConst: return value;
            }
            return false;
        }
    };

    std::vector<std::string> node_names;
    std::vector<std::unique_ptr<Expr>> rules;

    std::size_t node_count() const { return node_names.size(); }

    int node_index(const std::string& name) const {
        for (std::size_t i = 0; i < node_names.size(); ++i)
            if (node_names[i] == name) return static_cast<int>(i);
        throw MissingEntity("node `" + name + "` not in network");
    }
};

namespace detail {

class BoolExprParser {
public:
    BoolExprParser(const std::string& text, const std::map<std::string, int>& nodes)
        : s_(text), nodes_(nodes) {}

    std::unique_ptr<BooleanNetwork::Expr> parse() {
        auto e = parse_or();
        skip_ws();
        if (pos_ != s_.size()) throw MalformedToken("trailing characters in rule `" + s_ + "`");
        return e;
    }

private:
    using Expr = BooleanNetwork::Expr;

    std::unique_ptr<Expr> parse_or() {
        auto lhs = parse_and();
        while (peek() == '|') {
            ++pos_;
            auto e = std::make_unique<Expr>();
            e->op = Expr::Op::kOr;
            e->lhs = std::move(lhs);
            e->rhs = parse_and();
            lhs = std::move(e);
        }
        return lhs;
    }

    std::unique_ptr<Expr> parse_and() {
        auto lhs = parse_factor();
        while (peek() == '&') {
            ++pos_;
            auto e = std::make_unique<Expr>();
            e->op = Expr::Op::kAnd;
            e->lhs = std::move(lhs);
            e->rhs = parse_factor();
            lhs = std::move(e);
        }
        return lhs;
    }

    std::unique_ptr<Expr> parse_factor() {
        skip_ws();
        auto e = std::make_unique<Expr>();
        char c = peek();
        if (c == '!') {
            ++pos_;
            e->op = Expr::Op::kNot;
            e->lhs = parse_factor();
            return e;
        }
        if (c == '(') {
            ++pos_;
            e = parse_or();
            skip_ws();
            if (peek() != ')') throw MalformedToken("missing ) in rule `" + s_ + "`");
            ++pos_;
            return e;
        }
        if (c == '0' || c == '1') {
            ++pos_;
            e->op = Expr::Op::kConst;
            e->value = (c == '1');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                        s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            auto it = nodes_.find(name);
            if (it == nodes_.end())
                throw MalformedToken("rule references undeclared node `" + name + "`");
            e->op = Expr::Op::kVar;
            e->var = it->second;
            return e;
        }
        throw MalformedToken("unexpected character in rule `" + s_ + "`");
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    const std::string& s_;
    const std::map<std::string, int>& nodes_;
    std::size_t pos_ = 0;
};

}  // namespace detail

// Text format: one `name = expr` line per node; blank lines and lines
// starting with '#' are skipped. Declaration order fixes the bit order.
inline BooleanNetwork parse_boolean_network(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> lines;
    std::map<std::string, int> nodes;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? eol : eol - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw MalformedToken("expected `name = expr` in line `" + line + "`");
        std::string name = line.substr(a, eq - a);
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
            name.pop_back();
        if (name.empty()) throw MalformedToken("empty node name in line `" + line + "`");
        if (nodes.count(name)) throw DuplicateName("duplicate node `" + name + "`");
        nodes[name] = static_cast<int>(lines.size());
        lines.emplace_back(name, line.substr(eq + 1));
    }
    if (lines.size() > 64)
        throw MalformedToken("at most 64 nodes supported, got " + std::to_string(lines.size()));

    BooleanNetwork net;
    for (auto& [name, expr] : lines) {
        net.node_names.push_back(name);
        net.rules.push_back(detail::BoolExprParser(expr, nodes).parse());
    }
    return net;
}

inline BooleanNetwork::State step_boolean(const BooleanNetwork& net, BooleanNetwork::State s) {
    BooleanNetwork::State next = 0;
    for (std::size_t n = 0; n < net.node_count(); ++n)
        if (net.rules[n]->eval(s)) next |= (BooleanNetwork::State{1} << n);
    return next;
}

struct AttractorResult {
    std::size_t transient_length = 0;
    std::vector<BooleanNetwork::State> cycle_states;  // in orbit order

    // ss(n): node n's bit sequence over the cycle (length 1 for fixed points)
    std::vector<bool> steady_state(int node) const {
        std::vector<bool> bits;
        bits.reserve(cycle_states.size());
        for (auto s : cycle_states) bits.push_back((s >> node) & 1u);
        return bits;
    }
};

inline AttractorResult find_attractor(const BooleanNetwork& net, BooleanNetwork::State initial,
                                      std::size_t max_steps) {
    std::unordered_map<BooleanNetwork::State, std::size_t> seen;
    std::vector<BooleanNetwork::State> orbit;
    BooleanNetwork::State s = initial;
    for (std::size_t step = 0; step <= max_steps; ++step) {
        auto it = seen.find(s);
        if (it != seen.end()) {
            AttractorResult res;
            res.transient_length = it->second;
            res.cycle_states.assign(orbit.begin() + static_cast<std::ptrdiff_t>(it->second),
                                    orbit.end());
            return res;
        }
        seen[s] = step;
        orbit.push_back(s);
        s = step_boolean(net, s);
    }
    throw NoAttractorWithinBudget("no repeated state within " + std::to_string(max_steps) +
                                  " steps");
}

// 1 if the apoptosis node is on in every cycle state; else 2 if the
// metastasis node is; else 3.
inline int classify_boolean(const AttractorResult& res, int apoptosis_node, int metastasis_node) {
    bool all_apoptosis = true, all_metastasis = true;
    for (auto s : res.cycle_states) {
        if (!((s >> apoptosis_node) & 1u)) all_apoptosis = false;
        if (!((s >> metastasis_node) & 1u)) all_metastasis = false;
    }
    if (all_apoptosis) return 1;
    if (all_metastasis) return 2;
    return 3;
}

}  // namespace simkern

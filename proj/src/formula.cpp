// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "qif/formula.hpp"

#include <cctype>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "qif/error.hpp"

namespace qif {

namespace {

using NodePtr = std::shared_ptr<const Formula::Node>;

NodePtr make_node(FormulaKind kind, std::string name, const Formula* a, const Formula* b) {
    auto node = std::make_shared<Formula::Node>();
    node->kind = kind;
    node->name = std::move(name);
    if (a != nullptr) {
        node->a = *a;
    }
    if (b != nullptr) {
        node->b = *b;
    }
    return node;
}

} // namespace

bool is_identifier(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    auto head = static_cast<unsigned char>(s.front());
    if (!(std::isalpha(head) || head == '_')) {
        return false;
    }
    for (char c : s.substr(1)) {
        auto u = static_cast<unsigned char>(c);
        if (!(std::isalnum(u) || u == '_' || u == '\'')) {
            return false;
        }
    }
    return true;
}

Formula Formula::truth() {
    static const NodePtr node = make_node(FormulaKind::True, {}, nullptr, nullptr);
    return Formula(node);
}

Formula Formula::var(std::string name) {
    if (!is_identifier(name)) {
        throw Error("invalid variable name '" + name + "'");
    }
    return Formula(make_node(FormulaKind::Var, std::move(name), nullptr, nullptr));
}

Formula Formula::conj(Formula a, Formula b) {
    return Formula(make_node(FormulaKind::And, {}, &a, &b));
}

Formula Formula::negation(Formula a) {
    return Formula(make_node(FormulaKind::Not, {}, &a, nullptr));
}

Formula Formula::falsity() { return negation(truth()); }

Formula Formula::disj(Formula a, Formula b) { return negation(conj(negation(std::move(a)), negation(std::move(b)))); }

Formula Formula::implies(Formula a, Formula b) { return negation(conj(std::move(a), negation(std::move(b)))); }

Formula Formula::iff(Formula a, Formula b) { return conj(implies(a, b), implies(b, a)); }

Formula Formula::conj_all(const std::vector<Formula>& parts) {
    if (parts.empty()) {
        return truth();
    }
    Formula acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        acc = conj(acc, parts[i]);
    }
    return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& parts) {
    if (parts.empty()) {
        return falsity();
    }
    Formula acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        acc = disj(acc, parts[i]);
    }
    return acc;
}

FormulaKind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }

const Formula& Formula::left() const { return node_->a; }
const Formula& Formula::right() const { return node_->b; }
const Formula& Formula::child() const { return node_->a; }

bool Formula::is_false() const { return kind() == FormulaKind::Not && child().is_true(); }

namespace {

bool equal_rec(const Formula::Node* a, const Formula::Node* b,
               std::set<std::pair<const Formula::Node*, const Formula::Node*>>& seen) {
    if (a == b) {
        return true;
    }
    if (a->kind != b->kind) {
        return false;
    }
    if (!seen.insert({a, b}).second) {
        return true;
    }
    switch (a->kind) {
    case FormulaKind::True: return true;
    case FormulaKind::Var: return a->name == b->name;
    case FormulaKind::Not: return equal_rec(a->a.id(), b->a.id(), seen);
    case FormulaKind::And: return equal_rec(a->a.id(), b->a.id(), seen) && equal_rec(a->b.id(), b->b.id(), seen);
    }
    return false;
}

} // namespace

bool operator==(const Formula& a, const Formula& b) {
    std::set<std::pair<const Formula::Node*, const Formula::Node*>> seen;
    return equal_rec(a.id(), b.id(), seen);
}

std::uint64_t tree_size(const Formula& f) {
    std::unordered_map<const Formula::Node*, std::uint64_t> memo;
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    auto sat_add = [](std::uint64_t x, std::uint64_t y) { return x > kMax - y ? kMax : x + y; };
    std::function<std::uint64_t(const Formula&)> go = [&](const Formula& g) -> std::uint64_t {
        if (auto it = memo.find(g.id()); it != memo.end()) {
            return it->second;
        }
        std::uint64_t n = 1;
        switch (g.kind()) {
        case FormulaKind::True:
        case FormulaKind::Var: break;
        case FormulaKind::Not: n = sat_add(n, go(g.child())); break;
        case FormulaKind::And: n = sat_add(n, sat_add(go(g.left()), go(g.right()))); break;
        }
        memo.emplace(g.id(), n);
        return n;
    };
    return go(f);
}

std::size_t dag_size(const Formula& f) {
    std::unordered_set<const Formula::Node*> seen;
    std::vector<const Formula*> stack{&f};
    while (!stack.empty()) {
        const Formula* g = stack.back();
        stack.pop_back();
        if (!seen.insert(g->id()).second) {
            continue;
        }
        if (g->kind() == FormulaKind::Not) {
            stack.push_back(&g->child());
        } else if (g->kind() == FormulaKind::And) {
            stack.push_back(&g->right());
            stack.push_back(&g->left());
        }
    }
    return seen.size();
}

std::vector<std::string> free_variables(const Formula& f) {
    std::vector<std::string> out;
    std::unordered_set<std::string> names;
    std::unordered_set<const Formula::Node*> seen;
    std::function<void(const Formula&)> go = [&](const Formula& g) {
        if (!seen.insert(g.id()).second) {
            return;
        }
        switch (g.kind()) {
        case FormulaKind::True: break;
        case FormulaKind::Var:
            if (names.insert(g.name()).second) {
                out.push_back(g.name());
            }
            break;
        case FormulaKind::Not: go(g.child()); break;
        case FormulaKind::And:
            go(g.left());
            go(g.right());
            break;
        }
    };
    go(f);
    return out;
}

bool evaluate(const Formula& f, const std::function<bool(const std::string&)>& lookup) {
    std::unordered_map<const Formula::Node*, bool> memo;
    std::function<bool(const Formula&)> go = [&](const Formula& g) -> bool {
        if (auto it = memo.find(g.id()); it != memo.end()) {
            return it->second;
        }
        bool v = false;
        switch (g.kind()) {
        case FormulaKind::True: v = true; break;
        case FormulaKind::Var: v = lookup(g.name()); break;
        case FormulaKind::Not: v = !go(g.child()); break;
        case FormulaKind::And: v = go(g.left()) && go(g.right()); break;
        }
        memo.emplace(g.id(), v);
        return v;
    };
    return go(f);
}

bool evaluate(const Formula& f, const std::map<std::string, bool>& valuation) {
    return evaluate(f, [&](const std::string& name) {
        auto it = valuation.find(name);
        if (it == valuation.end()) {
            throw Error("no value for variable '" + name + "'");
        }
        return it->second;
    });
}

Formula substitute(const Formula& f, const std::map<std::string, Formula>& subst) {
    if (subst.empty()) {
        return f;
    }
    std::unordered_map<const Formula::Node*, Formula> memo;
    std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
        if (auto it = memo.find(g.id()); it != memo.end()) {
            return it->second;
        }
        Formula r = g;
        switch (g.kind()) {
        case FormulaKind::True: break;
        case FormulaKind::Var:
            if (auto it = subst.find(g.name()); it != subst.end()) {
                r = it->second;
            }
            break;
        case FormulaKind::Not: {
            Formula c = go(g.child());
            if (c.id() != g.child().id()) {
                r = Formula::negation(c);
            }
            break;
        }
        case FormulaKind::And: {
            Formula a = go(g.left());
            Formula b = go(g.right());
            if (a.id() != g.left().id() || b.id() != g.right().id()) {
                r = Formula::conj(a, b);
            }
            break;
        }
        }
        memo.emplace(g.id(), r);
        return r;
    };
    return go(f);
}

Formula rename_variables(const Formula& f, const std::function<std::string(const std::string&)>& rename) {
    std::map<std::string, Formula> subst;
    for (const auto& v : free_variables(f)) {
        subst.emplace(v, Formula::var(rename(v)));
    }
    return substitute(f, subst);
}

} // namespace qif

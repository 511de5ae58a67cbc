// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "qif/program.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>
#include <unordered_set>

#include "qif/error.hpp"

namespace qif {

struct Stmt::Node {
    StmtKind kind = StmtKind::Skip;
    std::string target;
    Formula formula = Formula::truth();
    Stmt a;
    Stmt b;
};

namespace {

std::shared_ptr<Stmt::Node> new_node(StmtKind kind) {
    auto node = std::make_shared<Stmt::Node>();
    node->kind = kind;
    return node;
}

} // namespace

Stmt Stmt::assign(std::string target, Formula value) {
    if (!is_identifier(target)) {
        throw Error("invalid assignment target '" + target + "'");
    }
    auto node = new_node(StmtKind::Assign);
    node->target = std::move(target);
    node->formula = std::move(value);
    return Stmt(node);
}

Stmt Stmt::branch(Formula cond, Stmt then_branch, Stmt else_branch) {
    auto node = new_node(StmtKind::If);
    node->formula = std::move(cond);
    node->a = std::move(then_branch);
    node->b = std::move(else_branch);
    return Stmt(node);
}

Stmt Stmt::seq(Stmt first, Stmt second) {
    if (first.kind() == StmtKind::Seq) {
        return seq(first.first(), seq(first.second(), std::move(second)));
    }
    auto node = new_node(StmtKind::Seq);
    node->a = std::move(first);
    node->b = std::move(second);
    return Stmt(node);
}

Stmt Stmt::seq_all(const std::vector<Stmt>& parts) {
    if (parts.empty()) {
        return skip();
    }
    Stmt acc = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) {
        acc = seq(*it, acc);
    }
    return acc;
}

Stmt Stmt::skip() {
    static const std::shared_ptr<const Node> node = new_node(StmtKind::Skip);
    return Stmt(node);
}

StmtKind Stmt::kind() const { return node_->kind; }
const std::string& Stmt::target() const { return node_->target; }
const Formula& Stmt::value() const { return node_->formula; }
const Formula& Stmt::cond() const { return node_->formula; }
const Stmt& Stmt::then_branch() const { return node_->a; }
const Stmt& Stmt::else_branch() const { return node_->b; }
const Stmt& Stmt::first() const { return node_->a; }
const Stmt& Stmt::second() const { return node_->b; }

bool operator==(const Stmt& a, const Stmt& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    if (a.kind() != b.kind()) {
        return false;
    }
    switch (a.kind()) {
    case StmtKind::Skip: return true;
    case StmtKind::Assign: return a.target() == b.target() && a.value() == b.value();
    case StmtKind::If:
        return a.cond() == b.cond() && a.then_branch() == b.then_branch() && a.else_branch() == b.else_branch();
    case StmtKind::Seq: return a.first() == b.first() && a.second() == b.second();
    }
    return false;
}

std::uint64_t stmt_size(const Stmt& s) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    auto add = [](std::uint64_t x, std::uint64_t y) { return x > kMax - y ? kMax : x + y; };
    switch (s.kind()) {
    case StmtKind::Skip: return 1;
    case StmtKind::Assign: return add(1, tree_size(s.value()));
    case StmtKind::If:
        return add(add(1, tree_size(s.cond())), add(stmt_size(s.then_branch()), stmt_size(s.else_branch())));
    case StmtKind::Seq: return add(1, add(stmt_size(s.first()), stmt_size(s.second())));
    }
    return 1;
}

std::vector<std::string> stmt_variables(const Stmt& s) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    auto note = [&](const std::string& v) {
        if (seen.insert(v).second) {
            out.push_back(v);
        }
    };
    std::function<void(const Stmt&)> go = [&](const Stmt& t) {
        switch (t.kind()) {
        case StmtKind::Skip: break;
        case StmtKind::Assign:
            note(t.target());
            for (const auto& v : free_variables(t.value())) {
                note(v);
            }
            break;
        case StmtKind::If:
            for (const auto& v : free_variables(t.cond())) {
                note(v);
            }
            go(t.then_branch());
            go(t.else_branch());
            break;
        case StmtKind::Seq:
            go(t.first());
            go(t.second());
            break;
        }
    };
    go(s);
    return out;
}

void ProgramUnit::validate() const {
    std::set<std::string> inputs;
    auto declare = [](std::set<std::string>& into, const std::vector<std::string>& names, const char* role) {
        for (const auto& n : names) {
            if (!is_identifier(n)) {
                throw DeclarationError(std::string("invalid ") + role + " variable name '" + n + "'");
            }
            if (!into.insert(n).second) {
                throw DeclarationError("duplicate declaration of '" + n + "'");
            }
        }
    };
    declare(inputs, high, "high");
    declare(inputs, low, "low");

    std::set<std::string> outs;
    declare(outs, out, "out");

    std::set<std::string> all = inputs;
    all.insert(outs.begin(), outs.end());
    std::set<std::string> locals;
    declare(locals, local, "local");
    for (const auto& n : local) {
        if (all.count(n) != 0) {
            throw DeclarationError("duplicate declaration of '" + n + "'");
        }
    }
    all.insert(locals.begin(), locals.end());

    for (const auto& v : stmt_variables(body)) {
        if (all.count(v) == 0) {
            throw DeclarationError("undeclared variable '" + v + "'");
        }
    }
}

std::vector<std::string> ProgramUnit::variables() const {
    std::vector<std::string> vars;
    std::unordered_set<std::string> seen;
    for (const auto* list : {&high, &low, &out, &local}) {
        for (const auto& n : *list) {
            if (seen.insert(n).second) {
                vars.push_back(n);
            }
        }
    }
    return vars;
}

ProgramUnit make_program(std::vector<std::string> high, std::vector<std::string> low, std::vector<std::string> out,
                         std::vector<std::string> local, Stmt body) {
    ProgramUnit p{std::move(high), std::move(low), std::move(out), std::move(local), std::move(body)};
    p.validate();
    return p;
}

std::string fresh_name(const std::string& base, const std::vector<std::string>& taken) {
    std::string name = base;
    while (std::find(taken.begin(), taken.end(), name) != taken.end()) {
        name += '\'';
    }
    return name;
}

} // namespace qif

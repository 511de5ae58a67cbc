// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace qif {

enum class FormulaKind : std::uint8_t { True, Var, And, Not };

/// Immutable boolean formula over the core connectives true / x / and / not.
///
/// Nodes are shared, so a Formula is a DAG: substitution and the passes built
/// on it memoize by node identity and never copy shared subterms. Structural
/// equality (operator==) ignores sharing.
class Formula {
  public:
    struct Node;

    static Formula truth();
    static Formula var(std::string name);
    static Formula conj(Formula a, Formula b);
    static Formula negation(Formula a);

    // Derived connectives, expanded into the core on construction.
    static Formula falsity();
    static Formula disj(Formula a, Formula b);
    static Formula implies(Formula a, Formula b);
    static Formula iff(Formula a, Formula b);
    static Formula conj_all(const std::vector<Formula>& parts);
    static Formula disj_all(const std::vector<Formula>& parts);

    [[nodiscard]] FormulaKind kind() const;
    [[nodiscard]] const std::string& name() const;
    [[nodiscard]] const Formula& left() const;
    [[nodiscard]] const Formula& right() const;
    [[nodiscard]] const Formula& child() const;

    [[nodiscard]] bool is_true() const { return kind() == FormulaKind::True; }
    [[nodiscard]] bool is_false() const;

    /// Address of the shared node; stable for the lifetime of any copy.
    [[nodiscard]] const Node* id() const { return node_.get(); }

    friend bool operator==(const Formula& a, const Formula& b);

  private:
    Formula() = default;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Formula::Node {
    FormulaKind kind;
    std::string name;
    Formula a;
    Formula b;
};

[[nodiscard]] bool is_identifier(std::string_view s);

/// Number of nodes when the DAG is unfolded into a tree (saturates at UINT64_MAX).
[[nodiscard]] std::uint64_t tree_size(const Formula& f);
/// Number of distinct shared nodes.
[[nodiscard]] std::size_t dag_size(const Formula& f);

/// Variables in order of first occurrence (left-to-right depth-first).
[[nodiscard]] std::vector<std::string> free_variables(const Formula& f);

[[nodiscard]] bool evaluate(const Formula& f, const std::function<bool(const std::string&)>& lookup);
[[nodiscard]] bool evaluate(const Formula& f, const std::map<std::string, bool>& valuation);

/// Simultaneous substitution of formulas for variables.
[[nodiscard]] Formula substitute(const Formula& f, const std::map<std::string, Formula>& subst);
[[nodiscard]] Formula rename_variables(const Formula& f, const std::function<std::string(const std::string&)>& rename);

} // namespace qif

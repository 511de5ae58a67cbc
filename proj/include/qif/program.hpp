// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qif/formula.hpp"

namespace qif {

enum class StmtKind : std::uint8_t { Assign, If, Seq, Skip };

/// Loop-free statement. Sequences are kept right-nested, so `a; b; c` has a
/// single canonical shape regardless of how it was built.
class Stmt {
  public:
    static Stmt assign(std::string target, Formula value);
    static Stmt branch(Formula cond, Stmt then_branch, Stmt else_branch);
    static Stmt seq(Stmt first, Stmt second);
    static Stmt seq_all(const std::vector<Stmt>& parts);
    static Stmt skip();

    [[nodiscard]] StmtKind kind() const;
    [[nodiscard]] const std::string& target() const;
    [[nodiscard]] const Formula& value() const; // Assign
    [[nodiscard]] const Formula& cond() const;  // If
    [[nodiscard]] const Stmt& then_branch() const;
    [[nodiscard]] const Stmt& else_branch() const;
    [[nodiscard]] const Stmt& first() const;
    [[nodiscard]] const Stmt& second() const;

    friend bool operator==(const Stmt& a, const Stmt& b);

    struct Node;

  private:
    Stmt() = default;
    explicit Stmt(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Number of statement nodes plus the tree sizes of every formula they hold.
[[nodiscard]] std::uint64_t stmt_size(const Stmt& s);

/// Every variable read or written by the statement, first-occurrence order.
[[nodiscard]] std::vector<std::string> stmt_variables(const Stmt& s);

/// A program with its variable roles. `out` may repeat names from `high` or
/// `low` (the final value of that input is observed); otherwise the four lists
/// are pairwise disjoint. Locals, and outputs that are not inputs, start false.
struct ProgramUnit {
    std::vector<std::string> high;
    std::vector<std::string> low;
    std::vector<std::string> out;
    std::vector<std::string> local;
    Stmt body = Stmt::skip();

    /// Throws DeclarationError when a declaration invariant is broken.
    void validate() const;

    /// Distinct declared names: high, low, non-input outputs, locals.
    [[nodiscard]] std::vector<std::string> variables() const;

    [[nodiscard]] bool same_input_domain(const ProgramUnit& other) const {
        return high == other.high && low == other.low;
    }

    friend bool operator==(const ProgramUnit& a, const ProgramUnit& b) = default;
};

/// Builds and validates in one step.
[[nodiscard]] ProgramUnit make_program(std::vector<std::string> high, std::vector<std::string> low,
                                       std::vector<std::string> out, std::vector<std::string> local, Stmt body);

/// Fresh identifier `base`, `base'`, `base''`, ... not contained in `taken`.
[[nodiscard]] std::string fresh_name(const std::string& base, const std::vector<std::string>& taken);

} // namespace qif

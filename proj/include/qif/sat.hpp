// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qif/formula.hpp"

namespace qif {

/// Clauses over variables 1..num_vars; a literal is +v or -v.
struct Cnf {
    std::size_t num_vars = 0;
    std::vector<std::vector<int>> clauses;
    /// Formula variable names and their indices, in index order.
    std::vector<std::pair<std::string, int>> var_map;

    [[nodiscard]] int index_of(const std::string& name) const; // 0 if absent
};

/// Equisatisfiable CNF. Formula variables get indices 1..k in order of first
/// occurrence; each And node then gets one gate variable with three clauses.
/// Negation flips the literal and costs nothing. The root is asserted by a unit
/// clause.
[[nodiscard]] Cnf tseitin_cnf(const Formula& f);

/// Satisfying assignment indexed by variable (entry 0 unused).
using Model = std::vector<bool>;

struct SatStats {
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t conflicts = 0;
};

/// Complete DPLL: unit propagation over two watched literals, chronological
/// backtracking, branching on the lowest unassigned variable with false tried
/// first. Deterministic.
[[nodiscard]] std::optional<Model> dpll_sat(const Cnf& c, SatStats* stats = nullptr);

/// Comment lines `c var <index> <name>` for the variable map, then
/// `p cnf <vars> <clauses>` and one zero-terminated clause per line.
[[nodiscard]] std::string export_dimacs(const Cnf& c);

/// Reads DIMACS CNF, including the variable-map comments written above.
[[nodiscard]] Cnf parse_dimacs(std::string_view text);

} // namespace qif

// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qif/compare.hpp"
#include "qif/formula.hpp"
#include "qif/program.hpp"
#include "qif/sat.hpp"

namespace qif {

/// Textbook weakest precondition. Shares subterms, but the unfolded size can
/// grow exponentially with the number of branches.
[[nodiscard]] Formula wp_naive(const Stmt& s, const Formula& post);

/// Single-assignment form of `s` against `post`: each definition is a fresh
/// variable equated with a formula over earlier names, and `post` is rewritten
/// over the final names. Assignments of a constant, a variable or a negated
/// variable are propagated instead of named. Branch conditions are named and
/// values that differ between the branches are merged by guarded definitions.
struct PassiveVC {
    std::vector<std::pair<std::string, Formula>> definitions;
    Formula post = Formula::truth();

    /// (and of name <-> definition) => post
    [[nodiscard]] Formula vc() const;
};

/// Fresh names are `<name>_s<k>` and avoid every variable in `s` and `post`.
[[nodiscard]] PassiveVC passify(const Stmt& s, const Formula& post);

/// passify(s, post).vc(). Its free variables are those of wp_naive plus the
/// definition names; for every state, wp_naive holds exactly when this formula
/// holds with the names set to their defined values, and validity coincides.
/// Size is O(|s| * (|s| + |post|)).
[[nodiscard]] Formula wp_optimized(const Stmt& s, const Formula& post);

enum class WpMode { Naive, Optimized };
[[nodiscard]] Formula wp(const Stmt& s, const Formula& post, WpMode mode);

/// Every declared variable `x` becomes `x_<tag>`. Throws Error on an empty or
/// non-identifier tag.
[[nodiscard]] ProgramUnit rename_apart(const ProgramUnit& p, const std::string& tag);
[[nodiscard]] std::string tagged(const std::string& name, const std::string& tag);

/// Self-composition for non-interference: copies c1a and c1b share the low
/// inputs, and the result is valid iff the program is non-interferent.
[[nodiscard]] Formula vc_ni(const ProgramUnit& m, WpMode mode = WpMode::Optimized);

/// Self-composition for R: m1 and m2 each run on (H, L) and (H', L) in copies
/// c1a, c1b, c2a, c2b. Valid iff R(m1, m2).
[[nodiscard]] Formula vc_r(const ProgramUnit& m1, const ProgramUnit& m2, WpMode mode = WpMode::Optimized);

/// The composed statement vc_ni / vc_r take the weakest precondition of,
/// together with its postcondition.
[[nodiscard]] std::pair<Stmt, Formula> ni_composition(const ProgramUnit& m);
[[nodiscard]] std::pair<Stmt, Formula> r_composition(const ProgramUnit& m1, const ProgramUnit& m2);

/// Negates the VC, converts to CNF and runs dpll_sat. A model is projected to
/// (l, h, h2) and replayed by execution; a model that fails to replay throws Error.
[[nodiscard]] RVerdict check_ni_symbolic(const ProgramUnit& m, WpMode mode = WpMode::Optimized);
[[nodiscard]] RVerdict check_r_symbolic(const ProgramUnit& m1, const ProgramUnit& m2,
                                        WpMode mode = WpMode::Optimized);

} // namespace qif

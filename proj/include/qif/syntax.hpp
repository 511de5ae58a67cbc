// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "qif/formula.hpp"
#include "qif/program.hpp"

namespace qif {

// Concrete syntax:
//
//   program := decl* stmt
//   decl    := ("high" | "low" | "out" | "local") ident ("," ident)* ";"
//   stmt    := ident ":=" formula
//            | "if" formula "then" "{" stmt "}" "else" "{" stmt "}"
//            | "skip"
//            | stmt ";" stmt
//   formula := "true" | "false" | ident | "!" formula | "(" formula ")"
//            | formula ("&" | "|" | "==" | "=>") formula
//
// Binding strength: ! > & > | > == > =>, with => right-associative and the
// others left-associative. `//` starts a comment running to end of line.

/// Parses and validates a program; derived connectives are expanded.
[[nodiscard]] ProgramUnit parse_program(std::string_view text);

[[nodiscard]] Formula parse_formula(std::string_view text);

[[nodiscard]] std::string render_program(const ProgramUnit& p);
[[nodiscard]] std::string render_stmt(const Stmt& s, int indent = 0);

/// Prints the formula using |, => and == where the core shape allows it, so
/// that parse_formula(render_formula(f)) == f.
[[nodiscard]] std::string render_formula(const Formula& f);

} // namespace qif

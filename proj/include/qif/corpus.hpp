// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "qif/program.hpp"

namespace qif {

using Corpus = std::map<std::string, ProgramUnit>;

inline constexpr std::size_t kMaxLoginBits = 24;

/// Password-check programs over an n-bit secret h0..h{n-1} and an n-bit guess
/// l0..l{n-1}, little-endian (h0 is the lowest bit). Keys: M_spec, M1, M2, M3, M4.
///
///   M_spec  o := 0 if h == l, else 1
///   M1      o_i := h_i
///   M2      o := 0 if h == l, else h0
///   M3      o := 1, then 0 on the first mismatch among the low n/2 bits
///   M4      o := 1, then 0 on the first mismatch among all bits
[[nodiscard]] Corpus gen_login_corpus(std::size_t n_bits);

/// Shannon leakage under the uniform distribution of the login program `name`
/// as a closed form in n, for widths far beyond enumeration (1 <= n <= 1000).
/// Small probabilities go through log1p so the tails survive at n = 64.
[[nodiscard]] double login_se_closed_form(const std::string& name, std::size_t n_bits);

/// Two-bit secret h0 h1, no low input, two-bit output o0 o1. The guess is
/// h0=0, h1=1. Keys: M1_intro (o0 o1 = 00 on a match, 01 otherwise) and
/// M2_intro (o0 o1 := h0 h1).
[[nodiscard]] Corpus gen_intro_examples();

/// `z := x; w := y; if x & y then z := !z else w := !w` with x, y high and
/// z, w observed.
[[nodiscard]] ProgramUnit zw_example();

} // namespace qif

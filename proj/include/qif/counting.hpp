// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qif/formula.hpp"
#include "qif/program.hpp"
#include "qif/qif.hpp"

namespace qif {

inline constexpr std::size_t kMaxEnumVars = 24;
inline constexpr std::size_t kMaxOracleVars = 16;

/// Formula over `vars` with exactly k models, built from the bits of k read
/// most significant first: a 0 bit for vars[i] gives vars[i] & rest, a 1 bit
/// gives vars[i] | rest, and the empty rest is false. The last variable takes
/// the most significant bit. k = 2^|vars| yields true. Throws RangeError above that.
[[nodiscard]] Formula gen_count_formula(std::uint64_t k, const std::vector<std::string>& vars);

/// Model count over `vars` (which must cover the free variables) by enumeration.
[[nodiscard]] std::uint64_t sharp_sat_enum(const Formula& f, const std::vector<std::string>& vars);
[[nodiscard]] std::uint64_t sharp_sat_enum(const Formula& f);

/// `if f then { Of := true; O_i := H_i } else { Of := false; O_i := false }`
/// with `high` as the secret. It has #SAT(f) + 1 distinct outputs while f is
/// not valid.
[[nodiscard]] ProgramUnit boolenc_T(const Formula& f, const std::vector<std::string>& high);
[[nodiscard]] ProgramUnit boolenc_T(const Formula& f);

enum class OracleKind : std::uint8_t { SE, ME, GE, CC, ENUM };
[[nodiscard]] std::string oracle_name(OracleKind k);
[[nodiscard]] OracleKind parse_oracle(const std::string& s);

/// The program a count is probed with: `O := f & H'` for SE and GE, and
/// T(f & H') for ME and CC, over high inputs vars + [H'].
[[nodiscard]] ProgramUnit probe_program(const Formula& f, const std::vector<std::string>& vars, OracleKind kind);

struct CountStep {
    std::uint64_t l = 0;
    std::uint64_t r = 0;
    std::uint64_t n = 0;
};

struct CountRun {
    Formula target = Formula::truth();
    std::vector<std::string> vars;
    OracleKind kind = OracleKind::ENUM;
    std::uint64_t count = 0;
    std::uint64_t oracle_calls = 0;
    std::vector<CountStep> trace;

    [[nodiscard]] std::string to_json() const;
};

/// Binary search for #SAT(f) using only the comparison oracle of `kind` on
/// probe programs. Each round consults the oracle twice to test whether the
/// candidate equals the count and once more to halve the interval [l, r),
/// which starts as [0, 2^n + 1). At most 3(n + 1) + 2 oracle calls.
[[nodiscard]] CountRun count_via_oracle(const Formula& f, const std::vector<std::string>& vars, OracleKind kind);
[[nodiscard]] CountRun count_via_oracle(const Formula& f, OracleKind kind);

} // namespace qif

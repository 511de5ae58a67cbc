// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "qif/dist.hpp"
#include "qif/exec.hpp"
#include "qif/qif.hpp"

namespace qif {

inline constexpr double kDefaultEpsilon = 1e-9;

/// Throws DomainMismatch unless both programs declare the same high and low lists.
void require_same_domain(const ProgramUnit& a, const ProgramUnit& b);

/// Whether measure[U](m1) <= measure[U](m2), decided without rounding:
///   SE  prod n^n over output classes (larger product, less leakage)
///   ME  sum_l |image(l)|
///   GE  sum n^2 over output classes (larger sum, less leakage)
///   CC  max_l |image(l)|
[[nodiscard]] bool cmp_uniform(const ProgramUnit& m1, const ProgramUnit& m2, Measure kind,
                               std::size_t capacity_bits = kDefaultCapacityBits);
[[nodiscard]] bool cmp_uniform(const Denotation& d1, const Denotation& d2, Measure kind);

enum class CmpResult { Holds, Fails, Inconclusive };
[[nodiscard]] std::string to_string(CmpResult r);

/// Whether measure[mu](m1) <= measure[mu](m2). ME and GE are exact. SE is
/// decided in floating point when the values differ by at least epsilon;
/// closer values fall back to exact equality or an exact power comparison
/// when mu's common denominator is at most kMaxExactSeDenominator, and are
/// Inconclusive otherwise. CC does not depend on mu and uses cmp_uniform.
[[nodiscard]] CmpResult cmp_dist(const ProgramUnit& m1, const ProgramUnit& m2, Measure kind, const JointDist& mu,
                                 double epsilon = kDefaultEpsilon, std::size_t capacity_bits = kDefaultCapacityBits);
[[nodiscard]] CmpResult cmp_dist(const Denotation& d1, const Denotation& d2, Measure kind, const JointDist& mu,
                                 double epsilon = kDefaultEpsilon);

inline constexpr unsigned long kMaxExactSeDenominator = 1UL << 18;

/// Two high inputs told apart by the first program but not the second, under
/// a shared low input.
struct Counterexample {
    Code l = 0;
    Code h = 0;
    Code h2 = 0;
    friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct RVerdict {
    bool holds = true;
    std::optional<Counterexample> counterexample;

    /// `{"holds": ..., "counterexample": {"l", "h", "h2"} | null}` with bit strings.
    [[nodiscard]] std::string to_json(const InputSpace& space) const;
};

/// Decides whether every pair of high inputs distinguished by m1 (under some
/// low input) is also distinguished by m2. The counterexample is the
/// lexicographically smallest (l, h, h2) with h < h2.
[[nodiscard]] RVerdict check_R(const ProgramUnit& m1, const ProgramUnit& m2,
                               std::size_t capacity_bits = kDefaultCapacityBits);
[[nodiscard]] RVerdict check_R(const Denotation& d1, const Denotation& d2);

/// Half of the mass on each input of the counterexample. Throws
/// NoCounterexample when R(m1, m2) holds.
[[nodiscard]] JointDist witness_distribution(const ProgramUnit& m1, const ProgramUnit& m2,
                                             std::size_t capacity_bits = kDefaultCapacityBits);

/// measure[mu](m1) <= measure[mu](m2) for every mu; equal to R(m1, m2) for SE, ME and GE.
[[nodiscard]] bool universal_cmp(const ProgramUnit& m1, const ProgramUnit& m2, Measure kind,
                                 std::size_t capacity_bits = kDefaultCapacityBits);

/// Non-interference by enumeration. The verdict's counterexample has differing outputs.
[[nodiscard]] RVerdict check_ni(const ProgramUnit& p, std::size_t capacity_bits = kDefaultCapacityBits);
[[nodiscard]] RVerdict check_ni(const Denotation& d);

} // namespace qif

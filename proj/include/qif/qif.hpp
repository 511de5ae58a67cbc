// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qif/dist.hpp"
#include "qif/exec.hpp"

namespace qif {

enum class Measure : std::uint8_t { SE, ME, GE, CC };

[[nodiscard]] std::string measure_name(Measure m); // "SE", ...
[[nodiscard]] Measure parse_measure(const std::string& s); // case-insensitive; throws Error

struct MeasureReport {
    Measure measure = Measure::SE;
    double value = 0.0;
    /// Exact form of the value when one exists; see the measure functions.
    std::optional<std::string> exact;
    bool exact_mode = false;

    [[nodiscard]] std::string to_json() const;
};

/// log2 of a positive rational, accurate for numerators and denominators of any size.
[[nodiscard]] double log2q(const mpq_class& q);
[[nodiscard]] double log2z(const mpz_class& z);

/// Joint mass over pairs (x, y).
using Pmf2 = std::map<std::pair<std::uint64_t, std::uint64_t>, mpq_class>;

/// H(X|Y) for a joint over (x, y); zero-mass terms contribute nothing.
[[nodiscard]] double shannon_cond_entropy(const Pmf2& joint);
/// H(X) for a pmf over x.
[[nodiscard]] double shannon_entropy(const std::map<std::uint64_t, mpq_class>& pmf);

/// Output-class sizes n_{o,l} under the uniform distribution: for each low
/// input, the multiset of preimage sizes of its outputs.
struct ClassCounts {
    InputSpace space;
    std::vector<std::vector<std::uint64_t>> per_low; // indexed by l; sizes ascending

    /// size -> multiplicity over all (o, l)
    [[nodiscard]] std::map<std::uint64_t, std::uint64_t> histogram() const;
    [[nodiscard]] mpz_class sum_of_squares() const;
    [[nodiscard]] std::uint64_t image_sum() const;
    /// (max image size, smallest l attaining it)
    [[nodiscard]] std::pair<std::uint64_t, Code> image_max() const;
};

[[nodiscard]] ClassCounts class_counts(const Denotation& d);

// Leakage measures. Uniform distributions take closed-form paths over class
// counts; other distributions are summed exactly and logged last.
//
//   SE  H(O|L). Uniform payload: `N=<|h||l|>;classes=[<size>x<mult>,...]`.
//   ME  log(V(H|O,L) / V(H|L)). Payload `2^ME=<rational>`.
//   GE  G(H|L) - G(H|O,L), exact rational. Payload is that rational.
//   CC  log max_l |image(l)|. Payload `2^CC=<k>;l=<bits>`.
[[nodiscard]] MeasureReport se(const Denotation& d, const JointDist& mu);
[[nodiscard]] MeasureReport me(const Denotation& d, const JointDist& mu);
[[nodiscard]] MeasureReport ge(const Denotation& d, const JointDist& mu);
[[nodiscard]] MeasureReport cc(const Denotation& d);

[[nodiscard]] MeasureReport se(const ProgramUnit& p, const JointDist& mu,
                               std::size_t capacity_bits = kDefaultCapacityBits);
[[nodiscard]] MeasureReport me(const ProgramUnit& p, const JointDist& mu,
                               std::size_t capacity_bits = kDefaultCapacityBits);
[[nodiscard]] MeasureReport ge(const ProgramUnit& p, const JointDist& mu,
                               std::size_t capacity_bits = kDefaultCapacityBits);
[[nodiscard]] MeasureReport cc(const ProgramUnit& p, std::size_t capacity_bits = kDefaultCapacityBits);
[[nodiscard]] MeasureReport measure(Measure m, const ProgramUnit& p, const JointDist& mu,
                                    std::size_t capacity_bits = kDefaultCapacityBits);

/// Exact building blocks for non-uniform comparison.
[[nodiscard]] mpq_class vulnerability_prior(const Denotation& d, const JointDist& mu);     // V(H|L)
[[nodiscard]] mpq_class vulnerability_posterior(const Denotation& d, const JointDist& mu); // V(H|O,L)
[[nodiscard]] mpq_class guessing_prior(const Denotation& d, const JointDist& mu);          // G(H|L)
[[nodiscard]] mpq_class guessing_posterior(const Denotation& d, const JointDist& mu);      // G(H|O,L)

/// Expected number of guesses for masses listed in guessing order: sum of
/// (i+1) * masses[i] after a stable sort into nonincreasing order.
[[nodiscard]] mpq_class guessing_sum(std::vector<mpq_class> masses);

/// The (mass of class, mass of its low input) pairs that SE sums over, one per
/// (o, l) with nonzero mass, sorted.
[[nodiscard]] std::vector<std::pair<mpq_class, mpq_class>> se_terms(const Denotation& d, const JointDist& mu);

/// I(O;H|L) from its definition H(O|L) - H(O|H,L); agrees with se() on
/// deterministic programs.
[[nodiscard]] double mutual_information_olh(const Denotation& d, const JointDist& mu);

} // namespace qif

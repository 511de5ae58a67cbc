// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qif/exec.hpp"

namespace qif {

/// The input space of a program: high and low variable names in declared order.
struct Domain {
    std::vector<std::string> high;
    std::vector<std::string> low;

    [[nodiscard]] InputSpace space() const { return InputSpace{high.size(), low.size()}; }
    friend bool operator==(const Domain&, const Domain&) = default;
};

[[nodiscard]] Domain domain_of(const ProgramUnit& p);

/// Largest domain sample_random accepts (one mass unit per point at most).
inline constexpr std::size_t kMaxSampleBits = 16;

/// Exact probability mass function over (h, l). The uniform distribution is
/// stored implicitly; everything else is a sparse map without zero entries.
class JointDist {
  public:
    using Key = std::pair<Code, Code>; // (h, l)

    [[nodiscard]] const Domain& domain() const { return domain_; }
    [[nodiscard]] bool is_uniform() const { return uniform_; }

    [[nodiscard]] mpq_class at(Code h, Code l) const;
    [[nodiscard]] mpq_class low_marginal(Code l) const;
    [[nodiscard]] mpq_class high_marginal(Code h) const;

    /// Visits every point with nonzero mass in (h, l) order.
    void for_each(const std::function<void(Code, Code, const mpq_class&)>& fn) const;
    [[nodiscard]] std::size_t support_size() const;

    /// Greatest common denominator-free scale: the lcm of all mass denominators.
    [[nodiscard]] mpz_class common_denominator() const;

    /// File form: `vars: <high> | <low>` then `<h-bits> <l-bits> <num>/<den>` per
    /// nonzero point, ascending.
    [[nodiscard]] std::string serialize() const;

    friend bool operator==(const JointDist& a, const JointDist& b);

  private:
    friend JointDist uniform(const Domain&, std::size_t);
    friend JointDist from_table(const Domain&, const std::vector<std::tuple<Code, Code, mpq_class>>&);

    Domain domain_;
    bool uniform_ = false;
    std::map<Key, mpq_class> mass_;
};

[[nodiscard]] JointDist uniform(const Domain& d, std::size_t capacity_bits = kDefaultCapacityBits);

/// Unlisted points get mass 0. Repeated keys are summed. Throws
/// DistributionError for negative masses, keys outside the domain, or a total
/// other than 1.
[[nodiscard]] JointDist from_table(const Domain& d, const std::vector<std::tuple<Code, Code, mpq_class>>& entries);

/// Deterministic random distribution for property tests. Each point is dropped
/// from the support with probability `sparsity` (at least one point is always
/// kept); the 2^16 mass units are split among the kept points at uniformly
/// random cut positions, so every mass is a multiple of 1/2^16.
[[nodiscard]] JointDist sample_random(const Domain& d, std::uint64_t seed, double sparsity = 0.0);

[[nodiscard]] JointDist parse_dist(std::string_view text);

} // namespace qif

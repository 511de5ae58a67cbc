// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "qif/dist.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "qif/error.hpp"

namespace qif {

Domain domain_of(const ProgramUnit& p) { return Domain{p.high, p.low}; }

mpq_class JointDist::at(Code h, Code l) const {
    const InputSpace s = domain_.space();
    if (h >= s.high_count() || l >= s.low_count()) {
        return 0;
    }
    if (uniform_) {
        return mpq_class(1, mpz_class(s.size()));
    }
    auto it = mass_.find({h, l});
    return it == mass_.end() ? mpq_class(0) : it->second;
}

mpq_class JointDist::low_marginal(Code l) const {
    if (uniform_) {
        return mpq_class(1, mpz_class(domain_.space().low_count()));
    }
    mpq_class sum = 0;
    for (const auto& [k, m] : mass_) {
        if (k.second == l) {
            sum += m;
        }
    }
    return sum;
}

mpq_class JointDist::high_marginal(Code h) const {
    if (uniform_) {
        return mpq_class(1, mpz_class(domain_.space().high_count()));
    }
    mpq_class sum = 0;
    for (auto it = mass_.lower_bound({h, 0}); it != mass_.end() && it->first.first == h; ++it) {
        sum += it->second;
    }
    return sum;
}

void JointDist::for_each(const std::function<void(Code, Code, const mpq_class&)>& fn) const {
    if (uniform_) {
        const InputSpace s = domain_.space();
        const mpq_class m(1, mpz_class(s.size()));
        for (Code h = 0; h < s.high_count(); ++h) {
            for (Code l = 0; l < s.low_count(); ++l) {
                fn(h, l, m);
            }
        }
        return;
    }
    for (const auto& [k, m] : mass_) {
        fn(k.first, k.second, m);
    }
}

std::size_t JointDist::support_size() const { return uniform_ ? domain_.space().size() : mass_.size(); }

mpz_class JointDist::common_denominator() const {
    if (uniform_) {
        return mpz_class(domain_.space().size());
    }
    mpz_class d = 1;
    for (const auto& [k, m] : mass_) {
        mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), m.get_den_mpz_t());
    }
    return d;
}

namespace {

std::string join(const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t i = 0; i < names.size(); ++i) {
        s += (i == 0 ? "" : " ") + names[i];
    }
    return s;
}

} // namespace

std::string JointDist::serialize() const {
    std::ostringstream os;
    os << "vars: " << join(domain_.high) << (domain_.high.empty() ? "| " : " | ") << join(domain_.low) << '\n';
    const InputSpace s = domain_.space();
    for_each([&](Code h, Code l, const mpq_class& m) {
        os << code_to_bits(h, s.high_bits) << ' ' << code_to_bits(l, s.low_bits) << ' ' << m.get_num() << '/'
           << m.get_den() << '\n';
    });
    return os.str();
}

bool operator==(const JointDist& a, const JointDist& b) {
    if (!(a.domain_ == b.domain_)) {
        return false;
    }
    if (a.uniform_ && b.uniform_) {
        return true;
    }
    if (a.support_size() != b.support_size()) {
        return false;
    }
    bool same = true;
    a.for_each([&](Code h, Code l, const mpq_class& m) { same = same && b.at(h, l) == m; });
    return same;
}

JointDist uniform(const Domain& d, std::size_t capacity_bits) {
    const std::size_t bits = d.high.size() + d.low.size();
    if (bits > std::min(capacity_bits, kMaxCapacityBits)) {
        throw CapacityError("domain has " + std::to_string(bits) + " bits; capacity is " +
                            std::to_string(std::min(capacity_bits, kMaxCapacityBits)));
    }
    JointDist mu;
    mu.domain_ = d;
    mu.uniform_ = true;
    return mu;
}

JointDist from_table(const Domain& d, const std::vector<std::tuple<Code, Code, mpq_class>>& entries) {
    if (d.high.size() + d.low.size() > kMaxCapacityBits) {
        throw CapacityError("domain too large");
    }
    const InputSpace s = d.space();
    JointDist mu;
    mu.domain_ = d;
    mpq_class total = 0;
    for (const auto& [h, l, m] : entries) {
        if (h >= s.high_count() || l >= s.low_count()) {
            throw DistributionError("point (" + std::to_string(h) + ", " + std::to_string(l) +
                                    ") lies outside the domain");
        }
        if (sgn(m) < 0) {
            throw DistributionError("negative mass " + m.get_str());
        }
        total += m;
        if (sgn(m) != 0) {
            mu.mass_[{h, l}] += m;
        }
    }
    if (total != 1) {
        throw DistributionError("masses sum to " + total.get_str() + ", not 1");
    }
    return mu;
}

namespace {

// Uniform integer in [0, bound) by rejection, independent of the standard
// library's distribution implementations.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

} // namespace

JointDist sample_random(const Domain& d, std::uint64_t seed, double sparsity) {
    const std::size_t bits = d.high.size() + d.low.size();
    if (bits > kMaxSampleBits) {
        throw CapacityError("random distributions need at most " + std::to_string(kMaxSampleBits) +
                            " input bits, domain has " + std::to_string(bits));
    }
    if (!(sparsity >= 0.0 && sparsity < 1.0)) {
        throw DistributionError("sparsity must lie in [0, 1)");
    }
    constexpr std::uint64_t kUnits = std::uint64_t{1} << 16;
    const InputSpace s = d.space();
    std::mt19937_64 rng(seed);

    // Keep threshold on a 2^32 grid so the decision is exact across platforms.
    const auto keep_below = static_cast<std::uint64_t>((1.0 - sparsity) * 4294967296.0);
    std::vector<std::uint64_t> support;
    for (std::uint64_t i = 0; i < s.size(); ++i) {
        if (sparsity == 0.0 || draw_below(rng, std::uint64_t{1} << 32) < keep_below) {
            support.push_back(i);
        }
    }
    if (support.empty()) {
        support.push_back(draw_below(rng, s.size()));
    }

    // Choose support.size() - 1 distinct cut points in [1, kUnits) by a
    // partial Fisher-Yates shuffle.
    const std::size_t k = support.size();
    std::vector<std::uint32_t> pool(kUnits - 1);
    std::iota(pool.begin(), pool.end(), 1U);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        std::swap(pool[i], pool[i + draw_below(rng, pool.size() - i)]);
    }
    std::vector<std::uint64_t> cuts(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k - 1));
    std::sort(cuts.begin(), cuts.end());
    cuts.insert(cuts.begin(), 0);
    cuts.push_back(kUnits);

    std::vector<std::tuple<Code, Code, mpq_class>> entries;
    for (std::size_t i = 0; i < k; ++i) {
        mpq_class m(mpz_class(cuts[i + 1] - cuts[i]), mpz_class(kUnits));
        m.canonicalize();
        const Code idx = support[i];
        entries.emplace_back(idx >> s.low_bits, idx & (s.low_count() - 1), m);
    }
    return from_table(d, entries);
}

namespace {

std::vector<std::string> split_ws(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream is{std::string(text)};
    std::string tok;
    while (is >> tok) {
        out.push_back(tok);
    }
    return out;
}

} // namespace

JointDist parse_dist(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    Domain d;
    std::vector<std::tuple<Code, Code, mpq_class>> entries;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto c = line.find('#'); c != std::string::npos) {
            line.erase(c);
        }
        auto toks = split_ws(line);
        if (toks.empty()) {
            continue;
        }
        auto fail = [&](const std::string& msg) {
            return DistributionError("distribution line " + std::to_string(line_no) + ": " + msg);
        };
        if (!have_header) {
            if (toks[0] != "vars:") {
                throw fail("expected header 'vars: <high> | <low>'");
            }
            auto bar = std::find(toks.begin(), toks.end(), "|");
            if (bar == toks.end()) {
                throw fail("header needs '|' between high and low variables");
            }
            d.high.assign(toks.begin() + 1, bar);
            d.low.assign(bar + 1, toks.end());
            for (const auto* list : {&d.high, &d.low}) {
                for (const auto& n : *list) {
                    if (!is_identifier(n)) {
                        throw fail("invalid variable name '" + n + "'");
                    }
                }
            }
            have_header = true;
            continue;
        }
        if (toks.size() != 3) {
            throw fail("expected '<h-bits> <l-bits> <num>/<den>'");
        }
        mpq_class m;
        try {
            if (m.set_str(toks[2], 10) != 0 || sgn(m.get_den()) == 0) {
                throw fail("invalid mass '" + toks[2] + "'");
            }
        } catch (const std::invalid_argument&) {
            throw fail("invalid mass '" + toks[2] + "'");
        }
        m.canonicalize();
        try {
            entries.emplace_back(bits_to_code(toks[0], d.high.size()), bits_to_code(toks[1], d.low.size()), m);
        } catch (const Error& e) {
            throw fail(e.what());
        }
    }
    if (!have_header) {
        throw DistributionError("distribution file has no header");
    }
    return from_table(d, entries);
}

} // namespace qif

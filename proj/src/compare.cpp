// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "qif/compare.hpp"

#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "qif/error.hpp"

namespace qif {

void require_same_domain(const ProgramUnit& a, const ProgramUnit& b) {
    if (!a.same_input_domain(b)) {
        throw DomainMismatch("programs have different input domains");
    }
}

namespace {

void require_same_space(const Denotation& a, const Denotation& b) {
    if (!(a.space == b.space)) {
        throw DomainMismatch("programs have different input domains");
    }
}

// prod over size classes of n^(n*mult), after cancelling the exponents the two
// sides share. Returns the sign of (lhs - rhs).
int compare_class_products(const std::map<std::uint64_t, std::uint64_t>& a,
                           const std::map<std::uint64_t, std::uint64_t>& b) {
    // Cheap floating prefilter on sum n log n.
    long double sa = 0;
    long double sb = 0;
    for (const auto& [n, m] : a) {
        sa += static_cast<long double>(n * m) * std::log2(static_cast<long double>(n));
    }
    for (const auto& [n, m] : b) {
        sb += static_cast<long double>(n * m) * std::log2(static_cast<long double>(n));
    }
    const long double scale = std::max<long double>(1, std::max(sa, sb));
    if (std::fabs(sa - sb) > 1e-9L * scale) {
        return sa < sb ? -1 : 1;
    }
    std::map<std::uint64_t, std::int64_t> exps;
    for (const auto& [n, m] : a) {
        exps[n] += static_cast<std::int64_t>(n * m);
    }
    for (const auto& [n, m] : b) {
        exps[n] -= static_cast<std::int64_t>(n * m);
    }
    mpz_class lhs = 1;
    mpz_class rhs = 1;
    mpz_class t;
    for (const auto& [n, e] : exps) {
        if (n <= 1 || e == 0) {
            continue;
        }
        mpz_ui_pow_ui(t.get_mpz_t(), n, static_cast<unsigned long>(e > 0 ? e : -e));
        (e > 0 ? lhs : rhs) *= t;
    }
    return cmp(lhs, rhs) < 0 ? -1 : (cmp(lhs, rhs) > 0 ? 1 : 0);
}

} // namespace

bool cmp_uniform(const Denotation& d1, const Denotation& d2, Measure kind) {
    require_same_space(d1, d2);
    const ClassCounts c1 = class_counts(d1);
    const ClassCounts c2 = class_counts(d2);
    switch (kind) {
    case Measure::SE: return compare_class_products(c1.histogram(), c2.histogram()) >= 0;
    case Measure::ME: return c1.image_sum() <= c2.image_sum();
    case Measure::GE: return c1.sum_of_squares() >= c2.sum_of_squares();
    case Measure::CC: return c1.image_max().first <= c2.image_max().first;
    }
    throw Error("unknown measure");
}

bool cmp_uniform(const ProgramUnit& m1, const ProgramUnit& m2, Measure kind, std::size_t capacity_bits) {
    require_same_domain(m1, m2);
    return cmp_uniform(denotation(m1, capacity_bits), denotation(m2, capacity_bits), kind);
}

std::string to_string(CmpResult r) {
    switch (r) {
    case CmpResult::Holds: return "holds";
    case CmpResult::Fails: return "fails";
    case CmpResult::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

CmpResult from_bool(bool b) { return b ? CmpResult::Holds : CmpResult::Fails; }

// SE as a sum of c * log(m_l / c) equals log(prod (m_l/c)^c). Scaled by the
// common denominator D every exponent D*c is an integer, so SE1 <= SE2 iff
// prod1 (a/b)^e <= prod2 (a/b)^e with a = D*m_l, b = D*c.
std::optional<int> compare_se_exact(const std::vector<std::pair<mpq_class, mpq_class>>& t1,
                                    const std::vector<std::pair<mpq_class, mpq_class>>& t2, const mpz_class& den) {
    if (cmp(den, mpz_class(kMaxExactSeDenominator)) > 0) {
        return std::nullopt;
    }
    auto product = [&](const std::vector<std::pair<mpq_class, mpq_class>>& terms, mpz_class& num, mpz_class& dnm) {
        num = 1;
        dnm = 1;
        mpz_class t;
        for (const auto& [c, lm] : terms) {
            mpq_class a_q = lm * den;
            mpq_class b_q = c * den;
            const unsigned long e = b_q.get_num().get_ui();
            mpz_pow_ui(t.get_mpz_t(), a_q.get_num().get_mpz_t(), e);
            num *= t;
            mpz_pow_ui(t.get_mpz_t(), b_q.get_num().get_mpz_t(), e);
            dnm *= t;
        }
    };
    mpz_class n1, d1, n2, d2;
    product(t1, n1, d1);
    product(t2, n2, d2);
    mpz_class lhs = n1 * d2;
    mpz_class rhs = n2 * d1;
    return cmp(lhs, rhs) < 0 ? -1 : (cmp(lhs, rhs) > 0 ? 1 : 0);
}

} // namespace

CmpResult cmp_dist(const Denotation& d1, const Denotation& d2, Measure kind, const JointDist& mu, double epsilon) {
    require_same_space(d1, d2);
    if (mu.is_uniform() || kind == Measure::CC) {
        return from_bool(cmp_uniform(d1, d2, kind));
    }
    switch (kind) {
    case Measure::ME:
        // V(H|L) depends on mu alone, so compare the posteriors.
        return from_bool(vulnerability_posterior(d1, mu) <= vulnerability_posterior(d2, mu));
    case Measure::GE: return from_bool(guessing_posterior(d1, mu) >= guessing_posterior(d2, mu));
    case Measure::SE: {
        const double v1 = se(d1, mu).value;
        const double v2 = se(d2, mu).value;
        if (std::fabs(v1 - v2) >= epsilon) {
            return from_bool(v1 < v2);
        }
        auto t1 = se_terms(d1, mu);
        auto t2 = se_terms(d2, mu);
        if (t1 == t2) {
            return CmpResult::Holds;
        }
        auto c = compare_se_exact(t1, t2, mu.common_denominator());
        if (!c) {
            return CmpResult::Inconclusive;
        }
        return from_bool(*c <= 0);
    }
    case Measure::CC: break;
    }
    throw Error("unknown measure");
}

CmpResult cmp_dist(const ProgramUnit& m1, const ProgramUnit& m2, Measure kind, const JointDist& mu, double epsilon,
                   std::size_t capacity_bits) {
    require_same_domain(m1, m2);
    return cmp_dist(denotation(m1, capacity_bits), denotation(m2, capacity_bits), kind, mu, epsilon);
}

std::string RVerdict::to_json(const InputSpace& space) const {
    nlohmann::ordered_json j;
    j["holds"] = holds;
    if (counterexample) {
        nlohmann::ordered_json c;
        c["l"] = code_to_bits(counterexample->l, space.low_bits);
        c["h"] = code_to_bits(counterexample->h, space.high_bits);
        c["h2"] = code_to_bits(counterexample->h2, space.high_bits);
        j["counterexample"] = c;
    } else {
        j["counterexample"] = nullptr;
    }
    return j.dump();
}

namespace {

// Groups h by key(h) and finds the lexicographically smallest (h, h2), h < h2,
// with equal keys but different values.
std::optional<std::pair<Code, Code>> find_split(std::uint64_t count, const std::function<Code(Code)>& key,
                                                const std::function<Code(Code)>& value) {
    struct Group {
        Code first;
        Code value;
        bool mixed;
    };
    std::unordered_map<Code, Group> groups;
    for (Code h = 0; h < count; ++h) {
        const Code k = key(h);
        const Code v = value(h);
        auto [it, fresh] = groups.try_emplace(k, Group{h, v, false});
        if (!fresh && it->second.value != v) {
            it->second.mixed = true;
        }
    }
    std::optional<Code> best;
    Code best_key = 0;
    for (const auto& [k, g] : groups) {
        if (g.mixed && (!best || g.first < *best)) {
            best = g.first;
            best_key = k;
        }
    }
    if (!best) {
        return std::nullopt;
    }
    const Code v0 = value(*best);
    for (Code h2 = *best + 1; h2 < count; ++h2) {
        if (key(h2) == best_key && value(h2) != v0) {
            return std::make_pair(*best, h2);
        }
    }
    return std::nullopt; // unreachable: the group is mixed
}

} // namespace

RVerdict check_R(const Denotation& d1, const Denotation& d2) {
    require_same_space(d1, d2);
    for (Code l = 0; l < d1.space.low_count(); ++l) {
        auto split = find_split(
            d1.space.high_count(), [&](Code h) { return d2.at(h, l); }, [&](Code h) { return d1.at(h, l); });
        if (split) {
            return RVerdict{false, Counterexample{l, split->first, split->second}};
        }
    }
    return RVerdict{true, std::nullopt};
}

RVerdict check_R(const ProgramUnit& m1, const ProgramUnit& m2, std::size_t capacity_bits) {
    require_same_domain(m1, m2);
    return check_R(denotation(m1, capacity_bits), denotation(m2, capacity_bits));
}

JointDist witness_distribution(const ProgramUnit& m1, const ProgramUnit& m2, std::size_t capacity_bits) {
    RVerdict v = check_R(m1, m2, capacity_bits);
    if (v.holds) {
        throw NoCounterexample("R holds, so no distribution separates the programs");
    }
    const auto& c = *v.counterexample;
    return from_table(domain_of(m1), {{c.h, c.l, mpq_class(1, 2)}, {c.h2, c.l, mpq_class(1, 2)}});
}

bool universal_cmp(const ProgramUnit& m1, const ProgramUnit& m2, Measure kind, std::size_t capacity_bits) {
    if (kind == Measure::CC) {
        throw Error("the universal comparison is defined for SE, ME and GE");
    }
    return check_R(m1, m2, capacity_bits).holds;
}

RVerdict check_ni(const Denotation& d) {
    for (Code l = 0; l < d.space.low_count(); ++l) {
        const Code o0 = d.at(0, l);
        for (Code h = 1; h < d.space.high_count(); ++h) {
            if (d.at(h, l) != o0) {
                return RVerdict{false, Counterexample{l, 0, h}};
            }
        }
    }
    return RVerdict{true, std::nullopt};
}

RVerdict check_ni(const ProgramUnit& p, std::size_t capacity_bits) { return check_ni(denotation(p, capacity_bits)); }

} // namespace qif

// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Random generators and independent reference computations shared by the
// tests. Nothing here calls the measure, comparison or solver code under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qif/exec.hpp"
#include "qif/formula.hpp"
#include "qif/program.hpp"

namespace qif::testing {

inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

inline std::vector<std::string> names(const std::string& prefix, std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) {
        v.push_back(prefix + std::to_string(i));
    }
    return v;
}

inline Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& vars, int depth) {
    const std::uint64_t pick = below(rng, depth <= 0 ? 2 : 6);
    if (pick == 0 || vars.empty()) {
        return below(rng, 2) == 0 ? Formula::truth() : Formula::falsity();
    }
    if (pick == 1) {
        return Formula::var(vars[below(rng, vars.size())]);
    }
    switch (below(rng, 4)) {
    case 0: return Formula::negation(random_formula(rng, vars, depth - 1));
    case 1: return Formula::conj(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
    case 2: return Formula::disj(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
    default: return Formula::iff(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
    }
}

inline Stmt random_stmt(std::mt19937_64& rng, const std::vector<std::string>& readable,
                        const std::vector<std::string>& writable, int depth) {
    const std::uint64_t pick = below(rng, depth <= 0 ? 2 : 5);
    if (pick == 0 || writable.empty()) {
        return writable.empty() || below(rng, 4) == 0
                   ? Stmt::skip()
                   : Stmt::assign(writable[below(rng, writable.size())], random_formula(rng, readable, 2));
    }
    if (pick == 1 || pick == 2) {
        return Stmt::assign(writable[below(rng, writable.size())], random_formula(rng, readable, 2));
    }
    if (pick == 3) {
        return Stmt::branch(random_formula(rng, readable, 2), random_stmt(rng, readable, writable, depth - 1),
                            random_stmt(rng, readable, writable, depth - 1));
    }
    return Stmt::seq(random_stmt(rng, readable, writable, depth - 1), random_stmt(rng, readable, writable, depth - 1));
}

struct Shape {
    std::size_t high = 2;
    std::size_t low = 1;
    std::size_t out = 1;
    std::size_t local = 0;
    int depth = 3;
};

/// Random program over h*, l*, o*, t* names. Outputs and locals are written;
/// everything is readable.
inline ProgramUnit random_program(std::mt19937_64& rng, const Shape& s) {
    ProgramUnit p;
    p.high = names("h", s.high);
    p.low = names("l", s.low);
    p.out = names("o", s.out);
    p.local = names("t", s.local);
    std::vector<std::string> readable = p.high;
    readable.insert(readable.end(), p.low.begin(), p.low.end());
    readable.insert(readable.end(), p.out.begin(), p.out.end());
    readable.insert(readable.end(), p.local.begin(), p.local.end());
    std::vector<std::string> writable = p.out;
    writable.insert(writable.end(), p.local.begin(), p.local.end());
    std::vector<Stmt> parts;
    for (int i = 0; i < 2; ++i) {
        parts.push_back(random_stmt(rng, readable, writable, s.depth));
    }
    // Make every output depend on something at least some of the time.
    for (const auto& o : p.out) {
        if (below(rng, 2) == 0) {
            parts.push_back(Stmt::assign(o, random_formula(rng, readable, 2)));
        }
    }
    p.body = Stmt::seq_all(parts);
    p.validate();
    return p;
}

/// Shape with a random number of bits in the given ranges.
inline Shape random_shape(std::mt19937_64& rng, std::size_t max_high, std::size_t max_low, std::size_t max_out,
                          std::size_t max_local = 1) {
    Shape s;
    s.high = 1 + below(rng, max_high);
    s.low = below(rng, max_low + 1);
    s.out = 1 + below(rng, max_out);
    s.local = below(rng, max_local + 1);
    return s;
}

/// Reference interpreter over a Valuation, independent of the compiled executor.
inline void interpret(const Stmt& s, std::map<std::string, bool>& st) {
    switch (s.kind()) {
    case StmtKind::Skip: break;
    case StmtKind::Assign: {
        const bool v = evaluate(s.value(), st);
        st[s.target()] = v;
        break;
    }
    case StmtKind::If: interpret(evaluate(s.cond(), st) ? s.then_branch() : s.else_branch(), st); break;
    case StmtKind::Seq:
        interpret(s.first(), st);
        interpret(s.second(), st);
        break;
    }
}

/// Output tuple for inputs given as bit vectors in declared order.
inline std::vector<bool> run_reference(const ProgramUnit& p, std::uint64_t h, std::uint64_t l) {
    std::map<std::string, bool> st;
    for (const auto& v : p.variables()) {
        st[v] = false;
    }
    for (std::size_t i = 0; i < p.high.size(); ++i) {
        st[p.high[i]] = ((h >> (p.high.size() - 1 - i)) & 1U) != 0;
    }
    for (std::size_t i = 0; i < p.low.size(); ++i) {
        st[p.low[i]] = ((l >> (p.low.size() - 1 - i)) & 1U) != 0;
    }
    interpret(p.body, st);
    std::vector<bool> out;
    for (const auto& o : p.out) {
        out.push_back(st[o]);
    }
    return out;
}

/// Table of reference outputs, table[l][h].
using OutTable = std::vector<std::vector<std::vector<bool>>>;

inline OutTable reference_table(const ProgramUnit& p) {
    const std::uint64_t nh = std::uint64_t{1} << p.high.size();
    const std::uint64_t nl = std::uint64_t{1} << p.low.size();
    OutTable t(nl, std::vector<std::vector<bool>>(nh));
    for (std::uint64_t l = 0; l < nl; ++l) {
        for (std::uint64_t h = 0; h < nh; ++h) {
            t[l][h] = run_reference(p, h, l);
        }
    }
    return t;
}

/// Reference measures from the definitions, in long double, for a joint
/// distribution given as mass[l][h] (doubles summing to 1).
struct RefMeasures {
    long double se = 0;
    long double me = 0;
    long double ge = 0;
};

inline RefMeasures reference_measures(const OutTable& t, const std::vector<std::vector<long double>>& mass) {
    RefMeasures r;
    long double v_prior = 0;
    long double v_post = 0;
    long double g_prior = 0;
    long double g_post = 0;
    auto guesses = [](std::vector<long double> ps) {
        std::sort(ps.begin(), ps.end(), std::greater<>());
        long double g = 0;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            g += static_cast<long double>(i + 1) * ps[i];
        }
        return g;
    };
    for (std::size_t l = 0; l < t.size(); ++l) {
        long double pl = 0;
        std::map<std::vector<bool>, std::vector<long double>> classes;
        std::vector<long double> all;
        for (std::size_t h = 0; h < t[l].size(); ++h) {
            pl += mass[l][h];
            classes[t[l][h]].push_back(mass[l][h]);
            all.push_back(mass[l][h]);
        }
        v_prior += *std::max_element(all.begin(), all.end());
        g_prior += guesses(all);
        for (const auto& [o, ps] : classes) {
            long double po = 0;
            for (auto p : ps) {
                po += p;
            }
            if (po > 0) {
                r.se += po * std::log2(pl / po);
            }
            v_post += *std::max_element(ps.begin(), ps.end());
            g_post += guesses(ps);
        }
    }
    r.me = std::log2(v_post / v_prior);
    r.ge = g_prior - g_post;
    return r;
}

inline std::vector<std::vector<long double>> uniform_mass(const ProgramUnit& p) {
    const std::size_t nh = std::size_t{1} << p.high.size();
    const std::size_t nl = std::size_t{1} << p.low.size();
    return std::vector<std::vector<long double>>(nl, std::vector<long double>(nh, 1.0L / (nh * nl)));
}

/// Brute-force R from the definition (quadratic in |h|).
inline bool reference_R(const OutTable& a, const OutTable& b) {
    for (std::size_t l = 0; l < a.size(); ++l) {
        for (std::size_t h = 0; h < a[l].size(); ++h) {
            for (std::size_t h2 = 0; h2 < a[l].size(); ++h2) {
                if (a[l][h] != a[l][h2] && b[l][h] == b[l][h2]) {
                    return false;
                }
            }
        }
    }
    return true;
}

inline bool reference_NI(const OutTable& a) {
    for (const auto& row : a) {
        for (const auto& o : row) {
            if (o != row[0]) {
                return false;
            }
        }
    }
    return true;
}

/// Number of satisfying assignments over `vars` by direct evaluation.
inline std::uint64_t reference_count(const Formula& f, const std::vector<std::string>& vars) {
    std::uint64_t c = 0;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << vars.size()); ++a) {
        std::map<std::string, bool> v;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            v[vars[i]] = ((a >> i) & 1U) != 0;
        }
        c += evaluate(f, v) ? 1 : 0;
    }
    return c;
}

/// Truth table of f over vars (bit i of the row index gives vars[i]).
inline std::vector<bool> truth_table(const Formula& f, const std::vector<std::string>& vars,
                                     const std::map<std::string, bool>& fixed = {}) {
    std::vector<bool> t;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << vars.size()); ++a) {
        std::map<std::string, bool> v = fixed;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            v[vars[i]] = ((a >> i) & 1U) != 0;
        }
        t.push_back(evaluate(f, v));
    }
    return t;
}

} // namespace qif::testing

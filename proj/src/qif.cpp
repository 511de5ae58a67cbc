// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "qif/qif.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qif/error.hpp"

namespace qif {

std::string measure_name(Measure m) {
    switch (m) {
    case Measure::SE: return "SE";
    case Measure::ME: return "ME";
    case Measure::GE: return "GE";
    case Measure::CC: return "CC";
    }
    return "?";
}

Measure parse_measure(const std::string& s) {
    std::string u;
    for (char c : s) {
        u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (u == "SE") return Measure::SE;
    if (u == "ME") return Measure::ME;
    if (u == "GE") return Measure::GE;
    if (u == "CC") return Measure::CC;
    throw Error("unknown measure '" + s + "' (expected se, me, ge or cc)");
}

std::string MeasureReport::to_json() const {
    nlohmann::ordered_json j;
    j["measure"] = measure_name(measure);
    j["value"] = value;
    j["exact"] = exact ? nlohmann::ordered_json(*exact) : nlohmann::ordered_json(nullptr);
    j["mode"] = exact_mode ? "exact" : "float";
    return j.dump();
}

double log2z(const mpz_class& z) {
    if (sgn(z) <= 0) {
        throw Error("log of a non-positive number");
    }
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log2(mant) + static_cast<double>(exp);
}

double log2q(const mpq_class& q) {
    if (sgn(q) <= 0) {
        throw Error("log of a non-positive number");
    }
    // Near 1 the difference of two logs cancels; use log1p on the exact offset.
    mpq_class delta = q - 1;
    if (abs(delta) < mpq_class(1, 16)) {
        return std::log1p(delta.get_d()) / std::numbers::ln2;
    }
    return log2z(q.get_num()) - log2z(q.get_den());
}

double shannon_cond_entropy(const Pmf2& joint) {
    std::map<std::uint64_t, mpq_class> marginal;
    for (const auto& [k, m] : joint) {
        marginal[k.second] += m;
    }
    double h = 0.0;
    for (const auto& [k, m] : joint) {
        if (sgn(m) > 0) {
            h += m.get_d() * log2q(marginal[k.second] / m);
        }
    }
    return h;
}

double shannon_entropy(const std::map<std::uint64_t, mpq_class>& pmf) {
    Pmf2 joint;
    for (const auto& [x, m] : pmf) {
        joint[{x, 0}] = m;
    }
    return shannon_cond_entropy(joint);
}

std::map<std::uint64_t, std::uint64_t> ClassCounts::histogram() const {
    std::map<std::uint64_t, std::uint64_t> h;
    for (const auto& sizes : per_low) {
        for (auto n : sizes) {
            ++h[n];
        }
    }
    return h;
}

mpz_class ClassCounts::sum_of_squares() const {
    mpz_class s = 0;
    for (const auto& [n, mult] : histogram()) {
        s += mpz_class(n) * mpz_class(n) * mpz_class(mult);
    }
    return s;
}

std::uint64_t ClassCounts::image_sum() const {
    std::uint64_t s = 0;
    for (const auto& sizes : per_low) {
        s += sizes.size();
    }
    return s;
}

std::pair<std::uint64_t, Code> ClassCounts::image_max() const {
    std::pair<std::uint64_t, Code> best{0, 0};
    for (Code l = 0; l < per_low.size(); ++l) {
        if (per_low[l].size() > best.first) {
            best = {per_low[l].size(), l};
        }
    }
    return best;
}

ClassCounts class_counts(const Denotation& d) {
    ClassCounts c{d.space, {}};
    c.per_low.resize(d.space.low_count());
    std::vector<Code> outs(d.space.high_count());
    for (Code l = 0; l < d.space.low_count(); ++l) {
        for (Code h = 0; h < d.space.high_count(); ++h) {
            outs[h] = d.at(h, l);
        }
        std::sort(outs.begin(), outs.end());
        auto& sizes = c.per_low[l];
        for (std::size_t i = 0; i < outs.size();) {
            std::size_t j = i;
            while (j < outs.size() && outs[j] == outs[i]) {
                ++j;
            }
            sizes.push_back(j - i);
            i = j;
        }
        std::sort(sizes.begin(), sizes.end());
    }
    return c;
}

namespace {

void check_domain(const Denotation& d, const JointDist& mu) {
    if (!(mu.domain().space() == d.space)) {
        throw DomainMismatch("distribution domain does not match the program's inputs");
    }
}

// Class structure of the support of mu: for each (o, l), the masses of its points.
struct Classes {
    std::map<std::pair<Code, Code>, std::vector<mpq_class>> by_class; // (l, o) -> masses, h ascending
    std::map<Code, std::vector<mpq_class>> by_low;                     // l -> masses, h ascending
};

Classes collect(const Denotation& d, const JointDist& mu) {
    check_domain(d, mu);
    Classes c;
    mu.for_each([&](Code h, Code l, const mpq_class& m) {
        c.by_class[{l, d.at(h, l)}].push_back(m);
        c.by_low[l].push_back(m);
    });
    return c;
}

mpq_class sum(const std::vector<mpq_class>& v) {
    mpq_class s = 0;
    for (const auto& x : v) {
        s += x;
    }
    return s;
}

mpq_class max_of(const std::vector<mpq_class>& v) {
    mpq_class m = 0;
    for (const auto& x : v) {
        if (x > m) {
            m = x;
        }
    }
    return m;
}

} // namespace

mpq_class guessing_sum(std::vector<mpq_class> masses) {
    std::stable_sort(masses.begin(), masses.end(), [](const mpq_class& a, const mpq_class& b) { return a > b; });
    mpq_class g = 0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        g += mpq_class(mpz_class(i + 1)) * masses[i];
    }
    return g;
}

mpq_class vulnerability_prior(const Denotation& d, const JointDist& mu) {
    mpq_class v = 0;
    for (const auto& [l, ms] : collect(d, mu).by_low) {
        v += max_of(ms);
    }
    return v;
}

mpq_class vulnerability_posterior(const Denotation& d, const JointDist& mu) {
    mpq_class v = 0;
    for (const auto& [k, ms] : collect(d, mu).by_class) {
        v += max_of(ms);
    }
    return v;
}

mpq_class guessing_prior(const Denotation& d, const JointDist& mu) {
    mpq_class g = 0;
    for (const auto& [l, ms] : collect(d, mu).by_low) {
        g += guessing_sum(ms);
    }
    return g;
}

mpq_class guessing_posterior(const Denotation& d, const JointDist& mu) {
    mpq_class g = 0;
    for (const auto& [k, ms] : collect(d, mu).by_class) {
        g += guessing_sum(ms);
    }
    return g;
}

std::vector<std::pair<mpq_class, mpq_class>> se_terms(const Denotation& d, const JointDist& mu) {
    Classes c = collect(d, mu);
    std::map<Code, mpq_class> low_mass;
    for (const auto& [l, ms] : c.by_low) {
        low_mass[l] = sum(ms);
    }
    std::vector<std::pair<mpq_class, mpq_class>> terms;
    for (const auto& [k, ms] : c.by_class) {
        terms.emplace_back(sum(ms), low_mass[k.first]);
    }
    std::sort(terms.begin(), terms.end());
    return terms;
}

MeasureReport se(const Denotation& d, const JointDist& mu) {
    check_domain(d, mu);
    MeasureReport r{Measure::SE, 0.0, std::nullopt, false};
    if (mu.is_uniform()) {
        const ClassCounts c = class_counts(d);
        const auto hist = c.histogram();
        const long double hn = static_cast<long double>(d.space.high_count());
        const long double total = static_cast<long double>(d.space.size());
        long double v = 0.0L;
        std::ostringstream payload;
        payload << "N=" << d.space.size() << ";classes=[";
        bool first = true;
        for (auto it = hist.rbegin(); it != hist.rend(); ++it) {
            const auto [n, mult] = *it;
            const long double nn = static_cast<long double>(n);
            // (n / N) * log2(|h| / n), with the log taken via log1p for n near |h|.
            v += static_cast<long double>(mult) * (nn / total) * (std::log1p((hn - nn) / nn) / std::numbers::ln2_v<long double>);
            payload << (first ? "" : ",") << n << 'x' << mult;
            first = false;
        }
        payload << ']';
        r.value = static_cast<double>(v);
        r.exact = payload.str();
        r.exact_mode = true;
        return r;
    }
    double v = 0.0;
    for (const auto& [c, lm] : se_terms(d, mu)) {
        v += c.get_d() * log2q(lm / c);
    }
    r.value = v;
    return r;
}

MeasureReport me(const Denotation& d, const JointDist& mu) {
    check_domain(d, mu);
    mpq_class ratio;
    if (mu.is_uniform()) {
        const ClassCounts c = class_counts(d);
        ratio = mpq_class(mpz_class(c.image_sum()), mpz_class(d.space.low_count()));
        ratio.canonicalize();
    } else {
        ratio = vulnerability_posterior(d, mu) / vulnerability_prior(d, mu);
    }
    return MeasureReport{Measure::ME, log2q(ratio), "2^ME=" + ratio.get_str(), true};
}

MeasureReport ge(const Denotation& d, const JointDist& mu) {
    check_domain(d, mu);
    mpq_class g;
    if (mu.is_uniform()) {
        const ClassCounts c = class_counts(d);
        g = mpq_class(mpz_class(d.space.high_count()), 2) -
            mpq_class(c.sum_of_squares(), mpz_class(2) * mpz_class(d.space.size()));
        g.canonicalize();
    } else {
        g = guessing_prior(d, mu) - guessing_posterior(d, mu);
    }
    return MeasureReport{Measure::GE, g.get_d(), g.get_str(), true};
}

MeasureReport cc(const Denotation& d) {
    const auto [k, l] = class_counts(d).image_max();
    return MeasureReport{Measure::CC, log2z(mpz_class(k)),
                         "2^CC=" + std::to_string(k) + ";l=" + code_to_bits(l, d.space.low_bits), true};
}

MeasureReport se(const ProgramUnit& p, const JointDist& mu, std::size_t capacity_bits) {
    return se(denotation(p, capacity_bits), mu);
}
MeasureReport me(const ProgramUnit& p, const JointDist& mu, std::size_t capacity_bits) {
    return me(denotation(p, capacity_bits), mu);
}
MeasureReport ge(const ProgramUnit& p, const JointDist& mu, std::size_t capacity_bits) {
    return ge(denotation(p, capacity_bits), mu);
}
MeasureReport cc(const ProgramUnit& p, std::size_t capacity_bits) { return cc(denotation(p, capacity_bits)); }

MeasureReport measure(Measure m, const ProgramUnit& p, const JointDist& mu, std::size_t capacity_bits) {
    switch (m) {
    case Measure::SE: return se(p, mu, capacity_bits);
    case Measure::ME: return me(p, mu, capacity_bits);
    case Measure::GE: return ge(p, mu, capacity_bits);
    case Measure::CC: return cc(p, capacity_bits);
    }
    throw Error("unknown measure");
}

double mutual_information_olh(const Denotation& d, const JointDist& mu) {
    check_domain(d, mu);
    Pmf2 o_given_l;
    Pmf2 o_given_hl;
    mu.for_each([&](Code h, Code l, const mpq_class& m) {
        const Code o = d.at(h, l);
        o_given_l[{o, l}] += m;
        o_given_hl[{o, d.space.index(h, l)}] += m;
    });
    return shannon_cond_entropy(o_given_l) - shannon_cond_entropy(o_given_hl);
}

} // namespace qif

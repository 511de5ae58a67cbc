// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "qif/counting.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include <json.hpp>

#include "qif/compare.hpp"
#include "qif/error.hpp"
#include "qif/syntax.hpp"

namespace qif {

Formula gen_count_formula(std::uint64_t k, const std::vector<std::string>& vars) {
    const std::size_t n = vars.size();
    if (n >= 64) {
        throw RangeError("too many variables for a count formula");
    }
    const std::uint64_t all = std::uint64_t{1} << n;
    if (k > all) {
        throw RangeError("count " + std::to_string(k) + " exceeds 2^" + std::to_string(n));
    }
    if (k == all) {
        return Formula::truth();
    }
    // Built from the innermost (least significant) bit outwards.
    Formula f = Formula::falsity();
    for (std::size_t i = 0; i < n; ++i) {
        const Formula x = Formula::var(vars[i]);
        f = ((k >> i) & 1U) != 0 ? Formula::disj(x, f) : Formula::conj(x, f);
    }
    return f;
}

namespace {

// Straight-line evaluator for repeated truth-table sweeps.
class Compiled {
  public:
    Compiled(const Formula& f, const std::vector<std::string>& vars) {
        for (std::size_t i = 0; i < vars.size(); ++i) {
            index_.emplace(vars[i], i);
        }
        root_ = compile(f);
    }

    bool eval(std::uint64_t assignment) {
        // vars[i] carries bit (n - 1 - i), first variable most significant
        const std::size_t n = index_.size();
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            const Op& op = ops_[i];
            switch (op.kind) {
            case FormulaKind::True: vals_[i] = 1; break;
            case FormulaKind::Var: vals_[i] = static_cast<std::uint8_t>((assignment >> (n - 1 - op.a)) & 1U); break;
            case FormulaKind::Not: vals_[i] = static_cast<std::uint8_t>(vals_[op.a] ^ 1U); break;
            case FormulaKind::And: vals_[i] = static_cast<std::uint8_t>(vals_[op.a] & vals_[op.b]); break;
            }
        }
        return vals_[root_] != 0;
    }

  private:
    struct Op {
        FormulaKind kind;
        std::size_t a;
        std::size_t b;
    };

    std::size_t compile(const Formula& f) {
        if (auto it = memo_.find(f.id()); it != memo_.end()) {
            return it->second;
        }
        Op op{f.kind(), 0, 0};
        switch (f.kind()) {
        case FormulaKind::True: break;
        case FormulaKind::Var: {
            auto it = index_.find(f.name());
            if (it == index_.end()) {
                throw Error("variable '" + f.name() + "' is not in the counting domain");
            }
            op.a = it->second;
            break;
        }
        case FormulaKind::Not: op.a = compile(f.child()); break;
        case FormulaKind::And:
            op.a = compile(f.left());
            op.b = compile(f.right());
            break;
        }
        ops_.push_back(op);
        vals_.push_back(0);
        memo_.emplace(f.id(), ops_.size() - 1);
        return ops_.size() - 1;
    }

    std::unordered_map<std::string, std::size_t> index_;
    std::unordered_map<const Formula::Node*, std::size_t> memo_;
    std::vector<Op> ops_;
    std::vector<std::uint8_t> vals_;
    std::size_t root_ = 0;
};

} // namespace

std::uint64_t sharp_sat_enum(const Formula& f, const std::vector<std::string>& vars) {
    if (vars.size() > kMaxEnumVars) {
        throw CapacityError("model counting by enumeration supports at most " + std::to_string(kMaxEnumVars) +
                            " variables, got " + std::to_string(vars.size()));
    }
    Compiled c(f, vars);
    std::uint64_t count = 0;
    const std::uint64_t total = std::uint64_t{1} << vars.size();
    for (std::uint64_t a = 0; a < total; ++a) {
        count += c.eval(a) ? 1 : 0;
    }
    return count;
}

std::uint64_t sharp_sat_enum(const Formula& f) { return sharp_sat_enum(f, free_variables(f)); }

ProgramUnit boolenc_T(const Formula& f, const std::vector<std::string>& high) {
    std::vector<std::string> taken = high;
    for (const auto& v : free_variables(f)) {
        taken.push_back(v);
    }
    const std::string flag = fresh_name("Of", taken);
    taken.push_back(flag);
    std::vector<std::string> outs{flag};
    std::vector<Stmt> copy{Stmt::assign(flag, Formula::truth())};
    std::vector<Stmt> clear{Stmt::assign(flag, Formula::falsity())};
    for (std::size_t i = 0; i < high.size(); ++i) {
        const std::string o = fresh_name("O" + std::to_string(i), taken);
        taken.push_back(o);
        outs.push_back(o);
        copy.push_back(Stmt::assign(o, Formula::var(high[i])));
        clear.push_back(Stmt::assign(o, Formula::falsity()));
    }
    return make_program(high, {}, outs, {}, Stmt::branch(f, Stmt::seq_all(copy), Stmt::seq_all(clear)));
}

ProgramUnit boolenc_T(const Formula& f) { return boolenc_T(f, free_variables(f)); }

std::string oracle_name(OracleKind k) {
    switch (k) {
    case OracleKind::SE: return "SE";
    case OracleKind::ME: return "ME";
    case OracleKind::GE: return "GE";
    case OracleKind::CC: return "CC";
    case OracleKind::ENUM: return "ENUM";
    }
    return "?";
}

OracleKind parse_oracle(const std::string& s) {
    std::string u;
    for (char c : s) {
        u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    for (auto k : {OracleKind::SE, OracleKind::ME, OracleKind::GE, OracleKind::CC, OracleKind::ENUM}) {
        if (oracle_name(k) == u) {
            return k;
        }
    }
    throw Error("unknown oracle '" + s + "' (expected se, me, ge, cc or enum)");
}

namespace {

Measure measure_of(OracleKind k) {
    switch (k) {
    case OracleKind::SE: return Measure::SE;
    case OracleKind::ME: return Measure::ME;
    case OracleKind::GE: return Measure::GE;
    case OracleKind::CC: return Measure::CC;
    case OracleKind::ENUM: break;
    }
    throw Error("enumeration has no comparison oracle");
}

} // namespace

ProgramUnit probe_program(const Formula& f, const std::vector<std::string>& vars, OracleKind kind) {
    const std::string pad = fresh_name("H'", vars);
    std::vector<std::string> high = vars;
    high.push_back(pad);
    const Formula padded = Formula::conj(f, Formula::var(pad));
    if (kind == OracleKind::ME || kind == OracleKind::CC) {
        return boolenc_T(padded, high);
    }
    const std::string o = fresh_name("O", high);
    return make_program(high, {}, {o}, {}, Stmt::assign(o, padded));
}

CountRun count_via_oracle(const Formula& f, const std::vector<std::string>& vars, OracleKind kind) {
    CountRun run;
    run.target = f;
    run.vars = vars;
    run.kind = kind;
    if (kind == OracleKind::ENUM) {
        run.count = sharp_sat_enum(f, vars);
        return run;
    }
    if (vars.size() > kMaxOracleVars) {
        throw CapacityError("oracle counting supports at most " + std::to_string(kMaxOracleVars) +
                            " variables, got " + std::to_string(vars.size()));
    }
    for (const auto& v : free_variables(f)) {
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
            throw Error("variable '" + v + "' is not in the counting domain");
        }
    }
    const Measure m = measure_of(kind);
    const std::size_t cap = vars.size() + 1;
    const Denotation reference = denotation(probe_program(f, vars, kind), cap);
    auto leq = [&](const Denotation& a, const Denotation& b) {
        ++run.oracle_calls;
        return cmp_uniform(a, b, m);
    };

    std::uint64_t l = 0;
    std::uint64_t r = (std::uint64_t{1} << vars.size()) + 1;
    std::uint64_t n = (l + r) / 2;
    Denotation probe = denotation(probe_program(gen_count_formula(n, vars), vars, kind), cap);
    for (;;) {
        run.trace.push_back({l, r, n});
        // Both calls are made; the guard does not short-circuit.
        const bool below = leq(probe, reference);
        const bool above = leq(reference, probe);
        if (below && above) {
            break;
        }
        if (leq(probe, reference)) {
            l = n;
        } else {
            r = n;
        }
        if (run.trace.size() > vars.size() + 1) {
            throw Error("oracle search did not converge; the comparison oracle is not monotone");
        }
        n = (l + r) / 2;
        probe = denotation(probe_program(gen_count_formula(n, vars), vars, kind), cap);
    }
    run.count = n;
    return run;
}

CountRun count_via_oracle(const Formula& f, OracleKind kind) { return count_via_oracle(f, free_variables(f), kind); }

std::string CountRun::to_json() const {
    nlohmann::ordered_json j;
    j["formula"] = render_formula(target);
    j["vars"] = vars;
    j["oracle"] = oracle_name(kind);
    j["count"] = count;
    j["oracle_calls"] = oracle_calls;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& s : trace) {
        steps.push_back({{"l", s.l}, {"r", s.r}, {"n", s.n}});
    }
    j["trace"] = steps;
    return j.dump();
}

} // namespace qif

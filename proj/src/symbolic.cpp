// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "qif/symbolic.hpp"

#include <map>
#include <set>
#include <unordered_set>

#include "qif/error.hpp"
#include "qif/exec.hpp"

namespace qif {

Formula wp_naive(const Stmt& s, const Formula& post) {
    switch (s.kind()) {
    case StmtKind::Skip: return post;
    case StmtKind::Assign: return substitute(post, {{s.target(), s.value()}});
    case StmtKind::If:
        return Formula::conj(Formula::implies(s.cond(), wp_naive(s.then_branch(), post)),
                             Formula::implies(Formula::negation(s.cond()), wp_naive(s.else_branch(), post)));
    case StmtKind::Seq: return wp_naive(s.first(), wp_naive(s.second(), post));
    }
    throw Error("unknown statement kind");
}

Formula PassiveVC::vc() const {
    if (definitions.empty()) {
        return post;
    }
    std::vector<Formula> eqs;
    eqs.reserve(definitions.size());
    for (const auto& [name, def] : definitions) {
        eqs.push_back(Formula::iff(Formula::var(name), def));
    }
    return Formula::implies(Formula::conj_all(eqs), post);
}

namespace {

bool is_trivial(const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::Var: return true;
    case FormulaKind::Not: {
        const Formula& c = f.child();
        return c.kind() == FormulaKind::True || c.kind() == FormulaKind::Var;
    }
    case FormulaKind::And: return false;
    }
    return false;
}

class Passifier {
  public:
    Passifier(const Stmt& s, const Formula& post) {
        for (const auto& v : stmt_variables(s)) {
            taken_.insert(v);
        }
        for (const auto& v : free_variables(post)) {
            taken_.insert(v);
        }
    }

    using Env = std::map<std::string, Formula>;

    void run(const Stmt& s, Env& env) {
        switch (s.kind()) {
        case StmtKind::Skip: break;
        case StmtKind::Assign: env.insert_or_assign(s.target(), bind(s.target(), substitute(s.value(), env))); break;
        case StmtKind::If: {
            const Formula g = bind("g", substitute(s.cond(), env));
            Env then_env = env;
            Env else_env = env;
            run(s.then_branch(), then_env);
            run(s.else_branch(), else_env);
            std::set<std::string> touched;
            for (const auto* e : {&then_env, &else_env}) {
                for (const auto& [k, v] : *e) {
                    touched.insert(k);
                }
            }
            for (const auto& x : touched) {
                const Formula a = lookup(then_env, x);
                const Formula b = lookup(else_env, x);
                if (a == b) {
                    env.insert_or_assign(x, a);
                } else {
                    env.insert_or_assign(
                        x, bind(x, Formula::disj(Formula::conj(g, a), Formula::conj(Formula::negation(g), b))));
                }
            }
            break;
        }
        case StmtKind::Seq:
            run(s.first(), env);
            run(s.second(), env);
            break;
        }
    }

    std::vector<std::pair<std::string, Formula>> definitions;

  private:
    static Formula lookup(const Env& env, const std::string& x) {
        auto it = env.find(x);
        return it == env.end() ? Formula::var(x) : it->second;
    }

    Formula bind(const std::string& base, const Formula& value) {
        if (is_trivial(value)) {
            return value;
        }
        std::string name;
        do {
            name = base + "_s" + std::to_string(counter_[base]++);
        } while (taken_.count(name) != 0);
        taken_.insert(name);
        definitions.emplace_back(name, value);
        return Formula::var(name);
    }

    std::unordered_set<std::string> taken_;
    std::map<std::string, std::size_t> counter_;
};

} // namespace

PassiveVC passify(const Stmt& s, const Formula& post) {
    Passifier p(s, post);
    Passifier::Env env;
    p.run(s, env);
    return PassiveVC{std::move(p.definitions), substitute(post, env)};
}

Formula wp_optimized(const Stmt& s, const Formula& post) { return passify(s, post).vc(); }

Formula wp(const Stmt& s, const Formula& post, WpMode mode) {
    return mode == WpMode::Naive ? wp_naive(s, post) : wp_optimized(s, post);
}

std::string tagged(const std::string& name, const std::string& tag) { return name + "_" + tag; }

namespace {

Stmt rename_stmt(const Stmt& s, const std::map<std::string, std::string>& names) {
    auto rn = [&](const std::string& v) { return names.at(v); };
    switch (s.kind()) {
    case StmtKind::Skip: return s;
    case StmtKind::Assign: return Stmt::assign(rn(s.target()), rename_variables(s.value(), rn));
    case StmtKind::If:
        return Stmt::branch(rename_variables(s.cond(), rn), rename_stmt(s.then_branch(), names),
                            rename_stmt(s.else_branch(), names));
    case StmtKind::Seq: return Stmt::seq(rename_stmt(s.first(), names), rename_stmt(s.second(), names));
    }
    throw Error("unknown statement kind");
}

std::vector<std::string> map_names(const std::vector<std::string>& v, const std::string& tag) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& n : v) {
        out.push_back(tagged(n, tag));
    }
    return out;
}

// Outputs that are not also inputs, plus locals: the variables that start false.
std::vector<std::string> zero_initialized(const ProgramUnit& p) {
    std::set<std::string> inputs(p.high.begin(), p.high.end());
    inputs.insert(p.low.begin(), p.low.end());
    std::vector<std::string> out;
    for (const auto& v : p.variables()) {
        if (inputs.count(v) == 0) {
            out.push_back(v);
        }
    }
    return out;
}

Formula outputs_differ(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<Formula> parts;
    for (std::size_t i = 0; i < a.size(); ++i) {
        parts.push_back(Formula::negation(Formula::iff(Formula::var(a[i]), Formula::var(b[i]))));
    }
    return Formula::disj_all(parts);
}

// Binds each copy's inputs (and zeroes the rest) before the bodies run.
// `copies` are renamed programs; `high_source[i]` names the copy whose high
// inputs copy i reads. Low inputs always come from copy 0.
Stmt compose(const std::vector<ProgramUnit>& copies, const std::vector<std::size_t>& high_source) {
    std::vector<Stmt> parts;
    for (std::size_t i = 0; i < copies.size(); ++i) {
        const auto& c = copies[i];
        if (i != 0) {
            for (std::size_t j = 0; j < c.low.size(); ++j) {
                parts.push_back(Stmt::assign(c.low[j], Formula::var(copies[0].low[j])));
            }
        }
        if (high_source[i] != i) {
            const auto& src = copies[high_source[i]];
            for (std::size_t j = 0; j < c.high.size(); ++j) {
                parts.push_back(Stmt::assign(c.high[j], Formula::var(src.high[j])));
            }
        }
        for (const auto& v : zero_initialized(c)) {
            parts.push_back(Stmt::assign(v, Formula::falsity()));
        }
    }
    for (const auto& c : copies) {
        parts.push_back(c.body);
    }
    return Stmt::seq_all(parts);
}

Code read_code(const Model& m, const Cnf& cnf, const std::vector<std::string>& vars) {
    Code code = 0;
    for (const auto& v : vars) {
        const int idx = cnf.index_of(v);
        code = (code << 1) | static_cast<Code>(idx != 0 && m[static_cast<std::size_t>(idx)]);
    }
    return code;
}

} // namespace

ProgramUnit rename_apart(const ProgramUnit& p, const std::string& tag) {
    if (tag.empty() || !is_identifier("x_" + tag)) {
        throw Error("invalid renaming tag '" + tag + "'");
    }
    std::map<std::string, std::string> names;
    for (const auto& v : p.variables()) {
        names.emplace(v, tagged(v, tag));
    }
    ProgramUnit r{map_names(p.high, tag), map_names(p.low, tag), map_names(p.out, tag), map_names(p.local, tag),
                  rename_stmt(p.body, names)};
    return r;
}

std::pair<Stmt, Formula> ni_composition(const ProgramUnit& m) {
    std::vector<ProgramUnit> copies{rename_apart(m, "c1a"), rename_apart(m, "c1b")};
    std::vector<Formula> eq;
    for (std::size_t i = 0; i < m.out.size(); ++i) {
        eq.push_back(Formula::iff(Formula::var(copies[0].out[i]), Formula::var(copies[1].out[i])));
    }
    return {compose(copies, {0, 1}), Formula::conj_all(eq)};
}

std::pair<Stmt, Formula> r_composition(const ProgramUnit& m1, const ProgramUnit& m2) {
    require_same_domain(m1, m2);
    std::vector<ProgramUnit> copies{rename_apart(m1, "c1a"), rename_apart(m1, "c1b"), rename_apart(m2, "c2a"),
                                    rename_apart(m2, "c2b")};
    Formula post = Formula::implies(outputs_differ(copies[0].out, copies[1].out),
                                    outputs_differ(copies[2].out, copies[3].out));
    return {compose(copies, {0, 1, 0, 1}), post};
}

Formula vc_ni(const ProgramUnit& m, WpMode mode) {
    auto [s, post] = ni_composition(m);
    return wp(s, post, mode);
}

Formula vc_r(const ProgramUnit& m1, const ProgramUnit& m2, WpMode mode) {
    auto [s, post] = r_composition(m1, m2);
    return wp(s, post, mode);
}

RVerdict check_ni_symbolic(const ProgramUnit& m, WpMode mode) {
    const Cnf cnf = tseitin_cnf(Formula::negation(vc_ni(m, mode)));
    auto model = dpll_sat(cnf);
    if (!model) {
        return RVerdict{true, std::nullopt};
    }
    Counterexample c{read_code(*model, cnf, map_names(m.low, "c1a")), read_code(*model, cnf, map_names(m.high, "c1a")),
                     read_code(*model, cnf, map_names(m.high, "c1b"))};
    Executor ex(m);
    if (ex.run(c.h, c.l) == ex.run(c.h2, c.l)) {
        throw Error("solver model does not replay as an interference witness");
    }
    return RVerdict{false, c};
}

RVerdict check_r_symbolic(const ProgramUnit& m1, const ProgramUnit& m2, WpMode mode) {
    const Cnf cnf = tseitin_cnf(Formula::negation(vc_r(m1, m2, mode)));
    auto model = dpll_sat(cnf);
    if (!model) {
        return RVerdict{true, std::nullopt};
    }
    Counterexample c{read_code(*model, cnf, map_names(m1.low, "c1a")),
                     read_code(*model, cnf, map_names(m1.high, "c1a")),
                     read_code(*model, cnf, map_names(m1.high, "c1b"))};
    Executor e1(m1);
    Executor e2(m2);
    if (e1.run(c.h, c.l) == e1.run(c.h2, c.l) || e2.run(c.h, c.l) != e2.run(c.h2, c.l)) {
        throw Error("solver model does not replay as an R counterexample");
    }
    return RVerdict{false, c};
}

} // namespace qif

// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>
#include <set>

#include "qif/compare.hpp"
#include "qif/corpus.hpp"
#include "qif/error.hpp"
#include "qif/sat.hpp"
#include "qif/symbolic.hpp"
#include "qif/syntax.hpp"
#include "support.hpp"

using namespace qif;

namespace {

bool valid(const Formula& f) { return !dpll_sat(tseitin_cnf(Formula::negation(f))).has_value(); }

bool satisfiable_by_enumeration(const Formula& f) {
    const auto vars = free_variables(f);
    for (bool b : testing::truth_table(f, vars)) {
        if (b) {
            return true;
        }
    }
    return false;
}

bool clause_sat(const std::vector<int>& cl, std::uint64_t a) {
    for (int lit : cl) {
        const bool v = ((a >> (std::abs(lit) - 1)) & 1U) != 0;
        if ((lit > 0) == v) {
            return true;
        }
    }
    return false;
}

bool model_satisfies(const Cnf& c, const Model& m) {
    for (const auto& cl : c.clauses) {
        bool ok = false;
        for (int lit : cl) {
            ok = ok || ((lit > 0) == m[static_cast<std::size_t>(std::abs(lit))]);
        }
        if (!ok) {
            return false;
        }
    }
    return true;
}

// if x_i then y := y & z_i else y := !y, n times.
Stmt if_chain(std::size_t n) {
    std::vector<Stmt> parts;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string k = std::to_string(i);
        parts.push_back(Stmt::branch(Formula::var("x" + k),
                                     Stmt::assign("y", Formula::conj(Formula::var("y"), Formula::var("z" + k))),
                                     Stmt::assign("y", Formula::negation(Formula::var("y")))));
    }
    return Stmt::seq_all(parts);
}

void check_replay(const ProgramUnit& a, const ProgramUnit& b, const RVerdict& v) {
    REQUIRE(v.counterexample.has_value());
    Executor ea(a), eb(b);
    const auto& ce = *v.counterexample;
    CHECK(ea.run(ce.h, ce.l) != ea.run(ce.h2, ce.l));
    CHECK(eb.run(ce.h, ce.l) == eb.run(ce.h2, ce.l));
}

} // namespace

TEST_CASE("weakest precondition examples") {
    const Formula x = Formula::var("x");
    const Formula y = Formula::var("y");
    CHECK(wp_naive(Stmt::assign("x", Formula::conj(x, y)), x) == Formula::conj(x, y));
    const Stmt s = Stmt::branch(y, Stmt::assign("x", Formula::truth()), Stmt::assign("x", Formula::falsity()));
    CHECK(testing::truth_table(wp_naive(s, x), {"x", "y"}) == testing::truth_table(y, {"x", "y"}));
    const PassiveVC pv = passify(s, x);
    for (bool yv : {false, true}) {
        std::map<std::string, bool> v{{"x", false}, {"y", yv}};
        for (const auto& [name, def] : pv.definitions) {
            v[name] = evaluate(def, v);
        }
        CHECK(evaluate(pv.vc(), v) == yv);
    }
    CHECK(wp_naive(Stmt::skip(), x) == x);
    CHECK(wp_optimized(Stmt::skip(), x) == x);
    CHECK(wp(Stmt::skip(), y, WpMode::Naive) == y);

    std::mt19937_64 rng(41);
    for (int i = 0; i < 100; ++i) {
        ProgramUnit p = testing::random_program(rng, testing::random_shape(rng, 3, 2, 2));
        ProgramUnit q = testing::random_program(rng, testing::random_shape(rng, 3, 2, 2));
        const auto vars = p.variables();
        const Formula post = testing::random_formula(rng, vars, 3);
        // Same variable names for both bodies.
        if (q.variables() != vars) {
            continue;
        }
        CHECK(testing::truth_table(wp_naive(Stmt::seq(p.body, q.body), post), vars) ==
              testing::truth_table(wp_naive(p.body, wp_naive(q.body, post)), vars));
    }
}

TEST_CASE("optimized and naive weakest preconditions agree") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 500; ++i) {
        ProgramUnit p = testing::random_program(rng, testing::random_shape(rng, 3, 2, 2));
        const auto vars = p.variables();
        REQUIRE(vars.size() <= 8);
        const Formula post = testing::random_formula(rng, vars, 3);
        const Formula naive = wp_naive(p.body, post);
        const PassiveVC pv = passify(p.body, post);
        const Formula opt = pv.vc();
        CHECK(opt == wp_optimized(p.body, post));
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << vars.size()); ++a) {
            std::map<std::string, bool> v;
            for (std::size_t k = 0; k < vars.size(); ++k) {
                v[vars[k]] = ((a >> k) & 1U) != 0;
            }
            const bool expect = evaluate(naive, v);
            for (const auto& [name, def] : pv.definitions) {
                CHECK(v.count(name) == 0);
                v[name] = evaluate(def, v);
            }
            CHECK(evaluate(opt, v) == expect);
        }
        CHECK(valid(naive) == valid(opt));
    }
}

TEST_CASE("size census on if chains") {
    std::uint64_t prev_naive = 0;
    for (std::size_t n = 4; n <= 12; ++n) {
        const Stmt s = if_chain(n);
        const Formula post = Formula::var("y");
        const std::uint64_t naive = tree_size(wp_naive(s, post));
        const std::uint64_t opt = tree_size(wp_optimized(s, post));
        const std::uint64_t input = stmt_size(s) + tree_size(post);
        MESSAGE("n=" << n << " naive=" << naive << " optimized=" << opt);
        CHECK(opt <= 4 * input * input);
        CHECK(opt <= 60 * n);
        if (prev_naive != 0) {
            CHECK(naive >= 2 * prev_naive);
        }
        prev_naive = naive;
    }
}

TEST_CASE("rename apart") {
    ProgramUnit p = zw_example();
    ProgramUnit a = rename_apart(p, "a");
    ProgramUnit b = rename_apart(p, "b");
    auto va = a.variables();
    auto vb = b.variables();
    std::set<std::string> sa(va.begin(), va.end());
    for (const auto& v : vb) {
        CHECK(sa.count(v) == 0);
    }
    CHECK(a.high[0] == tagged(p.high[0], "a"));
    CHECK_THROWS_AS((void)rename_apart(p, ""), Error);
    CHECK_THROWS_AS((void)rename_apart(p, "a b"), Error);

    std::mt19937_64 rng(43);
    for (int i = 0; i < 100; ++i) {
        ProgramUnit q = testing::random_program(rng, testing::random_shape(rng, 3, 3, 3));
        ProgramUnit r = rename_apart(q, "t");
        CHECK(denotation(q).outputs == denotation(r).outputs);
        CHECK(render_program(rename_apart(q, "t")) == render_program(r));
    }
}

TEST_CASE("self-composition examples") {
    CHECK(valid(vc_ni(parse_program("high h; low l; out o; o := l"))));
    ProgramUnit leak = parse_program("high h; low l; out o; o := h");
    CHECK_FALSE(valid(vc_ni(leak)));
    RVerdict v = check_ni_symbolic(leak);
    REQUIRE_FALSE(v.holds);
    CHECK(v.counterexample->h != v.counterexample->h2);

    ProgramUnit hl = parse_program("high h; low l; out o; o := h & l");
    RVerdict w = check_ni_symbolic(hl);
    REQUIRE_FALSE(w.holds);
    Executor e(hl);
    CHECK(e.run(w.counterexample->h, w.counterexample->l) != e.run(w.counterexample->h2, w.counterexample->l));

    // if phi & h then o := true else o := false
    for (const char* phi : {"a & !a", "a | b", "(a == b) & !(a | b) & a", "true"}) {
        ProgramUnit p = parse_program(std::string("high h; low a, b; out o; if (") + phi +
                                      ") & h then { o := true } else { o := false }");
        CHECK(valid(vc_ni(p)) == !satisfiable_by_enumeration(parse_formula(phi)));
    }

    Corpus c4 = gen_login_corpus(4);
    CHECK(valid(vc_r(c4.at("M2"), c4.at("M2"))));
    CHECK(valid(vc_r(c4.at("M4"), c4.at("M_spec"))));
    CHECK(valid(vc_r(c4.at("M4"), c4.at("M_spec"), WpMode::Naive)));
    CHECK_FALSE(valid(vc_r(c4.at("M1"), c4.at("M_spec"))));
    RVerdict r1 = check_r_symbolic(c4.at("M1"), c4.at("M_spec"));
    REQUIRE_FALSE(r1.holds);
    check_replay(c4.at("M1"), c4.at("M_spec"), r1);

    RVerdict r3 = check_r_symbolic(c4.at("M3"), c4.at("M_spec"));
    REQUIRE_FALSE(r3.holds);
    check_replay(c4.at("M3"), c4.at("M_spec"), r3);
    const std::uint64_t l = little_endian_code(r3.counterexample->l, 4);
    const std::uint64_t h = little_endian_code(r3.counterexample->h, 4);
    const std::uint64_t h2 = little_endian_code(r3.counterexample->h2, 4);
    // Exactly one of the two matches l on the low half, neither equals l.
    CHECK((((h & 3U) == (l & 3U)) != ((h2 & 3U) == (l & 3U))));
    CHECK(h != l);
    CHECK(h2 != l);

    CHECK_THROWS_AS((void)vc_r(c4.at("M1"), gen_login_corpus(2).at("M1")), DomainMismatch);
}

TEST_CASE("Tseitin conversion is equisatisfiable") {
    CHECK(dpll_sat(tseitin_cnf(Formula::truth())).has_value());
    CHECK(tseitin_cnf(Formula::truth()).clauses.empty());
    CHECK_FALSE(dpll_sat(tseitin_cnf(Formula::falsity())).has_value());
    const Formula x = Formula::var("x");
    CHECK_FALSE(dpll_sat(tseitin_cnf(Formula::conj(x, Formula::negation(x)))).has_value());

    std::mt19937_64 rng(44);
    for (int i = 0; i < 500; ++i) {
        const auto vars = testing::names("v", 1 + testing::below(rng, 8));
        const Formula f = testing::random_formula(rng, vars, 5);
        const Cnf c = tseitin_cnf(f);
        for (const auto& cl : c.clauses) {
            CHECK_FALSE(cl.empty());
            for (int lit : cl) {
                CHECK(lit != 0);
                CHECK(static_cast<std::size_t>(std::abs(lit)) <= c.num_vars);
            }
        }
        std::size_t ands = 0;
        std::function<void(const Formula&, std::set<const Formula::Node*>&)> count =
            [&](const Formula& g, std::set<const Formula::Node*>& seen) {
                if (!seen.insert(g.id()).second) {
                    return;
                }
                if (g.kind() == FormulaKind::And) {
                    ++ands;
                    count(g.left(), seen);
                    count(g.right(), seen);
                } else if (g.kind() == FormulaKind::Not) {
                    count(g.child(), seen);
                }
            };
        std::set<const Formula::Node*> seen;
        count(f, seen);
        CHECK(c.clauses.size() <= 3 * ands + 2);
        auto m = dpll_sat(c);
        CHECK(m.has_value() == satisfiable_by_enumeration(f));
        if (m) {
            CHECK(model_satisfies(c, *m));
            std::map<std::string, bool> v;
            for (const auto& name : free_variables(f)) {
                v[name] = (*m)[static_cast<std::size_t>(c.index_of(name))];
            }
            CHECK(evaluate(f, v));
        }
    }
}

TEST_CASE("DPLL") {
    Cnf c{2, {{1}, {-1, 2}}, {}};
    SatStats st;
    auto m = dpll_sat(c, &st);
    REQUIRE(m.has_value());
    CHECK((*m)[1]);
    CHECK((*m)[2]);
    CHECK(st.decisions == 0);
    CHECK_FALSE(dpll_sat(Cnf{1, {{1}, {-1}}, {}}).has_value());
    CHECK(dpll_sat(Cnf{3, {}, {}}).has_value());
    CHECK(dpll_sat(Cnf{2, {{1, -1}, {2, 2}}, {}}).has_value());

    std::mt19937_64 rng(45);
    int sat = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 1 + testing::below(rng, 12);
        const std::size_t k = testing::below(rng, 5 * n + 1);
        Cnf f{n, {}, {}};
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<int> cl;
            const std::size_t len = 1 + testing::below(rng, 4);
            for (std::size_t t = 0; t < len; ++t) {
                const int v = 1 + static_cast<int>(testing::below(rng, n));
                cl.push_back(testing::below(rng, 2) == 0 ? v : -v);
            }
            f.clauses.push_back(cl);
        }
        bool expect = false;
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << n) && !expect; ++a) {
            bool all = true;
            for (const auto& cl : f.clauses) {
                if (!clause_sat(cl, a)) {
                    all = false;
                    break;
                }
            }
            expect = all;
        }
        auto r = dpll_sat(f);
        CHECK(r.has_value() == expect);
        if (r) {
            ++sat;
            CHECK(r->size() == n + 1);
            CHECK(model_satisfies(f, *r));
        }
        CHECK(dpll_sat(f) == r);
    }
    CHECK(sat > 100);
    CHECK(sat < 900);
}

TEST_CASE("DIMACS") {
    Cnf c{2, {{1, 2}, {-1}}, {{"x", 1}, {"y", 2}}};
    CHECK(export_dimacs(c) == "c var 1 x\nc var 2 y\np cnf 2 2\n1 2 0\n-1 0\n");
    CHECK(export_dimacs(Cnf{3, {}, {}}) == "p cnf 3 0\n");
    Cnf back = parse_dimacs(export_dimacs(c));
    CHECK(back.num_vars == 2);
    CHECK(back.clauses == c.clauses);
    CHECK(back.var_map == c.var_map);
    CHECK_THROWS_AS((void)parse_dimacs("p cnf 1 1\n2 0\n"), Error);
    CHECK_THROWS_AS((void)parse_dimacs("1 0\n"), Error);

    std::mt19937_64 rng(46);
    for (int i = 0; i < 100; ++i) {
        const Formula f = testing::random_formula(rng, testing::names("v", 6), 5);
        const Cnf t = tseitin_cnf(f);
        const std::string text = export_dimacs(t);
        CHECK(text == export_dimacs(tseitin_cnf(f)));
        Cnf r = parse_dimacs(text);
        CHECK(r.num_vars == t.num_vars);
        CHECK(r.clauses == t.clauses);
        CHECK(r.var_map == t.var_map);
        CHECK(export_dimacs(r) == text);
    }
    Corpus c4 = gen_login_corpus(4);
    CHECK(export_dimacs(tseitin_cnf(Formula::negation(vc_r(c4.at("M2"), c4.at("M_spec"))))) ==
          export_dimacs(tseitin_cnf(Formula::negation(vc_r(c4.at("M2"), c4.at("M_spec"))))));
}

TEST_CASE("symbolic non-interference matches enumeration") {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 300; ++i) {
        ProgramUnit p = testing::random_program(rng, testing::random_shape(rng, 5, 3, 3));
        const bool ni = check_ni(p).holds;
        const WpMode mode = i % 5 == 0 ? WpMode::Naive : WpMode::Optimized;
        RVerdict v = check_ni_symbolic(p, mode);
        CHECK(v.holds == ni);
        if (!v.holds) {
            REQUIRE(v.counterexample.has_value());
            Executor e(p);
            CHECK(e.run(v.counterexample->h, v.counterexample->l) !=
                  e.run(v.counterexample->h2, v.counterexample->l));
        }
    }
}

TEST_CASE("symbolic R matches enumeration") {
    std::mt19937_64 rng(48);
    for (int i = 0; i < 300; ++i) {
        testing::Shape s = testing::random_shape(rng, 5, 3, 2);
        ProgramUnit a = testing::random_program(rng, s);
        ProgramUnit b = testing::random_program(rng, s);
        if (i % 3 == 0) {
            b = a;
            b.body = Stmt::seq(a.body, Stmt::assign(a.out[0], testing::random_formula(rng, a.out, 1)));
            std::swap(a, b);
        }
        const bool expect = check_R(a, b).holds;
        RVerdict v = check_r_symbolic(a, b, i % 7 == 0 ? WpMode::Naive : WpMode::Optimized);
        CHECK(v.holds == expect);
        if (!v.holds) {
            check_replay(a, b, v);
        }
    }
}

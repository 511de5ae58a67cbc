// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "qif/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qif/compare.hpp"
#include "qif/corpus.hpp"
#include "qif/counting.hpp"
#include "qif/dist.hpp"
#include "qif/error.hpp"
#include "qif/qif.hpp"
#include "qif/symbolic.hpp"
#include "qif/syntax.hpp"

namespace qif {

namespace {

using ojson = nlohmann::ordered_json;

class UsageError : public Error {
  public:
    using Error::Error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream outf(path, std::ios::binary);
    if (!outf) {
        throw UsageError("cannot write '" + path.string() + "'");
    }
    outf << text;
}

ProgramUnit load_program(const std::string& path) { return parse_program(read_file(path)); }

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',' || c == ' ') {
            if (!cur.empty()) {
                out.push_back(cur);
            }
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

class Runner {
  public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(const std::vector<std::string>& args) {
        CLI::App app{"Quantitative information flow analysis for loop-free boolean programs", "qif"};
        app.require_subcommand(1);
        app.fallthrough();
        app.add_option("--capacity", cfg_.capacity_bits, "Input-bit budget for enumeration")
            ->check(CLI::Range(1, static_cast<int>(kMaxCapacityBits)));
        app.add_option("--epsilon", cfg_.epsilon, "Tolerance for floating comparisons")
            ->check(CLI::PositiveNumber);
        app.add_option("--format", cfg_.format, "Output format")->check(CLI::IsMember({"text", "json"}));
        app.add_option("--engine", cfg_.engine, "Decision engine for check-r and check-ni")
            ->check(CLI::IsMember({"brute", "sat"}));
        app.add_option("--seed", cfg_.seed, "Seed for random distributions");

        std::string program;
        std::string left;
        std::string right;
        std::string dist;
        std::string measure_arg = "all";
        std::string formula;
        std::string vars;
        std::string oracle = "se";
        std::uint64_t count = 0;
        std::string corpus_kind;
        std::size_t bits = 8;
        std::string out_dir = ".";
        std::string wp_mode = "optimized";

        auto* parse = app.add_subcommand("parse", "Parse a program and print it back");
        parse->add_option("program", program, "Program file")->required();

        auto* measure = app.add_subcommand("measure", "Compute leakage measures");
        measure->add_option("--program", program, "Program file")->required();
        measure->add_option("--measure", measure_arg, "se, me, ge, cc or all");
        measure->add_option("--dist", dist, "Distribution file, or 'random' (seeded); uniform by default");

        auto* compare = app.add_subcommand("compare", "Decide measure(left) <= measure(right)");
        compare->add_option("--left", left)->required();
        compare->add_option("--right", right)->required();
        compare->add_option("--measure", measure_arg, "se, me, ge or cc")->required();
        compare->add_option("--dist", dist, "Distribution file, or 'random' (seeded); uniform by default");

        auto* check_r = app.add_subcommand("check-r", "Decide the refinement relation R(left, right)");
        check_r->add_option("--left", left)->required();
        check_r->add_option("--right", right)->required();
        check_r->add_option("--wp", wp_mode)->check(CLI::IsMember({"naive", "optimized"}));

        auto* check_ni = app.add_subcommand("check-ni", "Decide non-interference");
        check_ni->add_option("--program", program)->required();
        check_ni->add_option("--wp", wp_mode)->check(CLI::IsMember({"naive", "optimized"}));

        auto* witness = app.add_subcommand("witness", "Distribution under which left leaks more than right");
        witness->add_option("--left", left)->required();
        witness->add_option("--right", right)->required();

        auto* count_cmd = app.add_subcommand("count", "Count models through a comparison oracle");
        count_cmd->add_option("--formula", formula, "Formula file")->required();
        count_cmd->add_option("--vars", vars, "Counting domain, comma separated (default: free variables)");
        count_cmd->add_option("--oracle", oracle, "se, me, ge, cc or enum");

        auto* gen = app.add_subcommand("gen-formula", "Formula with a prescribed number of models");
        gen->add_option("--count", count)->required();
        gen->add_option("--vars", vars, "Variables, comma separated")->required();

        auto* corpus = app.add_subcommand("corpus", "Write the example programs as files");
        corpus->add_option("kind", corpus_kind)->required()->check(CLI::IsMember({"intro", "login", "zw"}));
        corpus->add_option("--bits", bits, "Password width for login");
        corpus->add_option("--out", out_dir, "Output directory");

        auto* dimacs = app.add_subcommand("export-dimacs", "CNF of a formula, or of a negated NI or R condition");
        dimacs->add_option("--formula", formula);
        dimacs->add_option("--program", program);
        dimacs->add_option("--left", left);
        dimacs->add_option("--right", right);
        dimacs->add_option("--wp", wp_mode)->check(CLI::IsMember({"naive", "optimized"}));

        try {
            std::vector<std::string> rev(args.rbegin(), args.rend());
            app.parse(rev);
        } catch (const CLI::CallForHelp& e) {
            out_ << app.help();
            return kExitOk;
        } catch (const CLI::CallForAllHelp& e) {
            out_ << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            err_ << "error: " << e.what() << '\n';
            return kExitUsage;
        }

        try {
            mode_ = wp_mode == "naive" ? WpMode::Naive : WpMode::Optimized;
            if (*parse) return cmd_parse(program);
            if (*measure) return cmd_measure(program, measure_arg, dist);
            if (*compare) return cmd_compare(left, right, measure_arg, dist);
            if (*check_r) return cmd_check_r(left, right);
            if (*check_ni) return cmd_check_ni(program);
            if (*witness) return cmd_witness(left, right);
            if (*count_cmd) return cmd_count(formula, vars, oracle);
            if (*gen) return cmd_gen(count, vars);
            if (*corpus) return cmd_corpus(corpus_kind, bits, out_dir);
            if (*dimacs) return cmd_dimacs(formula, program, left, right);
        } catch (const CapacityError& e) {
            err_ << "error: " << e.what() << '\n';
            return kExitCapacity;
        } catch (const Error& e) {
            err_ << "error: " << e.what() << '\n';
            return kExitUsage;
        }
        return kExitUsage;
    }

  private:
    bool json() const { return cfg_.format == "json"; }

    JointDist load_dist(const std::string& source, const ProgramUnit& p) const {
        if (source.empty()) {
            return uniform(domain_of(p), cfg_.capacity_bits);
        }
        if (source == "random") {
            return sample_random(domain_of(p), cfg_.seed);
        }
        JointDist mu = parse_dist(read_file(source));
        if (!(mu.domain() == domain_of(p))) {
            throw DomainMismatch("distribution variables do not match the program's inputs");
        }
        return mu;
    }

    void print_report(const MeasureReport& r) {
        if (json()) {
            out_ << r.to_json() << '\n';
        } else {
            out_ << measure_name(r.measure) << ' ' << fmt_double(r.value);
            if (r.exact) {
                out_ << "  exact " << *r.exact;
            }
            out_ << '\n';
        }
    }

    void print_verdict(const RVerdict& v, const InputSpace& space, const std::string& what) {
        if (json()) {
            out_ << v.to_json(space) << '\n';
            return;
        }
        out_ << what << ": " << (v.holds ? "holds" : "violated") << '\n';
        if (v.counterexample) {
            const auto& c = *v.counterexample;
            out_ << "  l  = " << code_to_bits(c.l, space.low_bits) << '\n'
                 << "  h  = " << code_to_bits(c.h, space.high_bits) << '\n'
                 << "  h2 = " << code_to_bits(c.h2, space.high_bits) << '\n';
        }
    }

    int cmd_parse(const std::string& path) {
        ProgramUnit p = load_program(path);
        if (json()) {
            ojson j;
            j["high"] = p.high;
            j["low"] = p.low;
            j["out"] = p.out;
            j["local"] = p.local;
            j["program"] = render_program(p);
            out_ << j.dump() << '\n';
        } else {
            out_ << render_program(p);
        }
        return kExitOk;
    }

    int cmd_measure(const std::string& path, const std::string& which, const std::string& dist) {
        ProgramUnit p = load_program(path);
        std::vector<Measure> ms;
        if (which == "all") {
            ms = {Measure::SE, Measure::ME, Measure::GE, Measure::CC};
        } else {
            ms = {parse_measure(which)};
        }
        const JointDist mu = load_dist(dist, p);
        const Denotation d = denotation(p, cfg_.capacity_bits);
        for (Measure m : ms) {
            switch (m) {
            case Measure::SE: print_report(se(d, mu)); break;
            case Measure::ME: print_report(me(d, mu)); break;
            case Measure::GE: print_report(ge(d, mu)); break;
            case Measure::CC: print_report(cc(d)); break;
            }
        }
        return kExitOk;
    }

    int cmd_compare(const std::string& lpath, const std::string& rpath, const std::string& which,
                    const std::string& dist) {
        ProgramUnit a = load_program(lpath);
        ProgramUnit b = load_program(rpath);
        require_same_domain(a, b);
        const Measure m = parse_measure(which);
        CmpResult r = CmpResult::Inconclusive;
        if (dist.empty()) {
            r = cmp_uniform(a, b, m, cfg_.capacity_bits) ? CmpResult::Holds : CmpResult::Fails;
        } else {
            r = cmp_dist(a, b, m, load_dist(dist, a), cfg_.epsilon, cfg_.capacity_bits);
        }
        if (json()) {
            ojson j;
            j["measure"] = measure_name(m);
            j["result"] = to_string(r);
            out_ << j.dump() << '\n';
        } else {
            out_ << measure_name(m) << "(left) <= " << measure_name(m) << "(right): " << to_string(r) << '\n';
        }
        return r == CmpResult::Holds ? kExitOk : kExitViolated;
    }

    int cmd_check_r(const std::string& lpath, const std::string& rpath) {
        ProgramUnit a = load_program(lpath);
        ProgramUnit b = load_program(rpath);
        require_same_domain(a, b);
        RVerdict v = cfg_.engine == "sat" ? check_r_symbolic(a, b, mode_) : check_R(a, b, cfg_.capacity_bits);
        print_verdict(v, input_space(a), "R(left, right)");
        return v.holds ? kExitOk : kExitViolated;
    }

    int cmd_check_ni(const std::string& path) {
        ProgramUnit p = load_program(path);
        RVerdict v = cfg_.engine == "sat" ? check_ni_symbolic(p, mode_) : check_ni(p, cfg_.capacity_bits);
        print_verdict(v, input_space(p), "non-interference");
        return v.holds ? kExitOk : kExitViolated;
    }

    int cmd_witness(const std::string& lpath, const std::string& rpath) {
        ProgramUnit a = load_program(lpath);
        ProgramUnit b = load_program(rpath);
        try {
            JointDist mu = witness_distribution(a, b, cfg_.capacity_bits);
            if (json()) {
                ojson j;
                j["distribution"] = mu.serialize();
                ojson measures = ojson::array();
                for (const auto* p : {&a, &b}) {
                    const Denotation d = denotation(*p, cfg_.capacity_bits);
                    measures.push_back({{"SE", se(d, mu).value},
                                        {"ME", me(d, mu).value},
                                        {"GE", ge(d, mu).exact.value_or("")}});
                }
                j["left"] = measures[0];
                j["right"] = measures[1];
                out_ << j.dump() << '\n';
            } else {
                out_ << mu.serialize();
            }
            return kExitOk;
        } catch (const NoCounterexample& e) {
            if (json()) {
                out_ << ojson{{"distribution", nullptr}}.dump() << '\n';
            } else {
                out_ << "no witness: " << e.what() << '\n';
            }
            return kExitViolated;
        }
    }

    int cmd_count(const std::string& path, const std::string& vars, const std::string& oracle) {
        Formula f = parse_formula(read_file(path));
        std::vector<std::string> dom = vars.empty() ? free_variables(f) : split_names(vars);
        CountRun run = count_via_oracle(f, dom, parse_oracle(oracle));
        if (json()) {
            out_ << run.to_json() << '\n';
        } else {
            out_ << "count " << run.count << " (oracle " << oracle_name(run.kind) << ", " << run.oracle_calls
                 << " calls)\n";
        }
        return kExitOk;
    }

    int cmd_gen(std::uint64_t k, const std::string& vars) {
        Formula f = gen_count_formula(k, split_names(vars));
        if (json()) {
            out_ << ojson{{"count", k}, {"formula", render_formula(f)}}.dump() << '\n';
        } else {
            out_ << render_formula(f) << '\n';
        }
        return kExitOk;
    }

    int cmd_corpus(const std::string& kind, std::size_t bits, const std::string& dir) {
        std::vector<std::pair<std::string, ProgramUnit>> files;
        if (kind == "intro") {
            Corpus c = gen_intro_examples();
            files = {{"intro_m1.qb", c.at("M1_intro")}, {"intro_m2.qb", c.at("M2_intro")}};
        } else if (kind == "login") {
            Corpus c = gen_login_corpus(bits);
            files = {{"login_spec.qb", c.at("M_spec")}, {"login_m1.qb", c.at("M1")}, {"login_m2.qb", c.at("M2")},
                     {"login_m3.qb", c.at("M3")},       {"login_m4.qb", c.at("M4")}};
        } else {
            files = {{"zw.qb", zw_example()}};
        }
        std::filesystem::create_directories(dir);
        ojson written = ojson::array();
        for (const auto& [name, p] : files) {
            const auto path = std::filesystem::path(dir) / name;
            write_file(path, render_program(p));
            written.push_back(path.string());
            if (!json()) {
                out_ << path.string() << '\n';
            }
        }
        if (json()) {
            out_ << written.dump() << '\n';
        }
        return kExitOk;
    }

    int cmd_dimacs(const std::string& formula, const std::string& program, const std::string& left,
                   const std::string& right) {
        const int given = static_cast<int>(!formula.empty()) + static_cast<int>(!program.empty()) +
                          static_cast<int>(!left.empty() || !right.empty());
        if (given != 1 || (left.empty() != right.empty())) {
            throw UsageError("export-dimacs needs exactly one of --formula, --program, or --left with --right");
        }
        Formula f = Formula::truth();
        if (!formula.empty()) {
            f = parse_formula(read_file(formula));
        } else if (!program.empty()) {
            f = Formula::negation(vc_ni(load_program(program), mode_));
        } else {
            f = Formula::negation(vc_r(load_program(left), load_program(right), mode_));
        }
        out_ << export_dimacs(tseitin_cnf(f));
        return kExitOk;
    }

    std::ostream& out_;
    std::ostream& err_;
    CliConfig cfg_;
    WpMode mode_ = WpMode::Optimized;
};

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    return Runner(out, err).run(args);
}

} // namespace qif

// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "qif/sat.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

#include "qif/error.hpp"

namespace qif {

int Cnf::index_of(const std::string& name) const {
    for (const auto& [n, i] : var_map) {
        if (n == name) {
            return i;
        }
    }
    return 0;
}

namespace {

// Constants travel as pseudo-literals so that negation still flips them.
constexpr int kConstTrue = INT_MAX;
constexpr int kConstFalse = -INT_MAX;

class Tseitin {
  public:
    explicit Tseitin(Cnf& out) : out_(out) {}

    void declare(const std::string& name) {
        const int v = fresh();
        names_.emplace(name, v);
        out_.var_map.emplace_back(name, v);
    }

    int lit(const Formula& f) {
        if (auto it = memo_.find(f.id()); it != memo_.end()) {
            return it->second;
        }
        int r = 0;
        switch (f.kind()) {
        case FormulaKind::True: r = kConstTrue; break;
        case FormulaKind::Var: r = names_.at(f.name()); break;
        case FormulaKind::Not: r = -lit(f.child()); break;
        case FormulaKind::And: {
            const int a = lit(f.left());
            const int b = lit(f.right());
            if (a == kConstFalse || b == kConstFalse || a == -b) {
                r = kConstFalse;
            } else if (a == kConstTrue) {
                r = b;
            } else if (b == kConstTrue || a == b) {
                r = a;
            } else {
                r = fresh();
                out_.clauses.push_back({-r, a});
                out_.clauses.push_back({-r, b});
                out_.clauses.push_back({r, -a, -b});
            }
            break;
        }
        }
        memo_.emplace(f.id(), r);
        return r;
    }

    int fresh() { return static_cast<int>(++out_.num_vars); }

  private:
    Cnf& out_;
    std::unordered_map<std::string, int> names_;
    std::unordered_map<const Formula::Node*, int> memo_;
};

} // namespace

Cnf tseitin_cnf(const Formula& f) {
    Cnf c;
    Tseitin t(c);
    for (const auto& name : free_variables(f)) {
        t.declare(name);
    }
    const int root = t.lit(f);
    if (root == kConstTrue) {
        return c;
    }
    if (root == kConstFalse) {
        const int x = t.fresh();
        c.clauses.push_back({x});
        c.clauses.push_back({-x});
        return c;
    }
    c.clauses.push_back({root});
    return c;
}

namespace {

class Dpll {
  public:
    Dpll(const Cnf& c, SatStats* stats) : n_(c.num_vars), stats_(stats) {
        value_.assign(n_ + 1, 0);
        watches_.resize(2 * (n_ + 1));
        for (const auto& raw : c.clauses) {
            std::vector<int> cl = raw;
            for (int l : cl) {
                if (l == 0 || static_cast<std::size_t>(std::abs(l)) > n_) {
                    throw Error("clause literal " + std::to_string(l) + " out of range");
                }
            }
            std::sort(cl.begin(), cl.end());
            cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
            bool tautology = false;
            for (std::size_t i = 0; i + 1 < cl.size(); ++i) {
                if (std::binary_search(cl.begin(), cl.end(), -cl[i])) {
                    tautology = true;
                    break;
                }
            }
            if (tautology) {
                continue;
            }
            if (cl.empty()) {
                empty_clause_ = true;
            } else if (cl.size() == 1) {
                units_.push_back(cl[0]);
            } else {
                clauses_.push_back(std::move(cl));
            }
        }
        for (std::size_t i = 0; i < clauses_.size(); ++i) {
            watches_[code(clauses_[i][0])].push_back(i);
            watches_[code(clauses_[i][1])].push_back(i);
        }
    }

    std::optional<Model> solve() {
        if (empty_clause_) {
            return std::nullopt;
        }
        for (int u : units_) {
            if (val(u) < 0) {
                return std::nullopt;
            }
            if (val(u) == 0) {
                enqueue(u);
            }
        }
        for (;;) {
            if (!propagate()) {
                if (stats_ != nullptr) {
                    ++stats_->conflicts;
                }
                while (!decisions_.empty() && decisions_.back().flipped) {
                    undo(decisions_.back().trail_pos);
                    decisions_.pop_back();
                }
                if (decisions_.empty()) {
                    return std::nullopt;
                }
                Decision& d = decisions_.back();
                const int var = std::abs(trail_[d.trail_pos]);
                undo(d.trail_pos);
                d.flipped = true;
                enqueue(var);
                continue;
            }
            while (cursor_ <= n_ && value_[cursor_] != 0) {
                ++cursor_;
            }
            if (cursor_ > n_) {
                Model m(n_ + 1, false);
                for (std::size_t v = 1; v <= n_; ++v) {
                    m[v] = value_[v] > 0;
                }
                return m;
            }
            if (stats_ != nullptr) {
                ++stats_->decisions;
            }
            decisions_.push_back({trail_.size(), false});
            enqueue(-static_cast<int>(cursor_));
        }
    }

  private:
    struct Decision {
        std::size_t trail_pos;
        bool flipped;
    };

    static std::size_t code(int lit) { return 2 * static_cast<std::size_t>(std::abs(lit)) + (lit < 0 ? 1 : 0); }
    [[nodiscard]] int val(int lit) const {
        const int v = value_[static_cast<std::size_t>(std::abs(lit))];
        return lit > 0 ? v : -v;
    }

    void enqueue(int lit) {
        value_[static_cast<std::size_t>(std::abs(lit))] = static_cast<std::int8_t>(lit > 0 ? 1 : -1);
        trail_.push_back(lit);
    }

    void undo(std::size_t pos) {
        for (std::size_t i = trail_.size(); i-- > pos;) {
            const auto v = static_cast<std::size_t>(std::abs(trail_[i]));
            value_[v] = 0;
            cursor_ = std::min(cursor_, v);
        }
        trail_.resize(pos);
        qhead_ = std::min(qhead_, pos);
    }

    bool propagate() {
        while (qhead_ < trail_.size()) {
            const int false_lit = -trail_[qhead_++];
            if (stats_ != nullptr) {
                ++stats_->propagations;
            }
            auto& ws = watches_[code(false_lit)];
            std::size_t keep = 0;
            bool conflict = false;
            for (std::size_t i = 0; i < ws.size(); ++i) {
                const std::size_t ci = ws[i];
                if (conflict) {
                    ws[keep++] = ci;
                    continue;
                }
                auto& cl = clauses_[ci];
                if (cl[0] == false_lit) {
                    std::swap(cl[0], cl[1]);
                }
                if (val(cl[0]) > 0) {
                    ws[keep++] = ci;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < cl.size(); ++k) {
                    if (val(cl[k]) >= 0) {
                        std::swap(cl[1], cl[k]);
                        watches_[code(cl[1])].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved) {
                    continue;
                }
                ws[keep++] = ci;
                if (val(cl[0]) < 0) {
                    conflict = true;
                } else {
                    enqueue(cl[0]);
                }
            }
            ws.resize(keep);
            if (conflict) {
                return false;
            }
        }
        return true;
    }

    std::size_t n_;
    SatStats* stats_;
    bool empty_clause_ = false;
    std::vector<int> units_;
    std::vector<std::vector<int>> clauses_;
    std::vector<std::vector<std::size_t>> watches_;
    std::vector<std::int8_t> value_;
    std::vector<int> trail_;
    std::vector<Decision> decisions_;
    std::size_t qhead_ = 0;
    std::size_t cursor_ = 1;
};

} // namespace

std::optional<Model> dpll_sat(const Cnf& c, SatStats* stats) { return Dpll(c, stats).solve(); }

std::string export_dimacs(const Cnf& c) {
    std::ostringstream os;
    for (const auto& [name, idx] : c.var_map) {
        os << "c var " << idx << ' ' << name << '\n';
    }
    os << "p cnf " << c.num_vars << ' ' << c.clauses.size() << '\n';
    for (const auto& cl : c.clauses) {
        for (int l : cl) {
            os << l << ' ';
        }
        os << "0\n";
    }
    return os.str();
}

Cnf parse_dimacs(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    Cnf c;
    bool header = false;
    std::size_t declared_clauses = 0;
    std::vector<int> current;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) {
            continue;
        }
        if (first == "c") {
            std::string tag, name;
            int idx = 0;
            if (ls >> tag >> idx >> name && tag == "var") {
                c.var_map.emplace_back(name, idx);
            }
            continue;
        }
        if (first == "p") {
            std::string fmt;
            long long vars = -1;
            long long clauses = -1;
            if (header || !(ls >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0 || clauses < 0) {
                throw Error("malformed DIMACS header: " + line);
            }
            c.num_vars = static_cast<std::size_t>(vars);
            declared_clauses = static_cast<std::size_t>(clauses);
            header = true;
            continue;
        }
        if (!header) {
            throw Error("DIMACS clause before header");
        }
        std::istringstream toks(line);
        long long lit = 0;
        while (toks >> lit) {
            if (lit == 0) {
                c.clauses.push_back(current);
                current.clear();
                continue;
            }
            if (static_cast<std::size_t>(std::llabs(lit)) > c.num_vars) {
                throw Error("DIMACS literal " + std::to_string(lit) + " exceeds variable count");
            }
            current.push_back(static_cast<int>(lit));
        }
        if (!toks.eof()) {
            throw Error("malformed DIMACS clause line: " + line);
        }
    }
    if (!header) {
        throw Error("DIMACS input has no header");
    }
    if (!current.empty()) {
        throw Error("unterminated DIMACS clause");
    }
    if (c.clauses.size() != declared_clauses) {
        throw Error("DIMACS header declares " + std::to_string(declared_clauses) + " clauses, found " +
                    std::to_string(c.clauses.size()));
    }
    return c;
}

} // namespace qif

// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "qif/exec.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "qif/error.hpp"

namespace qif {

std::string code_to_bits(Code code, std::size_t width) {
    if (width == 0) {
        return "-";
    }
    std::string s(width, '0');
    for (std::size_t j = 0; j < width; ++j) {
        if ((code >> (width - 1 - j)) & 1U) {
            s[j] = '1';
        }
    }
    return s;
}

Code bits_to_code(std::string_view bits, std::size_t width) {
    if (width == 0 && (bits == "-" || bits.empty())) {
        return 0;
    }
    if (bits.size() != width) {
        throw Error("expected " + std::to_string(width) + " bits, got '" + std::string(bits) + "'");
    }
    Code code = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw Error("invalid bit string '" + std::string(bits) + "'");
        }
        code = (code << 1) | static_cast<Code>(c == '1');
    }
    return code;
}

Code valuation_to_code(const Valuation& v, const std::vector<std::string>& vars) {
    Code code = 0;
    for (const auto& name : vars) {
        auto it = v.find(name);
        if (it == v.end()) {
            throw Error("no value for variable '" + name + "'");
        }
        code = (code << 1) | static_cast<Code>(it->second);
    }
    return code;
}

Valuation code_to_valuation(Code code, const std::vector<std::string>& vars) {
    Valuation v;
    const std::size_t w = vars.size();
    for (std::size_t j = 0; j < w; ++j) {
        v[vars[j]] = ((code >> (w - 1 - j)) & 1U) != 0;
    }
    return v;
}

Code little_endian_code(std::uint64_t value, std::size_t width) {
    Code code = 0;
    for (std::size_t i = 0; i < width; ++i) {
        code = (code << 1) | ((value >> i) & 1U);
    }
    return code;
}

InputSpace input_space(const ProgramUnit& p) { return InputSpace{p.high.size(), p.low.size()}; }

void check_capacity(const ProgramUnit& p, std::size_t capacity_bits) {
    std::size_t bits = p.high.size() + p.low.size();
    std::size_t limit = std::min(capacity_bits, kMaxCapacityBits);
    if (bits > limit) {
        throw CapacityError("program has " + std::to_string(bits) + " input bits; capacity is " +
                            std::to_string(limit));
    }
    if (p.out.size() > kMaxOutputBits) {
        throw CapacityError("program has " + std::to_string(p.out.size()) + " output bits; at most " +
                            std::to_string(kMaxOutputBits) + " are supported");
    }
}

namespace {
enum : std::uint8_t { kOpTrue, kOpVar, kOpAnd, kOpNot };
} // namespace

Executor::Executor(const ProgramUnit& p) : space_(input_space(p)) {
    if (p.out.size() > kMaxOutputBits) {
        throw CapacityError("too many output bits");
    }
    for (const auto& name : p.variables()) {
        slot_of_.emplace(name, static_cast<std::uint32_t>(num_slots_++));
    }
    for (const auto& n : p.high) {
        high_slots_.push_back(slot_of_.at(n));
    }
    for (const auto& n : p.low) {
        low_slots_.push_back(slot_of_.at(n));
    }
    for (const auto& n : p.out) {
        out_slots_.push_back(slot_of_.at(n));
    }
    std::map<const Formula::Node*, std::uint32_t> memo;
    root_ = compile_stmt(p.body, memo);
}

std::uint32_t Executor::compile_formula(const Formula& f, std::map<const Formula::Node*, std::uint32_t>& memo) {
    if (auto it = memo.find(f.id()); it != memo.end()) {
        return it->second;
    }
    Op op{};
    switch (f.kind()) {
    case FormulaKind::True: op = {kOpTrue, 0, 0}; break;
    case FormulaKind::Var: {
        auto it = slot_of_.find(f.name());
        if (it == slot_of_.end()) {
            throw DeclarationError("undeclared variable '" + f.name() + "'");
        }
        op = {kOpVar, it->second, 0};
        break;
    }
    case FormulaKind::Not: op = {kOpNot, compile_formula(f.child(), memo), 0}; break;
    case FormulaKind::And: {
        auto a = compile_formula(f.left(), memo);
        auto b = compile_formula(f.right(), memo);
        op = {kOpAnd, a, b};
        break;
    }
    }
    auto idx = static_cast<std::uint32_t>(ops_.size());
    ops_.push_back(op);
    memo.emplace(f.id(), idx);
    return idx;
}

std::uint32_t Executor::compile_stmt(const Stmt& s, std::map<const Formula::Node*, std::uint32_t>& memo) {
    CStmt c{s.kind()};
    // Each formula gets its own contiguous op range [begin, root]; ops are not
    // shared across statements because state changes between them.
    auto compile_range = [&](const Formula& f) {
        memo.clear();
        c.begin = static_cast<std::uint32_t>(ops_.size());
        c.formula = compile_formula(f, memo);
    };
    switch (s.kind()) {
    case StmtKind::Skip: break;
    case StmtKind::Assign: {
        auto it = slot_of_.find(s.target());
        if (it == slot_of_.end()) {
            throw DeclarationError("undeclared variable '" + s.target() + "'");
        }
        c.slot = it->second;
        compile_range(s.value());
        break;
    }
    case StmtKind::If:
        compile_range(s.cond());
        c.first = compile_stmt(s.then_branch(), memo);
        c.second = compile_stmt(s.else_branch(), memo);
        break;
    case StmtKind::Seq:
        c.first = compile_stmt(s.first(), memo);
        c.second = compile_stmt(s.second(), memo);
        break;
    }
    stmts_.push_back(c);
    return static_cast<std::uint32_t>(stmts_.size() - 1);
}

bool Executor::eval(std::uint32_t begin, std::uint32_t root, const std::vector<std::uint8_t>& state,
                    std::vector<std::uint8_t>& scratch) const {
    for (std::uint32_t i = begin; i <= root; ++i) {
        const Op& op = ops_[i];
        switch (op.kind) {
        case kOpTrue: scratch[i] = 1; break;
        case kOpVar: scratch[i] = state[op.a]; break;
        case kOpAnd: scratch[i] = static_cast<std::uint8_t>(scratch[op.a] & scratch[op.b]); break;
        case kOpNot: scratch[i] = static_cast<std::uint8_t>(scratch[op.a] ^ 1U); break;
        default: break;
        }
    }
    return scratch[root] != 0;
}

void Executor::exec(std::uint32_t idx, std::vector<std::uint8_t>& state, std::vector<std::uint8_t>& scratch) const {
    const CStmt& c = stmts_[idx];
    switch (c.kind) {
    case StmtKind::Skip: break;
    case StmtKind::Assign: state[c.slot] = static_cast<std::uint8_t>(eval(c.begin, c.formula, state, scratch)); break;
    case StmtKind::If:
        exec(eval(c.begin, c.formula, state, scratch) ? c.first : c.second, state, scratch);
        break;
    case StmtKind::Seq:
        exec(c.first, state, scratch);
        exec(c.second, state, scratch);
        break;
    }
}

Code Executor::run(Code h, Code l) const {
    std::vector<std::uint8_t> state(num_slots_, 0);
    std::vector<std::uint8_t> scratch(ops_.size(), 0);
    const std::size_t hb = high_slots_.size();
    const std::size_t lb = low_slots_.size();
    for (std::size_t j = 0; j < hb; ++j) {
        state[high_slots_[j]] = static_cast<std::uint8_t>((h >> (hb - 1 - j)) & 1U);
    }
    for (std::size_t j = 0; j < lb; ++j) {
        state[low_slots_[j]] = static_cast<std::uint8_t>((l >> (lb - 1 - j)) & 1U);
    }
    exec(root_, state, scratch);
    Code o = 0;
    for (auto slot : out_slots_) {
        o = (o << 1) | state[slot];
    }
    return o;
}

Valuation evaluate(const ProgramUnit& p, const Valuation& input) {
    Executor ex(p);
    Code h = valuation_to_code(input, p.high);
    Code l = valuation_to_code(input, p.low);
    return code_to_valuation(ex.run(h, l), p.out);
}

std::string Denotation::serialize() const {
    std::ostringstream os;
    for (Code h = 0; h < space.high_count(); ++h) {
        for (Code l = 0; l < space.low_count(); ++l) {
            os << code_to_bits(h, space.high_bits) << ' ' << code_to_bits(l, space.low_bits) << " -> "
               << code_to_bits(at(h, l), out_bits) << '\n';
        }
    }
    return os.str();
}

Denotation denotation(const ProgramUnit& p, std::size_t capacity_bits) {
    check_capacity(p, capacity_bits);
    Executor ex(p);
    Denotation d{ex.space(), ex.out_bits(), {}};
    d.outputs.resize(d.space.size());
    for (Code h = 0; h < d.space.high_count(); ++h) {
        for (Code l = 0; l < d.space.low_count(); ++l) {
            d.outputs[d.space.index(h, l)] = ex.run(h, l);
        }
    }
    return d;
}

std::vector<Code> output_image(const Denotation& d, Code l) {
    std::vector<Code> img;
    img.reserve(d.space.high_count());
    for (Code h = 0; h < d.space.high_count(); ++h) {
        img.push_back(d.at(h, l));
    }
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    return img;
}

std::vector<Code> output_image(const ProgramUnit& p, Code l, std::size_t capacity_bits) {
    return output_image(denotation(p, capacity_bits), l);
}

std::vector<std::vector<Code>> partition(const Denotation& d, Code l) {
    std::unordered_map<Code, std::size_t> block_of;
    std::vector<std::vector<Code>> blocks;
    for (Code h = 0; h < d.space.high_count(); ++h) {
        auto [it, fresh] = block_of.emplace(d.at(h, l), blocks.size());
        if (fresh) {
            blocks.emplace_back();
        }
        blocks[it->second].push_back(h);
    }
    return blocks;
}

std::vector<std::vector<Code>> partition(const ProgramUnit& p, Code l, std::size_t capacity_bits) {
    return partition(denotation(p, capacity_bits), l);
}

} // namespace qif

// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qif/program.hpp"

namespace qif {

inline constexpr std::size_t kDefaultCapacityBits = 24;
/// Hard ceiling regardless of configuration; enumeration indexes fit in 64 bits.
inline constexpr std::size_t kMaxCapacityBits = 40;
inline constexpr std::size_t kMaxOutputBits = 64;

using Valuation = std::map<std::string, bool>;

/// A value of a list of boolean variables, packed so that the first declared
/// variable is the most significant bit. Numeric order therefore matches the
/// lexicographic order of the bit strings.
using Code = std::uint64_t;

[[nodiscard]] std::string code_to_bits(Code code, std::size_t width);
[[nodiscard]] Code bits_to_code(std::string_view bits, std::size_t width);
[[nodiscard]] Code valuation_to_code(const Valuation& v, const std::vector<std::string>& vars);
[[nodiscard]] Valuation code_to_valuation(Code code, const std::vector<std::string>& vars);

/// Code of the little-endian integer `value` over vars named bit 0, bit 1, ...
/// (vars[i] carries bit i of value).
[[nodiscard]] Code little_endian_code(std::uint64_t value, std::size_t width);

struct InputSpace {
    std::size_t high_bits = 0;
    std::size_t low_bits = 0;

    [[nodiscard]] std::uint64_t high_count() const { return std::uint64_t{1} << high_bits; }
    [[nodiscard]] std::uint64_t low_count() const { return std::uint64_t{1} << low_bits; }
    [[nodiscard]] std::uint64_t size() const { return std::uint64_t{1} << (high_bits + low_bits); }
    /// Position of (h, l) in the enumeration order (h-major).
    [[nodiscard]] std::uint64_t index(Code h, Code l) const { return (h << low_bits) | l; }

    friend bool operator==(const InputSpace&, const InputSpace&) = default;
};

[[nodiscard]] InputSpace input_space(const ProgramUnit& p);

/// Throws CapacityError if the program's inputs exceed `capacity_bits` or its
/// outputs exceed kMaxOutputBits.
void check_capacity(const ProgramUnit& p, std::size_t capacity_bits);

/// Compiled form of a program for repeated concrete execution.
class Executor {
  public:
    explicit Executor(const ProgramUnit& p);

    [[nodiscard]] Code run(Code h, Code l) const;
    [[nodiscard]] const InputSpace& space() const { return space_; }
    [[nodiscard]] std::size_t out_bits() const { return out_slots_.size(); }

  private:
    struct Op {
        std::uint8_t kind;
        std::uint32_t a;
        std::uint32_t b;
    };
    struct CStmt {
        StmtKind kind;
        std::uint32_t slot = 0;
        std::uint32_t begin = 0;   // first op of the formula
        std::uint32_t formula = 0; // root op of the formula
        std::uint32_t first = 0;
        std::uint32_t second = 0;
    };

    std::uint32_t compile_formula(const Formula& f, std::map<const Formula::Node*, std::uint32_t>& memo);
    std::uint32_t compile_stmt(const Stmt& s, std::map<const Formula::Node*, std::uint32_t>& memo);
    void exec(std::uint32_t stmt, std::vector<std::uint8_t>& state, std::vector<std::uint8_t>& scratch) const;
    bool eval(std::uint32_t begin, std::uint32_t root, const std::vector<std::uint8_t>& state, std::vector<std::uint8_t>& scratch) const;

    InputSpace space_;
    std::map<std::string, std::uint32_t> slot_of_;
    std::size_t num_slots_ = 0;
    std::vector<std::uint32_t> high_slots_;
    std::vector<std::uint32_t> low_slots_;
    std::vector<std::uint32_t> out_slots_;
    std::vector<Op> ops_;
    std::vector<CStmt> stmts_;
    std::uint32_t root_ = 0;
};

/// Runs the program on an assignment of every high and low variable; returns
/// the final values of the out variables.
[[nodiscard]] Valuation evaluate(const ProgramUnit& p, const Valuation& input);

/// The input/output relation of a program, one record per (h, l).
struct Denotation {
    InputSpace space;
    std::size_t out_bits = 0;
    std::vector<Code> outputs; // indexed by space.index(h, l)

    [[nodiscard]] Code at(Code h, Code l) const { return outputs[space.index(h, l)]; }

    /// One line per record, `<h-bits> <l-bits> -> <o-bits>`, in enumeration
    /// order (which is lexicographic). An empty bit string prints as `-`.
    [[nodiscard]] std::string serialize() const;
};

[[nodiscard]] Denotation denotation(const ProgramUnit& p, std::size_t capacity_bits = kDefaultCapacityBits);

/// Distinct outputs reachable for fixed low input, ascending.
[[nodiscard]] std::vector<Code> output_image(const Denotation& d, Code l);
[[nodiscard]] std::vector<Code> output_image(const ProgramUnit& p, Code l,
                                             std::size_t capacity_bits = kDefaultCapacityBits);

/// High inputs grouped by equal output for fixed low input. Each block is
/// ascending and blocks are ordered by their smallest member.
[[nodiscard]] std::vector<std::vector<Code>> partition(const Denotation& d, Code l);
[[nodiscard]] std::vector<std::vector<Code>> partition(const ProgramUnit& p, Code l,
                                                       std::size_t capacity_bits = kDefaultCapacityBits);

} // namespace qif

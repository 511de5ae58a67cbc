// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "qif/corpus.hpp"

#include <cmath>
#include <vector>

#include "qif/error.hpp"

namespace qif {

namespace {

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back(prefix + std::to_string(i));
    }
    return names;
}

Formula bit_eq(std::size_t i) {
    return Formula::iff(Formula::var("h" + std::to_string(i)), Formula::var("l" + std::to_string(i)));
}

Formula all_equal(std::size_t n) {
    std::vector<Formula> parts;
    for (std::size_t i = 0; i < n; ++i) {
        parts.push_back(bit_eq(i));
    }
    return Formula::conj_all(parts);
}

// o := true; then for i < width: if h_i != l_i then { o := false } else { <rest> }
Stmt mismatch_scan(std::size_t width) {
    Stmt tail = Stmt::skip();
    for (std::size_t i = width; i-- > 0;) {
        tail = Stmt::branch(Formula::negation(bit_eq(i)), Stmt::assign("o", Formula::falsity()), tail);
    }
    return Stmt::seq(Stmt::assign("o", Formula::truth()), tail);
}

} // namespace

Corpus gen_login_corpus(std::size_t n_bits) {
    if (n_bits < 1 || n_bits > kMaxLoginBits) {
        throw CapacityError("login corpus width must be between 1 and " + std::to_string(kMaxLoginBits) +
                            " bits, got " + std::to_string(n_bits));
    }
    const auto high = numbered("h", n_bits);
    const auto low = numbered("l", n_bits);
    const std::vector<std::string> o{"o"};
    Corpus c;

    c.emplace("M_spec", make_program(high, low, o, {},
                                     Stmt::branch(all_equal(n_bits), Stmt::assign("o", Formula::falsity()),
                                                  Stmt::assign("o", Formula::truth()))));

    std::vector<Stmt> copies;
    for (std::size_t i = 0; i < n_bits; ++i) {
        copies.push_back(Stmt::assign("o" + std::to_string(i), Formula::var("h" + std::to_string(i))));
    }
    c.emplace("M1", make_program(high, low, numbered("o", n_bits), {}, Stmt::seq_all(copies)));

    c.emplace("M2", make_program(high, low, o, {},
                                 Stmt::branch(all_equal(n_bits), Stmt::assign("o", Formula::falsity()),
                                              Stmt::assign("o", Formula::var("h0")))));
    c.emplace("M3", make_program(high, low, o, {}, mismatch_scan(n_bits / 2)));
    c.emplace("M4", make_program(high, low, o, {}, mismatch_scan(n_bits)));
    return c;
}

namespace {

constexpr long double kLn2 = 0.693147180559945309417232121458176568L;

// Binary entropy of 2^-k, in bits.
long double entropy_of_power(std::size_t k) {
    if (k == 0) {
        return 0.0L;
    }
    const long double q = std::ldexp(1.0L, -static_cast<int>(k));
    return q * static_cast<long double>(k) - (1.0L - q) * std::log1p(-q) / kLn2;
}

// Binary entropy of 1/2 + d, in bits.
long double entropy_near_half(long double d) {
    const long double p = 0.5L + d;
    const long double q = 0.5L - d;
    if (q == 0) {
        return 0.0L;
    }
    return 1.0L - (p * std::log1p(2 * d) + q * std::log1p(-2 * d)) / kLn2;
}

} // namespace

double login_se_closed_form(const std::string& name, std::size_t n_bits) {
    if (n_bits < 1 || n_bits > 1000) {
        throw RangeError("login width must be between 1 and 1000 bits, got " + std::to_string(n_bits));
    }
    // For each guess l the outputs split the secrets into two classes, except for M1.
    if (name == "M_spec" || name == "M4") {
        return static_cast<double>(entropy_of_power(n_bits));
    }
    if (name == "M1") {
        return static_cast<double>(n_bits);
    }
    if (name == "M2") {
        // Guesses with l0 = 0 split the secrets evenly; the others split them
        // 2^(n-1)+1 against 2^(n-1)-1.
        const long double d = std::ldexp(1.0L, -static_cast<int>(n_bits));
        return static_cast<double>(0.5L + 0.5L * entropy_near_half(d));
    }
    if (name == "M3") {
        return static_cast<double>(entropy_of_power(n_bits / 2));
    }
    throw Error("unknown login program '" + name + "'");
}

Corpus gen_intro_examples() {
    const std::vector<std::string> high{"h0", "h1"};
    const std::vector<std::string> out{"o0", "o1"};
    auto h0 = Formula::var("h0");
    auto h1 = Formula::var("h1");
    Formula guess = Formula::conj(Formula::negation(h0), h1);
    Corpus c;
    c.emplace("M1_intro",
              make_program(high, {}, out, {},
                           Stmt::branch(guess,
                                        Stmt::seq(Stmt::assign("o0", Formula::falsity()),
                                                  Stmt::assign("o1", Formula::falsity())),
                                        Stmt::seq(Stmt::assign("o0", Formula::falsity()),
                                                  Stmt::assign("o1", Formula::truth())))));
    c.emplace("M2_intro",
              make_program(high, {}, out, {}, Stmt::seq(Stmt::assign("o0", h0), Stmt::assign("o1", h1))));
    return c;
}

ProgramUnit zw_example() {
    auto x = Formula::var("x");
    auto y = Formula::var("y");
    auto z = Formula::var("z");
    auto w = Formula::var("w");
    Stmt body = Stmt::seq_all({
        Stmt::assign("z", x),
        Stmt::assign("w", y),
        Stmt::branch(Formula::conj(x, y), Stmt::assign("z", Formula::negation(z)),
                     Stmt::assign("w", Formula::negation(w))),
    });
    return make_program({"x", "y"}, {}, {"z", "w"}, {}, body);
}

} // namespace qif

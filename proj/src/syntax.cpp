// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "qif/syntax.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <vector>

#include "qif/error.hpp"

namespace qif {

namespace {

enum class Tok {
    Ident,
    KwHigh,
    KwLow,
    KwOut,
    KwLocal,
    KwIf,
    KwThen,
    KwElse,
    KwSkip,
    KwTrue,
    KwFalse,
    Assign,  // :=
    Implies, // =>
    Iff,     // ==
    Not,
    And,
    Or,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Semi,
    Comma,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

const char* describe(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::KwHigh: return "'high'";
    case Tok::KwLow: return "'low'";
    case Tok::KwOut: return "'out'";
    case Tok::KwLocal: return "'local'";
    case Tok::KwIf: return "'if'";
    case Tok::KwThen: return "'then'";
    case Tok::KwElse: return "'else'";
    case Tok::KwSkip: return "'skip'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::Assign: return "':='";
    case Tok::Implies: return "'=>'";
    case Tok::Iff: return "'=='";
    case Tok::Not: return "'!'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    std::size_t line = 1;
    std::size_t col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') {
                advance(1);
            }
            continue;
        }
        std::size_t tl = line;
        std::size_t tc = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\'')) {
                ++j;
            }
            std::string word(src.substr(i, j - i));
            Tok kind = Tok::Ident;
            if (word == "high") kind = Tok::KwHigh;
            else if (word == "low") kind = Tok::KwLow;
            else if (word == "out") kind = Tok::KwOut;
            else if (word == "local") kind = Tok::KwLocal;
            else if (word == "if") kind = Tok::KwIf;
            else if (word == "then") kind = Tok::KwThen;
            else if (word == "else") kind = Tok::KwElse;
            else if (word == "skip") kind = Tok::KwSkip;
            else if (word == "true") kind = Tok::KwTrue;
            else if (word == "false") kind = Tok::KwFalse;
            out.push_back({kind, std::move(word), tl, tc});
            advance(j - i);
            continue;
        }
        auto two = src.substr(i, 2);
        std::optional<Tok> kind;
        std::size_t len = 1;
        if (two == ":=") {
            kind = Tok::Assign;
            len = 2;
        } else if (two == "=>") {
            kind = Tok::Implies;
            len = 2;
        } else if (two == "==") {
            kind = Tok::Iff;
            len = 2;
        } else {
            switch (c) {
            case '!': kind = Tok::Not; break;
            case '&': kind = Tok::And; break;
            case '|': kind = Tok::Or; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case '{': kind = Tok::LBrace; break;
            case '}': kind = Tok::RBrace; break;
            case ';': kind = Tok::Semi; break;
            case ',': kind = Tok::Comma; break;
            default: break;
            }
        }
        if (!kind) {
            throw SyntaxError(std::string("unexpected character '") + c + "'", tl, tc);
        }
        out.push_back({*kind, std::string(src.substr(i, len)), tl, tc});
        advance(len);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
  public:
    explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

    ProgramUnit program() {
        ProgramUnit p;
        for (;;) {
            std::vector<std::string>* into = nullptr;
            switch (peek().kind) {
            case Tok::KwHigh: into = &p.high; break;
            case Tok::KwLow: into = &p.low; break;
            case Tok::KwOut: into = &p.out; break;
            case Tok::KwLocal: into = &p.local; break;
            default: break;
            }
            if (into == nullptr) {
                break;
            }
            next();
            into->push_back(expect(Tok::Ident).text);
            while (accept(Tok::Comma)) {
                into->push_back(expect(Tok::Ident).text);
            }
            expect(Tok::Semi);
        }
        p.body = stmt_seq();
        expect(Tok::End);
        p.validate();
        return p;
    }

    Formula formula_only() {
        Formula f = formula();
        expect(Tok::End);
        return f;
    }

  private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }

    bool accept(Tok t) {
        if (peek().kind == t) {
            ++pos_;
            return true;
        }
        return false;
    }

    const Token& expect(Tok t) {
        if (peek().kind != t) {
            fail(std::string("expected ") + describe(t) + ", found " + describe(peek().kind));
        }
        return next();
    }

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, peek().line, peek().column); }

    Stmt stmt_seq() {
        std::vector<Stmt> parts{stmt()};
        while (accept(Tok::Semi)) {
            parts.push_back(stmt());
        }
        return Stmt::seq_all(parts);
    }

    Stmt block() {
        expect(Tok::LBrace);
        Stmt s = stmt_seq();
        expect(Tok::RBrace);
        return s;
    }

    Stmt stmt() {
        switch (peek().kind) {
        case Tok::KwSkip: next(); return Stmt::skip();
        case Tok::KwIf: {
            next();
            Formula c = formula();
            expect(Tok::KwThen);
            Stmt t = block();
            expect(Tok::KwElse);
            Stmt e = block();
            return Stmt::branch(c, t, e);
        }
        case Tok::Ident: {
            std::string target = next().text;
            expect(Tok::Assign);
            return Stmt::assign(std::move(target), formula());
        }
        default: fail(std::string("expected statement, found ") + describe(peek().kind));
        }
    }

    Formula formula() { return implies(); }

    Formula implies() {
        Formula lhs = iff();
        if (accept(Tok::Implies)) {
            return Formula::implies(lhs, implies());
        }
        return lhs;
    }

    Formula iff() {
        Formula lhs = disj();
        while (accept(Tok::Iff)) {
            lhs = Formula::iff(lhs, disj());
        }
        return lhs;
    }

    Formula disj() {
        Formula lhs = conj();
        while (accept(Tok::Or)) {
            lhs = Formula::disj(lhs, conj());
        }
        return lhs;
    }

    Formula conj() {
        Formula lhs = unary();
        while (accept(Tok::And)) {
            lhs = Formula::conj(lhs, unary());
        }
        return lhs;
    }

    Formula unary() {
        if (accept(Tok::Not)) {
            return Formula::negation(unary());
        }
        return atom();
    }

    Formula atom() {
        switch (peek().kind) {
        case Tok::KwTrue: next(); return Formula::truth();
        case Tok::KwFalse: next(); return Formula::falsity();
        case Tok::Ident: return Formula::var(next().text);
        case Tok::LParen: {
            next();
            Formula f = formula();
            expect(Tok::RParen);
            return f;
        }
        default: fail(std::string("expected formula, found ") + describe(peek().kind));
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// Binding levels used by the printer; higher binds tighter.
constexpr int kImplies = 0;
constexpr int kIff = 1;
constexpr int kOr = 2;
constexpr int kAnd = 3;
constexpr int kUnary = 4;

// Matches !(a & !b), the expansion of a => b.
bool match_implies(const Formula& f, const Formula** a, const Formula** b) {
    if (f.kind() != FormulaKind::Not || f.child().kind() != FormulaKind::And) {
        return false;
    }
    const Formula& inner = f.child();
    if (inner.right().kind() != FormulaKind::Not) {
        return false;
    }
    *a = &inner.left();
    *b = &inner.right().child();
    return true;
}

bool match_or(const Formula& f, const Formula** a, const Formula** b) {
    if (f.kind() != FormulaKind::Not || f.child().kind() != FormulaKind::And) {
        return false;
    }
    const Formula& inner = f.child();
    if (inner.left().kind() != FormulaKind::Not || inner.right().kind() != FormulaKind::Not) {
        return false;
    }
    *a = &inner.left().child();
    *b = &inner.right().child();
    return true;
}

bool match_iff(const Formula& f, const Formula** a, const Formula** b) {
    if (f.kind() != FormulaKind::And) {
        return false;
    }
    const Formula* a1 = nullptr;
    const Formula* b1 = nullptr;
    const Formula* a2 = nullptr;
    const Formula* b2 = nullptr;
    if (!match_implies(f.left(), &a1, &b1) || !match_implies(f.right(), &b2, &a2)) {
        return false;
    }
    if (!(*a1 == *a2) || !(*b1 == *b2)) {
        return false;
    }
    *a = a1;
    *b = b1;
    return true;
}

void render(const Formula& f, int context, std::ostream& os) {
    const Formula* a = nullptr;
    const Formula* b = nullptr;
    auto wrap = [&](int own, auto&& body) {
        bool paren = own < context;
        if (paren) {
            os << '(';
        }
        body();
        if (paren) {
            os << ')';
        }
    };
    if (f.is_true()) {
        os << "true";
    } else if (f.is_false()) {
        os << "false";
    } else if (f.kind() == FormulaKind::Var) {
        os << f.name();
    } else if (match_iff(f, &a, &b)) {
        wrap(kIff, [&] {
            render(*a, kIff, os);
            os << " == ";
            render(*b, kOr, os);
        });
    } else if (match_or(f, &a, &b)) {
        wrap(kOr, [&] {
            render(*a, kOr, os);
            os << " | ";
            render(*b, kAnd, os);
        });
    } else if (match_implies(f, &a, &b)) {
        wrap(kImplies, [&] {
            render(*a, kIff, os);
            os << " => ";
            render(*b, kImplies, os);
        });
    } else if (f.kind() == FormulaKind::And) {
        wrap(kAnd, [&] {
            render(f.left(), kAnd, os);
            os << " & ";
            render(f.right(), kUnary, os);
        });
    } else {
        os << '!';
        render(f.child(), kUnary, os);
    }
}

void render_decl(std::ostream& os, const char* kw, const std::vector<std::string>& names) {
    if (names.empty()) {
        return;
    }
    os << kw << ' ';
    for (std::size_t i = 0; i < names.size(); ++i) {
        os << (i == 0 ? "" : ", ") << names[i];
    }
    os << ";\n";
}

void render_stmt_to(const Stmt& s, int indent, std::ostream& os) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    switch (s.kind()) {
    case StmtKind::Skip: os << pad << "skip"; break;
    case StmtKind::Assign: os << pad << s.target() << " := " << render_formula(s.value()); break;
    case StmtKind::If:
        os << pad << "if " << render_formula(s.cond()) << " then {\n";
        render_stmt_to(s.then_branch(), indent + 1, os);
        os << '\n' << pad << "} else {\n";
        render_stmt_to(s.else_branch(), indent + 1, os);
        os << '\n' << pad << '}';
        break;
    case StmtKind::Seq:
        render_stmt_to(s.first(), indent, os);
        os << ";\n";
        render_stmt_to(s.second(), indent, os);
        break;
    }
}

} // namespace

ProgramUnit parse_program(std::string_view text) { return Parser(text).program(); }

Formula parse_formula(std::string_view text) { return Parser(text).formula_only(); }

std::string render_formula(const Formula& f) {
    std::ostringstream os;
    render(f, kImplies, os);
    return os.str();
}

std::string render_stmt(const Stmt& s, int indent) {
    std::ostringstream os;
    render_stmt_to(s, indent, os);
    return os.str();
}

std::string render_program(const ProgramUnit& p) {
    std::ostringstream os;
    render_decl(os, "high", p.high);
    render_decl(os, "low", p.low);
    render_decl(os, "out", p.out);
    render_decl(os, "local", p.local);
    render_stmt_to(p.body, 0, os);
    os << '\n';
    return os.str();
}

} // namespace qif

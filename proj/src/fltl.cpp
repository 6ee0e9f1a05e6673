#include "mvplan/fltl.hpp"

#include <cassert>
#include <vector>

namespace mvp {

FormulaPtr Formula::atom(std::optional<Prop> a, std::optional<Prop> b) {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Atom;
    f->first = a;
    f->second = b;
    return f;
}

namespace {

FormulaPtr unary(Formula::Kind k, FormulaPtr sub) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->lhs = std::move(sub);
    return f;
}

FormulaPtr binary(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->lhs = std::move(a);
    f->rhs = std::move(b);
    return f;
}

}  // namespace

FormulaPtr Formula::not_(FormulaPtr f) { return unary(Kind::Not, std::move(f)); }
FormulaPtr Formula::globally(FormulaPtr f) { return unary(Kind::Globally, std::move(f)); }
FormulaPtr Formula::finally_(FormulaPtr f) { return unary(Kind::Finally, std::move(f)); }
FormulaPtr Formula::and_(FormulaPtr a, FormulaPtr b) {
    return binary(Kind::And, std::move(a), std::move(b));
}
FormulaPtr Formula::or_(FormulaPtr a, FormulaPtr b) {
    return binary(Kind::Or, std::move(a), std::move(b));
}
FormulaPtr Formula::until(FormulaPtr a, FormulaPtr b) {
    return binary(Kind::Until, std::move(a), std::move(b));
}

namespace {

enum class Tok { LParen, RParen, Comma, Or, And, Not, U, G, F, Ident, Wildcard, End };

struct Token {
    Tok kind;
    std::string_view text;
    size_t offset;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) { advance(); }

    const Token& cur() const { return cur_; }

    void advance() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' ||
                                    s_[pos_] == '\r')) {
            ++pos_;
        }
        size_t start = pos_;
        if (pos_ >= s_.size()) {
            cur_ = {Tok::End, {}, start};
            return;
        }
        char c = s_[pos_];
        auto single = [&](Tok k) {
            ++pos_;
            cur_ = {k, s_.substr(start, 1), start};
        };
        switch (c) {
            case '(': single(Tok::LParen); return;
            case ')': single(Tok::RParen); return;
            case ',': single(Tok::Comma); return;
            case '|': single(Tok::Or); return;
            case '&': single(Tok::And); return;
            case '!': single(Tok::Not); return;
            default: break;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t end = pos_;
            while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) ||
                                       s_[end] == '_')) {
                ++end;
            }
            std::string_view word = s_.substr(start, end - start);
            pos_ = end;
            if (word == "U") {
                cur_ = {Tok::U, word, start};
            } else if (word == "G") {
                cur_ = {Tok::G, word, start};
            } else if (word == "F") {
                cur_ = {Tok::F, word, start};
            } else if (word == "_") {
                cur_ = {Tok::Wildcard, word, start};
            } else {
                cur_ = {Tok::Ident, word, start};
            }
            return;
        }
        throw FltlParseError("unexpected character '" + std::string(1, c) + "'", start);
    }

private:
    std::string_view s_;
    size_t pos_ = 0;
    Token cur_{Tok::End, {}, 0};
};

class Parser {
public:
    explicit Parser(std::string_view s) : lex_(s) {}

    FormulaPtr parse() {
        FormulaPtr f = parse_until();
        if (lex_.cur().kind != Tok::End) {
            throw FltlParseError("trailing input after formula", lex_.cur().offset);
        }
        return f;
    }

private:
    Lexer lex_;

    bool accept(Tok k) {
        if (lex_.cur().kind != k) return false;
        lex_.advance();
        return true;
    }

    void expect(Tok k, const char* what) {
        if (lex_.cur().kind != k) {
            throw FltlParseError(std::string("expected ") + what, lex_.cur().offset);
        }
        lex_.advance();
    }

    FormulaPtr parse_until() {
        FormulaPtr f = parse_or();
        while (accept(Tok::U)) f = Formula::until(f, parse_or());
        return f;
    }

    FormulaPtr parse_or() {
        FormulaPtr f = parse_and();
        while (accept(Tok::Or)) f = Formula::or_(f, parse_and());
        return f;
    }

    FormulaPtr parse_and() {
        FormulaPtr f = parse_unary();
        while (accept(Tok::And)) f = Formula::and_(f, parse_unary());
        return f;
    }

    FormulaPtr parse_unary() {
        if (accept(Tok::Not)) return Formula::not_(parse_unary());
        if (accept(Tok::G)) return Formula::globally(parse_unary());
        if (accept(Tok::F)) return Formula::finally_(parse_unary());
        return parse_primary();
    }

    FormulaPtr parse_primary() {
        const Token open = lex_.cur();
        expect(Tok::LParen, "'('");
        // An atom starts with a proposition name or wildcard; anything else
        // is a parenthesized subformula.
        if (lex_.cur().kind == Tok::Ident || lex_.cur().kind == Tok::Wildcard) {
            auto a = parse_atom_component();
            expect(Tok::Comma, "',' in atom");
            auto b = parse_atom_component();
            expect(Tok::RParen, "')' closing atom");
            return Formula::atom(a, b);
        }
        FormulaPtr f = parse_until();
        expect(Tok::RParen, "')'");
        (void)open;
        return f;
    }

    std::optional<Prop> parse_atom_component() {
        const Token t = lex_.cur();
        if (t.kind == Tok::Wildcard) {
            lex_.advance();
            return std::nullopt;
        }
        if (t.kind != Tok::Ident) {
            throw FltlParseError("expected proposition name or '_'", t.offset);
        }
        auto p = prop_from_name(t.text);
        if (!p) {
            throw FltlParseError("unknown proposition '" + std::string(t.text) + "'", t.offset);
        }
        lex_.advance();
        return p;
    }
};

int precedence(Formula::Kind k) {
    switch (k) {
        case Formula::Kind::Until: return 1;
        case Formula::Kind::Or: return 2;
        case Formula::Kind::And: return 3;
        case Formula::Kind::Not:
        case Formula::Kind::Globally:
        case Formula::Kind::Finally: return 4;
        case Formula::Kind::Atom: return 5;
    }
    return 5;
}

void print(const FormulaPtr& f, std::string& out) {
    auto wrapped = [&](const FormulaPtr& sub, bool need) {
        if (need) out += "(";
        print(sub, out);
        if (need) out += ")";
    };
    int p = precedence(f->kind);
    switch (f->kind) {
        case Formula::Kind::Atom:
            out += "(";
            out += f->first ? prop_name(*f->first) : "_";
            out += ", ";
            out += f->second ? prop_name(*f->second) : "_";
            out += ")";
            break;
        case Formula::Kind::Not:
            out += "!";
            wrapped(f->lhs, precedence(f->lhs->kind) < p);
            break;
        case Formula::Kind::Globally:
            out += "G ";
            wrapped(f->lhs, precedence(f->lhs->kind) < p);
            break;
        case Formula::Kind::Finally:
            out += "F ";
            wrapped(f->lhs, precedence(f->lhs->kind) < p);
            break;
        case Formula::Kind::And:
        case Formula::Kind::Or:
        case Formula::Kind::Until: {
            const char* op = f->kind == Formula::Kind::And  ? " & "
                             : f->kind == Formula::Kind::Or ? " | "
                                                            : " U ";
            wrapped(f->lhs, precedence(f->lhs->kind) < p);
            out += op;
            wrapped(f->rhs, precedence(f->rhs->kind) <= p);  // left associative
            break;
        }
    }
}

}  // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string pretty(const FormulaPtr& f) {
    std::string out;
    print(f, out);
    return out;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Formula::Kind::Atom: return a->first == b->first && a->second == b->second;
        case Formula::Kind::Not:
        case Formula::Kind::Globally:
        case Formula::Kind::Finally: return structurally_equal(a->lhs, b->lhs);
        default:
            return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
    }
}

bool evaluate_at(const FormulaPtr& f, const Word& w, size_t pos) {
    assert(pos < w.size());
    const size_t last = w.size() - 1;
    switch (f->kind) {
        case Formula::Kind::Atom: {
            bool a_ok = !f->first || w[pos].has(*f->first);
            if (pos == last) return a_ok && !f->second;
            bool b_ok = !f->second || w[pos + 1].has(*f->second);
            return a_ok && b_ok;
        }
        case Formula::Kind::Not: return !evaluate_at(f->lhs, w, pos);
        case Formula::Kind::And:
            return evaluate_at(f->lhs, w, pos) && evaluate_at(f->rhs, w, pos);
        case Formula::Kind::Or:
            return evaluate_at(f->lhs, w, pos) || evaluate_at(f->rhs, w, pos);
        case Formula::Kind::Globally:
            for (size_t j = pos; j < last; ++j) {
                if (!evaluate_at(f->lhs, w, j)) return false;
            }
            return true;
        case Formula::Kind::Finally:
            for (size_t j = pos; j <= last; ++j) {
                if (evaluate_at(f->lhs, w, j)) return true;
            }
            return false;
        case Formula::Kind::Until:
            for (size_t k = pos; k <= last; ++k) {
                if (evaluate_at(f->rhs, w, k)) {
                    bool ok = true;
                    for (size_t j = pos; j < k && ok; ++j) ok = evaluate_at(f->lhs, w, j);
                    if (ok) return true;
                }
            }
            return false;
    }
    return false;
}

bool evaluate(const FormulaPtr& f, const Word& w) {
    if (w.empty()) return true;
    return evaluate_at(f, w, 0);
}

}  // namespace mvp

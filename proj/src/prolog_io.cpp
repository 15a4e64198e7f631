#include "rulebench/prolog_io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <vector>

#include "rulebench/errors.hpp"

namespace rulebench {

namespace {

enum class TokenKind { LowerIdent, UpperIdent, LParen, RParen, Comma, Implies, Period, End };

struct Token {
    TokenKind kind;
    std::string_view text;
    std::size_t line;
    std::size_t column;
};

const char* describe(TokenKind kind) {
    switch (kind) {
    case TokenKind::LowerIdent: return "identifier";
    case TokenKind::UpperIdent: return "variable";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::Comma: return "','";
    case TokenKind::Implies: return "':-'";
    case TokenKind::Period: return "'.'";
    case TokenKind::End: return "end of input";
    }
    return "token";
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_space();
        Token tok{TokenKind::End, {}, line_, column_};
        if (pos_ >= text_.size()) return tok;
        char c = text_[pos_];
        auto ident_char = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; };
        if (std::islower(static_cast<unsigned char>(c)) || std::isupper(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
            tok.kind = std::islower(static_cast<unsigned char>(c)) ? TokenKind::LowerIdent : TokenKind::UpperIdent;
            tok.text = text_.substr(start, pos_ - start);
            return tok;
        }
        switch (c) {
        case '(': tok.kind = TokenKind::LParen; break;
        case ')': tok.kind = TokenKind::RParen; break;
        case ',': tok.kind = TokenKind::Comma; break;
        case '.': tok.kind = TokenKind::Period; break;
        case ':':
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
                advance();
                tok.kind = TokenKind::Implies;
                tok.text = text_.substr(pos_ - 1, 2);
                advance();
                return tok;
            }
            [[fallthrough]];
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
        }
        tok.text = text_.substr(pos_, 1);
        advance();
        return tok;
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

// One parsed statement before symbols are interned.
struct RawAtom {
    Token predicate;
    std::vector<Token> args;
};

struct RawStatement {
    RawAtom head;
    std::vector<RawAtom> body;
    bool is_rule = false;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { current_ = lexer_.next(); }

    std::optional<RawStatement> statement() {
        if (current_.kind == TokenKind::End) return std::nullopt;
        RawStatement st;
        st.head = atom();
        if (current_.kind == TokenKind::Implies) {
            st.is_rule = true;
            take();
            st.body.push_back(atom());
            while (current_.kind == TokenKind::Comma) {
                take();
                st.body.push_back(atom());
            }
        }
        expect(TokenKind::Period);
        return st;
    }

private:
    RawAtom atom() {
        RawAtom a;
        if (current_.kind != TokenKind::LowerIdent) fail("expected predicate name");
        a.predicate = take();
        if (current_.kind != TokenKind::LParen)
            throw ParseError("predicate '" + std::string(a.predicate.text) + "' needs at least one argument",
                             current_.line, current_.column);
        take();
        a.args.push_back(argument());
        while (current_.kind == TokenKind::Comma) {
            take();
            a.args.push_back(argument());
        }
        expect(TokenKind::RParen);
        return a;
    }

    Token argument() {
        if (current_.kind != TokenKind::LowerIdent && current_.kind != TokenKind::UpperIdent)
            fail("expected constant or variable");
        Token t = take();
        if (current_.kind == TokenKind::LParen)
            throw ParseError("function symbols are not supported", current_.line, current_.column);
        return t;
    }

    Token take() {
        Token t = current_;
        current_ = lexer_.next();
        return t;
    }

    void expect(TokenKind kind) {
        if (current_.kind != kind) fail(std::string("expected ") + describe(kind));
        take();
    }

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError(what + ", found " + describe(current_.kind), current_.line, current_.column);
    }

    Lexer lexer_;
    Token current_{};
};

// Declares the predicate, translating signature errors to positioned parse errors.
PredicateId intern_predicate(Signature& sig, const RawAtom& a) {
    try {
        return sig.add_predicate(a.predicate.text, a.args.size());
    } catch (const SignatureError& e) {
        throw ParseError(e.what(), a.predicate.line, a.predicate.column);
    }
}

} // namespace

FactSet parse_facts(std::string_view text, Signature& sig) {
    Parser parser(text);
    FactSet out;
    while (auto st = parser.statement()) {
        if (st->is_rule)
            throw ParseError("rule found where a fact was expected", st->head.predicate.line,
                             st->head.predicate.column);
        Fact fact{intern_predicate(sig, st->head), {}};
        for (const auto& arg : st->head.args) {
            if (arg.kind == TokenKind::UpperIdent)
                throw ParseError("variable '" + std::string(arg.text) + "' in a fact", arg.line, arg.column);
            fact.args.push_back(sig.add_constant(arg.text));
        }
        out.insert(std::move(fact));
    }
    return out;
}

Program parse_rules(std::string_view text, Signature& sig) {
    Parser parser(text);
    Program out;
    while (auto st = parser.statement()) {
        if (!st->is_rule)
            throw ParseError("fact found where a rule was expected", st->head.predicate.line,
                             st->head.predicate.column);
        std::map<std::string_view, VariableId> vars;
        std::vector<std::string> names;
        auto convert = [&](const RawAtom& raw) {
            Atom atom{intern_predicate(sig, raw), {}};
            for (const auto& arg : raw.args) {
                if (arg.kind == TokenKind::LowerIdent) {
                    atom.args.push_back(Term::constant(sig.add_constant(arg.text)));
                    continue;
                }
                auto [it, inserted] = vars.try_emplace(arg.text, VariableId{static_cast<std::uint32_t>(names.size())});
                if (inserted) names.emplace_back(arg.text);
                atom.args.push_back(Term::variable(it->second));
            }
            return atom;
        };
        Atom head = convert(st->head);
        std::vector<Atom> body;
        for (const auto& raw : st->body) body.push_back(convert(raw));
        try {
            out.insert(Rule(std::move(head), std::move(body), std::move(names)));
        } catch (const RuleError& e) {
            throw ParseError(e.what(), st->head.predicate.line, st->head.predicate.column);
        }
    }
    return out;
}

namespace {

std::string join_sorted(std::vector<std::string> lines) {
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += ".\n";
    }
    return out;
}

} // namespace

std::string serialize_facts(const FactSet& facts, const Signature& sig) {
    std::vector<std::string> lines;
    lines.reserve(facts.size());
    for (const auto& f : facts) lines.push_back(to_string(f, sig));
    return join_sorted(std::move(lines));
}

std::string serialize_rules(const Program& program, const Signature& sig) {
    std::vector<std::string> lines;
    lines.reserve(program.size());
    for (const auto& r : program) lines.push_back(to_string(r, sig));
    return join_sorted(std::move(lines));
}

} // namespace rulebench

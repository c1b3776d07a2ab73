#include "stratisat/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

#include "stratisat/errors.hpp"

namespace stratisat {

std::string format_diagnostic(const Diagnostic& d) {
    std::ostringstream os;
    os << (d.severity == Diagnostic::Severity::Error ? "error" : "warning");
    if (d.pos.line > 0)
        os << " at " << d.pos.line << ":" << d.pos.col;
    os << ": " << d.message;
    return os.str();
}

namespace {

enum class Tok {
    Ident,
    KwSort0,
    KwSort1,
    KwSort2,
    KwAssert,
    KwForall,
    KwExists,
    KwIn,
    Eq,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Dot,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    SourcePos pos;
};

class ParseError {
public:
    ParseError(std::string msg, SourcePos pos) : message(std::move(msg)), position(pos) {}
    std::string message;
    SourcePos position;
};

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto bump = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char c = text[i];
        SourcePos pos{line, col};
        if (c == '#') {
            while (i < text.size() && text[i] != '\n')
                bump(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            bump(1);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            std::string word = text.substr(i, j - i);
            bump(j - i);
            Tok k = Tok::Ident;
            if (word == "sort0") k = Tok::KwSort0;
            else if (word == "sort1") k = Tok::KwSort1;
            else if (word == "sort2") k = Tok::KwSort2;
            else if (word == "assert") k = Tok::KwAssert;
            else if (word == "forall") k = Tok::KwForall;
            else if (word == "exists") k = Tok::KwExists;
            else if (word == "in") k = Tok::KwIn;
            out.push_back({k, word, pos});
            continue;
        }
        auto two = text.substr(i, 2);
        auto three = text.substr(i, 3);
        if (three == "<->") {
            out.push_back({Tok::DArrow, three, pos});
            bump(3);
            continue;
        }
        if (two == "->") {
            out.push_back({Tok::Arrow, two, pos});
            bump(2);
            continue;
        }
        Tok k;
        switch (c) {
        case '=': k = Tok::Eq; break;
        case '~': k = Tok::Tilde; break;
        case '&': k = Tok::Amp; break;
        case '|': k = Tok::Pipe; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '{': k = Tok::LBrace; break;
        case '}': k = Tok::RBrace; break;
        case ',': k = Tok::Comma; break;
        case ';': k = Tok::Semi; break;
        case '.': k = Tok::Dot; break;
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", pos);
        }
        out.push_back({k, std::string(1, c), pos});
        bump(1);
    }
    out.push_back({Tok::End, "", {line, col}});
    return out;
}

// Either a variable reference or an enumeration term.
struct Term {
    bool is_enum = false;
    Variable var;
    Enumeration members;
    SourcePos pos;
};

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(lex(text)) {}

    ParseResult run() {
        ParseResult res;
        parse_declarations(res);
        expect(Tok::KwAssert, "expected 'assert'");
        FormulaPtr f = parse_formula();
        expect(Tok::Dot, "expected '.' after assertion");
        expect(Tok::End, "trailing input after assertion");
        res.formula = f;
        return res;
    }

private:
    std::vector<Token> toks_;
    std::size_t at_ = 0;
    std::map<std::string, Sort> decls_;

    const Token& cur() const { return toks_[at_]; }
    Token take() { return toks_[at_++]; }
    bool peek(Tok k) const { return cur().kind == k; }
    bool accept(Tok k) {
        if (!peek(k))
            return false;
        ++at_;
        return true;
    }
    void expect(Tok k, const std::string& msg) {
        if (!accept(k))
            throw ParseError(msg + " (got '" + (cur().kind == Tok::End ? "end of input" : cur().text) + "')",
                             cur().pos);
    }

    void parse_declarations(ParseResult& res) {
        while (peek(Tok::KwSort0) || peek(Tok::KwSort1) || peek(Tok::KwSort2)) {
            Sort s = peek(Tok::KwSort0)   ? Sort::Individual
                     : peek(Tok::KwSort1) ? Sort::Set
                                          : Sort::Collection;
            take();
            bool any = false;
            while (peek(Tok::Ident)) {
                Token t = take();
                if (decls_.count(t.text))
                    throw ParseError("variable '" + t.text + "' already declared (one namespace across sorts)",
                                     t.pos);
                decls_[t.text] = s;
                res.declaration_order.push_back({t.text, s});
                any = true;
            }
            if (!any)
                throw ParseError("empty declaration list", cur().pos);
            expect(Tok::Semi, "expected ';' after declaration");
        }
        res.declarations = decls_;
    }

    Variable lookup(const Token& t) {
        auto it = decls_.find(t.text);
        if (it == decls_.end())
            throw ParseError("undeclared identifier '" + t.text + "'", t.pos);
        return Variable{t.text, it->second};
    }

    FormulaPtr parse_formula() { return parse_iff(); }

    FormulaPtr parse_iff() {
        FormulaPtr l = parse_implies();
        if (accept(Tok::DArrow))
            return mk_iff(l, parse_iff());
        return l;
    }

    FormulaPtr parse_implies() {
        FormulaPtr l = parse_or();
        if (accept(Tok::Arrow))
            return mk_implies(l, parse_implies());
        return l;
    }

    FormulaPtr parse_or() {
        FormulaPtr l = parse_and();
        while (accept(Tok::Pipe))
            l = mk_or(l, parse_and());
        return l;
    }

    FormulaPtr parse_and() {
        FormulaPtr l = parse_unary();
        while (accept(Tok::Amp))
            l = mk_and(l, parse_unary());
        return l;
    }

    FormulaPtr parse_unary() {
        if (accept(Tok::Tilde))
            return mk_not(parse_unary());
        if (peek(Tok::KwForall) || peek(Tok::KwExists))
            return parse_quantifier();
        return parse_primary();
    }

    FormulaPtr parse_quantifier() {
        Token q = take();
        bool universal = q.kind == Tok::KwForall;
        std::vector<Variable> vars;
        while (peek(Tok::Ident))
            vars.push_back(lookup(take()));
        if (vars.empty())
            throw ParseError("empty quantifier list", cur().pos);
        Sort s = vars.front().sort;
        for (const auto& v : vars) {
            if (v.sort == Sort::Collection)
                throw ParseError("cannot quantify over sort-2 variable '" + v.name + "'", q.pos);
            if (v.sort != s)
                throw ParseError("quantifier list mixes sorts; split into nested quantifiers", q.pos);
        }
        expect(Tok::Dot, "expected '.' after quantifier variables");
        FormulaPtr body = parse_formula();
        try {
            return universal ? build_forall(s, std::move(vars), body)
                             : build_exists(s, std::move(vars), body);
        } catch (const WellFormednessError& e) {
            throw ParseError(e.what(), q.pos);
        }
    }

    // Directly chained quantifiers of the same sort merge into one block, so
    // `forall x . forall y . b` stays a legal level-0 universal.
    static FormulaPtr build_forall(Sort s, std::vector<Variable> vars, FormulaPtr body) {
        Formula::Kind same = s == Sort::Individual ? Formula::Kind::Forall0 : Formula::Kind::Forall1;
        if (body->kind() == same) {
            for (const auto& v : body->bound())
                vars.push_back(v);
            body = body->lhs();
        }
        return s == Sort::Individual ? mk_forall0(std::move(vars), body)
                                     : mk_forall1(std::move(vars), body);
    }

    // exists x1..xn . b  desugars to  ~ forall x1..xn . ~b, collapsing the
    // double negation a chained existential would otherwise introduce.
    static FormulaPtr build_exists(Sort s, std::vector<Variable> vars, FormulaPtr body) {
        FormulaPtr negated =
            body->kind() == Formula::Kind::Not ? body->lhs() : mk_not(body);
        return mk_not(build_forall(s, std::move(vars), negated));
    }

    FormulaPtr parse_primary() {
        if (accept(Tok::LParen)) {
            FormulaPtr f = parse_formula();
            expect(Tok::RParen, "expected ')'");
            return f;
        }
        Term lhs = parse_term();
        if (accept(Tok::Eq)) {
            Term rhs = parse_term();
            return build_eq(lhs, rhs);
        }
        if (accept(Tok::KwIn)) {
            Term rhs = parse_term();
            return build_in(lhs, rhs);
        }
        throw ParseError("expected '=' or 'in' after term", cur().pos);
    }

    Term parse_term() {
        Term t;
        t.pos = cur().pos;
        if (accept(Tok::LBrace)) {
            t.is_enum = true;
            do {
                if (!peek(Tok::Ident))
                    throw ParseError("expected variable inside enumeration", cur().pos);
                Variable v = lookup(take());
                if (v.sort != Sort::Individual)
                    throw ParseError("enumeration member '" + v.name + "' must have sort 0", t.pos);
                t.members.members.push_back(v);
            } while (accept(Tok::Comma));
            expect(Tok::RBrace, "expected '}'");
            return t;
        }
        if (!peek(Tok::Ident))
            throw ParseError("expected term", cur().pos);
        t.var = lookup(take());
        return t;
    }

    FormulaPtr build_eq(const Term& l, const Term& r) {
        if (l.is_enum && r.is_enum)
            throw ParseError("'=' between two enumerations is not an atom of the language", l.pos);
        if (l.is_enum || r.is_enum) {
            const Term& e = l.is_enum ? l : r;
            const Term& v = l.is_enum ? r : l;
            if (v.var.sort != Sort::Set)
                throw ParseError("enumeration can only equal a sort-1 variable", v.pos);
            return mk_atom(atom_enum_eq(e.members, v.var));
        }
        if (l.var.sort == Sort::Individual && r.var.sort == Sort::Individual)
            return mk_atom(atom_eq0(l.var, r.var));
        if (l.var.sort == Sort::Set && r.var.sort == Sort::Set)
            return mk_atom(atom_eq1(l.var, r.var));
        throw ParseError("sort mismatch in '=' between '" + l.var.name + "' and '" + r.var.name + "'",
                         l.pos);
    }

    FormulaPtr build_in(const Term& l, const Term& r) {
        if (r.is_enum)
            throw ParseError("right-hand side of 'in' cannot be an enumeration", r.pos);
        if (l.is_enum) {
            if (r.var.sort != Sort::Collection)
                throw ParseError("enumeration membership needs a sort-2 variable on the right", r.pos);
            return mk_atom(atom_enum_mem(l.members, r.var));
        }
        if (l.var.sort == Sort::Individual && r.var.sort == Sort::Set)
            return mk_atom(atom_mem01(l.var, r.var));
        if (l.var.sort == Sort::Set && r.var.sort == Sort::Collection)
            return mk_atom(atom_mem12(l.var, r.var));
        throw ParseError("sort mismatch in 'in' between '" + l.var.name + "' and '" + r.var.name + "'",
                         l.pos);
    }
};

std::set<Variable> bound_variables(const FormulaPtr& f) {
    std::set<Variable> out;
    for_each_node(f, [&](const FormulaPtr& n) {
        for (const auto& v : n->bound())
            out.insert(v);
    });
    return out;
}

} // namespace

ParseResult parse_file(const std::string& text) {
    ParseResult res;
    try {
        Parser p(text);
        res = p.run();
    } catch (const ParseError& e) {
        res.formula = nullptr;
        res.diagnostics.push_back({Diagnostic::Severity::Error, e.message, e.position});
        return res;
    }
    // A name may not have both bound and free occurrences in the assertion.
    VariableSets fv = free_variables(res.formula);
    for (const auto& v : bound_variables(res.formula)) {
        if (fv.contains(v)) {
            res.diagnostics.push_back({Diagnostic::Severity::Error,
                                       "variable '" + v.name + "' occurs both bound and free",
                                       {0, 0}});
            res.formula = nullptr;
            return res;
        }
    }
    return res;
}

namespace {

std::string term_text(const Atom& a) {
    std::string out = "{";
    for (std::size_t i = 0; i < a.members.members.size(); ++i) {
        if (i)
            out += ", ";
        out += a.members.members[i].name;
    }
    out += "}";
    return out;
}

std::string atom_text(const Atom& a) {
    switch (a.kind) {
    case Atom::Kind::Eq0:
    case Atom::Kind::Eq1:
        return a.lhs.name + " = " + a.rhs.name;
    case Atom::Kind::Mem01:
    case Atom::Kind::Mem12:
        return a.lhs.name + " in " + a.rhs.name;
    case Atom::Kind::EnumEq:
        return term_text(a) + " = " + a.rhs.name;
    case Atom::Kind::EnumMem:
        return term_text(a) + " in " + a.rhs.name;
    }
    return "?";
}

// Precedence: <-> (1) < -> (2) < | (3) < & (4) < ~ (5) < atoms.
// Quantifiers print parenthesized whenever they have a parent operator, so
// their maximal-scope dot notation can never swallow a sibling.
void print(const FormulaPtr& f, int required, std::string& out) {
    switch (f->kind()) {
    case Formula::Kind::Atom:
        out += atom_text(f->atom());
        return;
    case Formula::Kind::Not:
        out += "~";
        print(f->lhs(), 5, out);
        return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
        int prec;
        const char* op;
        bool right_assoc;
        switch (f->kind()) {
        case Formula::Kind::Iff: prec = 1; op = " <-> "; right_assoc = true; break;
        case Formula::Kind::Implies: prec = 2; op = " -> "; right_assoc = true; break;
        case Formula::Kind::Or: prec = 3; op = " | "; right_assoc = false; break;
        default: prec = 4; op = " & "; right_assoc = false; break;
        }
        bool parens = prec < required;
        if (parens)
            out += "(";
        print(f->lhs(), right_assoc ? prec + 1 : prec, out);
        out += op;
        print(f->rhs(), right_assoc ? prec : prec + 1, out);
        if (parens)
            out += ")";
        return;
    }
    case Formula::Kind::Forall0:
    case Formula::Kind::Forall1: {
        bool parens = required > 0;
        if (parens)
            out += "(";
        out += "forall";
        for (const auto& v : f->bound())
            out += " " + v.name;
        out += " . ";
        print(f->lhs(), 0, out);
        if (parens)
            out += ")";
        return;
    }
    }
}

} // namespace

std::string render_formula(const FormulaPtr& f) {
    std::string out;
    print(f, 0, out);
    return out;
}

std::string render(const FormulaPtr& f) {
    VariableSets vars = all_variables(f);
    std::ostringstream os;
    const std::set<Variable>* per[3] = {&vars.v0, &vars.v1, &vars.v2};
    const char* names[3] = {"sort0", "sort1", "sort2"};
    for (int s = 0; s < 3; ++s) {
        if (per[s]->empty())
            continue;
        os << names[s];
        for (const auto& v : *per[s])
            os << " " << v.name;
        os << ";\n";
    }
    os << "assert " << render_formula(f) << ".\n";
    return os.str();
}

} // namespace stratisat

#include "hochc/parser.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <variant>

namespace hochc {

ParseError::ParseError(int line_, int column_, std::string expected_,
                       std::string found_)
    : std::runtime_error("parse error at line " + std::to_string(line_) +
                         ", column " + std::to_string(column_) + ": expected " +
                         expected_ + ", found " +
                         (found_.empty() ? "end of input" : "'" + found_ + "'")),
      line(line_),
      column(column_),
      expected(std::move(expected_)),
      found(std::move(found_)) {}

namespace {

enum class Tok {
    Ident,
    Int,
    Assign,     // :=
    Colon,      // :
    Semi,       // ;
    Dot,        // .
    Comma,      // ,
    LParen,     // (
    RParen,     // )
    Arrow,      // ->
    Lambda,     // backslash
    AndAnd,     // &&
    OrOr,       // ||
    Plus,       // +
    Minus,      // -
    Lt,         // <
    Le,         // <=
    Eq,         // =
    Gt,         // >
    Ge,         // >=
    End
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::int64_t value = 0;
    int line = 1;
    int col = 1;
};

bool is_reserved(const std::string& s) {
    return s == "environment" || s == "program" || s == "goal" ||
           s == "signature" || s == "E" || s == "forall";
}

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }
    const Token& peek2() {
        if (!next_) {
            Token saved = cur_;
            advance();
            next_ = cur_;
            cur_ = saved;
        }
        return *next_;
    }

    Token take() {
        Token t = cur_;
        if (next_) {
            cur_ = *next_;
            next_.reset();
        } else {
            advance();
        }
        return t;
    }

private:
    void advance() {
        skip_trivia();
        cur_ = Token{};
        cur_.line = line_;
        cur_.col = col_;
        if (pos_ >= src_.size()) {
            cur_.kind = Tok::End;
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size()) {
                char d = src_[pos_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' ||
                    d == '\'') {
                    bump();
                } else {
                    break;
                }
            }
            cur_.kind = Tok::Ident;
            cur_.text = src_.substr(start, pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   std::isdigit(static_cast<unsigned char>(src_[pos_])))
                bump();
            cur_.kind = Tok::Int;
            cur_.text = src_.substr(start, pos_ - start);
            cur_.value = std::stoll(cur_.text);
            return;
        }
        auto two = [&](char a, char b) {
            return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
        };
        if (two(':', '=')) { bump(); bump(); cur_.kind = Tok::Assign; cur_.text = ":="; return; }
        if (two('-', '>')) { bump(); bump(); cur_.kind = Tok::Arrow; cur_.text = "->"; return; }
        if (two('<', '=')) { bump(); bump(); cur_.kind = Tok::Le; cur_.text = "<="; return; }
        if (two('>', '=')) { bump(); bump(); cur_.kind = Tok::Ge; cur_.text = ">="; return; }
        if (two('&', '&')) { bump(); bump(); cur_.kind = Tok::AndAnd; cur_.text = "&&"; return; }
        if (two('|', '|')) { bump(); bump(); cur_.kind = Tok::OrOr; cur_.text = "||"; return; }
        switch (c) {
        case ':': bump(); cur_.kind = Tok::Colon; cur_.text = ":"; return;
        case ';': bump(); cur_.kind = Tok::Semi; cur_.text = ";"; return;
        case '.': bump(); cur_.kind = Tok::Dot; cur_.text = "."; return;
        case ',': bump(); cur_.kind = Tok::Comma; cur_.text = ","; return;
        case '(': bump(); cur_.kind = Tok::LParen; cur_.text = "("; return;
        case ')': bump(); cur_.kind = Tok::RParen; cur_.text = ")"; return;
        case '\\': bump(); cur_.kind = Tok::Lambda; cur_.text = "\\"; return;
        case '+': bump(); cur_.kind = Tok::Plus; cur_.text = "+"; return;
        case '-': bump(); cur_.kind = Tok::Minus; cur_.text = "-"; return;
        case '<': bump(); cur_.kind = Tok::Lt; cur_.text = "<"; return;
        case '=': bump(); cur_.kind = Tok::Eq; cur_.text = "="; return;
        case '>': bump(); cur_.kind = Tok::Gt; cur_.text = ">"; return;
        default:
            throw ParseError(line_, col_, "a token", std::string(1, c));
        }
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token cur_;
    std::optional<Token> next_;
};

// Surface expressions: application chains and bare names stay ambiguous
// between the goal and first-order layers until an operator or the final
// context forces a reading.
struct PExpr;
using PPtr = std::shared_ptr<PExpr>;

struct PExpr {
    enum Kind { Name, Fo, Goal, App } kind;
    std::string name;  // Name
    FoPtr fo;          // Fo
    GoalPtr goal;      // Goal
    PPtr fun, arg;     // App
    Loc loc;
};

PPtr p_name(std::string n, Loc l) {
    auto e = std::make_shared<PExpr>();
    e->kind = PExpr::Name;
    e->name = std::move(n);
    e->loc = l;
    return e;
}

PPtr p_fo(FoPtr t, Loc l) {
    auto e = std::make_shared<PExpr>();
    e->kind = PExpr::Fo;
    e->fo = std::move(t);
    e->loc = l;
    return e;
}

PPtr p_goal(GoalPtr g, Loc l) {
    auto e = std::make_shared<PExpr>();
    e->kind = PExpr::Goal;
    e->goal = std::move(g);
    e->loc = l;
    return e;
}

PPtr p_app(PPtr f, PPtr a) {
    auto e = std::make_shared<PExpr>();
    e->kind = PExpr::App;
    e->loc = f->loc;
    e->fun = std::move(f);
    e->arg = std::move(a);
    return e;
}

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    Problem parse_problem() {
        Problem p;
        if (at_section("signature")) {
            lex_.take();
            parse_signature_entries(p);
        }
        if (at_section("environment")) {
            lex_.take();
            parse_env_entries(p.env);
        }
        if (at_section("program")) {
            lex_.take();
            while (lex_.peek().kind == Tok::Ident &&
                   !is_reserved(lex_.peek().text)) {
                Token name = expect_ident("an equation name");
                expect(Tok::Assign, "':='");
                GoalPtr body = to_goal(parse_expr());
                expect(Tok::Semi, "';' terminating the equation");
                p.program.push_back(Equation{name.text, body});
            }
        }
        if (at_section("goal")) {
            lex_.take();
            if (lex_.peek().kind != Tok::End) p.goal = to_goal(parse_expr());
        }
        if (lex_.peek().kind != Tok::End)
            fail("a section keyword or end of input");
        resolve_problem(p);
        return p;
    }

    SortPtr parse_sort_only() {
        SortPtr s = parse_sort();
        if (lex_.peek().kind != Tok::End) fail("end of input");
        return s;
    }

    GoalPtr parse_goal_only() {
        GoalPtr g = to_goal(parse_expr());
        if (lex_.peek().kind != Tok::End) fail("end of input");
        return g;
    }

private:
    bool at_section(const char* name) {
        return lex_.peek().kind == Tok::Ident && lex_.peek().text == name;
    }

    [[noreturn]] void fail(const std::string& expected) {
        const Token& t = lex_.peek();
        throw ParseError(t.line, t.col, expected, t.text);
    }

    Token expect(Tok kind, const std::string& what) {
        if (lex_.peek().kind != kind) fail(what);
        return lex_.take();
    }

    Token expect_ident(const std::string& what) {
        if (lex_.peek().kind != Tok::Ident || is_reserved(lex_.peek().text))
            fail(what);
        return lex_.take();
    }

    void parse_signature_entries(Problem& p) {
        while (lex_.peek().kind == Tok::Ident && !is_reserved(lex_.peek().text) &&
               lex_.peek2().kind == Tok::Colon) {
            Token name = lex_.take();
            lex_.take();  // ':'
            SortPtr s = parse_sort();
            CtorInfo info;
            info.name = name.text;
            info.arg_sorts = argument_sorts(s);
            SortPtr res = result_sort(s);
            if (!res->is_base() || res->base_name() != "closr")
                throw ParseError(name.line, name.col,
                                 "a constructor sort ending in closr",
                                 name.text);
            if (!parse_ctor_name(info.name, info.index, info.rel)) {
                info.rel = info.name;
                info.index = static_cast<int>(info.arg_sorts.size());
            }
            p.signature.insert(std::move(info));
        }
    }

    void parse_env_entries(SortEnv& env) {
        while (lex_.peek().kind == Tok::Ident && !is_reserved(lex_.peek().text) &&
               lex_.peek2().kind == Tok::Colon) {
            Token name = lex_.take();
            if (env.contains(name.text))
                throw ParseError(name.line, name.col,
                                 "a fresh environment name", name.text);
            lex_.take();  // ':'
            env.insert(name.text, parse_sort());
        }
    }

    SortPtr parse_sort() {
        SortPtr lhs = parse_sort_atom();
        if (lex_.peek().kind == Tok::Arrow) {
            lex_.take();
            return Sort::arrow(lhs, parse_sort());
        }
        return lhs;
    }

    SortPtr parse_sort_atom() {
        if (lex_.peek().kind == Tok::LParen) {
            lex_.take();
            SortPtr s = parse_sort();
            expect(Tok::RParen, "')'");
            return s;
        }
        Token t = expect_ident("a sort");
        if (t.text == "int") return sort_int();
        if (t.text == "bool") return sort_o();
        if (t.text == "closr") return sort_closr();
        throw ParseError(t.line, t.col, "one of int, bool, closr", t.text);
    }

    // Precedence, loosest first: || < && < comparisons < +/- < application.
    // Lambda and E swallow everything to their right.
    PPtr parse_expr() { return parse_disj(); }

    PPtr parse_disj() {
        PPtr l = parse_conj();
        if (lex_.peek().kind == Tok::OrOr) {
            Token op = lex_.take();
            PPtr r = parse_disj();
            GoalPtr g = GoalTerm::disj(to_goal(l), to_goal(r));
            g->set_loc({op.line, op.col});
            return p_goal(g, l->loc);
        }
        return l;
    }

    PPtr parse_conj() {
        PPtr l = parse_cmp();
        if (lex_.peek().kind == Tok::AndAnd) {
            Token op = lex_.take();
            PPtr r = parse_conj();
            GoalPtr g = GoalTerm::conj(to_goal(l), to_goal(r));
            g->set_loc({op.line, op.col});
            return p_goal(g, l->loc);
        }
        return l;
    }

    static bool is_cmp(Tok k) {
        return k == Tok::Lt || k == Tok::Le || k == Tok::Eq || k == Tok::Gt ||
               k == Tok::Ge;
    }

    PPtr parse_cmp() {
        if (lex_.peek().kind == Tok::Lambda ||
            (lex_.peek().kind == Tok::Ident && lex_.peek().text == "E"))
            return parse_binder();
        PPtr l = parse_additive();
        if (is_cmp(lex_.peek().kind)) {
            Token op = lex_.take();
            PPtr r = parse_additive();
            FoPtr t = FoTerm::cmp(op.text, to_fo(l), to_fo(r));
            t->set_loc({op.line, op.col});
            return p_fo(t, l->loc);
        }
        return l;
    }

    PPtr parse_binder() {
        Token intro = lex_.take();
        bool is_lambda = intro.kind == Tok::Lambda;
        std::vector<std::pair<std::string, SortPtr>> binders;
        for (;;) {
            Token name = expect_ident("a variable name");
            expect(Tok::Colon, "':' before the binder's sort");
            binders.emplace_back(name.text, parse_sort());
            if (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                continue;
            }
            break;
        }
        expect(Tok::Dot, "'.' after the binder");
        GoalPtr body = to_goal(parse_expr());
        for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
            body = is_lambda ? GoalTerm::lambda(it->first, it->second, body)
                             : GoalTerm::exists(it->first, it->second, body);
            body->set_loc({intro.line, intro.col});
        }
        return p_goal(body, {intro.line, intro.col});
    }

    PPtr parse_additive() {
        PPtr l = parse_application();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            Token op = lex_.take();
            PPtr r = parse_application();
            FoPtr t = FoTerm::binop(op.text, to_fo(l), to_fo(r));
            t->set_loc({op.line, op.col});
            l = p_fo(t, l->loc);
        }
        return l;
    }

    bool at_atom_start() {
        const Token& t = lex_.peek();
        switch (t.kind) {
        case Tok::Int:
        case Tok::LParen:
            return true;
        case Tok::Ident:
            return !is_reserved(t.text);
        default:
            return false;
        }
    }

    PPtr parse_application() {
        PPtr e = parse_atom();
        while (at_atom_start()) e = p_app(e, parse_atom());
        return e;
    }

    PPtr parse_atom() {
        const Token& t = lex_.peek();
        switch (t.kind) {
        case Tok::Int: {
            Token n = lex_.take();
            FoPtr lit = FoTerm::int_lit(n.value);
            lit->set_loc({n.line, n.col});
            return p_fo(lit, {n.line, n.col});
        }
        case Tok::Minus: {
            Token m = lex_.take();
            Token n = expect(Tok::Int, "an integer literal after unary '-'");
            FoPtr lit = FoTerm::int_lit(-n.value);
            lit->set_loc({m.line, m.col});
            return p_fo(lit, {m.line, m.col});
        }
        case Tok::LParen: {
            lex_.take();
            PPtr e = parse_expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        case Tok::Ident: {
            if (is_reserved(t.text)) fail("an expression");
            Token n = lex_.take();
            return p_name(n.text, {n.line, n.col});
        }
        default:
            fail("an expression");
        }
    }

    GoalPtr to_goal(const PPtr& e) {
        switch (e->kind) {
        case PExpr::Name: {
            GoalPtr g = GoalTerm::var(e->name);
            g->set_loc(e->loc);
            return g;
        }
        case PExpr::Fo: {
            GoalPtr g = GoalTerm::constraint(e->fo);
            g->set_loc(e->loc);
            return g;
        }
        case PExpr::Goal:
            return e->goal;
        case PExpr::App: {
            GoalPtr g = GoalTerm::app(to_goal(e->fun), to_goal(e->arg));
            g->set_loc(e->loc);
            return g;
        }
        }
        fail("an expression");
    }

    FoPtr to_fo(const PPtr& e) {
        switch (e->kind) {
        case PExpr::Name: {
            FoPtr t = FoTerm::var(e->name);
            t->set_loc(e->loc);
            return t;
        }
        case PExpr::Fo:
            return e->fo;
        case PExpr::Goal:
            if (e->goal->kind() == GoalKind::Constraint) return e->goal->formula();
            throw ParseError(e->loc.line, e->loc.col, "a first-order term",
                             "a relational expression");
        case PExpr::App: {
            // Applications inside first-order positions are constructor
            // applications: head must be a plain name.
            std::vector<FoPtr> args;
            PPtr head = e;
            std::vector<PPtr> rev;
            while (head->kind == PExpr::App) {
                rev.push_back(head->arg);
                head = head->fun;
            }
            if (head->kind != PExpr::Name)
                throw ParseError(e->loc.line, e->loc.col,
                                 "a constructor application", "an expression");
            for (auto it = rev.rbegin(); it != rev.rend(); ++it)
                args.push_back(to_fo(*it));
            FoPtr t = FoTerm::ctor(head->name, std::move(args));
            t->set_loc(e->loc);
            return t;
        }
        }
        throw ParseError(e->loc.line, e->loc.col, "a first-order term", "");
    }

    Lexer lex_;
};

}

Problem parse_problem(const std::string& source) {
    return Parser(source).parse_problem();
}

SortPtr parse_sort_text(const std::string& source) {
    return Parser(source).parse_sort_only();
}

GoalPtr parse_goal_text(const std::string& source, const SortEnv& env,
                        const Signature& sig) {
    GoalPtr g = Parser(source).parse_goal_only();
    return resolve_names(g, env, sig);
}

}

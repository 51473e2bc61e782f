#include "hochc/foterm.hpp"

#include <cassert>
#include <sstream>

namespace hochc {

FoPtr FoTerm::int_lit(std::int64_t v) {
    auto t = std::make_shared<FoTerm>();
    t->kind_ = FoKind::IntLit;
    t->value_ = v;
    return t;
}

FoPtr FoTerm::var(std::string name) {
    auto t = std::make_shared<FoTerm>();
    t->kind_ = FoKind::Var;
    t->name_ = std::move(name);
    return t;
}

FoPtr FoTerm::binop(std::string op, FoPtr l, FoPtr r) {
    assert(op == "+" || op == "-");
    auto t = std::make_shared<FoTerm>();
    t->kind_ = FoKind::BinOp;
    t->name_ = std::move(op);
    t->args_ = {std::move(l), std::move(r)};
    return t;
}

FoPtr FoTerm::cmp(std::string op, FoPtr l, FoPtr r) {
    assert(op == "<" || op == "<=" || op == "=" || op == ">" || op == ">=");
    auto t = std::make_shared<FoTerm>();
    t->kind_ = FoKind::Cmp;
    t->name_ = std::move(op);
    t->args_ = {std::move(l), std::move(r)};
    return t;
}

FoPtr FoTerm::ctor(std::string name, std::vector<FoPtr> args) {
    auto t = std::make_shared<FoTerm>();
    t->kind_ = FoKind::Ctor;
    t->name_ = std::move(name);
    t->args_ = std::move(args);
    return t;
}

bool fo_equal(const FoPtr& a, const FoPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
    case FoKind::IntLit: return a->value() == b->value();
    case FoKind::Var: return a->name() == b->name();
    case FoKind::BinOp:
    case FoKind::Cmp:
    case FoKind::Ctor: {
        if (a->name() != b->name()) return false;
        if (a->args().size() != b->args().size()) return false;
        for (size_t i = 0; i < a->args().size(); ++i)
            if (!fo_equal(a->args()[i], b->args()[i])) return false;
        return true;
    }
    }
    return false;
}

void fo_collect_vars(const FoPtr& t, std::set<std::string>& out) {
    switch (t->kind()) {
    case FoKind::IntLit: return;
    case FoKind::Var: out.insert(t->name()); return;
    default:
        for (const auto& a : t->args()) fo_collect_vars(a, out);
    }
}

FoPtr fo_rename(const FoPtr& t, const std::string& from, const std::string& to) {
    return fo_substitute(t, from, FoTerm::var(to));
}

FoPtr fo_substitute(const FoPtr& t, const std::string& var, const FoPtr& replacement) {
    switch (t->kind()) {
    case FoKind::IntLit: return t;
    case FoKind::Var: return t->name() == var ? replacement : t;
    case FoKind::BinOp:
        return FoTerm::binop(t->op(), fo_substitute(t->lhs(), var, replacement),
                             fo_substitute(t->rhs(), var, replacement));
    case FoKind::Cmp:
        return FoTerm::cmp(t->op(), fo_substitute(t->lhs(), var, replacement),
                           fo_substitute(t->rhs(), var, replacement));
    case FoKind::Ctor: {
        std::vector<FoPtr> args;
        args.reserve(t->args().size());
        for (const auto& a : t->args())
            args.push_back(fo_substitute(a, var, replacement));
        return FoTerm::ctor(t->name(), std::move(args));
    }
    }
    return t;
}

namespace {

// Precedence: atoms 3, application 2, +/- 1, comparison 0.
void print_fo(std::ostringstream& os, const FoPtr& t, int min_prec) {
    switch (t->kind()) {
    case FoKind::IntLit:
        os << t->value();
        return;
    case FoKind::Var:
        os << t->name();
        return;
    case FoKind::BinOp: {
        bool paren = min_prec > 1;
        if (paren) os << "(";
        print_fo(os, t->lhs(), 1);
        os << " " << t->op() << " ";
        print_fo(os, t->rhs(), 2);
        if (paren) os << ")";
        return;
    }
    case FoKind::Cmp: {
        bool paren = min_prec > 0;
        if (paren) os << "(";
        print_fo(os, t->lhs(), 1);
        os << " " << t->op() << " ";
        print_fo(os, t->rhs(), 1);
        if (paren) os << ")";
        return;
    }
    case FoKind::Ctor: {
        if (t->args().empty()) {
            os << t->name();
            return;
        }
        bool paren = min_prec > 2;
        if (paren) os << "(";
        os << t->name();
        for (const auto& a : t->args()) {
            os << " ";
            print_fo(os, a, 3);
        }
        if (paren) os << ")";
        return;
    }
    }
}

}

std::string fo_to_string(const FoPtr& t) {
    std::ostringstream os;
    print_fo(os, t, 0);
    return os.str();
}

}

#include "hochc/sortcheck.hpp"

#include <sstream>

namespace hochc {

namespace {

const char* kind_word(SortErrorKind k) {
    switch (k) {
    case SortErrorKind::Unbound: return "unbound name";
    case SortErrorKind::Mismatch: return "sort mismatch";
    case SortErrorKind::NonRelationalTopVar: return "non-relational top-level variable";
    case SortErrorKind::ConflictingEnv: return "conflicting binding";
    case SortErrorKind::IllFormedConstraint: return "ill-formed constraint";
    }
    return "sort error";
}

std::string format_error(SortErrorKind kind, Loc loc, const std::string& details) {
    std::ostringstream os;
    os << "sort error";
    if (loc.line > 0) os << " at line " << loc.line << ", column " << loc.col;
    os << ": " << kind_word(kind) << ": " << details;
    return os.str();
}

}

SortError::SortError(SortErrorKind kind, Loc loc, std::string details_)
    : std::runtime_error(format_error(kind, loc, details_)),
      error_kind(kind),
      location(loc),
      details(std::move(details_)) {}

namespace {

class Checker {
public:
    Checker(const SortEnv& env, const Signature& sig) : env_(env), sig_(sig) {}
    Checker(const SortEnv& env, const Signature& sig,
            std::vector<std::pair<std::string, SortPtr>> scope)
        : env_(env), sig_(sig), scope_(std::move(scope)) {}

    SortPtr check_fo(const FoPtr& t) {
        switch (t->kind()) {
        case FoKind::IntLit:
            return sort_int();
        case FoKind::Var: {
            SortPtr s = lookup(t->name());
            if (!s)
                throw SortError(SortErrorKind::Unbound, t->loc(),
                                "variable '" + t->name() + "'");
            if (!s->is_base())
                throw SortError(SortErrorKind::IllFormedConstraint, t->loc(),
                                "variable '" + t->name() +
                                    "' of relational sort " + sort_to_string(s) +
                                    " inside a constraint");
            return s;
        }
        case FoKind::BinOp: {
            require_base(check_fo(t->lhs()), "int", t, "left operand of " + t->op());
            require_base(check_fo(t->rhs()), "int", t, "right operand of " + t->op());
            return sort_int();
        }
        case FoKind::Cmp: {
            SortPtr l = check_fo(t->lhs());
            SortPtr r = check_fo(t->rhs());
            if (t->op() == "=") {
                if (!sort_equal(l, r) || is_o(l))
                    throw SortError(SortErrorKind::Mismatch, t->loc(),
                                    "'=' needs two ints or two closures, got " +
                                        sort_to_string(l) + " and " +
                                        sort_to_string(r));
            } else {
                require_base(l, "int", t, "left operand of " + t->op());
                require_base(r, "int", t, "right operand of " + t->op());
            }
            return sort_o();
        }
        case FoKind::Ctor: {
            const CtorInfo* info = sig_.find(t->name());
            if (!info)
                throw SortError(SortErrorKind::Unbound, t->loc(),
                                "constructor '" + t->name() + "'");
            if (t->args().size() != info->arg_sorts.size())
                throw SortError(
                    SortErrorKind::Mismatch, t->loc(),
                    "constructor '" + t->name() + "' expects " +
                        std::to_string(info->arg_sorts.size()) + " arguments, got " +
                        std::to_string(t->args().size()));
            for (size_t i = 0; i < t->args().size(); ++i) {
                SortPtr a = check_fo(t->args()[i]);
                if (!sort_equal(a, info->arg_sorts[i]))
                    throw SortError(SortErrorKind::Mismatch, t->loc(),
                                    "argument " + std::to_string(i + 1) + " of '" +
                                        t->name() + "' has sort " +
                                        sort_to_string(a) + ", expected " +
                                        sort_to_string(info->arg_sorts[i]));
            }
            return sort_closr();
        }
        }
        throw SortError(SortErrorKind::Mismatch, t->loc(), "unreachable");
    }

    SortPtr check_goal(const GoalPtr& t) {
        switch (t->kind()) {
        case GoalKind::Var: {
            SortPtr s = lookup(t->name());
            if (!s)
                throw SortError(SortErrorKind::Unbound, t->loc(),
                                "variable '" + t->name() + "'");
            return s;
        }
        case GoalKind::TopVar: {
            SortPtr s = env_.find(t->name());
            if (!s)
                throw SortError(SortErrorKind::Unbound, t->loc(),
                                "top-level variable '" + t->name() + "'");
            if (!is_relational(s) || !s->is_arrow())
                throw SortError(SortErrorKind::NonRelationalTopVar, t->loc(),
                                "'" + t->name() + "' has sort " +
                                    sort_to_string(s));
            return s;
        }
        case GoalKind::LogConst:
            return Sort::arrow(sort_o(), Sort::arrow(sort_o(), sort_o()));
        case GoalKind::Exists: {
            push_binder(t);
            SortPtr body = check_goal(t->body());
            scope_.pop_back();
            if (!is_o(body))
                throw SortError(SortErrorKind::Mismatch, t->loc(),
                                "body of the quantifier over '" + t->binder() +
                                    "' has sort " + sort_to_string(body) +
                                    ", expected bool");
            return sort_o();
        }
        case GoalKind::Lambda: {
            push_binder(t);
            SortPtr body = check_goal(t->body());
            scope_.pop_back();
            if (!is_relational(body))
                throw SortError(SortErrorKind::Mismatch, t->loc(),
                                "lambda body bound at '" + t->binder() +
                                    "' has non-relational sort " +
                                    sort_to_string(body));
            return Sort::arrow(t->binder_sort(), body);
        }
        case GoalKind::App: {
            SortPtr f = check_goal(t->fun());
            SortPtr a = check_goal(t->arg());
            if (!f->is_arrow())
                throw SortError(SortErrorKind::Mismatch, t->loc(),
                                "application of a term of sort " +
                                    sort_to_string(f));
            if (!sort_equal(f->dom(), a))
                throw SortError(SortErrorKind::Mismatch, t->loc(),
                                "argument has sort " + sort_to_string(a) +
                                    ", expected " + sort_to_string(f->dom()));
            if (!is_relational(f->cod()))
                throw SortError(SortErrorKind::Mismatch, t->loc(),
                                "application result sort " +
                                    sort_to_string(f->cod()) +
                                    " is not relational");
            return f->cod();
        }
        case GoalKind::Constraint:
            return check_fo(t->formula());
        }
        throw SortError(SortErrorKind::Mismatch, t->loc(), "unreachable");
    }

private:
    void push_binder(const GoalPtr& t) {
        const std::string& name = t->binder();
        if (env_.contains(name) || lookup(name))
            throw SortError(SortErrorKind::ConflictingEnv, t->loc(),
                            "binder '" + name + "' shadows an existing binding");
        scope_.emplace_back(name, t->binder_sort());
    }

    SortPtr lookup(const std::string& name) const {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (it->first == name) return it->second;
        return env_.find(name);
    }

    void require_base(const SortPtr& s, const char* base, const FoPtr& at,
                      const std::string& what) {
        if (!s->is_base() || s->base_name() != base)
            throw SortError(SortErrorKind::Mismatch, at->loc(),
                            what + " has sort " + sort_to_string(s) +
                                ", expected " + base);
    }

    const SortEnv& env_;
    const Signature& sig_;
    std::vector<std::pair<std::string, SortPtr>> scope_;
};

}

SortPtr check_fo_term(const SortEnv& env, const Signature& sig, const FoPtr& t) {
    return Checker(env, sig).check_fo(t);
}

SortPtr check_goal_term(const SortEnv& env, const Signature& sig,
                        const GoalPtr& t) {
    return Checker(env, sig).check_goal(t);
}

SortPtr check_goal_term_scoped(
    const SortEnv& env, const Signature& sig, const GoalPtr& t,
    const std::vector<std::pair<std::string, SortPtr>>& scope) {
    return Checker(env, sig, scope).check_goal(t);
}

void check_problem(const Problem& p) {
    std::set<std::string> seen;
    for (const auto& e : p.env.entries()) {
        if (!seen.insert(e.first).second)
            throw SortError(SortErrorKind::ConflictingEnv, Loc{},
                            "environment declares '" + e.first + "' twice");
        if (!is_relational(e.second) || !e.second->is_arrow())
            throw SortError(SortErrorKind::NonRelationalTopVar, Loc{},
                            "environment entry '" + e.first + "' has sort " +
                                sort_to_string(e.second) +
                                "; top-level variables need relational arrow sorts");
    }
    for (const auto& eq : p.program) {
        SortPtr declared = p.env.find(eq.name);
        if (!declared)
            throw SortError(SortErrorKind::Unbound, eq.body ? eq.body->loc() : Loc{},
                            "equation for undeclared relation '" + eq.name + "'");
        SortPtr actual = check_goal_term(p.env, p.signature, eq.body);
        if (!sort_equal(actual, declared))
            throw SortError(SortErrorKind::Mismatch, eq.body->loc(),
                            "equation '" + eq.name + "' has sort " +
                                sort_to_string(actual) + ", declared " +
                                sort_to_string(declared));
    }
    if (p.goal) {
        SortPtr g = check_goal_term(p.env, p.signature, p.goal);
        if (!is_o(g))
            throw SortError(SortErrorKind::Mismatch, p.goal->loc(),
                            "goal has sort " + sort_to_string(g) +
                                ", expected bool");
    }
}

}

#include "hochc/problem.hpp"

#include <cctype>
#include <stdexcept>

namespace hochc {

void SortEnv::insert(std::string name, SortPtr sort) {
    entries_.emplace_back(std::move(name), std::move(sort));
}

void SortEnv::assign(const std::string& name, SortPtr sort) {
    for (auto& e : entries_) {
        if (e.first == name) {
            e.second = std::move(sort);
            return;
        }
    }
    entries_.emplace_back(name, std::move(sort));
}

SortPtr SortEnv::find(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.first == name) return e.second;
    return nullptr;
}

SortPtr CtorInfo::full_sort() const { return Sort::arrows(arg_sorts, sort_closr()); }

void Signature::insert(CtorInfo info) { entries_.push_back(std::move(info)); }

const CtorInfo* Signature::find(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.name == name) return &e;
    return nullptr;
}

bool parse_ctor_name(const std::string& name, int& index_out, std::string& rel_out) {
    if (name.size() < 3 || name[0] != 'C') return false;
    size_t i = 1;
    while (i < name.size() && std::isdigit(static_cast<unsigned char>(name[i]))) ++i;
    if (i == 1 || i >= name.size() || name[i] != '_' || i + 1 >= name.size())
        return false;
    index_out = std::stoi(name.substr(1, i - 1));
    rel_out = name.substr(i + 1);
    return true;
}

namespace {

FoPtr goal_to_fo_arg(const GoalPtr& g) {
    switch (g->kind()) {
    case GoalKind::Var: return FoTerm::var(g->name());
    case GoalKind::Constraint: return g->formula();
    default:
        throw std::runtime_error(
            "constructor applied to a non-first-order argument");
    }
}

FoPtr resolve_fo(const FoPtr& t, const std::set<std::string>& bound,
                 const Signature& sig) {
    switch (t->kind()) {
    case FoKind::IntLit: return t;
    case FoKind::Var:
        if (!bound.count(t->name()) && sig.contains(t->name()))
            return FoTerm::ctor(t->name(), {});
        return t;
    case FoKind::BinOp:
        return FoTerm::binop(t->op(), resolve_fo(t->lhs(), bound, sig),
                             resolve_fo(t->rhs(), bound, sig));
    case FoKind::Cmp:
        return FoTerm::cmp(t->op(), resolve_fo(t->lhs(), bound, sig),
                           resolve_fo(t->rhs(), bound, sig));
    case FoKind::Ctor: {
        std::vector<FoPtr> args;
        args.reserve(t->args().size());
        for (const auto& a : t->args()) args.push_back(resolve_fo(a, bound, sig));
        return FoTerm::ctor(t->name(), std::move(args));
    }
    }
    return t;
}

GoalPtr resolve_rec(const GoalPtr& g, std::set<std::string>& bound,
                    const SortEnv& env, const Signature& sig) {
    switch (g->kind()) {
    case GoalKind::Var:
        if (bound.count(g->name())) return g;
        if (sig.contains(g->name()))
            return GoalTerm::constraint(FoTerm::ctor(g->name(), {}));
        if (env.contains(g->name())) return GoalTerm::top_var(g->name());
        return g;
    case GoalKind::TopVar:
    case GoalKind::LogConst:
        return g;
    case GoalKind::Exists:
    case GoalKind::Lambda: {
        bool was_bound = bound.count(g->binder()) > 0;
        bound.insert(g->binder());
        GoalPtr body = resolve_rec(g->body(), bound, env, sig);
        if (!was_bound) bound.erase(g->binder());
        if (body == g->body()) return g;
        return g->kind() == GoalKind::Exists
                   ? GoalTerm::exists(g->binder(), g->binder_sort(), body)
                   : GoalTerm::lambda(g->binder(), g->binder_sort(), body);
    }
    case GoalKind::App: {
        GoalPtr f = resolve_rec(g->fun(), bound, env, sig);
        GoalPtr a = resolve_rec(g->arg(), bound, env, sig);
        // An application whose head resolved to a constructor is itself a
        // first-order constructor term.
        if (f->kind() == GoalKind::Constraint &&
            f->formula()->kind() == FoKind::Ctor &&
            sig.contains(f->formula()->name())) {
            std::vector<FoPtr> args = f->formula()->args();
            args.push_back(goal_to_fo_arg(a));
            return GoalTerm::constraint(
                FoTerm::ctor(f->formula()->name(), std::move(args)));
        }
        if (f == g->fun() && a == g->arg()) return g;
        return GoalTerm::app(f, a);
    }
    case GoalKind::Constraint: {
        FoPtr t = resolve_fo(g->formula(), bound, sig);
        if (t == g->formula()) return g;
        return GoalTerm::constraint(t);
    }
    }
    return g;
}

}

GoalPtr resolve_names(const GoalPtr& g, const SortEnv& env, const Signature& sig) {
    std::set<std::string> bound;
    return resolve_rec(g, bound, env, sig);
}

void resolve_problem(Problem& p) {
    for (auto& eq : p.program) eq.body = resolve_names(eq.body, p.env, p.signature);
    if (p.goal) p.goal = resolve_names(p.goal, p.env, p.signature);
}

}

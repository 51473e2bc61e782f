#include "hochc/preprocess.hpp"

#include "hochc/sortcheck.hpp"

namespace hochc {

FreshNamer::FreshNamer(const Problem& p) : used_(problem_identifiers(p)) {}

void FreshNamer::reserve(const std::string& name) { used_.insert(name); }

std::string FreshNamer::fresh(const std::string& prefix) {
    int& n = counters_[prefix];
    std::string candidate;
    do {
        ++n;
        candidate = prefix + std::to_string(n);
    } while (used_.count(candidate));
    used_.insert(candidate);
    return candidate;
}

std::set<std::string> problem_identifiers(const Problem& p) {
    std::set<std::string> out;
    for (const auto& e : p.env.entries()) out.insert(e.first);
    for (const auto& c : p.signature.entries()) out.insert(c.name);
    for (const auto& eq : p.program) {
        out.insert(eq.name);
        goal_all_names(eq.body, out);
    }
    if (p.goal) goal_all_names(p.goal, out);
    return out;
}

namespace {

using Scope = std::vector<std::pair<std::string, SortPtr>>;

void ordered_fo_vars(const FoPtr& t, const std::set<std::string>& bound,
                     std::set<std::string>& seen,
                     std::vector<std::string>& out) {
    switch (t->kind()) {
    case FoKind::IntLit:
        return;
    case FoKind::Var:
        if (!bound.count(t->name()) && seen.insert(t->name()).second)
            out.push_back(t->name());
        return;
    default:
        for (const auto& a : t->args()) ordered_fo_vars(a, bound, seen, out);
    }
}

// Free Var occurrences in order of first occurrence; TopVars excluded.
void ordered_free_vars(const GoalPtr& g, std::set<std::string>& bound,
                       std::set<std::string>& seen,
                       std::vector<std::string>& out) {
    switch (g->kind()) {
    case GoalKind::Var:
        if (!bound.count(g->name()) && seen.insert(g->name()).second)
            out.push_back(g->name());
        return;
    case GoalKind::TopVar:
    case GoalKind::LogConst:
        return;
    case GoalKind::Exists:
    case GoalKind::Lambda: {
        bool was = bound.count(g->binder()) > 0;
        bound.insert(g->binder());
        ordered_free_vars(g->body(), bound, seen, out);
        if (!was) bound.erase(g->binder());
        return;
    }
    case GoalKind::App:
        ordered_free_vars(g->fun(), bound, seen, out);
        ordered_free_vars(g->arg(), bound, seen, out);
        return;
    case GoalKind::Constraint:
        ordered_fo_vars(g->formula(), bound, seen, out);
        return;
    }
}

SortPtr scope_sort(const Scope& scope, const std::string& name) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == name) return it->second;
    return nullptr;
}

struct Lifter {
    Problem& problem;
    FreshNamer& namer;
    bool found = false;

    // Lifts the first (outermost, leftmost) lambda strictly inside g.
    // top_chain tracks whether g is still part of the outermost lambda
    // prefix, which stays in place.
    GoalPtr walk(const GoalPtr& g, Scope& scope, bool top_chain) {
        if (found) return g;
        switch (g->kind()) {
        case GoalKind::Lambda: {
            if (!top_chain) {
                found = true;
                return lift(g, scope);
            }
            scope.emplace_back(g->binder(), g->binder_sort());
            GoalPtr body = walk(g->body(), scope, true);
            scope.pop_back();
            if (body == g->body()) return g;
            return GoalTerm::lambda(g->binder(), g->binder_sort(), body);
        }
        case GoalKind::Exists: {
            scope.emplace_back(g->binder(), g->binder_sort());
            GoalPtr body = walk(g->body(), scope, false);
            scope.pop_back();
            if (body == g->body()) return g;
            return GoalTerm::exists(g->binder(), g->binder_sort(), body);
        }
        case GoalKind::App: {
            GoalPtr f = walk(g->fun(), scope, false);
            GoalPtr a = found ? g->arg() : walk(g->arg(), scope, false);
            if (f == g->fun() && a == g->arg()) return g;
            return GoalTerm::app(f, a);
        }
        default:
            return g;
        }
    }

    GoalPtr lift(const GoalPtr& lam, const Scope& scope) {
        std::set<std::string> bound, seen;
        std::vector<std::string> fvs;
        ordered_free_vars(lam, bound, seen, fvs);
        std::string name = namer.fresh("_lift");

        GoalPtr eq_body = lam;
        SortPtr eq_sort =
            check_goal_term_scoped(problem.env, problem.signature, lam, scope);
        GoalPtr replacement = GoalTerm::top_var(name);
        for (auto it = fvs.rbegin(); it != fvs.rend(); ++it) {
            SortPtr s = scope_sort(scope, *it);
            eq_body = GoalTerm::lambda(*it, s, eq_body);
            eq_sort = Sort::arrow(s, eq_sort);
        }
        for (const auto& v : fvs)
            replacement = GoalTerm::app(replacement, GoalTerm::var(v));

        problem.env.insert(name, eq_sort);
        problem.program.push_back(Equation{name, eq_body});
        return replacement;
    }
};

}

Problem lift_lambdas(const Problem& p) {
    Problem out = p;
    FreshNamer namer(p);
    auto lift_all = [&](GoalPtr term, bool equation) {
        for (;;) {
            Lifter lifter{out, namer};
            Scope scope;
            GoalPtr next = lifter.walk(term, scope, equation);
            term = next;
            if (!lifter.found) break;
        }
        return term;
    };
    for (size_t i = 0; i < out.program.size(); ++i)
        out.program[i].body = lift_all(out.program[i].body, true);
    if (out.goal) out.goal = lift_all(out.goal, false);
    // Equations appended while processing the goal still need their own pass;
    // the loop above already covered ones appended during equation processing.
    for (size_t i = 0; i < out.program.size(); ++i)
        out.program[i].body = lift_all(out.program[i].body, true);
    return out;
}

Problem eta_expand(const Problem& p) {
    Problem out = p;
    for (auto& eq : out.program) {
        SortPtr declared = out.env.find(eq.name);
        if (!declared) continue;
        std::vector<SortPtr> all_args = argument_sorts(declared);
        std::vector<std::pair<std::string, SortPtr>> binders;
        GoalPtr core = goal_unlambda(eq.body, binders);
        size_t have = binders.size();
        size_t want = all_args.size();
        if (have >= want) continue;
        std::set<std::string> used = problem_identifiers(out);
        std::vector<std::pair<std::string, SortPtr>> added;
        for (size_t i = have; i < want; ++i) {
            std::string name =
                fresh_name("x" + std::to_string(i + 1), used);
            added.emplace_back(name, all_args[i]);
        }
        for (const auto& b : added)
            core = GoalTerm::app(core, GoalTerm::var(b.first));
        for (auto it = added.rbegin(); it != added.rend(); ++it)
            core = GoalTerm::lambda(it->first, it->second, core);
        for (auto it = binders.rbegin(); it != binders.rend(); ++it)
            core = GoalTerm::lambda(it->first, it->second, core);
        eq.body = core;
    }
    return out;
}

namespace {

GoalPtr eliminate_ho_rec(const GoalPtr& g, SortEnv& env,
                         std::vector<Equation>& new_eqs, FreshNamer& namer) {
    switch (g->kind()) {
    case GoalKind::Exists: {
        if (g->binder_sort()->is_arrow()) {
            std::string uname = namer.fresh("_u");
            std::vector<SortPtr> args = argument_sorts(g->binder_sort());
            GoalPtr ubody =
                GoalTerm::constraint(FoTerm::cmp("=", FoTerm::int_lit(0),
                                                 FoTerm::int_lit(0)));
            std::set<std::string> used;
            std::vector<std::pair<std::string, SortPtr>> ubinders;
            for (size_t i = 0; i < args.size(); ++i)
                ubinders.emplace_back(
                    fresh_name("x" + std::to_string(i + 1), used), args[i]);
            for (auto it = ubinders.rbegin(); it != ubinders.rend(); ++it)
                ubody = GoalTerm::lambda(it->first, it->second, ubody);
            env.insert(uname, g->binder_sort());
            new_eqs.push_back(Equation{uname, ubody});
            GoalPtr body = eliminate_ho_rec(g->body(), env, new_eqs, namer);
            return goal_substitute(body, g->binder(), GoalTerm::top_var(uname));
        }
        GoalPtr body = eliminate_ho_rec(g->body(), env, new_eqs, namer);
        if (body == g->body()) return g;
        return GoalTerm::exists(g->binder(), g->binder_sort(), body);
    }
    case GoalKind::Lambda: {
        GoalPtr body = eliminate_ho_rec(g->body(), env, new_eqs, namer);
        if (body == g->body()) return g;
        return GoalTerm::lambda(g->binder(), g->binder_sort(), body);
    }
    case GoalKind::App: {
        GoalPtr f = eliminate_ho_rec(g->fun(), env, new_eqs, namer);
        GoalPtr a = eliminate_ho_rec(g->arg(), env, new_eqs, namer);
        if (f == g->fun() && a == g->arg()) return g;
        return GoalTerm::app(f, a);
    }
    default:
        return g;
    }
}

}

GoalPtr eliminate_ho_exists_term(const GoalPtr& t, SortEnv& env,
                                 std::vector<Equation>& new_equations,
                                 FreshNamer& namer) {
    return eliminate_ho_rec(t, env, new_equations, namer);
}

Problem eliminate_ho_exists(const Problem& p) {
    Problem out = p;
    FreshNamer namer(p);
    std::vector<Equation> new_eqs;
    for (auto& eq : out.program)
        eq.body = eliminate_ho_exists_term(eq.body, out.env, new_eqs, namer);
    if (out.goal)
        out.goal = eliminate_ho_exists_term(out.goal, out.env, new_eqs, namer);
    for (auto& eq : new_eqs) out.program.push_back(std::move(eq));
    return out;
}

Problem preprocess(const Problem& p) {
    return eliminate_ho_exists(eta_expand(lift_lambdas(p)));
}

}

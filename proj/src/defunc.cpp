#include "hochc/defunc.hpp"

#include <map>

namespace hochc {

SortPtr transform_sort(const SortPtr& s) {
    return s->is_base() ? s : sort_closr();
}

namespace {

using Scope = std::vector<std::pair<std::string, SortPtr>>;

std::string surface_base_name(const SortPtr& s) {
    return is_o(s) ? "bool" : s->base_name();
}

SortPtr scope_find(const Scope& scope, const std::string& n) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == n) return it->second;
    return nullptr;
}

const std::vector<std::string>& reserved_target_names() {
    static const std::vector<std::string> names = {
        "Apply_bool", "Apply_int",   "Apply_closr",
        "IOMatch_bool", "IOMatch_int", "IOMatch_closr"};
    return names;
}

// Sort of a well-sorted source subterm; no diagnostics.
SortPtr quick_sort(const GoalPtr& g, const SortEnv& env, Scope& scope) {
    switch (g->kind()) {
    case GoalKind::Var: {
        if (SortPtr s = scope_find(scope, g->name())) return s;
        if (SortPtr s = env.find(g->name())) return s;
        throw InternalError("defunctionalization met unbound variable '" +
                            g->name() + "'");
    }
    case GoalKind::TopVar: {
        if (SortPtr s = env.find(g->name())) return s;
        throw InternalError("defunctionalization met unbound relation '" +
                            g->name() + "'");
    }
    case GoalKind::LogConst:
        return Sort::arrow(sort_o(), Sort::arrow(sort_o(), sort_o()));
    case GoalKind::Exists:
        return sort_o();
    case GoalKind::Lambda: {
        scope.emplace_back(g->binder(), g->binder_sort());
        SortPtr body = quick_sort(g->body(), env, scope);
        scope.pop_back();
        return Sort::arrow(g->binder_sort(), body);
    }
    case GoalKind::App:
        return quick_sort(g->fun(), env, scope)->cod();
    case GoalKind::Constraint: {
        const FoPtr& t = g->formula();
        switch (t->kind()) {
        case FoKind::IntLit:
        case FoKind::BinOp:
            return sort_int();
        case FoKind::Cmp:
            return sort_o();
        case FoKind::Ctor:
            return sort_closr();
        case FoKind::Var: {
            if (SortPtr s = scope_find(scope, t->name())) return s;
            if (SortPtr s = env.find(t->name())) return s;
            throw InternalError(
                "defunctionalization met unbound constraint variable '" +
                t->name() + "'");
        }
        }
        return sort_int();
    }
    }
    throw InternalError("unreachable");
}

class Defunc {
public:
    Defunc(const SortEnv& env, std::set<std::string> used)
        : env_(env), used_(std::move(used)) {
        for (const auto& e : env_.entries()) {
            if (!e.second->is_arrow()) continue;
            std::vector<SortPtr> srcs = argument_sorts(e.second);
            std::vector<std::string>& names = ctor_names_[e.first];
            std::vector<SortPtr> prefix;
            for (size_t i = 0; i < srcs.size(); ++i) {
                std::string candidate =
                    "C" + std::to_string(i) + "_" + e.first;
                while (used_.count(candidate)) candidate += "'";
                used_.insert(candidate);
                names.push_back(candidate);
                CtorInfo info;
                info.name = candidate;
                info.rel = e.first;
                info.index = static_cast<int>(i);
                info.arg_sorts = prefix;
                sigma_prime_.insert(std::move(info));
                prefix.push_back(transform_sort(srcs[i]));
            }
        }
    }

    const Signature& sigma_prime() const { return sigma_prime_; }

    const std::string& ctor_name(const std::string& rel, size_t index) const {
        auto it = ctor_names_.find(rel);
        if (it == ctor_names_.end() || index >= it->second.size())
            throw InternalError("no constructor C" + std::to_string(index) +
                                " for relation '" + rel + "'");
        return it->second[index];
    }

    std::string fresh_c() {
        std::string candidate;
        do {
            ++c_counter_;
            candidate = "_c" + std::to_string(c_counter_);
        } while (used_.count(candidate));
        used_.insert(candidate);
        return candidate;
    }

    std::string fresh_named(const std::string& prefix) {
        int n = 0;
        std::string candidate;
        do {
            ++n;
            candidate = prefix + std::to_string(n);
        } while (used_.count(candidate));
        used_.insert(candidate);
        return candidate;
    }

    // Base-sorted argument: identity on variables and constraint atoms;
    // an o-sorted goal argument is itself a match position.
    GoalPtr tr_base_arg(const GoalPtr& f, Scope& scope) {
        if (f->kind() == GoalKind::Var || f->kind() == GoalKind::Constraint)
            return f;
        return tr_match(f, scope);
    }

    // t of sort o: produces a target formula.
    GoalPtr tr_match(const GoalPtr& t, Scope& scope) {
        switch (t->kind()) {
        case GoalKind::Constraint:
            return t;
        case GoalKind::Var:
            return t;
        case GoalKind::Exists: {
            if (t->binder_sort()->is_arrow())
                throw InternalError(
                    "higher-order existential survived preprocessing");
            scope.emplace_back(t->binder(), t->binder_sort());
            GoalPtr body = tr_match(t->body(), scope);
            scope.pop_back();
            return GoalTerm::exists(t->binder(), t->binder_sort(), body);
        }
        case GoalKind::Lambda:
            throw InternalError("lambda survived preprocessing");
        case GoalKind::App: {
            GoalPtr head = goal_head(t);
            if (head->kind() == GoalKind::LogConst) {
                if (t->fun()->kind() != GoalKind::App ||
                    t->fun()->fun()->kind() != GoalKind::LogConst)
                    throw InternalError(
                        "partially applied logical constant in match position");
                GoalPtr l = tr_match(t->fun()->arg(), scope);
                GoalPtr r = tr_match(t->arg(), scope);
                return t->fun()->fun()->op() == "&&" ? GoalTerm::conj(l, r)
                                                     : GoalTerm::disj(l, r);
            }
            const GoalPtr& e = t->fun();
            const GoalPtr& f = t->arg();
            SortPtr f_sort = quick_sort(f, env_, scope);
            if (f_sort->is_base()) {
                HoleFormula ep = tr_app(e, scope);
                GoalPtr fp = tr_base_arg(f, scope);
                std::string x = fresh_c();
                GoalPtr io = GoalTerm::apps(
                    GoalTerm::top_var("IOMatch_" + surface_base_name(f_sort)),
                    {GoalTerm::var(x), fp});
                return GoalTerm::exists(
                    x, sort_closr(), GoalTerm::conj(ep.instantiate(x), io));
            }
            HoleFormula ep = tr_app(e, scope);
            HoleFormula fp = tr_app(f, scope);
            std::string x = fresh_c();
            std::string y = fresh_c();
            GoalPtr io = GoalTerm::apps(GoalTerm::top_var("IOMatch_closr"),
                                        {GoalTerm::var(x), GoalTerm::var(y)});
            GoalPtr inner = GoalTerm::exists(
                y, sort_closr(), GoalTerm::conj(fp.instantiate(y), io));
            return GoalTerm::exists(x, sort_closr(),
                                    GoalTerm::conj(ep.instantiate(x), inner));
        }
        default:
            throw InternalError("no match rule applies");
        }
    }

    // t of relational arrow sort: produces a HoleFormula.
    HoleFormula tr_app(const GoalPtr& t, Scope& scope) {
        switch (t->kind()) {
        case GoalKind::Var: {
            std::string h = new_hole();
            GoalPtr body = GoalTerm::constraint(
                FoTerm::cmp("=", FoTerm::var(h), FoTerm::var(t->name())));
            return {body, h};
        }
        case GoalKind::TopVar: {
            std::string h = new_hole();
            GoalPtr body = GoalTerm::constraint(FoTerm::cmp(
                "=", FoTerm::var(h), FoTerm::ctor(ctor_name(t->name(), 0), {})));
            return {body, h};
        }
        case GoalKind::App: {
            if (goal_head(t)->kind() == GoalKind::LogConst)
                throw InternalError(
                    "partially applied logical constant in apply position");
            const GoalPtr& e = t->fun();
            const GoalPtr& f = t->arg();
            SortPtr f_sort = quick_sort(f, env_, scope);
            if (f_sort->is_base()) {
                HoleFormula ep = tr_app(e, scope);
                GoalPtr fp = tr_base_arg(f, scope);
                std::string x = fresh_c();
                std::string h = new_hole();
                GoalPtr ap = GoalTerm::apps(
                    GoalTerm::top_var("Apply_" + surface_base_name(f_sort)),
                    {GoalTerm::var(x), fp, GoalTerm::var(h)});
                GoalPtr body = GoalTerm::exists(
                    x, sort_closr(), GoalTerm::conj(ep.instantiate(x), ap));
                return {body, h};
            }
            HoleFormula ep = tr_app(e, scope);
            HoleFormula fp = tr_app(f, scope);
            std::string x = fresh_c();
            std::string y = fresh_c();
            std::string h = new_hole();
            GoalPtr ap = GoalTerm::apps(
                GoalTerm::top_var("Apply_closr"),
                {GoalTerm::var(x), GoalTerm::var(y), GoalTerm::var(h)});
            GoalPtr inner = GoalTerm::exists(
                y, sort_closr(), GoalTerm::conj(fp.instantiate(y), ap));
            GoalPtr body = GoalTerm::exists(
                x, sort_closr(), GoalTerm::conj(ep.instantiate(x), inner));
            return {body, h};
        }
        case GoalKind::Lambda:
            throw InternalError("lambda survived preprocessing");
        default:
            throw InternalError("no apply rule applies");
        }
    }

private:
    std::string new_hole() { return "%hole" + std::to_string(++hole_counter_); }

    const SortEnv& env_;
    std::set<std::string> used_;
    std::map<std::string, std::vector<std::string>> ctor_names_;
    Signature sigma_prime_;
    int c_counter_ = 0;
    int hole_counter_ = 0;
};

SortEnv make_delta_prime() {
    SortEnv delta;
    const SortPtr bases[] = {sort_o(), sort_int(), sort_closr()};
    for (const auto& b : bases)
        delta.insert("Apply_" + surface_base_name(b),
                     Sort::arrows({sort_closr(), b, sort_closr()}, sort_o()));
    for (const auto& b : bases)
        delta.insert("IOMatch_" + surface_base_name(b),
                     Sort::arrows({sort_closr(), b}, sort_o()));
    return delta;
}

// Binders named like generated target relations would collide after the
// transformation; rename them up front.
GoalPtr rename_reserved(const GoalPtr& g, std::set<std::string>& used) {
    switch (g->kind()) {
    case GoalKind::Exists:
    case GoalKind::Lambda: {
        GoalPtr body = rename_reserved(g->body(), used);
        std::string binder = g->binder();
        bool reserved = false;
        for (const auto& r : reserved_target_names())
            if (binder == r) reserved = true;
        if (reserved) {
            std::string renamed = fresh_name(binder + "'", used);
            body = goal_rename(body, binder, renamed);
            binder = renamed;
        }
        if (body == g->body() && binder == g->binder()) return g;
        return g->kind() == GoalKind::Exists
                   ? GoalTerm::exists(binder, g->binder_sort(), body)
                   : GoalTerm::lambda(binder, g->binder_sort(), body);
    }
    case GoalKind::App: {
        GoalPtr f = rename_reserved(g->fun(), used);
        GoalPtr a = rename_reserved(g->arg(), used);
        if (f == g->fun() && a == g->arg()) return g;
        return GoalTerm::app(f, a);
    }
    default:
        return g;
    }
}

}

SortPtr goal_sort(const GoalPtr& t, const SortEnv& env,
                  std::vector<std::pair<std::string, SortPtr>>& scope) {
    return quick_sort(t, env, scope);
}

TransformResult transform_body(const GoalPtr& t, const SortEnv& env) {
    std::set<std::string> used;
    goal_all_names(t, used);
    for (const auto& e : env.entries()) used.insert(e.first);
    Defunc ctx(env, used);
    Scope scope;
    SortPtr s = quick_sort(t, env, scope);
    TransformResult result;
    if (is_o(s)) {
        result.formula = ctx.tr_match(t, scope);
    } else {
        result.hole = ctx.tr_app(t, scope);
    }
    return result;
}

Equation merge_equations(const std::vector<Equation>& eqs) {
    if (eqs.empty()) throw ArityMismatch("cannot merge an empty group");
    if (eqs.size() == 1) return eqs.front();
    std::vector<std::pair<std::string, SortPtr>> binders;
    GoalPtr first = goal_unlambda(eqs.front().body, binders);
    std::vector<GoalPtr> disjuncts{first};
    for (size_t k = 1; k < eqs.size(); ++k) {
        std::vector<std::pair<std::string, SortPtr>> theirs;
        GoalPtr body = goal_unlambda(eqs[k].body, theirs);
        if (theirs.size() != binders.size())
            throw ArityMismatch("equations for '" + eqs.front().name +
                                "' have " + std::to_string(binders.size()) +
                                " and " + std::to_string(theirs.size()) +
                                " binders");
        std::vector<std::pair<std::string, GoalPtr>> subst;
        for (size_t i = 0; i < theirs.size(); ++i)
            if (theirs[i].first != binders[i].first)
                subst.emplace_back(theirs[i].first,
                                   GoalTerm::var(binders[i].first));
        disjuncts.push_back(subst.empty() ? body
                                          : goal_substitute_many(body, subst));
    }
    GoalPtr merged = disjuncts.back();
    for (auto it = disjuncts.rbegin() + 1; it != disjuncts.rend(); ++it)
        merged = GoalTerm::disj(*it, merged);
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        merged = GoalTerm::lambda(it->first, it->second, merged);
    return Equation{eqs.front().name, merged};
}

TargetArtifacts build_target(const Problem& p) {
    // Rename binders that collide with the generated relation names.
    Problem src = p;
    std::set<std::string> used = problem_identifiers(src);
    for (auto& eq : src.program) eq.body = rename_reserved(eq.body, used);
    if (src.goal) src.goal = rename_reserved(src.goal, used);

    TargetArtifacts t;
    t.delta_prime = make_delta_prime();
    Defunc ctx(src.env, problem_identifiers(src));
    t.sigma_prime = ctx.sigma_prime();
    for (const auto& e : src.env.entries())
        if (e.second->is_arrow()) t.source_relations.push_back(e.first);

    // P'_Apply: declaration-major, stage-minor.
    for (const auto& e : src.env.entries()) {
        if (!e.second->is_arrow()) continue;
        std::vector<SortPtr> srcs = argument_sorts(e.second);
        int m = static_cast<int>(srcs.size());
        for (int n = 0; n + 2 <= m; ++n) {
            SortPtr next = transform_sort(srcs[n]);
            std::vector<FoPtr> xs, zs;
            for (int i = 0; i < n; ++i) {
                xs.push_back(FoTerm::var("a" + std::to_string(i + 1)));
                zs.push_back(FoTerm::var("a" + std::to_string(i + 1)));
            }
            zs.push_back(FoTerm::var("y"));
            GoalPtr body = GoalTerm::conj(
                GoalTerm::constraint(FoTerm::cmp(
                    "=", FoTerm::var("x"),
                    FoTerm::ctor(ctx.ctor_name(e.first, n), xs))),
                GoalTerm::constraint(FoTerm::cmp(
                    "=", FoTerm::var("z"),
                    FoTerm::ctor(ctx.ctor_name(e.first, n + 1), zs))));
            for (int i = n; i >= 1; --i)
                body = GoalTerm::exists("a" + std::to_string(i),
                                        transform_sort(srcs[i - 1]), body);
            body = GoalTerm::lambda("z", sort_closr(), body);
            body = GoalTerm::lambda("y", next, body);
            body = GoalTerm::lambda("x", sort_closr(), body);
            t.apply_eqs.push_back(
                Equation{"Apply_" + surface_base_name(next), body});
        }
    }

    // P'_IOMatch: declaration order, program order within one relation.
    for (const auto& e : src.env.entries()) {
        if (!e.second->is_arrow()) continue;
        for (const auto& eq : src.program) {
            if (eq.name != e.first) continue;
            std::vector<std::pair<std::string, SortPtr>> binders;
            GoalPtr core = goal_unlambda(eq.body, binders);
            int m = static_cast<int>(binders.size());
            if (m != static_cast<int>(argument_sorts(e.second).size()))
                throw InternalError("equation '" + eq.name +
                                    "' is not fully eta-expanded");
            Scope scope(binders.begin(), binders.end());
            GoalPtr fprime = ctx.tr_match(core, scope);

            std::set<std::string> taken;
            goal_all_names(fprime, taken);
            for (const auto& b : binders) taken.insert(b.first);
            std::string outer = taken.count("x") ? ctx.fresh_named("_m") : "x";

            std::vector<FoPtr> args;
            for (int i = 0; i + 1 < m; ++i)
                args.push_back(FoTerm::var(binders[i].first));
            GoalPtr body = GoalTerm::conj(
                GoalTerm::constraint(
                    FoTerm::cmp("=", FoTerm::var(outer),
                                FoTerm::ctor(ctx.ctor_name(e.first, m - 1),
                                             args))),
                fprime);
            for (int i = m - 2; i >= 0; --i)
                body = GoalTerm::exists(binders[i].first,
                                        transform_sort(binders[i].second), body);
            SortPtr last = transform_sort(binders[m - 1].second);
            body = GoalTerm::lambda(binders[m - 1].first, last, body);
            body = GoalTerm::lambda(outer, sort_closr(), body);
            t.iomatch_eqs.push_back(
                Equation{"IOMatch_" + surface_base_name(last), body});
        }
    }

    if (src.goal) {
        Scope scope;
        t.goal_prime = ctx.tr_match(src.goal, scope);
    }
    return t;
}

TargetArtifacts prune_unused(const TargetArtifacts& t) {
    std::map<std::string, std::vector<const Equation*>> by_name;
    for (const auto& eq : t.apply_eqs) by_name[eq.name].push_back(&eq);
    for (const auto& eq : t.iomatch_eqs) by_name[eq.name].push_back(&eq);

    std::set<std::string> alive;
    std::vector<std::string> work;
    auto mark = [&](const std::string& n) {
        if (t.delta_prime.contains(n) && alive.insert(n).second)
            work.push_back(n);
    };
    if (t.goal_prime) {
        std::set<std::string> refs;
        goal_top_refs(t.goal_prime, refs);
        for (const auto& r : refs) mark(r);
    } else {
        for (const auto& entry : by_name) mark(entry.first);
    }
    while (!work.empty()) {
        std::string n = work.back();
        work.pop_back();
        auto it = by_name.find(n);
        if (it == by_name.end()) continue;
        for (const Equation* eq : it->second) {
            std::set<std::string> refs;
            goal_top_refs(eq->body, refs);
            for (const auto& r : refs) mark(r);
        }
    }

    TargetArtifacts out;
    out.sigma_prime = t.sigma_prime;
    out.goal_prime = t.goal_prime;
    out.source_relations = t.source_relations;
    for (const auto& e : t.delta_prime.entries())
        if (alive.count(e.first)) out.delta_prime.insert(e.first, e.second);
    for (const auto& eq : t.apply_eqs)
        if (alive.count(eq.name)) out.apply_eqs.push_back(eq);
    for (const auto& eq : t.iomatch_eqs)
        if (alive.count(eq.name)) out.iomatch_eqs.push_back(eq);
    return out;
}

Problem artifacts_to_problem(const TargetArtifacts& t) {
    Problem p;
    p.env = t.delta_prime;
    p.signature = t.sigma_prime;
    p.goal = t.goal_prime;
    std::vector<std::string> order;
    std::map<std::string, std::vector<Equation>> groups;
    auto push = [&](const Equation& eq) {
        if (!groups.count(eq.name)) order.push_back(eq.name);
        groups[eq.name].push_back(eq);
    };
    for (const auto& eq : t.apply_eqs) push(eq);
    for (const auto& eq : t.iomatch_eqs) push(eq);
    for (const auto& name : order)
        p.program.push_back(merge_equations(groups[name]));
    return p;
}

Problem defunctionalize(const Problem& p, bool prune) {
    TargetArtifacts t = build_target(p);
    if (prune) t = prune_unused(t);
    return artifacts_to_problem(t);
}

}

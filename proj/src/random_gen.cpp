#include "hochc/random_gen.hpp"

#include "hochc/sort.hpp"
#include "hochc/term.hpp"

namespace hochc {

namespace {

using Scope = std::vector<std::pair<std::string, SortPtr>>;

struct Gen {
    std::mt19937_64& rng;
    const GenConfig& cfg;
    SortEnv env;
    int counter = 0;

    int pick(int n) {
        return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    }
    bool chance(int percent) { return pick(100) < percent; }
    std::string fresh() { return "x" + std::to_string(++counter); }

    SortPtr random_arg_sort() {
        if (cfg.max_order >= 3 && chance(30)) {
            switch (pick(3)) {
            case 0:
                return Sort::arrow(sort_int(), sort_o());
            case 1:
                return Sort::arrow(sort_o(), sort_o());
            default:
                return Sort::arrows({sort_int(), sort_int()}, sort_o());
            }
        }
        return pick(2) == 0 ? sort_int() : sort_o();
    }

    SortPtr random_rel_sort() {
        int arity = 1 + pick(cfg.max_arity);
        std::vector<SortPtr> args;
        for (int i = 0; i < arity; ++i) args.push_back(random_arg_sort());
        return Sort::arrows(args, sort_o());
    }

    // Argument sorts remaining when `s` is applied down to `target`.
    static bool suffix_args(const SortPtr& s, const SortPtr& target,
                            std::vector<SortPtr>& out) {
        if (sort_equal(s, target)) return true;
        if (!s->is_arrow()) return false;
        out.push_back(s->dom());
        return suffix_args(s->cod(), target, out);
    }

    FoPtr random_int_term(const Scope& scope, bool allow_sum) {
        std::vector<std::string> vars;
        for (const auto& e : scope)
            if (e.second->is_base() && !is_o(e.second) &&
                e.second->base_name() == "int")
                vars.push_back(e.first);
        if (!vars.empty() && chance(60)) {
            std::string v = vars[pick(static_cast<int>(vars.size()))];
            if (allow_sum && chance(40)) {
                FoPtr rhs =
                    chance(50)
                        ? FoTerm::int_lit(cfg.ints[pick(
                              static_cast<int>(cfg.ints.size()))])
                        : FoTerm::var(
                              vars[pick(static_cast<int>(vars.size()))]);
                return FoTerm::binop(chance(70) ? "+" : "-", FoTerm::var(v),
                                     rhs);
            }
            return FoTerm::var(v);
        }
        return FoTerm::int_lit(
            cfg.ints[pick(static_cast<int>(cfg.ints.size()))]);
    }

    GoalPtr random_constraint(const Scope& scope) {
        static const char* ops[] = {"=", "<", "<=", ">", ">="};
        FoPtr l = random_int_term(scope, true);
        FoPtr r = random_int_term(scope, false);
        return GoalTerm::constraint(FoTerm::cmp(ops[pick(5)], l, r));
    }

    // Names (scope first, then env) whose sort can be applied down to
    // `target`; each with the argument sorts to supply.
    struct Head {
        GoalPtr term;
        std::vector<SortPtr> args;
    };
    std::vector<Head> heads_for(const SortPtr& target, const Scope& scope) {
        std::vector<Head> out;
        for (const auto& e : scope) {
            std::vector<SortPtr> args;
            if (suffix_args(e.second, target, args))
                out.push_back({GoalTerm::var(e.first), std::move(args)});
        }
        for (const auto& e : env.entries()) {
            std::vector<SortPtr> args;
            if (suffix_args(e.second, target, args))
                out.push_back({GoalTerm::top_var(e.first), std::move(args)});
        }
        return out;
    }

    GoalPtr gen(const SortPtr& sort, Scope& scope, int depth) {
        if (is_o(sort)) return gen_o(sort, scope, depth);
        // Base argument positions are first-order term positions; sums are
        // excluded so evaluation stays inside a finite carrier.
        if (sort->is_base())
            return GoalTerm::constraint(random_int_term(scope, false));
        return gen_arrow(sort, scope, depth);
    }

    GoalPtr gen_o(const SortPtr& sort, Scope& scope, int depth) {
        if (depth <= 0) return random_constraint(scope);
        switch (pick(6)) {
        case 0:
            return random_constraint(scope);
        case 1:
            return GoalTerm::conj(gen_o(sort, scope, depth - 1),
                                  gen_o(sort, scope, depth - 1));
        case 2:
            return GoalTerm::disj(gen_o(sort, scope, depth - 1),
                                  gen_o(sort, scope, depth - 1));
        case 3: {
            SortPtr bs;
            if (cfg.ho_exists && chance(25))
                bs = chance(50) ? Sort::arrow(sort_int(), sort_o())
                                : Sort::arrow(sort_o(), sort_o());
            else
                bs = pick(2) == 0 ? sort_int() : sort_o();
            std::string name = fresh();
            scope.emplace_back(name, bs);
            GoalPtr body = gen_o(sort, scope, depth - 1);
            scope.pop_back();
            // Use the bound variable when it is easy to.
            if (bs->is_base() && is_o(bs) && chance(60))
                body = GoalTerm::disj(GoalTerm::var(name), body);
            else if (!bs->is_base() && chance(80)) {
                std::vector<SortPtr> args = argument_sorts(bs);
                std::vector<GoalPtr> actuals;
                Scope inner = scope;
                inner.emplace_back(name, bs);
                for (const auto& a : args)
                    actuals.push_back(gen(a, inner, depth - 2));
                body = GoalTerm::conj(
                    GoalTerm::apps(GoalTerm::var(name), actuals), body);
            }
            return GoalTerm::exists(name, bs, body);
        }
        default: {
            std::vector<Head> heads = heads_for(sort, scope);
            if (heads.empty()) return random_constraint(scope);
            Head& h = heads[pick(static_cast<int>(heads.size()))];
            std::vector<GoalPtr> actuals;
            for (const auto& a : h.args)
                actuals.push_back(gen(a, scope, depth - 1));
            return GoalTerm::apps(h.term, actuals);
        }
        }
    }

    GoalPtr gen_arrow(const SortPtr& sort, Scope& scope, int depth) {
        std::vector<Head> heads = heads_for(sort, scope);
        if (depth <= 0) {
            // Exhausted depth: a bare variable of the target sort, else a
            // lambda whose body bottoms out in a constraint. The codomain
            // shrinks structurally, so this always terminates.
            std::vector<Head*> leaves;
            for (auto& h : heads)
                if (h.args.empty()) leaves.push_back(&h);
            if (!leaves.empty())
                return leaves[pick(static_cast<int>(leaves.size()))]->term;
            std::string name = fresh();
            scope.emplace_back(name, sort->dom());
            GoalPtr body = gen(sort->cod(), scope, 0);
            scope.pop_back();
            return GoalTerm::lambda(name, sort->dom(), body);
        }
        bool can_lambda = cfg.lambdas || heads.empty();
        if (can_lambda && (heads.empty() || chance(35))) {
            std::string name = fresh();
            scope.emplace_back(name, sort->dom());
            GoalPtr body = gen(sort->cod(), scope, depth - 1);
            scope.pop_back();
            return GoalTerm::lambda(name, sort->dom(), body);
        }
        Head& h = heads[pick(static_cast<int>(heads.size()))];
        std::vector<GoalPtr> actuals;
        for (const auto& a : h.args)
            actuals.push_back(gen(a, scope, depth - 1));
        return GoalTerm::apps(h.term, actuals);
    }

    Problem build() {
        Problem p;
        int rels = 1 + pick(cfg.max_relations);
        for (int i = 0; i < rels; ++i)
            env.insert("R" + std::to_string(i + 1), random_rel_sort());
        p.env = env;
        for (const auto& e : env.entries()) {
            std::vector<SortPtr> args = argument_sorts(e.second);
            int expand = static_cast<int>(args.size());
            if (cfg.eta_short && chance(40))
                expand = pick(static_cast<int>(args.size()) + 1);
            Scope scope;
            std::vector<std::pair<std::string, SortPtr>> binders;
            for (int i = 0; i < expand; ++i) {
                std::string name = fresh();
                binders.emplace_back(name, args[i]);
                scope.emplace_back(name, args[i]);
            }
            SortPtr remaining = sort_o();
            for (int i = static_cast<int>(args.size()) - 1; i >= expand; --i)
                remaining = Sort::arrow(args[i], remaining);
            GoalPtr body = gen(remaining, scope, cfg.term_depth);
            for (auto it = binders.rbegin(); it != binders.rend(); ++it)
                body = GoalTerm::lambda(it->first, it->second, body);
            p.program.push_back(Equation{e.first, body});
        }
        if (cfg.with_goal) {
            Scope scope;
            p.goal = gen_o(sort_o(), scope, cfg.term_depth);
        }
        return p;
    }
};

}

Problem random_problem(std::mt19937_64& rng, const GenConfig& cfg) {
    Gen g{rng, cfg, SortEnv{}, 0};
    return g.build();
}

Valuation random_valuation(std::mt19937_64& rng, const SortEnv& env,
                           const Universe& u) {
    Valuation v;
    for (const auto& e : env.entries()) {
        std::vector<SemPtr> fr = frame(e.second, u, true);
        v[e.first] = fr[rng() % fr.size()];
    }
    return v;
}

}

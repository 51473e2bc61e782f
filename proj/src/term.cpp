#include "hochc/term.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace hochc {

GoalPtr GoalTerm::var(std::string name) {
    auto t = std::make_shared<GoalTerm>();
    t->kind_ = GoalKind::Var;
    t->name_ = std::move(name);
    return t;
}

GoalPtr GoalTerm::top_var(std::string name) {
    auto t = std::make_shared<GoalTerm>();
    t->kind_ = GoalKind::TopVar;
    t->name_ = std::move(name);
    return t;
}

GoalPtr GoalTerm::log_const(std::string op) {
    auto t = std::make_shared<GoalTerm>();
    t->kind_ = GoalKind::LogConst;
    t->name_ = std::move(op);
    return t;
}

GoalPtr GoalTerm::exists(std::string binder, SortPtr binder_sort, GoalPtr body) {
    auto t = std::make_shared<GoalTerm>();
    t->kind_ = GoalKind::Exists;
    t->name_ = std::move(binder);
    t->sort_ = std::move(binder_sort);
    t->sub_ = {std::move(body)};
    return t;
}

GoalPtr GoalTerm::lambda(std::string binder, SortPtr binder_sort, GoalPtr body) {
    auto t = std::make_shared<GoalTerm>();
    t->kind_ = GoalKind::Lambda;
    t->name_ = std::move(binder);
    t->sort_ = std::move(binder_sort);
    t->sub_ = {std::move(body)};
    return t;
}

GoalPtr GoalTerm::app(GoalPtr fun, GoalPtr arg) {
    auto t = std::make_shared<GoalTerm>();
    t->kind_ = GoalKind::App;
    t->sub_ = {std::move(fun), std::move(arg)};
    return t;
}

GoalPtr GoalTerm::constraint(FoPtr formula) {
    auto t = std::make_shared<GoalTerm>();
    t->kind_ = GoalKind::Constraint;
    t->fo_ = std::move(formula);
    return t;
}

GoalPtr GoalTerm::conj(GoalPtr l, GoalPtr r) {
    return app(app(log_const("&&"), std::move(l)), std::move(r));
}

GoalPtr GoalTerm::disj(GoalPtr l, GoalPtr r) {
    return app(app(log_const("||"), std::move(l)), std::move(r));
}

GoalPtr GoalTerm::apps(GoalPtr fun, const std::vector<GoalPtr>& args) {
    GoalPtr g = std::move(fun);
    for (const auto& a : args) g = app(g, a);
    return g;
}

GoalPtr goal_head(const GoalPtr& g) {
    GoalPtr h = g;
    while (h->kind() == GoalKind::App) h = h->fun();
    return h;
}

GoalPtr goal_uncurry(const GoalPtr& g, std::vector<GoalPtr>& args_out) {
    if (g->kind() != GoalKind::App) return g;
    GoalPtr head = goal_uncurry(g->fun(), args_out);
    args_out.push_back(g->arg());
    return head;
}

GoalPtr goal_unlambda(const GoalPtr& g,
                      std::vector<std::pair<std::string, SortPtr>>& binders_out) {
    GoalPtr body = g;
    while (body->kind() == GoalKind::Lambda) {
        binders_out.emplace_back(body->binder(), body->binder_sort());
        body = body->body();
    }
    return body;
}

namespace {

void free_vars_rec(const GoalPtr& g, std::set<std::string>& bound,
                   std::set<std::string>& out, bool include_top) {
    switch (g->kind()) {
    case GoalKind::Var:
        if (!bound.count(g->name())) out.insert(g->name());
        return;
    case GoalKind::TopVar:
        if (include_top) out.insert(g->name());
        return;
    case GoalKind::LogConst:
        return;
    case GoalKind::Exists:
    case GoalKind::Lambda: {
        bool was_bound = bound.count(g->binder()) > 0;
        bound.insert(g->binder());
        free_vars_rec(g->body(), bound, out, include_top);
        if (!was_bound) bound.erase(g->binder());
        return;
    }
    case GoalKind::App:
        free_vars_rec(g->fun(), bound, out, include_top);
        free_vars_rec(g->arg(), bound, out, include_top);
        return;
    case GoalKind::Constraint: {
        std::set<std::string> fvs;
        fo_collect_vars(g->formula(), fvs);
        for (const auto& v : fvs)
            if (!bound.count(v)) out.insert(v);
        return;
    }
    }
}

}

void goal_free_vars(const GoalPtr& g, std::set<std::string>& out) {
    std::set<std::string> bound;
    free_vars_rec(g, bound, out, true);
}

std::set<std::string> goal_free_vars(const GoalPtr& g) {
    std::set<std::string> out;
    goal_free_vars(g, out);
    return out;
}

void goal_free_term_vars(const GoalPtr& g, std::set<std::string>& out) {
    std::set<std::string> bound;
    free_vars_rec(g, bound, out, false);
}

std::set<std::string> goal_free_term_vars(const GoalPtr& g) {
    std::set<std::string> out;
    goal_free_term_vars(g, out);
    return out;
}

void goal_top_refs(const GoalPtr& g, std::set<std::string>& out) {
    switch (g->kind()) {
    case GoalKind::TopVar: out.insert(g->name()); return;
    case GoalKind::Exists:
    case GoalKind::Lambda: goal_top_refs(g->body(), out); return;
    case GoalKind::App:
        goal_top_refs(g->fun(), out);
        goal_top_refs(g->arg(), out);
        return;
    default: return;
    }
}

void goal_all_names(const GoalPtr& g, std::set<std::string>& out) {
    switch (g->kind()) {
    case GoalKind::Var:
    case GoalKind::TopVar:
        out.insert(g->name());
        return;
    case GoalKind::LogConst:
        return;
    case GoalKind::Exists:
    case GoalKind::Lambda:
        out.insert(g->binder());
        goal_all_names(g->body(), out);
        return;
    case GoalKind::App:
        goal_all_names(g->fun(), out);
        goal_all_names(g->arg(), out);
        return;
    case GoalKind::Constraint:
        fo_collect_vars(g->formula(), out);
        return;
    }
}

std::string fresh_name(const std::string& base, std::set<std::string>& used) {
    std::string candidate = base;
    int k = 0;
    while (used.count(candidate)) {
        ++k;
        candidate = base + "_" + std::to_string(k);
    }
    used.insert(candidate);
    return candidate;
}

namespace {

// A replacement usable inside a constraint: the variable being replaced has
// base sort there, so the replacement must itself be a first-order term.
FoPtr goal_as_foterm(const GoalPtr& g) {
    switch (g->kind()) {
    case GoalKind::Var: return FoTerm::var(g->name());
    case GoalKind::Constraint: return g->formula();
    default:
        throw std::logic_error(
            "substitution into a constraint requires a first-order replacement");
    }
}

GoalPtr subst_rec(const GoalPtr& g, const std::string& var,
                  const GoalPtr& replacement,
                  const std::set<std::string>& repl_free,
                  std::set<std::string>& avoid) {
    switch (g->kind()) {
    case GoalKind::Var:
        return g->name() == var ? replacement : g;
    case GoalKind::TopVar:
    case GoalKind::LogConst:
        return g;
    case GoalKind::Constraint: {
        std::set<std::string> fvs;
        fo_collect_vars(g->formula(), fvs);
        if (!fvs.count(var)) return g;
        return GoalTerm::constraint(
            fo_substitute(g->formula(), var, goal_as_foterm(replacement)));
    }
    case GoalKind::Exists:
    case GoalKind::Lambda: {
        if (g->binder() == var) return g;
        GoalPtr body = g->body();
        std::string binder = g->binder();
        if (repl_free.count(binder) && goal_free_term_vars(body).count(var)) {
            std::string renamed = fresh_name(binder, avoid);
            body = goal_rename(body, binder, renamed);
            binder = renamed;
        }
        GoalPtr new_body = subst_rec(body, var, replacement, repl_free, avoid);
        if (new_body == g->body() && binder == g->binder()) return g;
        return g->kind() == GoalKind::Exists
                   ? GoalTerm::exists(binder, g->binder_sort(), new_body)
                   : GoalTerm::lambda(binder, g->binder_sort(), new_body);
    }
    case GoalKind::App: {
        GoalPtr f = subst_rec(g->fun(), var, replacement, repl_free, avoid);
        GoalPtr a = subst_rec(g->arg(), var, replacement, repl_free, avoid);
        if (f == g->fun() && a == g->arg()) return g;
        return GoalTerm::app(f, a);
    }
    }
    return g;
}

}

GoalPtr goal_substitute(const GoalPtr& g, const std::string& var,
                        const GoalPtr& replacement, std::set<std::string>& avoid) {
    std::set<std::string> repl_free = goal_free_term_vars(replacement);
    goal_all_names(g, avoid);
    for (const auto& n : repl_free) avoid.insert(n);
    return subst_rec(g, var, replacement, repl_free, avoid);
}

GoalPtr goal_substitute(const GoalPtr& g, const std::string& var,
                        const GoalPtr& replacement) {
    std::set<std::string> avoid;
    return goal_substitute(g, var, replacement, avoid);
}

GoalPtr goal_substitute_many(
    const GoalPtr& g, const std::vector<std::pair<std::string, GoalPtr>>& subst) {
    // Route through reserved intermediate names so the individual passes
    // compose into a simultaneous substitution.
    GoalPtr cur = g;
    std::vector<std::string> temps;
    temps.reserve(subst.size());
    for (size_t i = 0; i < subst.size(); ++i) {
        std::string tmp = "%subst" + std::to_string(i);
        temps.push_back(tmp);
        cur = goal_rename(cur, subst[i].first, tmp);
    }
    for (size_t i = 0; i < subst.size(); ++i)
        cur = goal_substitute(cur, temps[i], subst[i].second);
    return cur;
}

GoalPtr goal_rename(const GoalPtr& g, const std::string& from, const std::string& to) {
    return goal_substitute(g, from, GoalTerm::var(to));
}

namespace {

void collect_binders(const GoalPtr& g, std::set<std::string>& out) {
    switch (g->kind()) {
    case GoalKind::Exists:
    case GoalKind::Lambda:
        out.insert(g->binder());
        collect_binders(g->body(), out);
        return;
    case GoalKind::App:
        collect_binders(g->fun(), out);
        collect_binders(g->arg(), out);
        return;
    default:
        return;
    }
}

}

GoalPtr goal_substitute_name(const GoalPtr& g, const std::string& from,
                             const std::string& to) {
    std::set<std::string> binders;
    collect_binders(g, binders);
    if (binders.count(to))
        throw CaptureRisk("substitute: replacement name '" + to +
                          "' occurs bound in the term");
    return goal_rename(g, from, to);
}

namespace {

struct AlphaEnv {
    std::map<std::string, int> a;
    std::map<std::string, int> b;
    int depth = 0;
};

bool name_alpha_equal(const std::string& na, const std::string& nb,
                      const AlphaEnv& env) {
    auto ia = env.a.find(na);
    auto ib = env.b.find(nb);
    if (ia != env.a.end() || ib != env.b.end())
        return ia != env.a.end() && ib != env.b.end() && ia->second == ib->second;
    return na == nb;
}

bool fo_alpha_equal(const FoPtr& a, const FoPtr& b, const AlphaEnv& env) {
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
    case FoKind::IntLit: return a->value() == b->value();
    case FoKind::Var: return name_alpha_equal(a->name(), b->name(), env);
    case FoKind::BinOp:
    case FoKind::Cmp:
    case FoKind::Ctor: {
        if (a->name() != b->name()) return false;
        if (a->args().size() != b->args().size()) return false;
        for (size_t i = 0; i < a->args().size(); ++i)
            if (!fo_alpha_equal(a->args()[i], b->args()[i], env)) return false;
        return true;
    }
    }
    return false;
}

bool alpha_rec(const GoalPtr& a, const GoalPtr& b, AlphaEnv env) {
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
    case GoalKind::Var:
        return name_alpha_equal(a->name(), b->name(), env);
    case GoalKind::TopVar:
        return a->name() == b->name();
    case GoalKind::LogConst:
        return a->op() == b->op();
    case GoalKind::Exists:
    case GoalKind::Lambda: {
        if (!sort_equal(a->binder_sort(), b->binder_sort())) return false;
        env.a[a->binder()] = env.depth;
        env.b[b->binder()] = env.depth;
        ++env.depth;
        return alpha_rec(a->body(), b->body(), std::move(env));
    }
    case GoalKind::App:
        return alpha_rec(a->fun(), b->fun(), env) &&
               alpha_rec(a->arg(), b->arg(), env);
    case GoalKind::Constraint:
        return fo_alpha_equal(a->formula(), b->formula(), env);
    }
    return false;
}

}

bool goal_alpha_equal(const GoalPtr& a, const GoalPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    return alpha_rec(a, b, AlphaEnv{});
}

bool goal_equal(const GoalPtr& a, const GoalPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
    case GoalKind::Var:
    case GoalKind::TopVar:
        return a->name() == b->name();
    case GoalKind::LogConst:
        return a->op() == b->op();
    case GoalKind::Exists:
    case GoalKind::Lambda:
        return a->binder() == b->binder() &&
               sort_equal(a->binder_sort(), b->binder_sort()) &&
               goal_equal(a->body(), b->body());
    case GoalKind::App:
        return goal_equal(a->fun(), b->fun()) && goal_equal(a->arg(), b->arg());
    case GoalKind::Constraint:
        return fo_equal(a->formula(), b->formula());
    }
    return false;
}

namespace {

// Print precedence: || 0, && 1, comparison 2, +/- 3, application 4, atom 5.
int fo_level(const FoPtr& t) {
    switch (t->kind()) {
    case FoKind::Cmp: return 2;
    case FoKind::BinOp: return 3;
    case FoKind::Ctor: return t->args().empty() ? 5 : 4;
    default: return 5;
    }
}

void print_goal(std::ostringstream& os, const GoalPtr& g, int min_prec) {
    switch (g->kind()) {
    case GoalKind::Var:
    case GoalKind::TopVar:
        os << g->name();
        return;
    case GoalKind::LogConst:
        os << "(" << g->op() << ")";
        return;
    case GoalKind::Exists:
    case GoalKind::Lambda: {
        bool paren = min_prec > 0;
        if (paren) os << "(";
        os << (g->kind() == GoalKind::Exists ? "E " : "\\") << g->binder() << ": "
           << sort_to_string(g->binder_sort()) << ". ";
        print_goal(os, g->body(), 0);
        if (paren) os << ")";
        return;
    }
    case GoalKind::App: {
        if (g->fun()->kind() == GoalKind::App &&
            g->fun()->fun()->kind() == GoalKind::LogConst) {
            const std::string& op = g->fun()->fun()->op();
            // Right-associative, matching the parser.
            int level = op == "&&" ? 1 : 0;
            bool paren = min_prec > level;
            if (paren) os << "(";
            print_goal(os, g->fun()->arg(), level + 1);
            os << " " << op << " ";
            print_goal(os, g->arg(), level);
            if (paren) os << ")";
            return;
        }
        bool paren = min_prec > 4;
        if (paren) os << "(";
        print_goal(os, g->fun(), 4);
        os << " ";
        print_goal(os, g->arg(), 5);
        if (paren) os << ")";
        return;
    }
    case GoalKind::Constraint: {
        bool paren = min_prec > fo_level(g->formula());
        if (paren) os << "(";
        os << fo_to_string(g->formula());
        if (paren) os << ")";
        return;
    }
    }
}

}

std::string goal_to_string(const GoalPtr& g) {
    std::ostringstream os;
    print_goal(os, g, 0);
    return os.str();
}

}

#include "hochc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "hochc/defunc.hpp"
#include "hochc/sort.hpp"
#include "hochc/term.hpp"

namespace hochc {

SemPtr SemValue::make_base(int value, bool is_bool) {
    auto v = std::make_shared<SemValue>();
    v->kind = SemKind::Base;
    v->base = value;
    v->is_bool = is_bool;
    return v;
}

SemPtr SemValue::make_func(std::vector<std::pair<SemPtr, SemPtr>> table) {
    auto v = std::make_shared<SemValue>();
    v->kind = SemKind::Func;
    v->table = std::move(table);
    return v;
}

SemPtr SemValue::make_closure(std::string rel, std::vector<SemPtr> args) {
    auto v = std::make_shared<SemValue>();
    v->kind = SemKind::Closure;
    v->rel = std::move(rel);
    v->args = std::move(args);
    return v;
}

int sem_compare(const SemPtr& a, const SemPtr& b) {
    if (a.get() == b.get()) return 0;
    if (a->kind != b->kind)
        return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
    switch (a->kind) {
    case SemKind::Base:
        if (a->is_bool != b->is_bool) return a->is_bool ? -1 : 1;
        if (a->base != b->base) return a->base < b->base ? -1 : 1;
        return 0;
    case SemKind::Func: {
        if (a->table.size() != b->table.size())
            return a->table.size() < b->table.size() ? -1 : 1;
        for (size_t i = 0; i < a->table.size(); ++i) {
            if (int c = sem_compare(a->table[i].first, b->table[i].first))
                return c;
            if (int c = sem_compare(a->table[i].second, b->table[i].second))
                return c;
        }
        return 0;
    }
    case SemKind::Closure: {
        if (int c = a->rel.compare(b->rel)) return c < 0 ? -1 : 1;
        if (a->args.size() != b->args.size())
            return a->args.size() < b->args.size() ? -1 : 1;
        for (size_t i = 0; i < a->args.size(); ++i)
            if (int c = sem_compare(a->args[i], b->args[i])) return c;
        return 0;
    }
    }
    return 0;
}

bool sem_equal(const SemPtr& a, const SemPtr& b) {
    return sem_compare(a, b) == 0;
}

bool sem_leq(const SemPtr& a, const SemPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case SemKind::Base:
        if (a->is_bool && b->is_bool) return a->base <= b->base;
        return a->base == b->base;
    case SemKind::Func: {
        if (a->table.size() != b->table.size()) return false;
        for (size_t i = 0; i < a->table.size(); ++i) {
            if (!sem_equal(a->table[i].first, b->table[i].first)) return false;
            if (!sem_leq(a->table[i].second, b->table[i].second)) return false;
        }
        return true;
    }
    case SemKind::Closure:
        return sem_equal(a, b);
    }
    return false;
}

SemPtr sem_join(const SemPtr& a, const SemPtr& b) {
    if (a->kind != b->kind)
        throw SortMismatch("join of values of different shapes");
    switch (a->kind) {
    case SemKind::Base:
        if (a->is_bool && b->is_bool)
            return SemValue::make_base(std::max(a->base, b->base), true);
        if (a->base == b->base && a->is_bool == b->is_bool) return a;
        throw SortMismatch("join of distinct discrete values");
    case SemKind::Func: {
        if (a->table.size() != b->table.size())
            throw SortMismatch("join of functions over different domains");
        std::vector<std::pair<SemPtr, SemPtr>> table;
        table.reserve(a->table.size());
        for (size_t i = 0; i < a->table.size(); ++i) {
            if (!sem_equal(a->table[i].first, b->table[i].first))
                throw SortMismatch("join of functions over different domains");
            table.emplace_back(a->table[i].first,
                               sem_join(a->table[i].second, b->table[i].second));
        }
        return SemValue::make_func(std::move(table));
    }
    case SemKind::Closure:
        if (sem_equal(a, b)) return a;
        throw SortMismatch("join of distinct closures");
    }
    throw SortMismatch("unreachable");
}

SemPtr sem_apply(const SemPtr& f, const SemPtr& a) {
    if (f->kind != SemKind::Func)
        throw SortMismatch("application of a non-function value");
    size_t lo = 0, hi = f->table.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        int c = sem_compare(f->table[mid].first, a);
        if (c == 0) return f->table[mid].second;
        if (c < 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    throw SortMismatch("application argument outside the function's domain");
}

std::string sem_to_string(const SemPtr& v) {
    switch (v->kind) {
    case SemKind::Base:
        if (v->is_bool) return v->base ? "tt" : "ff";
        return std::to_string(v->base);
    case SemKind::Closure: {
        std::string out = "(" + v->rel;
        for (const auto& a : v->args) out += ", " + sem_to_string(a);
        return out + ")";
    }
    case SemKind::Func: {
        std::string out = "{";
        bool first = true;
        for (const auto& e : v->table) {
            if (!first) out += ", ";
            first = false;
            out += sem_to_string(e.first) + " -> " + sem_to_string(e.second);
        }
        return out + "}";
    }
    }
    return "?";
}

Universe Universe::int_range(int lo, int hi) {
    Universe u;
    u.ints.clear();
    for (int i = lo; i <= hi; ++i) u.ints.push_back(i);
    return u;
}

namespace {

struct SemLess {
    bool operator()(const SemPtr& a, const SemPtr& b) const {
        return sem_compare(a, b) < 0;
    }
};

struct FrameCache {
    const Universe& u;
    bool monotone;
    std::map<std::string, std::vector<SemPtr>> memo;

    const std::vector<SemPtr>& of(const SortPtr& s) {
        std::string key = sort_to_string(s);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        return memo.emplace(key, build(s)).first->second;
    }

    std::vector<SemPtr> build(const SortPtr& s) {
        if (s->is_base()) {
            if (is_o(s))
                return {SemValue::make_base(0, true),
                        SemValue::make_base(1, true)};
            if (s->base_name() == "int") {
                std::vector<SemPtr> out;
                for (int n : u.ints) out.push_back(SemValue::make_base(n, false));
                return out;
            }
            return u.closures;
        }
        const std::vector<SemPtr>& dom = of(s->dom());
        const std::vector<SemPtr>& cod = of(s->cod());
        if (cod.empty() || dom.empty())
            throw Explosion("empty carrier under an arrow sort");
        double full = std::pow(static_cast<double>(cod.size()),
                               static_cast<double>(dom.size()));
        if (!monotone && full > static_cast<double>(u.cap))
            throw Explosion("frame of " + sort_to_string(s) + " exceeds cap");
        size_t n = dom.size(), m = cod.size();
        std::vector<std::vector<bool>> dle(n, std::vector<bool>(n)),
            cle(m, std::vector<bool>(m));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) dle[i][j] = sem_leq(dom[i], dom[j]);
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j) cle[i][j] = sem_leq(cod[i], cod[j]);
        std::vector<SemPtr> out;
        std::vector<size_t> pick(n, 0);
        std::function<void(size_t)> rec = [&](size_t i) {
            if (i == n) {
                std::vector<std::pair<SemPtr, SemPtr>> table;
                table.reserve(n);
                for (size_t k = 0; k < n; ++k)
                    table.emplace_back(dom[k], cod[pick[k]]);
                out.push_back(SemValue::make_func(std::move(table)));
                if (out.size() > u.cap)
                    throw Explosion("frame of " + sort_to_string(s) +
                                    " exceeds cap");
                return;
            }
            for (size_t k = 0; k < m; ++k) {
                if (monotone) {
                    bool ok = true;
                    for (size_t j = 0; j < i && ok; ++j) {
                        if (dle[j][i] && !cle[pick[j]][k]) ok = false;
                        if (dle[i][j] && !cle[k][pick[j]]) ok = false;
                    }
                    if (!ok) continue;
                }
                pick[i] = k;
                rec(i + 1);
            }
        };
        rec(0);
        return out;
    }
};

SemPtr extreme(const SortPtr& s, FrameCache& fc, bool top) {
    if (is_o(s)) return SemValue::make_base(top ? 1 : 0, true);
    if (s->is_base())
        throw SortMismatch("no lattice extreme for discrete sort " +
                           sort_to_string(s));
    const std::vector<SemPtr>& dom = fc.of(s->dom());
    SemPtr inner = extreme(s->cod(), fc, top);
    std::vector<std::pair<SemPtr, SemPtr>> table;
    table.reserve(dom.size());
    for (const auto& d : dom) table.emplace_back(d, inner);
    return SemValue::make_func(std::move(table));
}

// Interprets a first-order term; `look` resolves variables and `sig`
// resolves constructors.
SemPtr fo_sem_eval(const FoPtr& t,
                   const std::function<SemPtr(const std::string&)>& look,
                   const Signature* sig) {
    switch (t->kind()) {
    case FoKind::IntLit:
        return SemValue::make_base(t->value(), false);
    case FoKind::Var:
        return look(t->name());
    case FoKind::BinOp: {
        SemPtr l = fo_sem_eval(t->lhs(), look, sig);
        SemPtr r = fo_sem_eval(t->rhs(), look, sig);
        if (l->kind != SemKind::Base || r->kind != SemKind::Base)
            throw SortMismatch("arithmetic on non-integer values");
        int v = t->op() == "+" ? l->base + r->base : l->base - r->base;
        return SemValue::make_base(v, false);
    }
    case FoKind::Cmp: {
        SemPtr l = fo_sem_eval(t->lhs(), look, sig);
        SemPtr r = fo_sem_eval(t->rhs(), look, sig);
        bool v;
        if (t->op() == "=")
            v = sem_equal(l, r);
        else {
            if (l->kind != SemKind::Base || r->kind != SemKind::Base)
                throw SortMismatch("comparison of non-integer values");
            if (t->op() == "<")
                v = l->base < r->base;
            else if (t->op() == "<=")
                v = l->base <= r->base;
            else if (t->op() == ">")
                v = l->base > r->base;
            else
                v = l->base >= r->base;
        }
        return SemValue::make_base(v ? 1 : 0, true);
    }
    case FoKind::Ctor: {
        if (!sig)
            throw SortMismatch("constructor '" + t->name() +
                               "' without a signature");
        const CtorInfo* info = sig->find(t->name());
        if (!info)
            throw SortMismatch("unknown constructor '" + t->name() + "'");
        std::vector<SemPtr> args;
        args.reserve(t->args().size());
        for (const auto& a : t->args())
            args.push_back(fo_sem_eval(a, look, sig));
        return SemValue::make_closure(info->rel, std::move(args));
    }
    }
    throw SortMismatch("unreachable");
}

struct EvalCtx {
    FrameCache frames;
    const Signature* sig;
};

SemPtr eval_rec(const GoalPtr& t, EvalCtx& ctx,
                std::map<std::string, SemPtr>& env) {
    switch (t->kind()) {
    case GoalKind::Var:
    case GoalKind::TopVar: {
        auto it = env.find(t->name());
        if (it == env.end())
            throw SortMismatch("unbound name '" + t->name() +
                               "' during evaluation");
        return it->second;
    }
    case GoalKind::LogConst: {
        bool conj = t->op() == "&&";
        std::vector<std::pair<SemPtr, SemPtr>> outer;
        for (int a = 0; a <= 1; ++a) {
            std::vector<std::pair<SemPtr, SemPtr>> inner;
            for (int b = 0; b <= 1; ++b)
                inner.emplace_back(
                    SemValue::make_base(b, true),
                    SemValue::make_base(conj ? (a && b) : (a || b), true));
            outer.emplace_back(SemValue::make_base(a, true),
                               SemValue::make_func(std::move(inner)));
        }
        return SemValue::make_func(std::move(outer));
    }
    case GoalKind::Exists: {
        const std::vector<SemPtr>& dom = ctx.frames.of(t->binder_sort());
        auto saved = env.find(t->binder());
        std::optional<SemPtr> old;
        if (saved != env.end()) old = saved->second;
        int best = 0;
        for (const auto& v : dom) {
            env[t->binder()] = v;
            SemPtr r = eval_rec(t->body(), ctx, env);
            if (r->base == 1) {
                best = 1;
                break;
            }
        }
        if (old)
            env[t->binder()] = *old;
        else
            env.erase(t->binder());
        return SemValue::make_base(best, true);
    }
    case GoalKind::Lambda: {
        const std::vector<SemPtr>& dom = ctx.frames.of(t->binder_sort());
        auto it = env.find(t->binder());
        std::optional<SemPtr> old;
        if (it != env.end()) old = it->second;
        std::vector<std::pair<SemPtr, SemPtr>> table;
        table.reserve(dom.size());
        for (const auto& v : dom) {
            env[t->binder()] = v;
            table.emplace_back(v, eval_rec(t->body(), ctx, env));
        }
        if (old)
            env[t->binder()] = *old;
        else
            env.erase(t->binder());
        return SemValue::make_func(std::move(table));
    }
    case GoalKind::App: {
        SemPtr f = eval_rec(t->fun(), ctx, env);
        SemPtr a = eval_rec(t->arg(), ctx, env);
        return sem_apply(f, a);
    }
    case GoalKind::Constraint: {
        auto look = [&](const std::string& n) -> SemPtr {
            auto it = env.find(n);
            if (it == env.end())
                throw SortMismatch("unbound constraint variable '" + n + "'");
            return it->second;
        };
        return fo_sem_eval(t->formula(), look, ctx.sig);
    }
    }
    throw SortMismatch("unreachable");
}

long long frame_height(const SortPtr& s, FrameCache& fc) {
    if (is_o(s)) return 1;
    if (s->is_base()) return 0;
    long long d = static_cast<long long>(fc.of(s->dom()).size());
    long long h = frame_height(s->cod(), fc);
    if (h != 0 && d > static_cast<long long>(1e15) / h)
        throw Explosion("lattice height overflow");
    return d * h;
}

}

std::vector<SemPtr> frame(const SortPtr& s, const Universe& u, bool monotone) {
    FrameCache fc{u, monotone, {}};
    return fc.of(s);
}

bool is_monotone(const SemPtr& f) {
    if (f->kind != SemKind::Func) return true;
    for (const auto& entry : f->table)
        if (!is_monotone(entry.second)) return false;
    for (size_t i = 0; i < f->table.size(); ++i)
        for (size_t j = 0; j < f->table.size(); ++j)
            if (sem_leq(f->table[i].first, f->table[j].first) &&
                !sem_leq(f->table[i].second, f->table[j].second))
                return false;
    return true;
}

SemPtr eval(const GoalPtr& t, const Universe& u, const Valuation& v,
            bool monotone) {
    EvalCtx ctx{FrameCache{u, monotone, {}}, u.signature};
    std::map<std::string, SemPtr> env(v.begin(), v.end());
    return eval_rec(t, ctx, env);
}

SemPtr sem_bottom(const SortPtr& s, const Universe& u, bool monotone) {
    FrameCache fc{u, monotone, {}};
    return extreme(s, fc, false);
}

SemPtr sem_top(const SortPtr& s, const Universe& u, bool monotone) {
    FrameCache fc{u, monotone, {}};
    return extreme(s, fc, true);
}

Valuation one_step(const std::vector<Equation>& program, const SortEnv& env,
                   const Universe& u, const Valuation& v, bool monotone) {
    EvalCtx ctx{FrameCache{u, monotone, {}}, u.signature};
    Valuation out;
    for (const auto& e : env.entries()) {
        SemPtr acc;
        for (const auto& eq : program) {
            if (eq.name != e.first) continue;
            std::map<std::string, SemPtr> scope(v.begin(), v.end());
            SemPtr val = eval_rec(eq.body, ctx, scope);
            acc = acc ? sem_join(acc, val) : val;
        }
        if (!acc) acc = extreme(e.second, ctx.frames, false);
        out[e.first] = acc;
    }
    return out;
}

Valuation lfp(const std::vector<Equation>& program, const SortEnv& env,
              const Universe& u, bool monotone, LfpStats* stats) {
    FrameCache fc{u, monotone, {}};
    Valuation v;
    long long height = 0;
    for (const auto& e : env.entries()) {
        v[e.first] = extreme(e.second, fc, false);
        height += frame_height(e.second, fc);
    }
    int steps = 0;
    for (;;) {
        Valuation next = one_step(program, env, u, v, monotone);
        bool same = true;
        for (const auto& e : next)
            if (!sem_equal(e.second, v.at(e.first))) {
                same = false;
                break;
            }
        if (same) break;
        v = std::move(next);
        ++steps;
        if (steps > height + 1)
            throw Explosion("fixpoint iteration exceeded the lattice height");
    }
    if (stats) {
        stats->steps = steps;
        stats->height = height;
    }
    return v;
}

bool is_solvable(const Problem& p, const Universe& u) {
    Universe u2 = u;
    u2.signature = &p.signature;
    Valuation alpha = lfp(p.program, p.env, u2, true);
    if (!p.goal) return true;
    SemPtr g = eval(p.goal, u2, alpha, true);
    return g->base == 0;
}

std::vector<SemPtr> closure_universe(const SortEnv& env, const Universe& u,
                                     int depth) {
    std::vector<SemPtr> ints_frame, o_frame;
    for (int n : u.ints) ints_frame.push_back(SemValue::make_base(n, false));
    o_frame = {SemValue::make_base(0, true), SemValue::make_base(1, true)};

    // Source sort of a partial application (X, t1...tk): the k-th suffix of
    // X's declared sort.
    auto closure_source_sort = [&](const SemPtr& c) {
        SortPtr s = env.find(c->rel);
        for (size_t i = 0; i < c->args.size() && s; ++i) s = s->cod();
        return s;
    };

    std::vector<SemPtr> cur;
    for (int d = 0; d <= depth; ++d) {
        std::vector<SemPtr> next;
        for (const auto& e : env.entries()) {
            if (!e.second->is_arrow()) continue;
            std::vector<SortPtr> srcs = argument_sorts(e.second);
            size_t m = srcs.size();
            for (size_t k = 0; k < m; ++k) {
                // Arrow positions admit only closures of the declared
                // source sort; the target's closr erases this distinction
                // but the relational model pairs well-sorted terms only.
                std::vector<const std::vector<SemPtr>*> carriers(k);
                std::vector<std::vector<SemPtr>> typed(k);
                bool feasible = true;
                for (size_t i = 0; i < k && feasible; ++i) {
                    SortPtr s = transform_sort(srcs[i]);
                    if (is_o(s))
                        carriers[i] = &o_frame;
                    else if (s->base_name() == "int")
                        carriers[i] = &ints_frame;
                    else {
                        for (const auto& v : cur) {
                            SortPtr vs = closure_source_sort(v);
                            if (vs && sort_equal(vs, srcs[i]))
                                typed[i].push_back(v);
                        }
                        carriers[i] = &typed[i];
                    }
                    if (carriers[i]->empty()) feasible = false;
                }
                if (!feasible) continue;
                std::vector<SemPtr> args(k);
                std::function<void(size_t)> rec = [&](size_t i) {
                    if (i == k) {
                        next.push_back(SemValue::make_closure(
                            e.first, std::vector<SemPtr>(args.begin(),
                                                         args.begin() + k)));
                        if (next.size() > u.cap)
                            throw Explosion("closure universe exceeds cap");
                        return;
                    }
                    for (const auto& v : *carriers[i]) {
                        args[i] = v;
                        rec(i + 1);
                    }
                };
                rec(0);
            }
        }
        std::sort(next.begin(), next.end(),
                  [](const SemPtr& a, const SemPtr& b) {
                      return sem_compare(a, b) < 0;
                  });
        next.erase(std::unique(next.begin(), next.end(),
                               [](const SemPtr& a, const SemPtr& b) {
                                   return sem_compare(a, b) == 0;
                               }),
                   next.end());
        cur = std::move(next);
    }
    return cur;
}

SemPtr expand(const SemPtr& c, const Valuation& src_valuation) {
    if (c->kind != SemKind::Closure) return c;
    auto it = src_valuation.find(c->rel);
    if (it == src_valuation.end())
        throw SortMismatch("closure head '" + c->rel +
                           "' is not in the valuation");
    SemPtr val = it->second;
    for (const auto& a : c->args) val = sem_apply(val, expand(a, src_valuation));
    return val;
}

namespace {

struct ExtractCtx {
    std::vector<SemPtr> cu;
    std::set<SemPtr, SemLess> cu_set;
    std::vector<SemPtr> o_frame, int_frame;
    std::map<std::string, int> arity;

    ExtractCtx(const SortEnv& env, const Universe& u, int depth) {
        cu = closure_universe(env, u, depth);
        cu_set.insert(cu.begin(), cu.end());
        o_frame = {SemValue::make_base(0, true), SemValue::make_base(1, true)};
        for (int n : u.ints) int_frame.push_back(SemValue::make_base(n, false));
        for (const auto& e : env.entries())
            if (e.second->is_arrow())
                arity[e.first] =
                    static_cast<int>(argument_sorts(e.second).size());
    }

    const std::vector<SemPtr>& carrier(const std::string& b) const {
        if (b == "bool") return o_frame;
        if (b == "int") return int_frame;
        return cu;
    }

    // (X, t1...tk) extended by n, valid only below full arity and only when
    // the result lies in the closure universe.
    SemPtr append(const SemPtr& m1, const SemPtr& n) const {
        auto it = arity.find(m1->rel);
        if (it == arity.end()) return nullptr;
        if (static_cast<int>(m1->args.size()) + 1 >= it->second) return nullptr;
        std::vector<SemPtr> args = m1->args;
        args.push_back(n);
        SemPtr c = SemValue::make_closure(m1->rel, std::move(args));
        return cu_set.count(c) ? c : nullptr;
    }

    int iomatch(const SemPtr& m, const SemPtr& n,
                const Valuation& alpha) const {
        try {
            SemPtr f = expand(m, alpha);
            SemPtr r = sem_apply(f, expand(n, alpha));
            if (r->kind != SemKind::Base || !r->is_bool) return 0;
            return r->base;
        } catch (const SortMismatch&) {
            return 0;
        }
    }
};

const char* kBaseNames[3] = {"bool", "int", "closr"};

}

Valuation extract_valuation(const Problem& src, const Universe& u, int depth,
                            const Valuation& alpha) {
    ExtractCtx ctx(src.env, u, depth);
    size_t cu_n = ctx.cu.size();
    for (const char* b : kBaseNames) {
        double size = static_cast<double>(cu_n) * ctx.carrier(b).size() *
                      (cu_n + 1.0);
        if (size > static_cast<double>(u.cap))
            throw Explosion("extracted valuation exceeds cap");
    }
    Valuation out;
    for (const char* b : kBaseNames) {
        const std::vector<SemPtr>& bs = ctx.carrier(b);
        std::vector<std::pair<SemPtr, SemPtr>> apply_outer, match_outer;
        for (const auto& m1 : ctx.cu) {
            std::vector<std::pair<SemPtr, SemPtr>> apply_mid, match_mid;
            for (const auto& n : bs) {
                SemPtr target = ctx.append(m1, n);
                std::vector<std::pair<SemPtr, SemPtr>> apply_in;
                for (const auto& m2 : ctx.cu)
                    apply_in.emplace_back(
                        m2, SemValue::make_base(
                                target && sem_equal(target, m2) ? 1 : 0, true));
                apply_mid.emplace_back(
                    n, SemValue::make_func(std::move(apply_in)));
                match_mid.emplace_back(
                    n, SemValue::make_base(ctx.iomatch(m1, n, alpha), true));
            }
            apply_outer.emplace_back(
                m1, SemValue::make_func(std::move(apply_mid)));
            match_outer.emplace_back(
                m1, SemValue::make_func(std::move(match_mid)));
        }
        out["Apply_" + std::string(b)] =
            SemValue::make_func(std::move(apply_outer));
        out["IOMatch_" + std::string(b)] =
            SemValue::make_func(std::move(match_outer));
    }
    return out;
}

bool TupleLess::operator()(const Tuple& a, const Tuple& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = 0; i < a.size(); ++i)
        if (int c = sem_compare(a[i], b[i])) return c < 0;
    return false;
}

namespace {

// Structural equality; the default operator== would compare shared pointers.
bool tuple_sets_equal(const TupleSet& a, const TupleSet& b) {
    if (a.size() != b.size()) return false;
    TupleLess less;
    auto ib = b.begin();
    for (auto ia = a.begin(); ia != a.end(); ++ia, ++ib)
        if (less(*ia, *ib) || less(*ib, *ia)) return false;
    return true;
}

bool fo_valuations_equal(const FoValuation& a, const FoValuation& b) {
    if (a.size() != b.size()) return false;
    auto ib = b.begin();
    for (auto ia = a.begin(); ia != a.end(); ++ia, ++ib)
        if (ia->first != ib->first || !tuple_sets_equal(ia->second, ib->second))
            return false;
    return true;
}

}

FoValuation extract_valuation_sets(const Problem& src, const Universe& u,
                                   int depth, const Valuation& alpha) {
    ExtractCtx ctx(src.env, u, depth);
    FoValuation out;
    for (const char* b : kBaseNames) {
        TupleSet apply_set, match_set;
        for (const auto& m1 : ctx.cu) {
            for (const auto& n : ctx.carrier(b)) {
                if (SemPtr m2 = ctx.append(m1, n)) apply_set.insert({m1, n, m2});
                if (ctx.iomatch(m1, n, alpha) == 1) match_set.insert({m1, n});
            }
        }
        out["Apply_" + std::string(b)] = std::move(apply_set);
        out["IOMatch_" + std::string(b)] = std::move(match_set);
    }
    return out;
}

namespace {

// Sparse evaluation of first-order bodies: existentials and equation binders
// are solved by scanning conjuncts for a determining equality, constructor
// destructuring, or relation atom before falling back to carrier
// enumeration.
struct FoEngine {
    const Universe& u;
    const FoValuation& val;
    std::set<SemPtr, SemLess> closr_set;
    std::vector<SemPtr> o_frame, int_frame;
    std::map<std::string, SemPtr> binding;

    FoEngine(const Universe& universe, const FoValuation& valuation)
        : u(universe), val(valuation) {
        closr_set.insert(u.closures.begin(), u.closures.end());
        o_frame = {SemValue::make_base(0, true), SemValue::make_base(1, true)};
        for (int n : u.ints) int_frame.push_back(SemValue::make_base(n, false));
    }

    const std::vector<SemPtr>& carrier(const SortPtr& s) const {
        if (is_o(s)) return o_frame;
        if (s->is_base() && s->base_name() == "int") return int_frame;
        if (s->is_base()) return u.closures;
        throw SortMismatch("first-order engine met sort " + sort_to_string(s));
    }

    bool in_carrier(const SortPtr& s, const SemPtr& v) const {
        if (is_o(s)) return v->kind == SemKind::Base && v->is_bool;
        if (s->base_name() == "int") {
            if (v->kind != SemKind::Base || v->is_bool) return false;
            return std::find(u.ints.begin(), u.ints.end(), v->base) !=
                   u.ints.end();
        }
        return closr_set.count(v) != 0;
    }

    SemPtr look(const std::string& n) const {
        auto it = binding.find(n);
        if (it == binding.end())
            throw SortMismatch("unbound variable '" + n + "'");
        return it->second;
    }

    bool fo_closed(const FoPtr& t) const {
        switch (t->kind()) {
        case FoKind::IntLit:
            return true;
        case FoKind::Var:
            return binding.count(t->name()) != 0;
        case FoKind::BinOp:
        case FoKind::Cmp:
            return fo_closed(t->lhs()) && fo_closed(t->rhs());
        case FoKind::Ctor:
            for (const auto& a : t->args())
                if (!fo_closed(a)) return false;
            return true;
        }
        return false;
    }

    SemPtr fo_value(const FoPtr& t) const {
        return fo_sem_eval(
            t, [this](const std::string& n) { return look(n); }, u.signature);
    }

    SemPtr term_value(const GoalPtr& g) {
        switch (g->kind()) {
        case GoalKind::Var:
            return look(g->name());
        case GoalKind::Constraint:
            return fo_value(g->formula());
        default:
            return SemValue::make_base(holds(g) ? 1 : 0, true);
        }
    }

    bool term_closed(const GoalPtr& g) const {
        if (g->kind() == GoalKind::Var) return binding.count(g->name()) != 0;
        if (g->kind() == GoalKind::Constraint) return fo_closed(g->formula());
        return false;
    }

    static void flatten_conj(const GoalPtr& g, std::vector<GoalPtr>& out) {
        if (g->kind() == GoalKind::App) {
            GoalPtr head = goal_head(g);
            if (head->kind() == GoalKind::LogConst && head->op() == "&&") {
                flatten_conj(g->fun()->arg(), out);
                flatten_conj(g->arg(), out);
                return;
            }
        }
        out.push_back(g);
    }

    // Candidate values for `var` implied by one conjunct, or nullopt.
    std::optional<std::vector<SemPtr>> determine(
        const std::string& var, const std::vector<GoalPtr>& conjuncts) {
        for (const auto& c : conjuncts) {
            if (c->kind() == GoalKind::Constraint) {
                const FoPtr& f = c->formula();
                if (f->kind() != FoKind::Cmp || f->op() != "=") continue;
                for (int side = 0; side < 2; ++side) {
                    const FoPtr& l = side == 0 ? f->lhs() : f->rhs();
                    const FoPtr& r = side == 0 ? f->rhs() : f->lhs();
                    if (l->kind() == FoKind::Var && l->name() == var &&
                        fo_closed(r))
                        return std::vector<SemPtr>{fo_value(r)};
                    // Destructuring: closed = Ctor(..., var, ...).
                    if (r->kind() == FoKind::Ctor && fo_closed(l)) {
                        for (size_t j = 0; j < r->args().size(); ++j) {
                            const FoPtr& a = r->args()[j];
                            if (a->kind() != FoKind::Var || a->name() != var)
                                continue;
                            SemPtr v = fo_value(l);
                            if (v->kind != SemKind::Closure)
                                return std::vector<SemPtr>{};
                            const CtorInfo* info =
                                u.signature ? u.signature->find(r->name())
                                            : nullptr;
                            if (!info || info->rel != v->rel ||
                                v->args.size() != r->args().size())
                                return std::vector<SemPtr>{};
                            return std::vector<SemPtr>{v->args[j]};
                        }
                    }
                }
                continue;
            }
            if (c->kind() == GoalKind::App) {
                GoalPtr head = goal_head(c);
                if (head->kind() != GoalKind::TopVar) continue;
                std::vector<GoalPtr> args;
                goal_uncurry(c, args);
                int var_pos = -1;
                bool others_closed = true;
                for (size_t i = 0; i < args.size(); ++i) {
                    if (args[i]->kind() == GoalKind::Var &&
                        args[i]->name() == var && var_pos < 0) {
                        var_pos = static_cast<int>(i);
                    } else if (!term_closed(args[i])) {
                        others_closed = false;
                        break;
                    }
                }
                if (var_pos < 0 || !others_closed) continue;
                auto it = val.find(head->name());
                if (it == val.end()) return std::vector<SemPtr>{};
                std::vector<SemPtr> fixed(args.size());
                for (size_t i = 0; i < args.size(); ++i)
                    if (static_cast<int>(i) != var_pos)
                        fixed[i] = term_value(args[i]);
                std::vector<SemPtr> out;
                std::set<SemPtr, SemLess> seen;
                for (const auto& tup : it->second) {
                    if (tup.size() != args.size()) continue;
                    bool match = true;
                    for (size_t i = 0; i < args.size() && match; ++i)
                        if (static_cast<int>(i) != var_pos &&
                            !sem_equal(tup[i], fixed[i]))
                            match = false;
                    if (match && seen.insert(tup[var_pos]).second)
                        out.push_back(tup[var_pos]);
                }
                return out;
            }
        }
        return std::nullopt;
    }

    bool holds(const GoalPtr& g) {
        switch (g->kind()) {
        case GoalKind::Constraint: {
            SemPtr v = fo_value(g->formula());
            return v->kind == SemKind::Base && v->base == 1;
        }
        case GoalKind::Var: {
            SemPtr v = look(g->name());
            return v->kind == SemKind::Base && v->base == 1;
        }
        case GoalKind::Exists: {
            // Existentials distribute over disjunction; splitting first lets
            // each disjunct determine the witness from its own conjuncts.
            if (g->body()->kind() == GoalKind::App) {
                GoalPtr head = goal_head(g->body());
                if (head->kind() == GoalKind::LogConst && head->op() == "||") {
                    return holds(GoalTerm::exists(g->binder(), g->binder_sort(),
                                                  g->body()->fun()->arg())) ||
                           holds(GoalTerm::exists(g->binder(), g->binder_sort(),
                                                  g->body()->arg()));
                }
            }
            std::vector<GoalPtr> spine;
            flatten_conj(g->body(), spine);
            auto candidates = determine(g->binder(), spine);
            const std::vector<SemPtr>* range = nullptr;
            std::vector<SemPtr> det;
            if (candidates) {
                det = std::move(*candidates);
                range = &det;
            } else {
                range = &carrier(g->binder_sort());
            }
            auto old = binding.find(g->binder());
            std::optional<SemPtr> saved;
            if (old != binding.end()) saved = old->second;
            bool found = false;
            for (const auto& v : *range) {
                if (candidates && !in_carrier(g->binder_sort(), v)) continue;
                binding[g->binder()] = v;
                if (holds(g->body())) {
                    found = true;
                    break;
                }
            }
            if (saved)
                binding[g->binder()] = *saved;
            else
                binding.erase(g->binder());
            return found;
        }
        case GoalKind::App: {
            GoalPtr head = goal_head(g);
            if (head->kind() == GoalKind::LogConst) {
                std::vector<GoalPtr> args;
                goal_uncurry(g, args);
                if (args.size() != 2)
                    throw SortMismatch("partially applied logical constant");
                if (head->op() == "&&")
                    return holds(args[0]) && holds(args[1]);
                return holds(args[0]) || holds(args[1]);
            }
            if (head->kind() != GoalKind::TopVar)
                throw SortMismatch("higher-order application in the "
                                   "first-order engine");
            std::vector<GoalPtr> args;
            goal_uncurry(g, args);
            auto it = val.find(head->name());
            if (it == val.end()) return false;
            Tuple tup;
            tup.reserve(args.size());
            for (const auto& a : args) tup.push_back(term_value(a));
            return it->second.count(tup) != 0;
        }
        default:
            throw SortMismatch("unsupported term in the first-order engine");
        }
    }

    // Closures compatible with an equality `var = C(args...)` whose argument
    // terms are still open: every universe closure built from C's relation at
    // C's application stage. A filtered carrier, not an exact determination.
    std::optional<std::vector<SemPtr>> shape_candidates(
        const std::string& var, const std::vector<GoalPtr>& conjuncts) {
        for (const auto& c : conjuncts) {
            if (c->kind() != GoalKind::Constraint) continue;
            const FoPtr& f = c->formula();
            if (f->kind() != FoKind::Cmp || f->op() != "=") continue;
            for (int side = 0; side < 2; ++side) {
                const FoPtr& l = side == 0 ? f->lhs() : f->rhs();
                const FoPtr& r = side == 0 ? f->rhs() : f->lhs();
                if (l->kind() != FoKind::Var || l->name() != var) continue;
                if (r->kind() != FoKind::Ctor) continue;
                const CtorInfo* info =
                    u.signature ? u.signature->find(r->name()) : nullptr;
                if (!info) continue;
                std::vector<SemPtr> out;
                for (const auto& m : u.closures)
                    if (m->rel == info->rel && m->args.size() == r->args().size())
                        out.push_back(m);
                return out;
            }
        }
        return std::nullopt;
    }

    // Solve one branch: peel the existential prefix into the variable pool
    // (stopping at a shadowed name), split top-level disjunctions, then bind
    // determined variables first and enumerate carriers as a last resort.
    void solve_branch(const std::vector<std::pair<std::string, SortPtr>>& binders,
                      std::vector<std::pair<std::string, SortPtr>> vars,
                      GoalPtr residual, TupleSet& out) {
        auto in_pool = [&](const std::string& n) {
            for (const auto& v : vars)
                if (v.first == n) return true;
            return false;
        };
        while (residual->kind() == GoalKind::Exists &&
               !in_pool(residual->binder())) {
            vars.emplace_back(residual->binder(), residual->binder_sort());
            residual = residual->body();
        }
        if (residual->kind() == GoalKind::App) {
            GoalPtr head = goal_head(residual);
            if (head->kind() == GoalKind::LogConst && head->op() == "||") {
                solve_branch(binders, vars, residual->fun()->arg(), out);
                solve_branch(binders, std::move(vars), residual->arg(), out);
                return;
            }
        }
        std::vector<GoalPtr> spine;
        flatten_conj(residual, spine);
        std::vector<bool> bound(vars.size(), false);
        // Pool variables already bound outside this branch shadow nothing:
        // they were peeled by an enclosing branch only when absent from it.
        std::function<void(size_t)> solve = [&](size_t done) {
            if (done == vars.size()) {
                if (holds(residual)) {
                    Tuple tup;
                    tup.reserve(binders.size());
                    for (const auto& b : binders)
                        tup.push_back(binding.at(b.first));
                    out.insert(std::move(tup));
                }
                return;
            }
            int pick = -1;
            std::vector<SemPtr> det;
            for (size_t i = 0; i < vars.size(); ++i) {
                if (bound[i]) continue;
                if (auto c = determine(vars[i].first, spine)) {
                    pick = static_cast<int>(i);
                    det = std::move(*c);
                    break;
                }
            }
            if (pick < 0) {
                for (size_t i = 0; i < vars.size(); ++i) {
                    if (bound[i]) continue;
                    if (auto c = shape_candidates(vars[i].first, spine)) {
                        pick = static_cast<int>(i);
                        det = std::move(*c);
                        break;
                    }
                }
            }
            if (pick >= 0) {
                bound[pick] = true;
                for (const auto& v : det) {
                    if (!in_carrier(vars[pick].second, v)) continue;
                    binding[vars[pick].first] = v;
                    solve(done + 1);
                }
                binding.erase(vars[pick].first);
                bound[pick] = false;
                return;
            }
            size_t best = vars.size();
            for (size_t i = 0; i < vars.size(); ++i) {
                if (bound[i]) continue;
                if (best == vars.size() ||
                    carrier(vars[i].second).size() <
                        carrier(vars[best].second).size())
                    best = i;
            }
            bound[best] = true;
            for (const auto& v : carrier(vars[best].second)) {
                binding[vars[best].first] = v;
                solve(done + 1);
            }
            binding.erase(vars[best].first);
            bound[best] = false;
        };
        solve(0);
    }

    // Tuple set of an equation: all binder assignments satisfying the body.
    TupleSet equation_tuples(const Equation& eq) {
        std::vector<std::pair<std::string, SortPtr>> binders;
        GoalPtr core = goal_unlambda(eq.body, binders);
        TupleSet out;
        solve_branch(binders, binders, core, out);
        return out;
    }
};

}

FoValuation fo_one_step(const std::vector<Equation>& eqs, const SortEnv& env,
                        const Universe& u, const FoValuation& v) {
    FoValuation out;
    for (const auto& e : env.entries()) out[e.first] = {};
    FoEngine engine(u, v);
    for (const auto& eq : eqs) {
        TupleSet tuples = engine.equation_tuples(eq);
        TupleSet& dst = out[eq.name];
        dst.insert(tuples.begin(), tuples.end());
    }
    return out;
}

FoValuation fo_lfp(const std::vector<Equation>& eqs, const SortEnv& env,
                   const Universe& u) {
    FoValuation v;
    for (const auto& e : env.entries()) v[e.first] = {};
    for (int guard = 0;; ++guard) {
        if (guard > 1000000)
            throw Explosion("first-order fixpoint iteration diverged");
        FoValuation next = fo_one_step(eqs, env, u, v);
        if (fo_valuations_equal(next, v)) return v;
        v = std::move(next);
    }
}

bool fo_formula_holds(const GoalPtr& g, const Universe& u,
                      const FoValuation& v) {
    FoEngine engine(u, v);
    return engine.holds(g);
}

bool fo_is_solvable(const Problem& p, const Universe& u) {
    Universe u2 = u;
    u2.signature = &p.signature;
    FoValuation v = fo_lfp(p.program, p.env, u2);
    if (!p.goal) return true;
    return !fo_formula_holds(p.goal, u2, v);
}

std::string fo_valuation_to_string(const FoValuation& v) {
    std::ostringstream out;
    for (const auto& e : v) {
        out << e.first << " = {";
        bool first = true;
        for (const auto& tup : e.second) {
            if (!first) out << ", ";
            first = false;
            out << "(";
            for (size_t i = 0; i < tup.size(); ++i) {
                if (i) out << ", ";
                out << sem_to_string(tup[i]);
            }
            out << ")";
        }
        out << "}\n";
    }
    return out.str();
}

bool target_solvable_saturating(const Problem& preprocessed,
                                const Universe& base, int start_depth,
                                int max_depth, int* depth_used) {
    Problem target = defunctionalize(preprocessed, true);
    std::optional<bool> prev;
    size_t prev_size = 0;
    for (int d = start_depth; d <= max_depth; ++d) {
        Universe u = base;
        u.closures = closure_universe(preprocessed.env, base, d);
        bool saturated = prev.has_value() && u.closures.size() == prev_size;
        prev_size = u.closures.size();
        if (saturated) {
            if (depth_used) *depth_used = d - 1;
            return *prev;
        }
        bool solv = fo_is_solvable(target, u);
        if (prev && *prev == solv) {
            if (depth_used) *depth_used = d;
            return solv;
        }
        prev = solv;
    }
    if (depth_used) *depth_used = max_depth;
    return *prev;
}

namespace {

struct SubtermCollector {
    const SortEnv& env;
    std::vector<std::pair<GoalPtr, std::vector<std::pair<std::string, SortPtr>>>>
        found;  // subterm with the base-sorted free variables it needs

    void walk(const GoalPtr& g,
              std::vector<std::pair<std::string, SortPtr>>& scope) {
        SortPtr s = goal_sort(g, env, scope);
        // Spines headed by && or || are formula structure, not closures.
        if (s->is_arrow() && lambda_free(g) &&
            goal_head(g)->kind() != GoalKind::LogConst) {
            std::set<std::string> fv;
            goal_free_term_vars(g, fv);
            bool all_base = true;
            std::vector<std::pair<std::string, SortPtr>> needed;
            for (const auto& name : fv) {
                SortPtr vs;
                for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                    if (it->first == name) {
                        vs = it->second;
                        break;
                    }
                if (!vs || !vs->is_base()) {
                    all_base = false;
                    break;
                }
                needed.emplace_back(name, vs);
            }
            if (all_base) found.emplace_back(g, needed);
        }
        switch (g->kind()) {
        case GoalKind::Exists:
        case GoalKind::Lambda:
            scope.emplace_back(g->binder(), g->binder_sort());
            walk(g->body(), scope);
            scope.pop_back();
            break;
        case GoalKind::App:
            walk(g->fun(), scope);
            walk(g->arg(), scope);
            break;
        default:
            break;
        }
    }

    static bool lambda_free(const GoalPtr& g) {
        switch (g->kind()) {
        case GoalKind::Lambda:
            return false;
        case GoalKind::Exists:
            return lambda_free(g->body());
        case GoalKind::App:
            return lambda_free(g->fun()) && lambda_free(g->arg());
        default:
            return true;
        }
    }
};

}

Lemma4Report check_lemma4(const Problem& preprocessed, const Universe& base,
                          int depth) {
    Lemma4Report report;
    Universe u_src = base;
    u_src.signature = &preprocessed.signature;
    Valuation alpha = lfp(preprocessed.program, preprocessed.env, u_src, true);
    TargetArtifacts art = build_target(preprocessed);
    FoValuation alpha_prime =
        extract_valuation_sets(preprocessed, base, depth, alpha);
    Universe u_tgt = base;
    u_tgt.closures = closure_universe(preprocessed.env, base, depth);
    u_tgt.signature = &art.sigma_prime;

    SubtermCollector collector{preprocessed.env, {}};
    for (const auto& eq : preprocessed.program) {
        std::vector<std::pair<std::string, SortPtr>> binders;
        GoalPtr core = goal_unlambda(eq.body, binders);
        std::vector<std::pair<std::string, SortPtr>> scope = binders;
        collector.walk(core, scope);
    }
    if (preprocessed.goal) {
        std::vector<std::pair<std::string, SortPtr>> scope;
        collector.walk(preprocessed.goal, scope);
    }

    for (const auto& entry : collector.found) {
        const GoalPtr& s = entry.first;
        const auto& fv = entry.second;
        SortEnv ext = preprocessed.env;
        for (const auto& v : fv)
            if (!ext.contains(v.first)) ext.insert(v.first, v.second);
        TransformResult tr = transform_body(s, ext);
        if (!tr.hole) continue;

        // Enumerate assignments of the free base variables.
        std::vector<std::vector<SemPtr>> carriers;
        for (const auto& v : fv) {
            if (is_o(v.second))
                carriers.push_back({SemValue::make_base(0, true),
                                    SemValue::make_base(1, true)});
            else {
                std::vector<SemPtr> c;
                for (int n : base.ints)
                    c.push_back(SemValue::make_base(n, false));
                carriers.push_back(std::move(c));
            }
        }
        std::vector<size_t> idx(fv.size(), 0);
        for (;;) {
            Valuation env_src = alpha;
            FoEngine engine(u_tgt, alpha_prime);
            for (size_t i = 0; i < fv.size(); ++i) {
                env_src[fv[i].first] = carriers[i][idx[i]];
                engine.binding[fv[i].first] = carriers[i][idx[i]];
            }
            SemPtr denot = eval(s, u_src, env_src, true);
            int matches = 0;
            SemPtr witness;
            for (const auto& c : u_tgt.closures) {
                engine.binding[tr.hole->hole] = c;
                if (engine.holds(tr.hole->body)) {
                    ++matches;
                    witness = c;
                }
            }
            ++report.checked;
            bool ok = matches == 1;
            if (ok) {
                try {
                    ok = sem_equal(expand(witness, env_src), denot);
                } catch (const SortMismatch&) {
                    ok = false;
                }
            }
            if (!ok) {
                ++report.failures;
                if (report.detail.empty())
                    report.detail = "subterm " + goal_to_string(s) + " has " +
                                    std::to_string(matches) +
                                    " satisfying closures";
            }
            size_t k = 0;
            while (k < idx.size() && ++idx[k] == carriers[k].size()) {
                idx[k] = 0;
                ++k;
            }
            if (k == idx.size() || idx.empty()) break;
        }
    }
    return report;
}

DiagramReport check_diagram(const Problem& preprocessed, const Universe& base,
                            int depth, const Valuation& gamma) {
    DiagramReport report;
    Universe u_src = base;
    u_src.signature = &preprocessed.signature;
    Valuation stepped =
        one_step(preprocessed.program, preprocessed.env, u_src, gamma, true);
    FoValuation left =
        extract_valuation_sets(preprocessed, base, depth, stepped);

    TargetArtifacts art = build_target(preprocessed);
    std::vector<Equation> eqs = art.apply_eqs;
    eqs.insert(eqs.end(), art.iomatch_eqs.begin(), art.iomatch_eqs.end());
    Universe u_tgt = base;
    u_tgt.closures = closure_universe(preprocessed.env, base, depth);
    u_tgt.signature = &art.sigma_prime;
    FoValuation gamma_prime =
        extract_valuation_sets(preprocessed, base, depth, gamma);
    FoValuation right = fo_one_step(eqs, art.delta_prime, u_tgt, gamma_prime);

    // The target erases arrow argument sorts to closr, so its IOMatch_closr
    // may hold tuples whose argument closure has the wrong source sort for
    // the head's remaining parameter. The correspondence pairs well-sorted
    // terms only; both sides are restricted to that fragment.
    auto source_sort = [&](const SemPtr& c) {
        SortPtr s = preprocessed.env.find(c->rel);
        for (size_t i = 0; i < c->args.size() && s; ++i) s = s->cod();
        return s;
    };
    auto well_sorted = [&](const TupleSet& ts) {
        TupleSet out;
        for (const Tuple& t : ts) {
            SortPtr head = source_sort(t[0]);
            if (!head || !head->is_arrow()) continue;
            SortPtr arg = source_sort(t[1]);
            if (arg && sort_equal(arg, head->dom())) out.insert(t);
        }
        return out;
    };

    for (const char* b : kBaseNames) {
        std::string name = "IOMatch_" + std::string(b);
        TupleSet l = left.at(name);
        TupleSet r = right.at(name);
        if (name == "IOMatch_closr") {
            l = well_sorted(l);
            r = well_sorted(r);
        }
        if (!tuple_sets_equal(l, r)) {
            report.ok = false;
            report.detail += name + ": T_f(T_P) has " +
                             std::to_string(l.size()) + " tuples, T_P'(T_f) " +
                             std::to_string(r.size()) + "; ";
        }
    }
    return report;
}

}

#pragma once

// Problem comparison modulo bound-variable renaming and the order of
// top-level disjuncts in equation bodies. Environments, signatures, and
// programs are keyed by name; declaration order is not significant here.

#include <map>
#include <string>
#include <vector>

#include "hochc/problem.hpp"
#include "hochc/sort.hpp"
#include "hochc/term.hpp"

namespace hochc_test {

inline void flatten_disjuncts(const hochc::GoalPtr& g,
                              std::vector<hochc::GoalPtr>& out) {
    using namespace hochc;
    if (g->kind() == GoalKind::App && g->fun()->kind() == GoalKind::App &&
        g->fun()->fun()->kind() == GoalKind::LogConst &&
        g->fun()->fun()->op() == "||") {
        flatten_disjuncts(g->fun()->arg(), out);
        flatten_disjuncts(g->arg(), out);
        return;
    }
    out.push_back(g);
}

// Both terms are compared after re-wrapping each disjunct in its own lambda
// prefix, so binder names stay local to goal_alpha_equal.
inline bool bodies_equiv_mod_disjuncts(const hochc::GoalPtr& a,
                                       const hochc::GoalPtr& b) {
    using namespace hochc;
    std::vector<std::pair<std::string, SortPtr>> ba, bb;
    GoalPtr ca = goal_unlambda(a, ba);
    GoalPtr cb = goal_unlambda(b, bb);
    if (ba.size() != bb.size()) return false;
    for (size_t i = 0; i < ba.size(); ++i)
        if (!sort_equal(ba[i].second, bb[i].second)) return false;
    auto rewrap = [](const std::vector<std::pair<std::string, SortPtr>>& bs,
                     GoalPtr body) {
        for (auto it = bs.rbegin(); it != bs.rend(); ++it)
            body = GoalTerm::lambda(it->first, it->second, body);
        return body;
    };
    std::vector<GoalPtr> da, db;
    flatten_disjuncts(ca, da);
    flatten_disjuncts(cb, db);
    if (da.size() != db.size()) return false;
    std::vector<bool> used(db.size(), false);
    for (const auto& d : da) {
        bool matched = false;
        for (size_t j = 0; j < db.size(); ++j) {
            if (used[j]) continue;
            if (goal_alpha_equal(rewrap(ba, d), rewrap(bb, db[j]))) {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

inline bool problems_equiv(const hochc::Problem& a, const hochc::Problem& b,
                           std::string* why = nullptr) {
    using namespace hochc;
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    std::map<std::string, SortPtr> ea, eb;
    for (const auto& [n, s] : a.env.entries()) ea[n] = s;
    for (const auto& [n, s] : b.env.entries()) eb[n] = s;
    if (ea.size() != eb.size()) return fail("environment sizes differ");
    for (const auto& [n, s] : ea) {
        auto it = eb.find(n);
        if (it == eb.end()) return fail("environment missing " + n);
        if (!sort_equal(s, it->second)) return fail("sort differs for " + n);
    }
    std::map<std::string, const CtorInfo*> sa, sb;
    for (const auto& c : a.signature.entries()) sa[c.name] = &c;
    for (const auto& c : b.signature.entries()) sb[c.name] = &c;
    if (sa.size() != sb.size()) return fail("signature sizes differ");
    for (const auto& [n, c] : sa) {
        auto it = sb.find(n);
        if (it == sb.end()) return fail("signature missing " + n);
        if (c->rel != it->second->rel || c->index != it->second->index ||
            !sort_equal(c->full_sort(), it->second->full_sort()))
            return fail("constructor differs for " + n);
    }
    std::map<std::string, std::vector<GoalPtr>> pa, pb;
    for (const auto& eq : a.program) pa[eq.name].push_back(eq.body);
    for (const auto& eq : b.program) pb[eq.name].push_back(eq.body);
    if (pa.size() != pb.size()) return fail("program sizes differ");
    for (const auto& [n, eqs] : pa) {
        auto it = pb.find(n);
        if (it == pb.end()) return fail("program missing " + n);
        if (eqs.size() != it->second.size())
            return fail("equation count differs for " + n);
        std::vector<bool> used(it->second.size(), false);
        for (const auto& body : eqs) {
            bool matched = false;
            for (size_t j = 0; j < it->second.size(); ++j) {
                if (used[j]) continue;
                if (bodies_equiv_mod_disjuncts(body, it->second[j])) {
                    used[j] = true;
                    matched = true;
                    break;
                }
            }
            if (!matched) return fail("no equivalent equation for " + n);
        }
    }
    if (static_cast<bool>(a.goal) != static_cast<bool>(b.goal))
        return fail("one problem lacks a goal");
    if (a.goal && !bodies_equiv_mod_disjuncts(a.goal, b.goal))
        return fail("goals differ");
    return true;
}

}

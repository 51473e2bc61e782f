#pragma once

#include <map>

#include "hochc/problem.hpp"

namespace hochc {

// Draws names that are fresh with respect to every identifier occurring in
// the seeding problem and every name drawn earlier.
class FreshNamer {
public:
    FreshNamer() = default;
    explicit FreshNamer(const Problem& p);

    void reserve(const std::string& name);
    bool is_used(const std::string& name) const { return used_.count(name) > 0; }
    // Returns prefix<N> for the next N that does not collide.
    std::string fresh(const std::string& prefix);

private:
    std::map<std::string, int> counters_;
    std::set<std::string> used_;
};

// Collects every identifier of the problem: environment and signature names,
// equation names, and all variable/binder names in bodies and goal.
std::set<std::string> problem_identifiers(const Problem& p);

// Replaces every lambda occurring strictly inside an equation body or the
// goal by an application of a fresh top-level relation (_lift<N>) abstracted
// over the lambda's free variables in order of first occurrence. Lambdas are
// eliminated one at a time, outermost first; freshly added equations are
// processed in turn.
Problem lift_lambdas(const Problem& p);

// Brings every equation to its declared arity: an RHS with fewer outer
// lambdas than the declared sort's arity gains binders x<i> (position-based,
// collision-checked) applied to the old body.
Problem eta_expand(const Problem& p);

// Removes existential quantifiers over relational arrow sorts by
// substituting the universal relation of that sort, added as a fresh
// equation _u<N> = λx₁,…,x_k. 0 = 0. Quantifiers over base sorts stay.
Problem eliminate_ho_exists(const Problem& p);

// Term-level form: rewrites t and appends any universal-relation equations
// and their declarations.
GoalPtr eliminate_ho_exists_term(const GoalPtr& t, SortEnv& env,
                                 std::vector<Equation>& new_equations,
                                 FreshNamer& namer);

// lift_lambdas, then eta_expand, then eliminate_ho_exists.
Problem preprocess(const Problem& p);

}

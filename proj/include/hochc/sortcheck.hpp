#pragma once

#include <stdexcept>
#include <string>

#include "hochc/problem.hpp"

namespace hochc {

enum class SortErrorKind {
    Unbound,
    Mismatch,
    NonRelationalTopVar,
    ConflictingEnv,
    IllFormedConstraint
};

struct SortError : std::runtime_error {
    SortErrorKind error_kind;
    Loc location;
    std::string details;

    SortError(SortErrorKind kind, Loc loc, std::string details_);
};

// Sorts a first-order term under the variable scope given by env (locals and
// top-level names alike; only base-sorted variables are legal inside
// constraints) and the constructor signature.
SortPtr check_fo_term(const SortEnv& env, const Signature& sig, const FoPtr& t);

// Sorts a goal term. Binders must not shadow names already in scope; lambda
// bodies must be relational; TopVar nodes must name relational entries of env.
SortPtr check_goal_term(const SortEnv& env, const Signature& sig,
                        const GoalPtr& t);

// As check_goal_term, but with free local variables pre-bound by `scope`.
SortPtr check_goal_term_scoped(
    const SortEnv& env, const Signature& sig, const GoalPtr& t,
    const std::vector<std::pair<std::string, SortPtr>>& scope);

// Validates a whole problem: every env entry has a relational arrow sort,
// every equation is declared and has its declared sort, and the goal (when
// present) has sort o.
void check_problem(const Problem& p);

}

#pragma once

#include <optional>

#include "hochc/preprocess.hpp"
#include "hochc/problem.hpp"

namespace hochc {

struct InternalError : std::logic_error {
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

struct ArityMismatch : std::runtime_error {
    explicit ArityMismatch(const std::string& what) : std::runtime_error(what) {}
};

// A formula of sort o with exactly one free occurrence of a distinguished
// closr-sorted placeholder; instantiate() plugs in a concrete variable name.
struct HoleFormula {
    GoalPtr body;
    std::string hole;

    GoalPtr instantiate(const std::string& name) const {
        return goal_substitute(body, hole, GoalTerm::var(name));
    }
};

// The raw product of defunctionalization, before merging and assembly.
struct TargetArtifacts {
    SortEnv delta_prime;
    Signature sigma_prime;
    std::vector<Equation> apply_eqs;
    std::vector<Equation> iomatch_eqs;
    GoalPtr goal_prime;
    // Names of the source relations, in declaration order; the SMT-LIB
    // emitter derives the nullary constructor list from them.
    std::vector<std::string> source_relations;
};

// Base sorts map to themselves; sorts of order > 1 map to closr.
SortPtr transform_sort(const SortPtr& s);

// Sort of a well-sorted term; scope covers binders, env covers everything
// else. Raises InternalError on unbound names.
SortPtr goal_sort(const GoalPtr& t, const SortEnv& env,
                  std::vector<std::pair<std::string, SortPtr>>& scope);

// Either a closed formula (input of sort o) or a HoleFormula (input of
// relational arrow sort).
struct TransformResult {
    GoalPtr formula;
    std::optional<HoleFormula> hole;
};

// Translates a lambda-free, HO-exists-free body. env supplies the sorts of
// both top-level relations (TopVar) and free locals (Var).
TransformResult transform_body(const GoalPtr& t, const SortEnv& env);

// Combines same-name equations into one whose body is the disjunction of the
// bodies under the first equation's binders.
Equation merge_equations(const std::vector<Equation>& eqs);

// Produces the unmerged, unpruned target for a preprocessed problem.
TargetArtifacts build_target(const Problem& p);

// Drops relations unreachable from the goal (with no goal, every defined
// relation is a root, so exactly the clone relations that have neither
// equations nor references disappear).
TargetArtifacts prune_unused(const TargetArtifacts& t);

// Merges the artifact equations and assembles a first-order Problem.
Problem artifacts_to_problem(const TargetArtifacts& t);

// build_target, optional prune, merge, assemble.
Problem defunctionalize(const Problem& p, bool prune = true);

}

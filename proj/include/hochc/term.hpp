#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hochc/foterm.hpp"
#include "hochc/sort.hpp"

namespace hochc {

class GoalTerm;
using GoalPtr = std::shared_ptr<const GoalTerm>;

// Goal terms are the bodies of program equations and the goal formula.
// Var is a bound (relational or base) variable occurrence; TopVar is an
// occurrence of a top-level relation name. The parser produces only Var;
// resolution against the environment rewrites free occurrences of declared
// names into TopVar, respecting shadowing by binders.
enum class GoalKind { Var, TopVar, LogConst, Exists, Lambda, App, Constraint };

class GoalTerm {
public:
    static GoalPtr var(std::string name);
    static GoalPtr top_var(std::string name);
    // op is "&&" or "||"; a LogConst is itself a term of sort o -> o -> o
    // and is applied through App nodes.
    static GoalPtr log_const(std::string op);
    static GoalPtr exists(std::string binder, SortPtr binder_sort, GoalPtr body);
    static GoalPtr lambda(std::string binder, SortPtr binder_sort, GoalPtr body);
    static GoalPtr app(GoalPtr fun, GoalPtr arg);
    static GoalPtr constraint(FoPtr formula);

    // Convenience: op applied to two operands.
    static GoalPtr conj(GoalPtr l, GoalPtr r);
    static GoalPtr disj(GoalPtr l, GoalPtr r);
    // Convenience: fun applied to each argument in turn.
    static GoalPtr apps(GoalPtr fun, const std::vector<GoalPtr>& args);

    GoalKind kind() const { return kind_; }
    const std::string& name() const { return name_; }      // Var, TopVar
    const std::string& op() const { return name_; }        // LogConst
    const std::string& binder() const { return name_; }    // Exists, Lambda
    const SortPtr& binder_sort() const { return sort_; }   // Exists, Lambda
    const GoalPtr& body() const { return sub_[0]; }        // Exists, Lambda
    const GoalPtr& fun() const { return sub_[0]; }         // App
    const GoalPtr& arg() const { return sub_[1]; }         // App
    const FoPtr& formula() const { return fo_; }           // Constraint

    const Loc& loc() const { return loc_; }
    // Called by the parser immediately after construction, before sharing.
    void set_loc(Loc l) const { loc_ = l; }

private:
    GoalKind kind_ = GoalKind::Var;
    std::string name_;
    SortPtr sort_;
    std::vector<GoalPtr> sub_;
    FoPtr fo_;
    mutable Loc loc_;
};

// Head of an application chain: head(G H) = head(G); anything else is its
// own head.
GoalPtr goal_head(const GoalPtr& g);

// Peels an application chain: returns the head and appends the arguments
// in application order.
GoalPtr goal_uncurry(const GoalPtr& g, std::vector<GoalPtr>& args_out);

// Peels leading lambdas: returns the innermost body and appends
// (binder, sort) pairs outermost first.
GoalPtr goal_unlambda(const GoalPtr& g,
                      std::vector<std::pair<std::string, SortPtr>>& binders_out);

// Free variables: Var occurrences not bound by an enclosing Lambda/Exists,
// free first-order variables inside constraints, and TopVar names.
void goal_free_vars(const GoalPtr& g, std::set<std::string>& out);
std::set<std::string> goal_free_vars(const GoalPtr& g);

// Like goal_free_vars but without TopVar names; only occurrences a binder
// could capture.
void goal_free_term_vars(const GoalPtr& g, std::set<std::string>& out);
std::set<std::string> goal_free_term_vars(const GoalPtr& g);

// Names of top-level relations referenced through TopVar nodes.
void goal_top_refs(const GoalPtr& g, std::set<std::string>& out);

// All binder names occurring anywhere in the term (used for freshness).
void goal_all_names(const GoalPtr& g, std::set<std::string>& out);

// Capture-avoiding substitution of a term for a free variable. Binders that
// would capture a free variable of the replacement are renamed first, with
// fresh names drawn outside `avoid` (which is extended as names are used).
GoalPtr goal_substitute(const GoalPtr& g, const std::string& var,
                        const GoalPtr& replacement, std::set<std::string>& avoid);
GoalPtr goal_substitute(const GoalPtr& g, const std::string& var,
                        const GoalPtr& replacement);

// Simultaneous capture-avoiding substitution.
GoalPtr goal_substitute_many(
    const GoalPtr& g, const std::vector<std::pair<std::string, GoalPtr>>& subst);

// Renames one free variable to another name (capture-avoiding, as a
// substitution by Var(to)).
GoalPtr goal_rename(const GoalPtr& g, const std::string& from, const std::string& to);

struct CaptureRisk : std::runtime_error {
    explicit CaptureRisk(const std::string& what) : std::runtime_error(what) {}
};

// Name-for-name substitution that insists on caller-provided freshness:
// throws CaptureRisk if `to` occurs as a binder anywhere in g.
GoalPtr goal_substitute_name(const GoalPtr& g, const std::string& from,
                             const std::string& to);

// Alpha-equivalence. Constraints compare structurally after consistent
// renaming of bound first-order variables.
bool goal_alpha_equal(const GoalPtr& a, const GoalPtr& b);

// Structural equality without renaming.
bool goal_equal(const GoalPtr& a, const GoalPtr& b);

std::string goal_to_string(const GoalPtr& g);

// A name not present in `used`, derived from `base`; inserts the result.
std::string fresh_name(const std::string& base, std::set<std::string>& used);

}

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hochc/problem.hpp"

namespace hochc {

// Frame or universe enumeration exceeded the configured cap.
struct Explosion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Application of a semantic value outside its domain.
struct SortMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SemKind { Base, Func, Closure };

struct SemValue;
using SemPtr = std::shared_ptr<const SemValue>;

// Base carries a bool tag: the two-point lattice orders 0 <= 1, every other
// base carrier is discrete.
struct SemValue {
    SemKind kind;
    int base = 0;
    bool is_bool = false;
    std::vector<std::pair<SemPtr, SemPtr>> table;  // sorted by argument
    std::string rel;
    std::vector<SemPtr> args;

    static SemPtr make_base(int value, bool is_bool);
    static SemPtr make_func(std::vector<std::pair<SemPtr, SemPtr>> table);
    static SemPtr make_closure(std::string rel, std::vector<SemPtr> args);
};

int sem_compare(const SemPtr& a, const SemPtr& b);
bool sem_equal(const SemPtr& a, const SemPtr& b);
// Partial order: bool bases by <=, other bases and closures discretely,
// functions pointwise.
bool sem_leq(const SemPtr& a, const SemPtr& b);
SemPtr sem_join(const SemPtr& a, const SemPtr& b);
SemPtr sem_apply(const SemPtr& f, const SemPtr& a);  // SortMismatch on miss
std::string sem_to_string(const SemPtr& v);

struct Universe {
    std::vector<int> ints = {0, 1, 2, 3, 4};
    std::vector<SemPtr> closures;  // carrier for closr, sorted
    size_t cap = 1000000;
    const Signature* signature = nullptr;  // constructor interpretations

    static Universe int_range(int lo, int hi);
};

std::vector<SemPtr> frame(const SortPtr& s, const Universe& u, bool monotone);
bool is_monotone(const SemPtr& f);

using Valuation = std::map<std::string, SemPtr>;

SemPtr eval(const GoalPtr& t, const Universe& u, const Valuation& v,
            bool monotone);
SemPtr sem_bottom(const SortPtr& s, const Universe& u, bool monotone);
SemPtr sem_top(const SortPtr& s, const Universe& u, bool monotone);

Valuation one_step(const std::vector<Equation>& program, const SortEnv& env,
                   const Universe& u, const Valuation& v, bool monotone);

struct LfpStats {
    int steps = 0;            // iterations that changed the valuation
    long long height = 0;     // lattice height bound
};

Valuation lfp(const std::vector<Equation>& program, const SortEnv& env,
              const Universe& u, bool monotone, LfpStats* stats = nullptr);

// Monotone semantics: solvable iff the goal evaluates to 0 at the least
// fixed point. A problem without a goal is trivially solvable.
bool is_solvable(const Problem& p, const Universe& u);

// All closures (X, t1...tk) with 0 <= k < arity(X); closr-sorted arguments
// recurse up to `depth` nesting levels.
std::vector<SemPtr> closure_universe(const SortEnv& env, const Universe& u,
                                     int depth);

SemPtr expand(const SemPtr& c, const Valuation& src_valuation);

// Dense form of T_f: maps each Apply_B / IOMatch_B to an explicit function
// over the closure universe at the given depth.
Valuation extract_valuation(const Problem& src, const Universe& u, int depth,
                            const Valuation& alpha);

// Sparse first-order relations: sets of true tuples.
using Tuple = std::vector<SemPtr>;
struct TupleLess {
    bool operator()(const Tuple& a, const Tuple& b) const;
};
using TupleSet = std::set<Tuple, TupleLess>;
using FoValuation = std::map<std::string, TupleSet>;

FoValuation extract_valuation_sets(const Problem& src, const Universe& u,
                                   int depth, const Valuation& alpha);

// First-order engine; u.closures must hold the closr carrier and
// u.signature the constructor interpretations.
FoValuation fo_one_step(const std::vector<Equation>& eqs, const SortEnv& env,
                        const Universe& u, const FoValuation& v);
FoValuation fo_lfp(const std::vector<Equation>& eqs, const SortEnv& env,
                   const Universe& u);
bool fo_formula_holds(const GoalPtr& g, const Universe& u,
                      const FoValuation& v);
bool fo_is_solvable(const Problem& p, const Universe& u);

std::string fo_valuation_to_string(const FoValuation& v);

// Defunctionalizes a preprocessed source and decides target solvability,
// raising the closure depth until the verdict saturates.
bool target_solvable_saturating(const Problem& preprocessed,
                                const Universe& base, int start_depth = 2,
                                int max_depth = 8, int* depth_used = nullptr);

struct Lemma4Report {
    int checked = 0;
    int failures = 0;
    std::string detail;
};

// For every lambda-free arrow-sorted subterm with base-sorted free
// variables: exactly one closure satisfies the transformed hole formula,
// and it expands to the source denotation.
Lemma4Report check_lemma4(const Problem& preprocessed, const Universe& base,
                          int depth);

struct DiagramReport {
    bool ok = true;
    std::string detail;
};

// T_f(T_P(gamma)) vs the IOMatch restriction of T_P'(T_f(gamma)).
DiagramReport check_diagram(const Problem& preprocessed, const Universe& base,
                            int depth, const Valuation& gamma);

}

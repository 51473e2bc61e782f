#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hochc/term.hpp"

namespace hochc {

// Ordered name -> sort map. Declaration order is observable: it fixes
// printing order and the generation order of Apply/IOMatch relations.
class SortEnv {
public:
    void insert(std::string name, SortPtr sort);
    // Replaces the sort if the name is present, inserts otherwise.
    void assign(const std::string& name, SortPtr sort);
    SortPtr find(const std::string& name) const;
    bool contains(const std::string& name) const { return find(name) != nullptr; }
    const std::vector<std::pair<std::string, SortPtr>>& entries() const {
        return entries_;
    }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<std::pair<std::string, SortPtr>> entries_;
};

// A closure constructor C<i>_<rel>: it packages the first i arguments of
// top-level relation rel. Constructors live in the signature section of the
// native format; targets of the translation declare one per partial
// application stage of each source relation.
struct CtorInfo {
    std::string name;
    std::string rel;
    int index = 0;
    std::vector<SortPtr> arg_sorts;

    SortPtr full_sort() const;
};

class Signature {
public:
    void insert(CtorInfo info);
    const CtorInfo* find(const std::string& name) const;
    bool contains(const std::string& name) const { return find(name) != nullptr; }
    const std::vector<CtorInfo>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<CtorInfo> entries_;
};

// Splits a constructor name of the shape C<index>_<rel>. Returns false when
// the name does not match.
bool parse_ctor_name(const std::string& name, int& index_out, std::string& rel_out);

struct Equation {
    std::string name;
    GoalPtr body;  // includes the leading lambdas as written
};

struct Problem {
    SortEnv env;
    Signature signature;
    std::vector<Equation> program;
    GoalPtr goal;
};

// Rewrites free occurrences of environment names into TopVar nodes and free
// occurrences of signature constructor names (including applied chains) into
// first-order constructor terms, respecting shadowing by binders. The parser
// runs this automatically; it is idempotent.
GoalPtr resolve_names(const GoalPtr& g, const SortEnv& env, const Signature& sig);
void resolve_problem(Problem& p);

}

#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace hochc {

// Source position for diagnostics; {0, 0} means synthesized.
struct Loc {
    int line = 0;
    int col = 0;
};

// First-order constraint-language material (ZLA atoms and terms). Constraint
// nodes of goal terms contain exactly this; relational variables never occur
// inside. Ctor covers applications of signature constants, which target
// problems use for the closure constructors C^i_X.
enum class FoKind { IntLit, Var, BinOp, Cmp, Ctor };

class FoTerm;
using FoPtr = std::shared_ptr<const FoTerm>;

class FoTerm {
public:
    static FoPtr int_lit(std::int64_t v);
    static FoPtr var(std::string name);
    // op is one of "+", "-".
    static FoPtr binop(std::string op, FoPtr l, FoPtr r);
    // op is one of "<", "<=", "=", ">", ">=".
    static FoPtr cmp(std::string op, FoPtr l, FoPtr r);
    static FoPtr ctor(std::string name, std::vector<FoPtr> args);

    FoKind kind() const { return kind_; }
    std::int64_t value() const { return value_; }
    const std::string& name() const { return name_; }
    const std::string& op() const { return name_; }
    const FoPtr& lhs() const { return args_[0]; }
    const FoPtr& rhs() const { return args_[1]; }
    const std::vector<FoPtr>& args() const { return args_; }

    const Loc& loc() const { return loc_; }
    // Called by the parser immediately after construction, before sharing.
    void set_loc(Loc l) const { loc_ = l; }

private:
    FoKind kind_;
    std::int64_t value_ = 0;
    std::string name_;
    std::vector<FoPtr> args_;
    mutable Loc loc_;
};

bool fo_equal(const FoPtr& a, const FoPtr& b);
void fo_collect_vars(const FoPtr& t, std::set<std::string>& out);
// Renames free variables; first-order terms have no binders.
FoPtr fo_rename(const FoPtr& t, const std::string& from, const std::string& to);

// Replaces free occurrences of a variable by a term.
FoPtr fo_substitute(const FoPtr& t, const std::string& var, const FoPtr& replacement);
std::string fo_to_string(const FoPtr& t);

}

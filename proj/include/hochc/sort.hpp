#pragma once

#include <memory>
#include <string>
#include <vector>

namespace hochc {

// Simple sorts: base sorts and right-associated arrow sorts.
// The truth-value sort is canonically named "o"; the surface syntax spells it
// "bool". "closr" is a base sort that only appears in target problems.
class Sort;
using SortPtr = std::shared_ptr<const Sort>;

class Sort {
public:
    static SortPtr base(std::string name);
    static SortPtr arrow(SortPtr dom, SortPtr cod);
    // sigma_1 -> ... -> sigma_n -> result, built right-associated.
    static SortPtr arrows(const std::vector<SortPtr>& doms, SortPtr result);

    bool is_base() const { return !dom_; }
    bool is_arrow() const { return static_cast<bool>(dom_); }
    const std::string& base_name() const { return name_; }
    const SortPtr& dom() const { return dom_; }
    const SortPtr& cod() const { return cod_; }

private:
    std::string name_;
    SortPtr dom_, cod_;
};

SortPtr sort_o();
SortPtr sort_int();
SortPtr sort_closr();

bool sort_equal(const SortPtr& a, const SortPtr& b);

// ord(b) = 1, ord(s1 -> s2) = max(ord(s1) + 1, ord(s2)).
int sort_order(const SortPtr& s);

// Number of leading arrow domains before the final base sort.
int sort_arity(const SortPtr& s);

// Relational sorts: o, or an arrow whose domain is a base or relational sort
// and whose codomain is relational.
bool is_relational(const SortPtr& s);

bool is_o(const SortPtr& s);

// The domains sigma_1..sigma_m of sigma_1 -> ... -> sigma_m -> b.
std::vector<SortPtr> argument_sorts(const SortPtr& s);

// The final base sort of an arrow chain.
SortPtr result_sort(const SortPtr& s);

// Surface syntax: "o" prints as "bool"; arrow domains are parenthesised when
// they are arrows themselves.
std::string sort_to_string(const SortPtr& s);

}

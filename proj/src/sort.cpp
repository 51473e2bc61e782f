#include "hochc/sort.hpp"

#include <algorithm>
#include <cassert>

namespace hochc {

SortPtr Sort::base(std::string name) {
    auto s = std::make_shared<Sort>();
    s->name_ = std::move(name);
    return s;
}

SortPtr Sort::arrow(SortPtr dom, SortPtr cod) {
    assert(dom && cod);
    auto s = std::make_shared<Sort>();
    s->dom_ = std::move(dom);
    s->cod_ = std::move(cod);
    return s;
}

SortPtr Sort::arrows(const std::vector<SortPtr>& doms, SortPtr result) {
    SortPtr s = std::move(result);
    for (auto it = doms.rbegin(); it != doms.rend(); ++it)
        s = arrow(*it, s);
    return s;
}

SortPtr sort_o() {
    static const SortPtr s = Sort::base("o");
    return s;
}

SortPtr sort_int() {
    static const SortPtr s = Sort::base("int");
    return s;
}

SortPtr sort_closr() {
    static const SortPtr s = Sort::base("closr");
    return s;
}

bool sort_equal(const SortPtr& a, const SortPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->is_base() != b->is_base()) return false;
    if (a->is_base()) return a->base_name() == b->base_name();
    return sort_equal(a->dom(), b->dom()) && sort_equal(a->cod(), b->cod());
}

int sort_order(const SortPtr& s) {
    if (s->is_base()) return 1;
    return std::max(sort_order(s->dom()) + 1, sort_order(s->cod()));
}

int sort_arity(const SortPtr& s) {
    int n = 0;
    const Sort* p = s.get();
    while (p->is_arrow()) {
        ++n;
        p = p->cod().get();
    }
    return n;
}

bool is_o(const SortPtr& s) {
    return s->is_base() && s->base_name() == "o";
}

bool is_relational(const SortPtr& s) {
    if (s->is_base()) return is_o(s);
    const SortPtr& d = s->dom();
    if (!d->is_base() && !is_relational(d)) return false;
    return is_relational(s->cod());
}

std::vector<SortPtr> argument_sorts(const SortPtr& s) {
    std::vector<SortPtr> out;
    SortPtr p = s;
    while (p->is_arrow()) {
        out.push_back(p->dom());
        p = p->cod();
    }
    return out;
}

SortPtr result_sort(const SortPtr& s) {
    SortPtr p = s;
    while (p->is_arrow()) p = p->cod();
    return p;
}

std::string sort_to_string(const SortPtr& s) {
    if (s->is_base()) return is_o(s) ? "bool" : s->base_name();
    std::string d = sort_to_string(s->dom());
    if (s->dom()->is_arrow()) d = "(" + d + ")";
    return d + " -> " + sort_to_string(s->cod());
}

}

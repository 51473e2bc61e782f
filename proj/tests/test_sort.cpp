#include "doctest.h"
#include "hochc/parser.hpp"
#include "hochc/sort.hpp"

using namespace hochc;

TEST_CASE("sort_order follows the max recurrence") {
    CHECK(sort_order(sort_int()) == 1);
    CHECK(sort_order(sort_o()) == 1);
    SortPtr ii_o = Sort::arrows({sort_int(), sort_int()}, sort_o());
    CHECK(sort_order(ii_o) == 2);
    SortPtr third = Sort::arrow(Sort::arrow(sort_int(), sort_o()), sort_o());
    CHECK(sort_order(third) == 3);
}

TEST_CASE("arity counts leading arrow domains") {
    CHECK(sort_arity(sort_o()) == 0);
    CHECK(sort_arity(Sort::arrows({sort_int(), sort_int()}, sort_o())) == 2);
    SortPtr s = Sort::arrows({Sort::arrow(sort_int(), sort_o()), sort_int()},
                             sort_o());
    CHECK(sort_arity(s) == 2);
}

TEST_CASE("arity >= 1 iff arrow") {
    for (const SortPtr& s :
         {sort_int(), sort_o(), Sort::arrow(sort_int(), sort_o()),
          Sort::arrows({sort_o(), sort_o()}, sort_o())}) {
        CHECK((sort_arity(s) >= 1) == s->is_arrow());
    }
}

TEST_CASE("arrows associate to the right and round-trip") {
    SortPtr s = Sort::arrows(
        {Sort::arrows({sort_int(), sort_int()}, sort_o()), sort_int()},
        sort_o());
    CHECK(s->is_arrow());
    CHECK(s->dom()->is_arrow());
    CHECK(sort_equal(s->cod(), Sort::arrow(sort_int(), sort_o())));
    std::string text = sort_to_string(s);
    CHECK(text == "(int -> int -> bool) -> int -> bool");
    CHECK(sort_equal(parse_sort_text(text), s));
    CHECK(sort_to_string(sort_o()) == "bool");
    CHECK(sort_equal(parse_sort_text("bool"), sort_o()));
}

TEST_CASE("relational sorts end in o") {
    CHECK(is_relational(sort_o()));
    CHECK(is_relational(Sort::arrows({sort_int(), sort_int()}, sort_o())));
    CHECK(!is_relational(sort_int()));
    CHECK(!is_relational(Sort::arrow(sort_int(), sort_int())));
    CHECK(is_relational(
        Sort::arrow(Sort::arrow(sort_int(), sort_o()), sort_o())));
}

TEST_CASE("argument_sorts and result_sort decompose arrow chains") {
    SortPtr s = Sort::arrows({sort_int(), sort_o(), sort_int()}, sort_o());
    auto args = argument_sorts(s);
    REQUIRE(args.size() == 3);
    CHECK(sort_equal(args[0], sort_int()));
    CHECK(sort_equal(args[1], sort_o()));
    CHECK(sort_equal(args[2], sort_int()));
    CHECK(sort_equal(result_sort(s), sort_o()));
    CHECK(argument_sorts(sort_int()).empty());
}

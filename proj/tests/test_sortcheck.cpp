#include "doctest.h"
#include "hochc/parser.hpp"
#include "hochc/sortcheck.hpp"

using namespace hochc;

TEST_CASE("application chains sort to o") {
    SortEnv env;
    Signature sig;
    std::vector<std::pair<std::string, SortPtr>> scope = {
        {"f", Sort::arrows({sort_int(), sort_int()}, sort_o())},
        {"x", sort_int()},
        {"y", sort_int()}};
    GoalPtr t = GoalTerm::apps(GoalTerm::var("f"),
                               {GoalTerm::var("x"), GoalTerm::var("y")});
    SortPtr s = check_goal_term_scoped(env, sig, t, scope);
    CHECK(sort_equal(s, sort_o()));
    // Checking is deterministic: a second run yields the identical sort.
    CHECK(sort_equal(check_goal_term_scoped(env, sig, t, scope), s));

    GoalPtr partial = GoalTerm::app(GoalTerm::var("f"), GoalTerm::var("x"));
    CHECK(sort_equal(check_goal_term_scoped(env, sig, partial, scope),
                     Sort::arrow(sort_int(), sort_o())));
}

TEST_CASE("lambda chains get their arrow sort") {
    SortEnv env;
    Signature sig;
    GoalPtr t = parse_goal_text("\\a: int. \\b: int. \\c: int. a + b = c",
                                env, sig);
    CHECK(sort_equal(check_goal_term(env, sig, t),
                     Sort::arrows({sort_int(), sort_int(), sort_int()},
                                  sort_o())));
}

TEST_CASE("unbound names are rejected") {
    SortEnv env;
    Signature sig;
    try {
        check_goal_term(env, sig, GoalTerm::var("x"));
        FAIL("expected SortError");
    } catch (const SortError& e) {
        CHECK(e.error_kind == SortErrorKind::Unbound);
        CHECK(std::string(e.what()).find("x") != std::string::npos);
    }
}

TEST_CASE("whole problems check; arity mistakes are caught") {
    const char* good =
        "environment\n"
        "add: int -> int -> int -> bool\n"
        "twice: (int -> int -> bool) -> int -> int -> bool\n"
        "program\n"
        "add := \\a: int. \\b: int. \\c: int. a + b = c;\n"
        "twice := \\f: int -> int -> bool. \\a: int. \\b: int. "
        "E c: int. f a c && f c b;\n"
        "goal\nE x: int. add 1 2 x";
    check_problem(parse_problem(good));

    // Dropping twice's final argument leaves the body at sort int -> bool.
    const char* bad =
        "environment\n"
        "twice: (int -> int -> bool) -> int -> int -> bool\n"
        "program\n"
        "twice := \\f: int -> int -> bool. \\a: int. \\b: int. "
        "E c: int. f a c && f c;\n";
    try {
        check_problem(parse_problem(bad));
        FAIL("expected SortError");
    } catch (const SortError& e) {
        CHECK(e.error_kind == SortErrorKind::Mismatch);
    }
}

TEST_CASE("environment entries must have relational arrow sorts") {
    CHECK_THROWS_AS(
        check_problem(parse_problem("environment\nr: bool\nprogram\n")),
        SortError);
    CHECK_THROWS_AS(
        check_problem(parse_problem("environment\nr: int\nprogram\n")),
        SortError);
    check_problem(parse_problem("environment\nr: int -> bool\nprogram\n"));
}

TEST_CASE("relational variables may not appear inside constraints") {
    SortEnv env;
    Signature sig;
    std::vector<std::pair<std::string, SortPtr>> scope = {
        {"f", Sort::arrow(sort_int(), sort_o())}};
    GoalPtr t = GoalTerm::constraint(
        FoTerm::cmp("=", FoTerm::var("f"), FoTerm::int_lit(1)));
    CHECK_THROWS_AS(check_goal_term_scoped(env, sig, t, scope), SortError);
}

TEST_CASE("goals must have sort o") {
    const char* bad =
        "environment\nr: int -> int -> bool\nprogram\n"
        "r := \\x: int. \\y: int. x = y;\ngoal\nr 1";
    CHECK_THROWS_AS(check_problem(parse_problem(bad)), SortError);
}

TEST_CASE("free variables of equations are covered by binders and env") {
    // A body mentioning a variable bound in neither place fails.
    const char* bad =
        "environment\nr: int -> bool\nprogram\nr := \\x: int. x = stray;";
    CHECK_THROWS_AS(check_problem(parse_problem(bad)), SortError);
}

TEST_CASE("constructor applications are sorted by the signature") {
    const char* text =
        "signature\nC0_X: closr\nC1_X: int -> closr\n"
        "environment\nIOMatch_int: closr -> int -> bool\n"
        "program\n"
        "IOMatch_int := \\x: closr. \\n: int. x = C1_X n && n = 0;";
    check_problem(parse_problem(text));

    const char* wrong_arity =
        "signature\nC0_X: closr\nC1_X: int -> closr\n"
        "environment\nIOMatch_int: closr -> int -> bool\n"
        "program\n"
        "IOMatch_int := \\x: closr. \\n: int. x = C1_X n n && n = 0;";
    CHECK_THROWS_AS(check_problem(parse_problem(wrong_arity)), SortError);
}

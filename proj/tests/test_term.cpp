#include "doctest.h"
#include "hochc/term.hpp"

using namespace hochc;

namespace {

GoalPtr cmp_atom(const char* op, FoPtr l, FoPtr r) {
    return GoalTerm::constraint(FoTerm::cmp(op, std::move(l), std::move(r)));
}

}

TEST_CASE("head follows application spines only") {
    GoalPtr f = GoalTerm::var("f");
    GoalPtr t = GoalTerm::apps(f, {GoalTerm::var("x"), GoalTerm::var("y")});
    CHECK(goal_head(t) == f);

    GoalPtr conj = GoalTerm::conj(GoalTerm::var("a"), GoalTerm::var("b"));
    CHECK(goal_head(conj)->kind() == GoalKind::LogConst);
    CHECK(goal_head(conj)->op() == "&&");

    GoalPtr lam = GoalTerm::lambda(
        "x", sort_o(), cmp_atom("=", FoTerm::int_lit(0), FoTerm::int_lit(0)));
    CHECK(goal_head(lam) == lam);
}

TEST_CASE("free variables") {
    // \a: int. \b: int. a + n = b has exactly n free.
    GoalPtr inner = cmp_atom(
        "=", FoTerm::binop("+", FoTerm::var("a"), FoTerm::var("n")),
        FoTerm::var("b"));
    GoalPtr lam = GoalTerm::lambda(
        "a", sort_int(), GoalTerm::lambda("b", sort_int(), inner));
    CHECK(goal_free_vars(lam) == std::set<std::string>{"n"});

    GoalPtr ex = GoalTerm::exists(
        "x", sort_int(), cmp_atom("=", FoTerm::var("x"), FoTerm::var("y")));
    CHECK(goal_free_vars(ex) == std::set<std::string>{"y"});

    GoalPtr lit = cmp_atom("=", FoTerm::int_lit(3), FoTerm::int_lit(3));
    CHECK(goal_free_vars(lit).empty());

    // TopVar names count as free; goal_free_term_vars omits them.
    GoalPtr app = GoalTerm::app(GoalTerm::top_var("R"), GoalTerm::var("z"));
    CHECK(goal_free_vars(app) == std::set<std::string>{"R", "z"});
    CHECK(goal_free_term_vars(app) == std::set<std::string>{"z"});
}

TEST_CASE("name substitution respects binders") {
    GoalPtr x = GoalTerm::var("x");
    GoalPtr y = GoalTerm::var("y");
    GoalPtr t = GoalTerm::conj(x, y);
    GoalPtr r = goal_substitute_name(t, "x", "z");
    CHECK(goal_equal(r, GoalTerm::conj(GoalTerm::var("z"), y)));

    GoalPtr ex = GoalTerm::exists(
        "x", sort_int(), cmp_atom("=", FoTerm::var("x"), FoTerm::var("y")));
    CHECK(goal_equal(goal_substitute_name(ex, "x", "w"), ex));

    GoalPtr app = GoalTerm::app(GoalTerm::var("f"), GoalTerm::var("a"));
    CHECK(goal_equal(goal_substitute_name(app, "f", "g"),
                     GoalTerm::app(GoalTerm::var("g"), GoalTerm::var("a"))));
}

TEST_CASE("name substitution refuses capture") {
    GoalPtr ex = GoalTerm::exists(
        "z", sort_int(), cmp_atom("=", FoTerm::var("x"), FoTerm::var("z")));
    CHECK_THROWS_AS(goal_substitute_name(ex, "x", "z"), CaptureRisk);
}

TEST_CASE("substitute then reverse substitute is identity") {
    GoalPtr t = GoalTerm::conj(
        GoalTerm::app(GoalTerm::var("f"), GoalTerm::var("x")),
        cmp_atom("<", FoTerm::var("x"), FoTerm::int_lit(3)));
    GoalPtr once = goal_substitute_name(t, "x", "fresh_q");
    GoalPtr back = goal_substitute_name(once, "fresh_q", "x");
    CHECK(goal_equal(back, t));
}

TEST_CASE("capture-avoiding substitution renames binders") {
    // (E z: int. x = z)[x -> z] must rename the binder, not capture.
    GoalPtr ex = GoalTerm::exists(
        "z", sort_int(), cmp_atom("=", FoTerm::var("x"), FoTerm::var("z")));
    GoalPtr r = goal_substitute(ex, "x", GoalTerm::var("z"));
    CHECK(goal_alpha_equal(
        r, GoalTerm::exists("w", sort_int(),
                            cmp_atom("=", FoTerm::var("z"), FoTerm::var("w")))));
    CHECK(!goal_alpha_equal(r, ex));
}

TEST_CASE("alpha equivalence") {
    GoalPtr a = GoalTerm::lambda(
        "x", sort_int(), cmp_atom("=", FoTerm::var("x"), FoTerm::int_lit(1)));
    GoalPtr b = GoalTerm::lambda(
        "y", sort_int(), cmp_atom("=", FoTerm::var("y"), FoTerm::int_lit(1)));
    CHECK(goal_alpha_equal(a, b));
    CHECK(!goal_equal(a, b));

    GoalPtr c = GoalTerm::lambda(
        "y", sort_o(), cmp_atom("=", FoTerm::var("y"), FoTerm::int_lit(1)));
    CHECK(!goal_alpha_equal(a, c));  // binder sorts differ

    CHECK(!goal_alpha_equal(GoalTerm::var("v"), GoalTerm::top_var("v")));
}

TEST_CASE("uncurry and unlambda peel spines") {
    GoalPtr t = GoalTerm::apps(GoalTerm::top_var("R"),
                               {GoalTerm::var("a"), GoalTerm::var("b")});
    std::vector<GoalPtr> args;
    GoalPtr head = goal_uncurry(t, args);
    CHECK(head->kind() == GoalKind::TopVar);
    REQUIRE(args.size() == 2);
    CHECK(args[0]->name() == "a");
    CHECK(args[1]->name() == "b");

    GoalPtr lam = GoalTerm::lambda(
        "p", sort_int(),
        GoalTerm::lambda("q", sort_o(), GoalTerm::var("q")));
    std::vector<std::pair<std::string, SortPtr>> binders;
    GoalPtr body = goal_unlambda(lam, binders);
    REQUIRE(binders.size() == 2);
    CHECK(binders[0].first == "p");
    CHECK(binders[1].first == "q");
    CHECK(body->kind() == GoalKind::Var);
}

TEST_CASE("fresh_name avoids the used set") {
    std::set<std::string> used = {"x", "x1"};
    std::string f = fresh_name("x", used);
    CHECK(used.count(f) == 1);
    CHECK(f != "x");
    CHECK(f != "x1");
    std::string g = fresh_name("x", used);
    CHECK(g != f);
}

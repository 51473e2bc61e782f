#include "doctest.h"
#include "hochc/oracle.hpp"
#include "hochc/parser.hpp"
#include "hochc/preprocess.hpp"
#include "hochc/printer.hpp"
#include "hochc/sortcheck.hpp"

using namespace hochc;

namespace {

bool lambda_strictly_inside(const GoalPtr& g, bool outermost = true) {
    switch (g->kind()) {
    case GoalKind::Lambda:
        if (!outermost) return true;
        return lambda_strictly_inside(g->body(), true);
    case GoalKind::Exists:
        return lambda_strictly_inside(g->body(), false);
    case GoalKind::App:
        return lambda_strictly_inside(g->fun(), false) ||
               lambda_strictly_inside(g->arg(), false);
    default:
        return false;
    }
}

bool problem_has_inner_lambda(const Problem& p) {
    for (const auto& eq : p.program)
        if (lambda_strictly_inside(eq.body)) return true;
    return p.goal && lambda_strictly_inside(p.goal, false);
}

bool has_ho_exists(const GoalPtr& g) {
    switch (g->kind()) {
    case GoalKind::Exists:
        return g->binder_sort()->is_arrow() || has_ho_exists(g->body());
    case GoalKind::Lambda:
        return has_ho_exists(g->body());
    case GoalKind::App:
        return has_ho_exists(g->fun()) || has_ho_exists(g->arg());
    default:
        return false;
    }
}

}

TEST_CASE("lambda lifting extracts anonymous functions") {
    Problem p = parse_problem(
        "environment\n"
        "t: (int -> int -> bool) -> int -> bool\n"
        "caller: int -> bool\n"
        "program\n"
        "t := \\f: int -> int -> bool. \\x: int. f x x;\n"
        "caller := \\n: int. t (\\a: int. \\b: int. a + n = b) n;");
    check_problem(p);
    CHECK(problem_has_inner_lambda(p));

    Problem lifted = lift_lambdas(p);
    check_problem(lifted);
    CHECK(!problem_has_inner_lambda(lifted));
    REQUIRE(lifted.program.size() == 3);

    // The fresh equation abstracts the free variable n before the lambda's
    // own binders, and the occurrence becomes an application to n.
    const Equation* fresh_eq = nullptr;
    for (const auto& eq : lifted.program)
        if (eq.name != "t" && eq.name != "caller") fresh_eq = &eq;
    REQUIRE(fresh_eq);
    std::vector<std::pair<std::string, SortPtr>> binders;
    GoalPtr body = goal_unlambda(fresh_eq->body, binders);
    REQUIRE(binders.size() == 3);
    CHECK(sort_equal(binders[0].second, sort_int()));
    CHECK(body->kind() == GoalKind::Constraint);
    CHECK(sort_equal(lifted.env.find(fresh_eq->name),
                     Sort::arrows({sort_int(), sort_int(), sort_int()},
                                  sort_o())));

    for (const auto& eq : lifted.program) {
        if (eq.name != "caller") continue;
        std::set<std::string> refs;
        goal_top_refs(eq.body, refs);
        CHECK(refs.count(fresh_eq->name) == 1);
    }

    // Idempotent.
    CHECK(print_problem(lift_lambdas(lifted)) == print_problem(lifted));
}

TEST_CASE("nested anonymous functions lift to two equations") {
    Problem p = parse_problem(
        "environment\n"
        "h: ((int -> bool) -> int -> bool) -> int -> bool\n"
        "top: int -> bool\n"
        "program\n"
        "h := \\g: (int -> bool) -> int -> bool. \\x: int. g (\\y: int. y = x) x;\n"
        "top := \\n: int. h (\\p: int -> bool. \\z: int. p z && z > n) n;");
    check_problem(p);
    Problem lifted = lift_lambdas(p);
    check_problem(lifted);
    CHECK(!problem_has_inner_lambda(lifted));
    CHECK(lifted.program.size() == 4);
    CHECK(print_problem(lift_lambdas(lifted)) == print_problem(lifted));
}

TEST_CASE("eta expansion brings equations to declared arity") {
    Problem p = parse_problem(
        "environment\n"
        "plus: int -> int -> bool\n"
        "padd: int -> bool\n"
        "X: bool -> bool\n"
        "Y: bool -> bool\n"
        "program\n"
        "plus := \\a: int. \\b: int. a + 1 = b;\n"
        "padd := plus 1;\n"
        "X := Y;\n"
        "Y := \\b: bool. b;");
    check_problem(p);
    Problem ex = eta_expand(p);
    check_problem(ex);
    for (const auto& eq : ex.program) {
        std::vector<std::pair<std::string, SortPtr>> binders;
        goal_unlambda(eq.body, binders);
        CHECK(static_cast<int>(binders.size()) ==
              sort_arity(ex.env.find(eq.name)));
    }
    for (const auto& eq : ex.program) {
        if (eq.name != "X") continue;
        std::vector<std::pair<std::string, SortPtr>> binders;
        GoalPtr body = goal_unlambda(eq.body, binders);
        REQUIRE(binders.size() == 1);
        CHECK(is_o(binders[0].second));
        REQUIRE(body->kind() == GoalKind::App);
        CHECK(body->fun()->kind() == GoalKind::TopVar);
        CHECK(body->fun()->name() == "Y");
        CHECK(body->arg()->name() == binders[0].first);
    }
    // Already-full equations are untouched; the pass is idempotent.
    for (const auto& eq : ex.program)
        if (eq.name == "plus")
            CHECK(goal_equal(eq.body, p.program[0].body));
    CHECK(print_problem(eta_expand(ex)) == print_problem(ex));
}

TEST_CASE("eta expansion keeps inner partial applications") {
    Problem p = parse_problem(
        "environment\n"
        "map: (int -> int -> bool) -> int -> int -> bool\n"
        "tw: (int -> int -> bool) -> int -> int -> bool\n"
        "twmap: (int -> int -> bool) -> int -> int -> bool\n"
        "program\n"
        "map := \\f: int -> int -> bool. \\x: int. \\y: int. f x y;\n"
        "tw := \\f: int -> int -> bool. \\x: int. \\y: int. E z: int. f x z && f z y;\n"
        "twmap := \\f: int -> int -> bool. map (tw f);");
    check_problem(p);
    Problem ex = eta_expand(p);
    check_problem(ex);
    for (const auto& eq : ex.program) {
        if (eq.name != "twmap") continue;
        std::vector<std::pair<std::string, SortPtr>> binders;
        GoalPtr body = goal_unlambda(eq.body, binders);
        REQUIRE(binders.size() == 3);
        std::vector<GoalPtr> args;
        GoalPtr head = goal_uncurry(body, args);
        CHECK(head->name() == "map");
        REQUIRE(args.size() == 3);
        // The inner partial application (tw f) gains no binders.
        std::vector<GoalPtr> inner_args;
        GoalPtr inner_head = goal_uncurry(args[0], inner_args);
        CHECK(inner_head->kind() == GoalKind::TopVar);
        CHECK(inner_head->name() == "tw");
        CHECK(inner_args.size() == 1);
    }
}

TEST_CASE("higher-order existentials become universal relations") {
    Problem p = parse_problem(
        "environment\n"
        "Twice: (int -> int -> bool) -> int -> int -> bool\n"
        "program\n"
        "Twice := \\f: int -> int -> bool. \\a: int. \\b: int. "
        "E c: int. f a c && f c b;\n"
        "goal\n"
        "E f: int -> int -> bool. Twice f 0 2");
    check_problem(p);
    Problem elim = eliminate_ho_exists(p);
    check_problem(elim);
    CHECK(!has_ho_exists(elim.goal));
    for (const auto& eq : elim.program) CHECK(!has_ho_exists(eq.body));

    // The goal now applies Twice to a fresh universal relation.
    std::vector<GoalPtr> args;
    GoalPtr head = goal_uncurry(elim.goal, args);
    CHECK(head->name() == "Twice");
    REQUIRE(args.size() == 3);
    REQUIRE(args[0]->kind() == GoalKind::TopVar);
    std::string uname = args[0]->name();
    const Equation* ueq = nullptr;
    for (const auto& eq : elim.program)
        if (eq.name == uname) ueq = &eq;
    REQUIRE(ueq);
    std::vector<std::pair<std::string, SortPtr>> binders;
    GoalPtr ubody = goal_unlambda(ueq->body, binders);
    REQUIRE(binders.size() == 2);
    CHECK(sort_equal(binders[0].second, sort_int()));
    REQUIRE(ubody->kind() == GoalKind::Constraint);
    CHECK(fo_to_string(ubody->formula()) == "0 = 0");

    // Base-sorted existentials stay.
    Problem q = parse_problem("goal\nE x: int. x = 3");
    Problem qe = eliminate_ho_exists(q);
    CHECK(qe.goal->kind() == GoalKind::Exists);

    // Solvability is unchanged over a finite universe (kept small: the
    // relation frame for an order-3 environment grows doubly fast).
    Universe u = Universe::int_range(0, 2);
    CHECK(is_solvable(p, u) == is_solvable(elim, u));

    CHECK(print_problem(eliminate_ho_exists(elim)) == print_problem(elim));
}

TEST_CASE("nested higher-order existentials over o-sorted functions") {
    Problem p = parse_problem(
        "environment\n"
        "r: int -> bool\n"
        "program\n"
        "r := \\n: int. E g: bool -> bool. g (n = 1);\n"
        "goal\n"
        "E n: int. r n && n > 1");
    check_problem(p);
    Problem elim = preprocess(p);
    check_problem(elim);
    for (const auto& eq : elim.program) CHECK(!has_ho_exists(eq.body));
    Universe u = Universe::int_range(0, 3);
    CHECK(is_solvable(p, u) == is_solvable(elim, u));
}

TEST_CASE("full preprocess pipeline is idempotent and sort-preserving") {
    const char* texts[] = {
        "environment\nadd: int -> int -> int -> bool\n"
        "twice: (int -> int -> bool) -> int -> int -> bool\n"
        "program\nadd := \\a: int. \\b: int. \\c: int. a + b = c;\n"
        "twice := \\f: int -> int -> bool. \\a: int. \\b: int. "
        "E c: int. f a c && f c b;\ngoal\nE x: int. add 1 2 x",
        "environment\nplus: int -> int -> bool\npadd: int -> bool\n"
        "program\nplus := \\a: int. \\b: int. a + 1 = b;\npadd := plus 1;\n"
        "goal\nE x: int. padd x"};
    for (const char* text : texts) {
        Problem p = parse_problem(text);
        Problem pre = preprocess(p);
        check_problem(pre);
        CHECK(print_problem(preprocess(pre)) == print_problem(pre));
        Universe u = Universe::int_range(0, 2);
        CHECK(is_solvable(p, u) == is_solvable(pre, u));
    }
}

TEST_CASE("fresh names never collide with existing identifiers") {
    Problem p = parse_problem(
        "environment\n_lift1: int -> bool\nt: (int -> bool) -> bool\n"
        "program\n_lift1 := \\x: int. x = 0;\n"
        "t := \\f: int -> bool. f 2;\n"
        "goal\nt (\\y: int. y = 2)");
    check_problem(p);
    Problem lifted = lift_lambdas(p);
    check_problem(lifted);
    int lift_count = 0;
    for (const auto& eq : lifted.program)
        if (eq.name.rfind("_lift", 0) == 0) ++lift_count;
    CHECK(lift_count == 2);  // the original and one fresh, distinct names
}

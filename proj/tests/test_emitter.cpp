#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "hochc/defunc.hpp"
#include "hochc/emitter.hpp"
#include "hochc/parser.hpp"
#include "hochc/preprocess.hpp"
#include "hochc/printer.hpp"

using namespace hochc;

namespace {

const char* kAddTwice =
    "environment\n"
    "Add: int -> int -> int -> bool\n"
    "Twice: (int -> int -> bool) -> int -> int -> bool\n"
    "program\n"
    "Add := \\a: int. \\b: int. \\c: int. a + b = c;\n"
    "Twice := \\f: int -> int -> bool. \\a: int. \\b: int. "
    "E c: int. f a c && f c b;";

// Minimal s-expression reader: returns the number of complete expressions
// in the text, or -1 on imbalance or trailing garbage mid-token.
int count_sexprs(const std::string& text) {
    int depth = 0, count = 0;
    bool in_atom = false;
    for (char ch : text) {
        if (ch == '(') {
            if (depth == 0 && in_atom) return -1;
            ++depth;
            in_atom = false;
        } else if (ch == ')') {
            if (depth == 0) return -1;
            --depth;
            in_atom = false;
            if (depth == 0) ++count;
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            if (depth == 0 && in_atom) ++count;
            in_atom = false;
        } else {
            in_atom = true;
        }
    }
    if (depth != 0) return -1;
    if (in_atom) ++count;
    return count;
}

std::vector<std::string> atoms_of(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == '(' || ch == ')' ||
            std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

SmtDocument emit_add_twice() {
    Problem p = preprocess(parse_problem(kAddTwice));
    return emit_smtlib(defunctionalize(p));
}

}

TEST_CASE("datatype block matches the reference shape byte for byte") {
    SmtDocument doc = emit_add_twice();
    std::string datatype;
    for (const auto& part : doc.parts)
        if (part.rfind("(declare-datatypes", 0) == 0) datatype = part;
    std::string expected =
        "(declare-datatypes () ((Closr\n"
        "  Twice\n"
        "  Add\n"
        "  (boolCons (boolHd Bool) (boolTl Closr))\n"
        "  (intCons (intHd Int) (intTl Closr))\n"
        "  (closrCons (closrHd Closr) (closrTl Closr)) )))";
    CHECK(datatype == expected);
}

TEST_CASE("closure constructor terms flatten to cons spines") {
    Problem p = parse_problem(
        "signature\n"
        "C0_Add: closr\n"
        "C1_Add: int -> closr\n"
        "C2_Add: int -> int -> closr\n"
        "environment\n"
        "R: closr -> bool\n"
        "program\n"
        "R := \\x: closr. x = C2_Add 1 2;");
    SmtDocument doc = emit_smtlib(p);
    CHECK(doc.to_text().find("(intCons 2 (intCons 1 Add))") !=
          std::string::npos);
}

TEST_CASE("document structure: logic first, one check-sat, valid s-exprs") {
    SmtDocument doc = emit_add_twice();
    REQUIRE(!doc.parts.empty());
    CHECK(doc.parts.front() == "(set-logic HORN)");
    CHECK(doc.parts.back() == "(check-sat)");
    int checksats = 0;
    for (const auto& part : doc.parts) {
        CHECK(count_sexprs(part) == 1);
        if (part.find("check-sat") != std::string::npos) ++checksats;
    }
    CHECK(checksats == 1);
    CHECK(count_sexprs(doc.to_text()) == static_cast<int>(doc.parts.size()));
}

TEST_CASE("every relation is declared before any clause mentions it") {
    SmtDocument doc = emit_add_twice();
    std::set<std::string> declared;
    for (const auto& part : doc.parts) {
        std::vector<std::string> atoms = atoms_of(part);
        if (!atoms.empty() && atoms[0] == "declare-fun") {
            declared.insert(atoms[1]);
            continue;
        }
        if (!atoms.empty() && atoms[0] == "assert") {
            for (const auto& a : atoms) {
                if (a.rfind("Apply_", 0) == 0 || a.rfind("IOMatch_", 0) == 0)
                    CHECK_MESSAGE(declared.count(a) == 1, a);
            }
        }
    }
    CHECK(declared.size() == 3);  // Apply_int, Apply_closr, IOMatch_int
}

TEST_CASE("goals become clauses with a false head") {
    Problem p = preprocess(parse_problem(
        "environment\nX: int -> bool\nprogram\nX := \\n: int. n = 0;\n"
        "goal\nE n: int. X n && n > 1"));
    SmtDocument doc = emit_smtlib(defunctionalize(p));
    bool found = false;
    for (const auto& part : doc.parts)
        if (part.rfind("(assert", 0) == 0 &&
            part.find("false)") != std::string::npos)
            found = true;
    CHECK(found);
}

TEST_CASE("a goal-only problem emits a well-formed document") {
    Problem p = parse_problem("goal\nE x: int. x = 1");
    SmtDocument doc = emit_smtlib(defunctionalize(preprocess(p)));
    CHECK(doc.parts.front() == "(set-logic HORN)");
    CHECK(doc.parts.back() == "(check-sat)");
    for (const auto& part : doc.parts) CHECK(count_sexprs(part) == 1);
    CHECK(doc.to_text().find("(assert") != std::string::npos);
}

TEST_CASE("higher-order input is rejected by the emitter") {
    Problem p = preprocess(parse_problem(kAddTwice));
    CHECK_THROWS_AS(emit_smtlib(p), NonFirstOrder);
}

TEST_CASE("native emission is the printer") {
    Problem p = defunctionalize(preprocess(parse_problem(kAddTwice)));
    CHECK(emit_native(p) == print_problem(p));
    Problem src = parse_problem(kAddTwice);
    CHECK(emit_native(src) == print_problem(src));
}

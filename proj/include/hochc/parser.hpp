#pragma once

#include <stdexcept>
#include <string>

#include "hochc/problem.hpp"

namespace hochc {

struct ParseError : std::runtime_error {
    int line = 0;
    int column = 0;
    std::string expected;
    std::string found;

    ParseError(int line_, int column_, std::string expected_, std::string found_);
};

// Parses the native problem format: optional sections `signature`,
// `environment`, `program` and `goal`, in that order. Equations end with
// `;`, lambda is written `\x: sort.`, existential quantification
// `E x: sort.`, conjunction `&&`, disjunction `||`, comparisons
// `< <= = > >=`, and `#` starts a line comment. Top-level names and
// signature constants are resolved before returning.
Problem parse_problem(const std::string& source);

// Parses a single sort, e.g. "(int -> int -> bool) -> int -> bool".
SortPtr parse_sort_text(const std::string& source);

// Parses a single goal expression (no sections), resolved against the
// given environment and signature.
GoalPtr parse_goal_text(const std::string& source, const SortEnv& env,
                        const Signature& sig);

}

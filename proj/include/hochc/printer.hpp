#pragma once

#include <string>

#include "hochc/problem.hpp"

namespace hochc {

// Renders a problem in the native input format; parse_problem(print_problem(p))
// is structurally identical to p. The environment and program sections are
// always present (possibly empty); signature and goal appear when non-empty.
std::string print_problem(const Problem& p);

}

#pragma once

#include <random>
#include <vector>

#include "hochc/oracle.hpp"
#include "hochc/problem.hpp"

namespace hochc {

struct GenConfig {
    std::vector<int> ints = {0, 1, 2};
    int max_relations = 3;
    int max_order = 2;   // relation sort order cap
    int max_arity = 2;
    int term_depth = 3;
    bool ho_exists = false;   // existentials over relational sorts
    bool lambdas = false;     // anonymous lambdas in argument positions
    bool eta_short = false;   // equations may stay partially expanded
    bool with_goal = true;
};

// Well-sorted random monotone problem; every relation gets one equation.
Problem random_problem(std::mt19937_64& rng, const GenConfig& cfg);

// Uniform pick from the monotone frame of each declared relation.
Valuation random_valuation(std::mt19937_64& rng, const SortEnv& env,
                           const Universe& u);

}

#include "hochc/printer.hpp"

#include <sstream>

namespace hochc {

std::string print_problem(const Problem& p) {
    std::ostringstream os;
    bool first = true;
    auto section = [&](const char* name) {
        if (!first) os << "\n";
        first = false;
        os << name << "\n";
    };
    if (!p.signature.empty()) {
        section("signature");
        for (const auto& c : p.signature.entries())
            os << c.name << ": " << sort_to_string(c.full_sort()) << "\n";
    }
    section("environment");
    for (const auto& e : p.env.entries())
        os << e.first << ": " << sort_to_string(e.second) << "\n";
    section("program");
    for (const auto& eq : p.program)
        os << eq.name << " := " << goal_to_string(eq.body) << ";\n";
    if (p.goal) {
        section("goal");
        os << goal_to_string(p.goal) << "\n";
    }
    return os.str();
}

}

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hochc/problem.hpp"

namespace hochc {

// Raised when a problem is not first-order (some symbol exceeds order 2).
struct NonFirstOrder : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ordered s-expressions: set-logic, datatype, declarations, clauses, check-sat.
struct SmtDocument {
    std::vector<std::string> parts;
    std::string to_text() const;
};

std::string emit_native(const Problem& p);
SmtDocument emit_smtlib(const Problem& p);

}

#pragma once

#include <optional>
#include <string>

#include "hochc/emitter.hpp"

namespace hochc {

enum class SolverStatus { Sat, Unsat, Unknown, Timeout, SolverError };

struct SolverVerdict {
    SolverStatus status;
    int timeout_ms = 0;       // budget, set when status is Timeout
    std::string diagnostics;  // captured output, set when status is SolverError
};

std::string solver_status_name(SolverStatus s);

// Explicit --solver-path wins; otherwise the HOCHC_SOLVER environment
// variable supplies the executable.
std::optional<std::string> default_solver_path();

// Writes the document to a temporary file, runs the solver on it, and maps
// the first sat/unsat/unknown token of its output. The process is killed at
// the timeout; partial output after a timeout is never read as a verdict.
SolverVerdict solve(const SmtDocument& doc, const std::string& solver_path,
                    int timeout_ms = 120000);

}

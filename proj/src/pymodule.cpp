#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>

#include "hochc/defunc.hpp"
#include "hochc/emitter.hpp"
#include "hochc/oracle.hpp"
#include "hochc/parser.hpp"
#include "hochc/preprocess.hpp"
#include "hochc/printer.hpp"
#include "hochc/problem.hpp"
#include "hochc/sortcheck.hpp"

namespace py = pybind11;

namespace {

hochc::Problem load(const std::string& text) {
    hochc::Problem p = hochc::parse_problem(text);
    hochc::check_problem(p);
    return p;
}

std::string compile_text(const std::string& text, bool prune,
                         const std::string& fmt) {
    hochc::Problem target =
        hochc::defunctionalize(hochc::preprocess(load(text)), prune);
    if (fmt == "smtlib2") return hochc::emit_smtlib(target).to_text();
    if (fmt == "native") return hochc::emit_native(target);
    throw py::value_error("unknown format: " + fmt);
}

bool check_text(const std::string& text) {
    load(text);
    return true;
}

py::dict stages_text(const std::string& text) {
    py::dict out;
    hochc::Problem p = load(text);
    out["parsed"] = hochc::print_problem(p);
    hochc::Problem lifted = hochc::lift_lambdas(p);
    out["lift"] = hochc::print_problem(lifted);
    hochc::Problem expanded = hochc::eta_expand(lifted);
    out["eta-expand"] = hochc::print_problem(expanded);
    hochc::Problem first_order_ex = hochc::eliminate_ho_exists(expanded);
    out["ho-exists-eliminate"] = hochc::print_problem(first_order_ex);
    hochc::TargetArtifacts arts = hochc::build_target(first_order_ex);
    out["defunctionalize"] = hochc::print_problem(hochc::artifacts_to_problem(arts));
    hochc::Problem pruned = hochc::artifacts_to_problem(hochc::prune_unused(arts));
    out["prune"] = hochc::print_problem(pruned);
    out["smtlib2"] = hochc::emit_smtlib(pruned).to_text();
    return out;
}

bool solvable_text(const std::string& text, int lo, int hi) {
    return hochc::is_solvable(load(text), hochc::Universe::int_range(lo, hi));
}

bool target_solvable_text(const std::string& text, int lo, int hi, int depth) {
    hochc::Problem pre = hochc::preprocess(load(text));
    return hochc::target_solvable_saturating(pre, hochc::Universe::int_range(lo, hi),
                                             depth, std::max(depth, 8));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Defunctionalizing compiler from monotone higher-order constrained Horn "
        "clauses to first-order CHC, with a finite-domain reference semantics.";

    py::register_exception<hochc::ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<hochc::SortError>(m, "SortError", PyExc_ValueError);
    py::register_exception<hochc::Explosion>(m, "Explosion", PyExc_RuntimeError);

    m.def("compile", &compile_text, py::arg("text"), py::arg("prune") = true,
          py::arg("fmt") = "native",
          "Run the full pipeline and return the target problem as text.");
    m.def("check", &check_text, py::arg("text"),
          "Parse and sort-check; raises on ill-formed input.");
    m.def("stages", &stages_text, py::arg("text"),
          "Return a dict of pipeline stage name to problem text.");
    m.def("solvable", &solvable_text, py::arg("text"), py::arg("lo") = 0,
          py::arg("hi") = 4,
          "Finite-domain solvability of the source problem.");
    m.def("target_solvable", &target_solvable_text, py::arg("text"),
          py::arg("lo") = 0, py::arg("hi") = 4, py::arg("depth") = 2,
          "Finite-domain solvability of the defunctionalized target, saturating "
          "the closure universe depth.");
}

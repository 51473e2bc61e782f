#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "hochc/defunc.hpp"
#include "hochc/emitter.hpp"
#include "hochc/oracle.hpp"
#include "hochc/parser.hpp"
#include "hochc/preprocess.hpp"
#include "hochc/printer.hpp"
#include "hochc/problem.hpp"
#include "hochc/solver.hpp"
#include "hochc/sortcheck.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitSort = 2;
constexpr int kExitSolver = 3;
// Outside the documented 1/2/3 contract: broken internal invariants.
constexpr int kExitInternal = 70;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Parses and sort-checks; on failure prints a diagnostic and returns the
// matching exit code, else 0.
int load_problem(const std::string& path, hochc::Problem& out) {
    auto text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read input file " << path << "\n";
        return kExitParse;
    }
    try {
        out = hochc::parse_problem(*text);
    } catch (const hochc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    }
    try {
        hochc::check_problem(out);
    } catch (const hochc::SortError& e) {
        std::cerr << "sort error: " << e.what() << "\n";
        return kExitSort;
    }
    return kExitOk;
}

struct PipelineOpts {
    std::string input;
    std::string format = "native";
    bool solve = false;
    std::string solver_path;
    long timeout_ms = 120000;
    bool no_prune = false;
    bool dump_stages = false;
};

int run_pipeline(const PipelineOpts& opt) {
    hochc::Problem p;
    if (int rc = load_problem(opt.input, p)) return rc;

    auto dump = [&](const char* label, const hochc::Problem& q) {
        if (!opt.dump_stages) return;
        std::cout << ";; stage: " << label << "\n" << hochc::print_problem(q) << "\n";
    };
    dump("parsed", p);
    hochc::Problem lifted = hochc::lift_lambdas(p);
    dump("lift", lifted);
    hochc::Problem expanded = hochc::eta_expand(lifted);
    dump("eta-expand", expanded);
    hochc::Problem first_order_ex = hochc::eliminate_ho_exists(expanded);
    dump("ho-exists-eliminate", first_order_ex);

    hochc::TargetArtifacts arts = hochc::build_target(first_order_ex);
    dump("defunctionalize", hochc::artifacts_to_problem(arts));
    if (!opt.no_prune) {
        arts = hochc::prune_unused(arts);
        dump("prune", hochc::artifacts_to_problem(arts));
    }
    hochc::Problem target = hochc::artifacts_to_problem(arts);

    if (opt.solve) {
        hochc::SmtDocument doc = hochc::emit_smtlib(target);
        std::string path = opt.solver_path;
        if (path.empty()) path = hochc::default_solver_path().value_or("");
        if (path.empty()) {
            std::cerr << "error: no solver configured; pass --solver-path or set "
                         "HOCHC_SOLVER\n";
            return kExitSolver;
        }
        hochc::SolverVerdict verdict = hochc::solve(doc, path, opt.timeout_ms);
        if (verdict.status == hochc::SolverStatus::SolverError) {
            std::cerr << "solver error: " << verdict.diagnostics << "\n";
            return kExitSolver;
        }
        std::cout << hochc::solver_status_name(verdict.status) << "\n";
        return kExitOk;
    }

    if (opt.format == "smtlib2")
        std::cout << hochc::emit_smtlib(target).to_text() << "\n";
    else
        std::cout << hochc::emit_native(target);
    return kExitOk;
}

struct OracleOpts {
    std::string input;
    std::string int_range = "0..4";
    int depth = 2;
    std::string check = "solve";
};

bool parse_int_range(const std::string& text, int& lo, int& hi) {
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%d..%d%n", &lo, &hi, &consumed) != 2) return false;
    return consumed == static_cast<int>(text.size()) && lo <= hi;
}

int run_oracle(const OracleOpts& opt) {
    int lo = 0;
    int hi = 4;
    if (!parse_int_range(opt.int_range, lo, hi)) {
        std::cerr << "error: --int-range expects a..b with a <= b, got "
                  << opt.int_range << "\n";
        return kExitParse;
    }
    hochc::Problem p;
    if (int rc = load_problem(opt.input, p)) return rc;
    hochc::Universe u = hochc::Universe::int_range(lo, hi);
    hochc::Problem pre = hochc::preprocess(p);

    if (opt.check == "solve") {
        bool src = hochc::is_solvable(p, u);
        int depth_used = 0;
        bool tgt = hochc::target_solvable_saturating(pre, u, opt.depth,
                                                     std::max(opt.depth, 8),
                                                     &depth_used);
        std::cout << "source solvable: " << (src ? "yes" : "no") << "\n";
        std::cout << "target solvable: " << (tgt ? "yes" : "no")
                  << " (closure depth " << depth_used << ")\n";
        std::cout << "agreement: " << (src == tgt ? "yes" : "no") << "\n";
        return src == tgt ? kExitOk : kExitSolver;
    }
    if (opt.check == "lemma4") {
        hochc::Lemma4Report rep = hochc::check_lemma4(pre, u, opt.depth);
        std::cout << "instances checked: " << rep.checked << "\n";
        std::cout << "failures: " << rep.failures << "\n";
        if (!rep.detail.empty()) std::cout << rep.detail << "\n";
        return rep.failures == 0 ? kExitOk : kExitSolver;
    }
    if (opt.check == "diagram") {
        hochc::Valuation bottom;
        for (const auto& [name, sort] : pre.env.entries())
            bottom[name] = hochc::sem_bottom(sort, u, true);
        hochc::Valuation fixed = hochc::lfp(pre.program, pre.env, u, true);
        bool all_ok = true;
        for (const auto& [label, gamma] :
             {std::pair<const char*, const hochc::Valuation*>{"bottom", &bottom},
              {"lfp", &fixed}}) {
            hochc::DiagramReport rep =
                hochc::check_diagram(pre, u, opt.depth, *gamma);
            std::cout << "gamma = " << label << ": "
                      << (rep.ok ? "commutes" : "mismatch") << "\n";
            if (!rep.ok) {
                std::cout << rep.detail << "\n";
                all_ok = false;
            }
        }
        return all_ok ? kExitOk : kExitSolver;
    }
    // lfp
    hochc::LfpStats stats;
    hochc::Valuation v = hochc::lfp(p.program, p.env, u, true, &stats);
    for (const auto& [name, sort] : p.env.entries()) {
        auto it = v.find(name);
        if (it == v.end()) continue;
        std::cout << name << " = " << hochc::sem_to_string(it->second) << "\n";
    }
    std::cout << "steps: " << stats.steps << "\n";
    std::cout << "height bound: " << stats.height << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "hochc: compiles monotone higher-order constrained Horn clause problems "
        "to first-order CHC"};
    app.require_subcommand(0, 1);

    PipelineOpts pipe;
    app.add_option("input", pipe.input, "input problem file");
    app.add_option("--output-format", pipe.format, "native or smtlib2")
        ->check(CLI::IsMember({"native", "smtlib2"}));
    app.add_flag("--solve", pipe.solve, "run a CHC solver on the emitted SMT-LIB2");
    app.add_option("--solver-path", pipe.solver_path,
                   "solver executable (falls back to HOCHC_SOLVER)");
    app.add_option("--timeout", pipe.timeout_ms, "solver timeout in milliseconds");
    app.add_flag("--no-prune", pipe.no_prune, "keep unreachable target relations");
    app.add_flag("--dump-stages", pipe.dump_stages,
                 "print the problem after each pipeline stage");

    OracleOpts orc;
    CLI::App* oracle_cmd =
        app.add_subcommand("oracle", "finite-domain reference semantics");
    oracle_cmd->add_option("input", orc.input, "input problem file")->required();
    oracle_cmd->add_option("--int-range", orc.int_range, "integer carrier a..b");
    oracle_cmd->add_option("--closure-depth", orc.depth, "closure universe depth");
    oracle_cmd->add_option("--check", orc.check, "analysis to run")
        ->check(CLI::IsMember({"solve", "lemma4", "diagram", "lfp"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (oracle_cmd->parsed()) return run_oracle(orc);
        if (pipe.input.empty()) {
            std::cerr << app.help();
            return kExitParse;
        }
        return run_pipeline(pipe);
    } catch (const hochc::Explosion& e) {
        std::cerr << "oracle explosion: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

#include "hochc/emitter.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "hochc/printer.hpp"
#include "hochc/sort.hpp"
#include "hochc/term.hpp"

namespace hochc {

std::string SmtDocument::to_text() const {
    std::ostringstream out;
    for (const auto& part : parts) out << part << "\n";
    return out.str();
}

std::string emit_native(const Problem& p) { return print_problem(p); }

namespace {

const std::set<std::string>& smt_reserved() {
    static const std::set<std::string> words = {
        "assert", "check-sat", "declare-fun", "declare-datatypes",
        "set-logic", "forall", "exists", "and", "or", "not", "let",
        "as", "par", "true", "false", "ite", "distinct", "Int", "Bool",
        "_"};
    return words;
}

std::string smt_symbol(const std::string& name) {
    bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
    for (char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c))) continue;
        if (std::string("~!@$%^&*_+=<>.?/-").find(c) != std::string::npos)
            continue;
        simple = false;
        break;
    }
    if (simple && !smt_reserved().count(name)) return name;
    return "|" + name + "|";
}

std::string smt_base_sort(const SortPtr& s) {
    if (is_o(s)) return "Bool";
    if (s->is_base() && s->base_name() == "int") return "Int";
    if (s->is_base() && s->base_name() == "closr") return "Closr";
    throw NonFirstOrder("sort " + sort_to_string(s) +
                        " has no first-order encoding");
}

class SmtEmitter {
public:
    explicit SmtEmitter(const Problem& p) : p_(p) {
        // One nullary constructor per source relation, named by capitalizing
        // the relation; primes resolve collisions.
        std::set<std::string> taken = {"Closr",    "boolCons", "intCons",
                                       "closrCons", "boolHd",  "boolTl",
                                       "intHd",    "intTl",    "closrHd",
                                       "closrTl"};
        for (const auto& info : p_.signature.entries()) {
            if (info.index != 0) continue;
            rel_order_.push_back(info.rel);
            std::string candidate = info.rel;
            if (!candidate.empty())
                candidate[0] = static_cast<char>(
                    std::toupper(static_cast<unsigned char>(candidate[0])));
            if (taken.count(candidate)) candidate = info.rel;
            while (taken.count(candidate)) candidate += "'";
            taken.insert(candidate);
            nullary_[info.rel] = candidate;
        }
    }

    SmtDocument run() {
        SmtDocument doc;
        doc.parts.push_back("(set-logic HORN)");
        doc.parts.push_back(datatype_block());
        for (const auto& e : p_.env.entries()) doc.parts.push_back(decl(e));
        for (const auto& eq : p_.program) doc.parts.push_back(clause(eq));
        if (p_.goal) doc.parts.push_back(goal_clause());
        doc.parts.push_back("(check-sat)");
        return doc;
    }

private:
    std::string datatype_block() const {
        std::ostringstream out;
        out << "(declare-datatypes () ((Closr\n";
        for (auto it = rel_order_.rbegin(); it != rel_order_.rend(); ++it)
            out << "  " << smt_symbol(nullary_.at(*it)) << "\n";
        out << "  (boolCons (boolHd Bool) (boolTl Closr))\n";
        out << "  (intCons (intHd Int) (intTl Closr))\n";
        out << "  (closrCons (closrHd Closr) (closrTl Closr)) )))";
        return out.str();
    }

    std::string decl(const std::pair<std::string, SortPtr>& e) const {
        if (sort_order(e.second) > 2)
            throw NonFirstOrder("relation '" + e.first + "' has order " +
                                std::to_string(sort_order(e.second)));
        std::ostringstream out;
        out << "(declare-fun " << smt_symbol(e.first) << " (";
        bool first = true;
        for (const auto& a : argument_sorts(e.second)) {
            if (!first) out << " ";
            first = false;
            out << smt_base_sort(a);
        }
        out << ") Bool)";
        return out.str();
    }

    std::string clause(const Equation& eq) const {
        SortPtr declared = p_.env.find(eq.name);
        if (!declared)
            throw NonFirstOrder("equation for undeclared relation '" +
                                eq.name + "'");
        std::vector<std::pair<std::string, SortPtr>> binders;
        GoalPtr core = goal_unlambda(eq.body, binders);
        if (binders.size() != argument_sorts(declared).size())
            throw NonFirstOrder("equation for '" + eq.name +
                                "' is not fully expanded");
        std::ostringstream head;
        head << "(" << smt_symbol(eq.name);
        for (const auto& b : binders) head << " " << smt_symbol(b.first);
        head << ")";
        std::ostringstream out;
        out << "(assert (forall (" << binder_list(binders) << ") (=> "
            << formula(core) << " " << head.str() << ")))";
        return out.str();
    }

    std::string goal_clause() const {
        std::vector<std::pair<std::string, SortPtr>> binders;
        GoalPtr body = p_.goal;
        while (body->kind() == GoalKind::Exists) {
            binders.emplace_back(body->binder(), body->binder_sort());
            body = body->body();
        }
        std::ostringstream out;
        if (binders.empty()) {
            out << "(assert (=> " << formula(body) << " false))";
        } else {
            out << "(assert (forall (" << binder_list(binders) << ") (=> "
                << formula(body) << " false)))";
        }
        return out.str();
    }

    std::string binder_list(
        const std::vector<std::pair<std::string, SortPtr>>& binders) const {
        std::ostringstream out;
        bool first = true;
        for (const auto& b : binders) {
            if (!first) out << " ";
            first = false;
            out << "(" << smt_symbol(b.first) << " " << smt_base_sort(b.second)
                << ")";
        }
        return out.str();
    }

    std::string formula(const GoalPtr& g) const {
        switch (g->kind()) {
        case GoalKind::Constraint:
            return fo(g->formula());
        case GoalKind::Var:
            return smt_symbol(g->name());
        case GoalKind::Exists:
            return "(exists ((" + smt_symbol(g->binder()) + " " +
                   smt_base_sort(g->binder_sort()) + ")) " +
                   formula(g->body()) + ")";
        case GoalKind::App: {
            GoalPtr head = goal_head(g);
            std::vector<GoalPtr> args;
            GoalPtr fun = goal_uncurry(g, args);
            if (head->kind() == GoalKind::LogConst) {
                if (args.size() != 2)
                    throw NonFirstOrder("partially applied logical constant");
                std::string op = head->op() == "&&" ? "and" : "or";
                return "(" + op + " " + formula(args[0]) + " " +
                       formula(args[1]) + ")";
            }
            if (head->kind() != GoalKind::TopVar)
                throw NonFirstOrder("application head is not a relation");
            std::ostringstream out;
            out << "(" << smt_symbol(fun->name());
            for (const auto& a : args) out << " " << formula(a);
            out << ")";
            return out.str();
        }
        case GoalKind::TopVar:
            throw NonFirstOrder("bare relation '" + g->name() +
                                "' in formula position");
        case GoalKind::Lambda:
            throw NonFirstOrder("lambda in formula position");
        case GoalKind::LogConst:
            throw NonFirstOrder("bare logical constant in formula position");
        }
        throw NonFirstOrder("unreachable");
    }

    std::string fo(const FoPtr& t) const {
        switch (t->kind()) {
        case FoKind::IntLit:
            return t->value() < 0
                       ? "(- " + std::to_string(-t->value()) + ")"
                       : std::to_string(t->value());
        case FoKind::Var:
            return smt_symbol(t->name());
        case FoKind::BinOp:
            return "(" + t->op() + " " + fo(t->lhs()) + " " + fo(t->rhs()) +
                   ")";
        case FoKind::Cmp:
            return "(" + t->op() + " " + fo(t->lhs()) + " " + fo(t->rhs()) +
                   ")";
        case FoKind::Ctor:
            return closure(t);
        }
        throw NonFirstOrder("unreachable");
    }

    // (X, t1 ... tk) encodes as nested cons cells, newest argument at the
    // head, X's nullary constructor at the tail.
    std::string closure(const FoPtr& t) const {
        const CtorInfo* info = p_.signature.find(t->name());
        if (!info)
            throw NonFirstOrder("unknown constructor '" + t->name() + "'");
        if (static_cast<int>(t->args().size()) != info->index)
            throw NonFirstOrder("constructor '" + t->name() +
                                "' is not fully applied");
        auto nit = nullary_.find(info->rel);
        if (nit == nullary_.end())
            throw NonFirstOrder("no nullary constructor for relation '" +
                                info->rel + "'");
        std::string acc = smt_symbol(nit->second);
        for (size_t i = 0; i < t->args().size(); ++i) {
            const SortPtr& s = info->arg_sorts[i];
            std::string cons = is_o(s) ? "boolCons"
                               : s->is_base() && s->base_name() == "int"
                                   ? "intCons"
                                   : "closrCons";
            acc = "(" + cons + " " + fo(t->args()[i]) + " " + acc + ")";
        }
        return acc;
    }

    const Problem& p_;
    std::vector<std::string> rel_order_;
    std::map<std::string, std::string> nullary_;
};

}

SmtDocument emit_smtlib(const Problem& p) { return SmtEmitter(p).run(); }

}

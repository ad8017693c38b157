#include "lmlearn/pddl.hpp"

#include <sstream>

namespace lmlearn {

namespace {

void typed_names(std::ostream &os, const std::vector<TypedName> &names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i)
            os << ' ';
        os << names[i].name << " - " << names[i].type;
    }
}

void atom(std::ostream &os, const Atom &a) {
    os << '(' << a.predicate;
    for (const Term &t : a.args)
        os << ' ' << t.name;
    os << ')';
}

void conjunction(std::ostream &os, const std::vector<Atom> &pos, const std::vector<Atom> &neg) {
    os << "(and";
    for (const Atom &a : pos) {
        os << ' ';
        atom(os, a);
    }
    for (const Atom &a : neg) {
        os << " (not ";
        atom(os, a);
        os << ')';
    }
    os << ')';
}

} // namespace

std::string to_pddl(const Domain &domain) {
    std::ostringstream os;
    os << "(define (domain " << domain.name << ")\n";
    if (!domain.requirements.empty()) {
        os << "  (:requirements";
        for (const std::string &r : domain.requirements)
            os << ' ' << r;
        os << ")\n";
    }
    if (!domain.types.empty()) {
        os << "  (:types";
        for (const TypeDecl &t : domain.types)
            os << ' ' << t.name << " - " << t.parent.value_or(std::string(root_type));
        os << ")\n";
    }
    if (!domain.constants.empty()) {
        os << "  (:constants ";
        typed_names(os, domain.constants);
        os << ")\n";
    }
    os << "  (:predicates";
    for (const PredicateDecl &p : domain.predicates) {
        os << " (" << p.name;
        if (!p.params.empty()) {
            os << ' ';
            typed_names(os, p.params);
        }
        os << ')';
    }
    os << ")\n";
    for (const ActionSchema &a : domain.actions) {
        os << "  (:action " << a.name << "\n    :parameters (";
        typed_names(os, a.params);
        os << ")\n    :precondition ";
        conjunction(os, a.pre, {});
        os << "\n    :effect ";
        conjunction(os, a.add, a.del);
        os << ")\n";
    }
    os << ")\n";
    return os.str();
}

std::string to_pddl(const LiftedTask &task) {
    std::ostringstream os;
    os << "(define (problem " << task.name << ")\n";
    os << "  (:domain " << task.domain.name << ")\n";
    os << "  (:objects ";
    typed_names(os, task.objects);
    os << ")\n  (:init";
    for (const Atom &a : task.init) {
        os << ' ';
        atom(os, a);
    }
    os << ")\n  (:goal ";
    conjunction(os, task.goal, {});
    os << "))\n";
    return os.str();
}

} // namespace lmlearn

#pragma once

#include "lmlearn/atom.hpp"
#include "lmlearn/pddl.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lmlearn {

using FactId = std::uint32_t;

struct GroundAction {
    std::string schema;
    std::vector<std::string> args;
    std::vector<FactId> pre;
    std::vector<FactId> add;
    std::vector<FactId> del;

    std::string name() const;
};

// Grounded STRIPS task. `facts` is sorted and `init`/`goal` are sorted id
// lists; call build_index() after filling `facts` by hand.
struct GroundTask {
    std::string domain_name;
    std::string name;
    Typing typing;
    std::vector<PredicateDecl> predicates;
    std::vector<Atom> facts;
    std::vector<GroundAction> actions;
    std::vector<FactId> init;
    std::vector<FactId> goal;

    void build_index();

    std::optional<FactId> find(const Atom &atom) const;
    FactId id(const Atom &atom) const;
    const Atom &fact(FactId id) const { return facts.at(id); }
    std::size_t num_facts() const { return facts.size(); }

    bool in_init(FactId id) const;
    bool in_goal(FactId id) const;
    bool in_init(const Atom &atom) const;
    bool in_goal(const Atom &atom) const;

    const PredicateDecl *find_predicate(const std::string &name) const;

private:
    std::map<Atom, FactId> index_;
};

// Instantiates every schema with every type-respecting substitution that is
// reachable under delete relaxation from the initial state. Goal atoms are
// always kept in the fact set, even when unreachable, so that unsolvability
// stays observable downstream.
GroundTask ground(const LiftedTask &task);

} // namespace lmlearn

#pragma once

#include "lmlearn/atom.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lmlearn {

// Parse or validation failure in a PDDL file. Line and column are 1-based;
// 0 means the position is unknown.
class PddlError : public std::runtime_error {
public:
    PddlError(const std::string &message, int line, int column);

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string &detail() const { return detail_; }

private:
    std::string detail_;
    int line_;
    int column_;
};

inline constexpr std::string_view root_type = "object";

struct TypeDecl {
    std::string name;
    std::optional<std::string> parent;

    bool operator==(const TypeDecl &) const = default;
};

struct TypedName {
    std::string name;
    std::string type;

    bool operator==(const TypedName &) const = default;
};

struct PredicateDecl {
    std::string name;
    std::vector<TypedName> params;

    std::size_t arity() const { return params.size(); }
    bool operator==(const PredicateDecl &) const = default;
};

// Schema atoms use Term::variable for parameters and Term::object for
// domain constants.
struct ActionSchema {
    std::string name;
    std::vector<TypedName> params;
    std::vector<Atom> pre;
    std::vector<Atom> add;
    std::vector<Atom> del;

    bool operator==(const ActionSchema &) const = default;
};

// Type forest plus object typing, shared by grounding and instantiation.
struct Typing {
    std::map<std::string, std::string> parent;
    std::map<std::string, std::string> object_type;

    bool is_subtype(const std::string &type, const std::string &ancestor) const;
    bool object_fits(const std::string &object, const std::string &type) const;
    std::vector<std::string> objects_of(const std::string &type) const;

    bool operator==(const Typing &) const = default;
};

struct Domain {
    std::string name;
    std::vector<std::string> requirements;
    std::vector<TypeDecl> types;
    std::vector<TypedName> constants;
    std::vector<PredicateDecl> predicates;
    std::vector<ActionSchema> actions;

    const PredicateDecl *find_predicate(const std::string &name) const;
    bool operator==(const Domain &) const = default;
};

// Domain plus problem: predicates and schemas come from `domain`.
struct LiftedTask {
    Domain domain;
    std::string name;
    std::vector<TypedName> objects;
    std::vector<Atom> init;
    std::vector<Atom> goal;

    Typing typing() const;
    bool operator==(const LiftedTask &) const = default;
};

Domain parse_domain(std::string_view text);
LiftedTask parse_problem(std::string_view text, const Domain &domain);

Domain read_domain_file(const std::string &path);
LiftedTask read_problem_file(const std::string &path, const Domain &domain);

std::string to_pddl(const Domain &domain);
// Prints only the problem part of the task.
std::string to_pddl(const LiftedTask &task);

} // namespace lmlearn

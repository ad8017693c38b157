#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lmlearn {

// A predicate argument: either an object symbol or a variable. Variable names
// keep their leading '?'.
struct Term {
    enum class Kind : std::uint8_t { object, variable };

    Kind kind = Kind::object;
    std::string name;

    static Term object(std::string name) { return {Kind::object, std::move(name)}; }
    static Term variable(std::string name) { return {Kind::variable, std::move(name)}; }

    bool is_object() const { return kind == Kind::object; }
    bool is_variable() const { return kind == Kind::variable; }

    auto operator<=>(const Term &) const = default;
    bool operator==(const Term &) const = default;
};

// Predicate applied to terms. The same type serves grounded landmarks (no
// variables), lifted landmarks, and anything in between.
struct Atom {
    std::string predicate;
    std::vector<Term> args;

    std::size_t arity() const { return args.size(); }

    // Positional counts, so p(a,a) has two object positions.
    std::size_t object_count() const;
    std::size_t variable_count() const;

    bool is_ground() const { return variable_count() == 0; }
    bool is_lifted() const { return variable_count() > 0; }
    bool is_fully_lifted() const { return object_count() == 0; }

    std::set<std::string> objects() const;
    std::set<std::string> variables() const;
    bool mentions_variable(const std::string &var) const;

    std::string str() const;

    auto operator<=>(const Atom &) const = default;
    bool operator==(const Atom &) const = default;
};

// An ordering src -> dst between two (possibly lifted) landmarks.
struct Ordering {
    Atom src;
    Atom dst;

    auto operator<=>(const Ordering &) const = default;
    bool operator==(const Ordering &) const = default;
};

// Builds an atom from argument spellings; spellings starting with '?' become
// variables.
Atom make_atom(std::string predicate, std::initializer_list<std::string_view> args);
Atom make_atom(std::string predicate, const std::vector<std::string> &args);

// Parses "on(a,?x0)" / "handempty()" / "handempty". Throws std::invalid_argument.
Atom parse_atom(std::string_view text);

std::ostream &operator<<(std::ostream &os, const Atom &atom);
std::ostream &operator<<(std::ostream &os, const Ordering &ordering);

} // namespace lmlearn

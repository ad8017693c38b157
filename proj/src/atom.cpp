#include "lmlearn/atom.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <stdexcept>

namespace lmlearn {

std::size_t Atom::object_count() const {
    return static_cast<std::size_t>(
        std::count_if(args.begin(), args.end(), [](const Term &t) { return t.is_object(); }));
}

std::size_t Atom::variable_count() const {
    return args.size() - object_count();
}

std::set<std::string> Atom::objects() const {
    std::set<std::string> result;
    for (const Term &t : args)
        if (t.is_object())
            result.insert(t.name);
    return result;
}

std::set<std::string> Atom::variables() const {
    std::set<std::string> result;
    for (const Term &t : args)
        if (t.is_variable())
            result.insert(t.name);
    return result;
}

bool Atom::mentions_variable(const std::string &var) const {
    return std::any_of(args.begin(), args.end(),
                       [&](const Term &t) { return t.is_variable() && t.name == var; });
}

std::string Atom::str() const {
    std::string out = predicate;
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i)
            out += ',';
        out += args[i].name;
    }
    out += ')';
    return out;
}

namespace {
Term term_from_spelling(std::string_view s) {
    if (s.empty())
        throw std::invalid_argument("empty atom argument");
    if (s.front() == '?')
        return Term::variable(std::string(s));
    return Term::object(std::string(s));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}
} // namespace

Atom make_atom(std::string predicate, std::initializer_list<std::string_view> args) {
    Atom atom{std::move(predicate), {}};
    for (std::string_view a : args)
        atom.args.push_back(term_from_spelling(a));
    return atom;
}

Atom make_atom(std::string predicate, const std::vector<std::string> &args) {
    Atom atom{std::move(predicate), {}};
    for (const std::string &a : args)
        atom.args.push_back(term_from_spelling(a));
    return atom;
}

Atom parse_atom(std::string_view text) {
    text = trim(text);
    auto open = text.find('(');
    if (open == std::string_view::npos) {
        if (text.empty())
            throw std::invalid_argument("empty atom");
        return Atom{std::string(text), {}};
    }
    if (text.back() != ')')
        throw std::invalid_argument("atom missing ')': " + std::string(text));
    Atom atom{std::string(trim(text.substr(0, open))), {}};
    if (atom.predicate.empty())
        throw std::invalid_argument("atom without predicate: " + std::string(text));
    std::string_view body = trim(text.substr(open + 1, text.size() - open - 2));
    while (!body.empty()) {
        auto comma = body.find(',');
        atom.args.push_back(term_from_spelling(trim(body.substr(0, comma))));
        if (comma == std::string_view::npos)
            break;
        body = body.substr(comma + 1);
    }
    return atom;
}

std::ostream &operator<<(std::ostream &os, const Atom &atom) {
    return os << atom.str();
}

std::ostream &operator<<(std::ostream &os, const Ordering &ordering) {
    return os << ordering.src << " -> " << ordering.dst;
}

} // namespace lmlearn

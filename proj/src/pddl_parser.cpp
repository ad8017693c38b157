#include "lmlearn/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace lmlearn {

PddlError::PddlError(const std::string &message, int line, int column)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + message
                                  : message),
      detail_(message), line_(line), column_(column) {}

namespace {

struct Token {
    std::string text;
    int line;
    int column;
};

std::vector<Token> tokenize(std::string_view input) {
    std::vector<Token> tokens;
    int line = 1;
    int column = 1;
    std::size_t i = 0;
    auto advance = [&]() {
        if (input[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++i;
    };
    while (i < input.size()) {
        char c = input[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
        } else if (c == ';') {
            while (i < input.size() && input[i] != '\n')
                advance();
        } else if (c == '(' || c == ')') {
            tokens.push_back({std::string(1, c), line, column});
            advance();
        } else {
            Token tok{{}, line, column};
            while (i < input.size() && !std::isspace(static_cast<unsigned char>(input[i])) &&
                   input[i] != '(' && input[i] != ')' && input[i] != ';') {
                unsigned char ch = static_cast<unsigned char>(input[i]);
                if (!std::isprint(ch))
                    throw PddlError("lexical error: unexpected character", line, column);
                tok.text += static_cast<char>(std::tolower(ch));
                advance();
            }
            tokens.push_back(std::move(tok));
        }
    }
    return tokens;
}

struct SExpr {
    bool is_list = false;
    std::string atom;
    std::vector<SExpr> items;
    int line = 0;
    int column = 0;

    bool is_symbol(std::string_view s) const { return !is_list && atom == s; }
    bool head_is(std::string_view s) const { return is_list && !items.empty() && items[0].is_symbol(s); }

    [[noreturn]] void fail(const std::string &message) const { throw PddlError(message, line, column); }
};

SExpr parse_sexpr(const std::vector<Token> &tokens, std::size_t &pos) {
    const Token &tok = tokens[pos];
    if (tok.text == ")")
        throw PddlError("unexpected ')'", tok.line, tok.column);
    SExpr expr;
    expr.line = tok.line;
    expr.column = tok.column;
    ++pos;
    if (tok.text != "(") {
        expr.atom = tok.text;
        return expr;
    }
    expr.is_list = true;
    while (pos < tokens.size() && tokens[pos].text != ")")
        expr.items.push_back(parse_sexpr(tokens, pos));
    if (pos >= tokens.size())
        throw PddlError("unbalanced '('", tok.line, tok.column);
    ++pos;
    return expr;
}

SExpr parse_document(std::string_view text) {
    auto tokens = tokenize(text);
    if (tokens.empty())
        throw PddlError("empty input", 0, 0);
    std::size_t pos = 0;
    SExpr root = parse_sexpr(tokens, pos);
    if (pos != tokens.size())
        throw PddlError("trailing input after definition", tokens[pos].line, tokens[pos].column);
    if (!root.head_is("define"))
        root.fail("expected (define ...)");
    return root;
}

const std::string &symbol(const SExpr &e, const char *what) {
    if (e.is_list)
        e.fail(std::string("expected ") + what);
    return e.atom;
}

// Parses "a b - t c" style lists. Names without a type get `object`.
std::vector<std::pair<TypedName, const SExpr *>> typed_list(const SExpr &list, std::size_t start,
                                                          bool variables) {
    std::vector<std::pair<TypedName, const SExpr *>> result;
    std::vector<const SExpr *> pending;
    for (std::size_t i = start; i < list.items.size(); ++i) {
        const SExpr &item = list.items[i];
        if (item.is_list)
            item.fail("unexpected list in typed list (either-types are not supported)");
        if (item.atom == "-") {
            if (i + 1 >= list.items.size())
                item.fail("expected type after '-'");
            const SExpr &type = list.items[++i];
            if (type.is_list)
                type.fail("either-types are not supported");
            if (pending.empty())
                item.fail("'-' without names");
            for (const SExpr *p : pending)
                result.push_back({{p->atom, type.atom}, p});
            pending.clear();
            continue;
        }
        if (variables != (item.atom.front() == '?'))
            item.fail(variables ? "expected variable" : "unexpected variable");
        pending.push_back(&item);
    }
    for (const SExpr *p : pending)
        result.push_back({{p->atom, std::string(root_type)}, p});
    return result;
}

class DomainBuilder {
public:
    explicit DomainBuilder(Domain &domain) : domain_(domain) {}

    void requirements(const SExpr &section) {
        for (std::size_t i = 1; i < section.items.size(); ++i) {
            const std::string &req = symbol(section.items[i], "requirement");
            if (req != ":strips" && req != ":typing")
                section.items[i].fail("unsupported requirement " + req);
            domain_.requirements.push_back(req);
        }
    }

    void types(const SExpr &section) {
        auto entries = typed_list(section, 1, false);
        std::set<std::string> declared{std::string(root_type)};
        for (auto &[tn, where] : entries) {
            if (tn.name == root_type)
                continue;
            if (!declared.insert(tn.name).second)
                where->fail("duplicate type " + tn.name);
        }
        for (auto &[tn, where] : entries) {
            if (tn.name == root_type)
                continue;
            if (!declared.count(tn.type))
                where->fail("unknown type " + tn.type);
            std::optional<std::string> parent;
            if (tn.type != root_type)
                parent = tn.type;
            domain_.types.push_back({tn.name, parent});
        }
        // Forest check: walking parents must reach the root.
        std::map<std::string, std::string> parent_of;
        for (const TypeDecl &t : domain_.types)
            parent_of[t.name] = t.parent.value_or(std::string(root_type));
        for (const TypeDecl &t : domain_.types) {
            std::string cur = t.name;
            for (std::size_t steps = 0; cur != root_type; ++steps) {
                if (steps > parent_of.size())
                    section.fail("cyclic type hierarchy at " + t.name);
                cur = parent_of.at(cur);
            }
        }
    }

    void constants(const SExpr &section) {
        for (auto &[tn, where] : typed_list(section, 1, false)) {
            check_type(tn.type, *where);
            domain_.constants.push_back(tn);
        }
    }

    void predicates(const SExpr &section) {
        for (std::size_t i = 1; i < section.items.size(); ++i) {
            const SExpr &decl = section.items[i];
            if (!decl.is_list || decl.items.empty())
                decl.fail("expected predicate declaration");
            PredicateDecl pred{symbol(decl.items[0], "predicate name"), {}};
            if (domain_.find_predicate(pred.name))
                decl.fail("duplicate predicate " + pred.name);
            for (auto &[tn, where] : typed_list(decl, 1, true)) {
                check_type(tn.type, *where);
                pred.params.push_back(tn);
            }
            domain_.predicates.push_back(std::move(pred));
        }
    }

    void action(const SExpr &section) {
        if (section.items.size() < 2)
            section.fail("action without name");
        ActionSchema schema{symbol(section.items[1], "action name"), {}, {}, {}, {}};
        std::map<std::string, std::string> scope;
        for (std::size_t i = 2; i < section.items.size(); i += 2) {
            const std::string &key = symbol(section.items[i], "action keyword");
            if (i + 1 >= section.items.size())
                section.items[i].fail("missing value for " + key);
            const SExpr &value = section.items[i + 1];
            if (key == ":parameters") {
                if (!value.is_list)
                    value.fail("expected parameter list");
                for (auto &[tn, where] : typed_list(value, 0, true)) {
                    check_type(tn.type, *where);
                    if (!scope.emplace(tn.name, tn.type).second)
                        where->fail("duplicate parameter " + tn.name);
                    schema.params.push_back(tn);
                }
            } else if (key == ":precondition") {
                conjunction(value, scope, schema.pre, nullptr);
            } else if (key == ":effect") {
                conjunction(value, scope, schema.add, &schema.del);
            } else {
                section.items[i].fail("unsupported action keyword " + key);
            }
        }
        for (const Atom &a : schema.add)
            if (std::find(schema.del.begin(), schema.del.end(), a) != schema.del.end())
                section.fail("atom " + a.str() + " is both added and deleted by " + schema.name);
        domain_.actions.push_back(std::move(schema));
    }

    void check_type(const std::string &type, const SExpr &where) const {
        if (type == root_type)
            return;
        for (const TypeDecl &t : domain_.types)
            if (t.name == type)
                return;
        where.fail("unknown type " + type);
    }

private:
    void conjunction(const SExpr &expr, const std::map<std::string, std::string> &scope,
                     std::vector<Atom> &positive, std::vector<Atom> *negative) {
        if (!expr.is_list)
            expr.fail("expected formula");
        if (expr.items.empty())
            return;
        if (expr.head_is("and")) {
            for (std::size_t i = 1; i < expr.items.size(); ++i)
                literal(expr.items[i], scope, positive, negative);
            return;
        }
        literal(expr, scope, positive, negative);
    }

    void literal(const SExpr &expr, const std::map<std::string, std::string> &scope,
                 std::vector<Atom> &positive, std::vector<Atom> *negative) {
        if (expr.head_is("not")) {
            if (!negative)
                expr.fail("negative preconditions are not supported");
            if (expr.items.size() != 2)
                expr.fail("malformed negation");
            negative->push_back(schema_atom(expr.items[1], scope));
            return;
        }
        static const std::set<std::string, std::less<>> unsupported{
            "or", "imply", "forall", "exists", "when", "=", "increase", "decrease", "assign"};
        if (expr.is_list && !expr.items.empty() && !expr.items[0].is_list &&
            unsupported.count(expr.items[0].atom))
            expr.fail("unsupported construct " + expr.items[0].atom);
        positive.push_back(schema_atom(expr, scope));
    }

    Atom schema_atom(const SExpr &expr, const std::map<std::string, std::string> &scope) {
        if (!expr.is_list || expr.items.empty())
            expr.fail("expected atom");
        Atom atom{symbol(expr.items[0], "predicate name"), {}};
        const PredicateDecl *pred = domain_.find_predicate(atom.predicate);
        if (!pred)
            expr.fail("unknown predicate " + atom.predicate);
        if (pred->arity() != expr.items.size() - 1)
            expr.fail("arity mismatch for " + atom.predicate + ": expected " +
                      std::to_string(pred->arity()) + ", got " + std::to_string(expr.items.size() - 1));
        for (std::size_t i = 1; i < expr.items.size(); ++i) {
            const std::string &arg = symbol(expr.items[i], "argument");
            if (arg.front() == '?') {
                if (!scope.count(arg))
                    expr.items[i].fail("unbound variable " + arg);
                atom.args.push_back(Term::variable(arg));
            } else {
                auto it = std::find_if(domain_.constants.begin(), domain_.constants.end(),
                                       [&](const TypedName &c) { return c.name == arg; });
                if (it == domain_.constants.end())
                    expr.items[i].fail("unknown constant " + arg);
                atom.args.push_back(Term::object(arg));
            }
        }
        return atom;
    }

    Domain &domain_;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw PddlError("cannot open " + path, 0, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

bool Typing::is_subtype(const std::string &type, const std::string &ancestor) const {
    if (ancestor == root_type)
        return true;
    std::string cur = type;
    for (std::size_t steps = 0; steps <= parent.size(); ++steps) {
        if (cur == ancestor)
            return true;
        auto it = parent.find(cur);
        if (it == parent.end())
            return false;
        cur = it->second;
    }
    return false;
}

bool Typing::object_fits(const std::string &object, const std::string &type) const {
    auto it = object_type.find(object);
    if (it == object_type.end())
        return type == root_type;
    return is_subtype(it->second, type);
}

std::vector<std::string> Typing::objects_of(const std::string &type) const {
    std::vector<std::string> result;
    for (const auto &[obj, t] : object_type)
        if (is_subtype(t, type))
            result.push_back(obj);
    return result;
}

const PredicateDecl *Domain::find_predicate(const std::string &name) const {
    for (const PredicateDecl &p : predicates)
        if (p.name == name)
            return &p;
    return nullptr;
}

Typing LiftedTask::typing() const {
    Typing t;
    for (const TypeDecl &decl : domain.types)
        t.parent[decl.name] = decl.parent.value_or(std::string(root_type));
    for (const TypedName &c : domain.constants)
        t.object_type[c.name] = c.type;
    for (const TypedName &o : objects)
        t.object_type[o.name] = o.type;
    return t;
}

Domain parse_domain(std::string_view text) {
    SExpr root = parse_document(text);
    Domain domain;
    DomainBuilder builder(domain);
    bool seen_name = false;
    for (std::size_t i = 1; i < root.items.size(); ++i) {
        const SExpr &section = root.items[i];
        if (!section.is_list || section.items.empty())
            section.fail("expected domain section");
        const std::string &head = symbol(section.items[0], "section keyword");
        if (head == "domain") {
            if (section.items.size() != 2)
                section.fail("malformed domain name");
            domain.name = symbol(section.items[1], "domain name");
            seen_name = true;
        } else if (head == ":requirements") {
            builder.requirements(section);
        } else if (head == ":types") {
            builder.types(section);
        } else if (head == ":constants") {
            builder.constants(section);
        } else if (head == ":predicates") {
            builder.predicates(section);
        } else if (head == ":action") {
            builder.action(section);
        } else {
            section.items[0].fail("unsupported domain section " + head);
        }
    }
    if (!seen_name)
        root.fail("missing (domain <name>)");
    return domain;
}

LiftedTask parse_problem(std::string_view text, const Domain &domain) {
    SExpr root = parse_document(text);
    LiftedTask task;
    task.domain = domain;
    std::map<std::string, std::string> known;
    for (const TypedName &c : domain.constants)
        known[c.name] = c.type;
    DomainBuilder type_checker(task.domain);

    auto ground_atom = [&](const SExpr &expr) {
        if (!expr.is_list || expr.items.empty())
            expr.fail("expected ground atom");
        Atom atom{symbol(expr.items[0], "predicate name"), {}};
        if (atom.predicate == "=" || atom.predicate == "not")
            expr.fail("unsupported construct " + atom.predicate);
        const PredicateDecl *pred = domain.find_predicate(atom.predicate);
        if (!pred)
            expr.fail("unknown predicate " + atom.predicate);
        if (pred->arity() != expr.items.size() - 1)
            expr.fail("arity mismatch for " + atom.predicate);
        for (std::size_t i = 1; i < expr.items.size(); ++i) {
            const std::string &arg = symbol(expr.items[i], "object");
            auto it = known.find(arg);
            if (it == known.end())
                expr.items[i].fail("unknown object " + arg);
            atom.args.push_back(Term::object(arg));
        }
        return atom;
    };

    bool seen_name = false;
    for (std::size_t i = 1; i < root.items.size(); ++i) {
        const SExpr &section = root.items[i];
        if (!section.is_list || section.items.empty())
            section.fail("expected problem section");
        const std::string &head = symbol(section.items[0], "section keyword");
        if (head == "problem") {
            if (section.items.size() != 2)
                section.fail("malformed problem name");
            task.name = symbol(section.items[1], "problem name");
            seen_name = true;
        } else if (head == ":domain") {
            if (section.items.size() != 2)
                section.fail("malformed :domain");
            if (symbol(section.items[1], "domain name") != domain.name)
                section.items[1].fail("problem is for domain " + section.items[1].atom + ", not " +
                                      domain.name);
        } else if (head == ":requirements") {
            Domain scratch;
            DomainBuilder(scratch).requirements(section);
        } else if (head == ":objects") {
            for (auto &[tn, where] : typed_list(section, 1, false)) {
                type_checker.check_type(tn.type, *where);
                if (!known.emplace(tn.name, tn.type).second)
                    where->fail("duplicate object " + tn.name);
                task.objects.push_back(tn);
            }
        } else if (head == ":init") {
            for (std::size_t k = 1; k < section.items.size(); ++k) {
                Atom a = ground_atom(section.items[k]);
                if (std::find(task.init.begin(), task.init.end(), a) == task.init.end())
                    task.init.push_back(std::move(a));
            }
        } else if (head == ":goal") {
            if (section.items.size() != 2)
                section.fail("malformed :goal");
            const SExpr &g = section.items[1];
            if (!g.is_list)
                g.fail("expected goal formula");
            std::vector<const SExpr *> parts;
            if (g.head_is("and")) {
                for (std::size_t k = 1; k < g.items.size(); ++k)
                    parts.push_back(&g.items[k]);
            } else if (!g.items.empty()) {
                parts.push_back(&g);
            }
            for (const SExpr *p : parts) {
                if (p->is_list && !p->items.empty() && !p->items[0].is_list &&
                    (p->items[0].atom == "or" || p->items[0].atom == "forall" ||
                     p->items[0].atom == "exists" || p->items[0].atom == "imply"))
                    p->fail("unsupported goal construct " + p->items[0].atom);
                Atom a = ground_atom(*p);
                if (std::find(task.goal.begin(), task.goal.end(), a) == task.goal.end())
                    task.goal.push_back(std::move(a));
            }
        } else {
            section.items[0].fail("unsupported problem section " + head);
        }
    }
    if (!seen_name)
        root.fail("missing (problem <name>)");
    return task;
}

Domain read_domain_file(const std::string &path) {
    return parse_domain(read_file(path));
}

LiftedTask read_problem_file(const std::string &path, const Domain &domain) {
    return parse_problem(read_file(path), domain);
}

} // namespace lmlearn

#include "lmlearn/ground_task.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <set>
#include <stdexcept>

namespace lmlearn {

std::string GroundAction::name() const {
    std::string out = schema + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i)
            out += ',';
        out += args[i];
    }
    return out + ")";
}

void GroundTask::build_index() {
    index_.clear();
    for (FactId i = 0; i < facts.size(); ++i)
        index_.emplace(facts[i], i);
}

std::optional<FactId> GroundTask::find(const Atom &atom) const {
    auto it = index_.find(atom);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

FactId GroundTask::id(const Atom &atom) const {
    auto found = find(atom);
    if (!found)
        throw std::out_of_range("atom not in task facts: " + atom.str());
    return *found;
}

bool GroundTask::in_init(FactId id) const {
    return std::binary_search(init.begin(), init.end(), id);
}

bool GroundTask::in_goal(FactId id) const {
    return std::binary_search(goal.begin(), goal.end(), id);
}

bool GroundTask::in_init(const Atom &atom) const {
    auto found = find(atom);
    return found && in_init(*found);
}

bool GroundTask::in_goal(const Atom &atom) const {
    auto found = find(atom);
    return found && in_goal(*found);
}

const PredicateDecl *GroundTask::find_predicate(const std::string &name) const {
    for (const PredicateDecl &p : predicates)
        if (p.name == name)
            return &p;
    return nullptr;
}

namespace {

using Binding = std::map<std::string, std::string>;

class Grounder {
public:
    explicit Grounder(const LiftedTask &task) : task_(task), typing_(task.typing()) {
        for (const Atom &a : task.init)
            insert_fact(a);
    }

    void run() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t s = 0; s < task_.domain.actions.size(); ++s) {
                pending_.clear();
                const ActionSchema &schema = task_.domain.actions[s];
                Binding binding;
                match(s, schema, 0, binding);
                for (Atom &a : pending_)
                    changed |= insert_fact(std::move(a));
            }
        }
    }

    GroundTask result() const {
        GroundTask out;
        out.domain_name = task_.domain.name;
        out.name = task_.name;
        out.typing = typing_;
        out.predicates = task_.domain.predicates;
        std::set<Atom> all = reached_;
        all.insert(task_.goal.begin(), task_.goal.end());
        out.facts.assign(all.begin(), all.end());
        out.build_index();

        auto ids = [&](const std::vector<Atom> &atoms, bool drop_unknown) {
            std::vector<FactId> v;
            for (const Atom &a : atoms) {
                auto found = out.find(a);
                if (found)
                    v.push_back(*found);
                else if (!drop_unknown)
                    throw std::logic_error("grounded atom missing from fact set: " + a.str());
            }
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            return v;
        };

        for (const auto &[key, atoms] : actions_) {
            GroundAction act;
            act.schema = task_.domain.actions[key.first].name;
            act.args = key.second;
            act.pre = ids(atoms[0], false);
            act.add = ids(atoms[1], false);
            // Deletes of never-reachable atoms are vacuous.
            std::vector<FactId> del = ids(atoms[2], true);
            std::vector<FactId> filtered;
            std::set_difference(del.begin(), del.end(), act.add.begin(), act.add.end(),
                                std::back_inserter(filtered));
            act.del = std::move(filtered);
            out.actions.push_back(std::move(act));
        }
        std::sort(out.actions.begin(), out.actions.end(), [](const GroundAction &a, const GroundAction &b) {
            return std::tie(a.schema, a.args) < std::tie(b.schema, b.args);
        });
        out.init = ids(task_.init, false);
        out.goal = ids(task_.goal, false);
        return out;
    }

private:
    bool insert_fact(Atom atom) {
        if (!reached_.insert(atom).second)
            return false;
        by_predicate_[atom.predicate].push_back(std::move(atom));
        return true;
    }

    static const std::string &param_type(const ActionSchema &schema, const std::string &var) {
        for (const TypedName &p : schema.params)
            if (p.name == var)
                return p.type;
        throw std::logic_error("unbound schema variable " + var);
    }

    bool unify(const ActionSchema &schema, const Atom &pattern, const Atom &fact, Binding &binding,
               std::vector<std::string> &newly_bound) const {
        for (std::size_t i = 0; i < pattern.args.size(); ++i) {
            const Term &t = pattern.args[i];
            const std::string &obj = fact.args[i].name;
            if (t.is_object()) {
                if (t.name != obj)
                    return false;
                continue;
            }
            auto it = binding.find(t.name);
            if (it != binding.end()) {
                if (it->second != obj)
                    return false;
                continue;
            }
            if (!typing_.object_fits(obj, param_type(schema, t.name)))
                return false;
            binding.emplace(t.name, obj);
            newly_bound.push_back(t.name);
        }
        return true;
    }

    void match(std::size_t schema_index, const ActionSchema &schema, std::size_t k, Binding &binding) {
        if (k == schema.pre.size()) {
            bind_free(schema_index, schema, 0, binding);
            return;
        }
        const Atom &pattern = schema.pre[k];
        auto it = by_predicate_.find(pattern.predicate);
        if (it == by_predicate_.end())
            return;
        const std::vector<Atom> &candidates = it->second;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            std::vector<std::string> newly_bound;
            if (unify(schema, pattern, candidates[c], binding, newly_bound))
                match(schema_index, schema, k + 1, binding);
            for (const std::string &v : newly_bound)
                binding.erase(v);
        }
    }

    void bind_free(std::size_t schema_index, const ActionSchema &schema, std::size_t p, Binding &binding) {
        if (p == schema.params.size()) {
            emit(schema_index, schema, binding);
            return;
        }
        const TypedName &param = schema.params[p];
        if (binding.count(param.name)) {
            bind_free(schema_index, schema, p + 1, binding);
            return;
        }
        for (const std::string &obj : typing_.objects_of(param.type)) {
            binding[param.name] = obj;
            bind_free(schema_index, schema, p + 1, binding);
        }
        binding.erase(param.name);
    }

    static Atom substitute(const Atom &pattern, const Binding &binding) {
        Atom out{pattern.predicate, {}};
        for (const Term &t : pattern.args)
            out.args.push_back(Term::object(t.is_object() ? t.name : binding.at(t.name)));
        return out;
    }

    void emit(std::size_t schema_index, const ActionSchema &schema, const Binding &binding) {
        std::vector<std::string> args;
        for (const TypedName &p : schema.params)
            args.push_back(binding.at(p.name));
        auto key = std::make_pair(schema_index, std::move(args));
        if (actions_.count(key))
            return;
        std::array<std::vector<Atom>, 3> atoms;
        for (const Atom &a : schema.pre)
            atoms[0].push_back(substitute(a, binding));
        for (const Atom &a : schema.add)
            atoms[1].push_back(substitute(a, binding));
        for (const Atom &a : schema.del)
            atoms[2].push_back(substitute(a, binding));
        for (const Atom &a : atoms[1])
            if (!reached_.count(a))
                pending_.push_back(a);
        actions_.emplace(std::move(key), std::move(atoms));
    }

    const LiftedTask &task_;
    Typing typing_;
    std::set<Atom> reached_;
    std::map<std::string, std::vector<Atom>> by_predicate_;
    std::map<std::pair<std::size_t, std::vector<std::string>>, std::array<std::vector<Atom>, 3>> actions_;
    std::vector<Atom> pending_;
};

} // namespace

GroundTask ground(const LiftedTask &task) {
    Grounder grounder(task);
    grounder.run();
    return grounder.result();
}

} // namespace lmlearn

#include "lmlearn/plgg.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace lmlearn {

namespace {

const std::set<std::string> kEmpty;

} // namespace

void VarConstraintStore::set_type(const std::string &var, const std::string &type) {
    types_[var] = type;
}

std::optional<std::string> VarConstraintStore::type_of(const std::string &var) const {
    auto it = types_.find(var);
    if (it == types_.end())
        return std::nullopt;
    return it->second;
}

void VarConstraintStore::forbid_object(const std::string &var, const std::string &object) {
    auto type = type_of(var);
    if (typing_ && type && !typing_->object_fits(object, *type))
        return;
    entries_[var].objects.insert(object);
}

void VarConstraintStore::forbid_variable(const std::string &var, const std::string &other) {
    if (var == other)
        return;
    entries_[var].variables.insert(other);
}

const std::set<std::string> &VarConstraintStore::objects(const std::string &var) const {
    auto it = entries_.find(var);
    return it == entries_.end() ? kEmpty : it->second.objects;
}

const std::set<std::string> &VarConstraintStore::variables(const std::string &var) const {
    auto it = entries_.find(var);
    return it == entries_.end() ? kEmpty : it->second.variables;
}

bool VarConstraintStore::can_take(const std::string &var, const std::string &object) const {
    auto type = type_of(var);
    if (typing_ && type && !typing_->object_fits(object, *type))
        return false;
    return !objects(var).count(object);
}

bool VarConstraintStore::banned_pair(const std::string &x, const std::string &y) const {
    return variables(x).count(y) || variables(y).count(x);
}

void VarConstraintStore::merge_from(const VarConstraintStore &other) {
    if (!typing_)
        typing_ = other.typing_;
    for (const auto &[var, c] : other.entries_) {
        auto &mine = entries_[var];
        mine.objects.insert(c.objects.begin(), c.objects.end());
        mine.variables.insert(c.variables.begin(), c.variables.end());
    }
    for (const auto &[var, type] : other.types_)
        types_.emplace(var, type);
}

Atom substitute(const Atom &atom, const Bindings &bindings) {
    Atom out = atom;
    for (Term &t : out.args) {
        if (!t.is_variable())
            continue;
        auto it = bindings.find(t.name);
        if (it != bindings.end())
            t = Term::object(it->second);
    }
    return out;
}

Ordering fresh_variables(const Ordering &edge, VariableFactory &factory) {
    std::map<std::string, std::string> renaming;
    auto rename = [&](const Atom &a) {
        Atom out = a;
        for (Term &t : out.args) {
            if (!t.is_variable())
                continue;
            auto [it, inserted] = renaming.try_emplace(t.name, "");
            if (inserted)
                it->second = factory.fresh();
            t.name = it->second;
        }
        return out;
    };
    Atom src = rename(edge.src);
    Atom dst = rename(edge.dst);
    return {std::move(src), std::move(dst)};
}

void update_distinct_consts(VarConstraintStore &store, const Atom &pred, const Atom &lm) {
    const auto lm_objects = lm.objects();
    const auto lm_variables = lm.variables();
    for (const std::string &x : pred.variables()) {
        if (lm_variables.count(x))
            continue;
        for (const std::string &o : lm_objects)
            store.forbid_object(x, o);
        for (const std::string &v : lm_variables)
            store.forbid_variable(x, v);
    }
}

bool equivalent_params(const Term &x, const Term &y, const VarConstraintStore &store) {
    if (x.kind == y.kind) {
        if (x.is_object())
            return x.name == y.name;
        if (x.name == y.name)
            return true;
        return store.objects(x.name) == store.objects(y.name) && !store.banned_pair(x.name, y.name);
    }
    const Term &var = x.is_variable() ? x : y;
    const Term &obj = x.is_variable() ? y : x;
    return store.can_take(var.name, obj.name);
}

bool equivalent_atoms(const Atom &p, const Atom &q, const VarConstraintStore &store) {
    if (p.predicate != q.predicate || p.arity() != q.arity())
        return false;
    for (std::size_t i = 0; i < p.arity(); ++i)
        if (!equivalent_params(p.args[i], q.args[i], store))
            return false;
    return true;
}

std::size_t equivalence_distance(const Atom &p, const Atom &q) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < std::min(p.arity(), q.arity()); ++i)
        if (p.args[i].is_variable() != q.args[i].is_variable())
            ++d;
    return d;
}

const char *to_string(PlggSide side) {
    switch (side) {
    case PlggSide::goal:
        return "goal";
    case PlggSide::init:
        return "init";
    case PlggSide::combined:
        return "combined";
    }
    return "?";
}

void PLgg::add_node(const Atom &node) {
    nodes.try_emplace(node);
}

void PLgg::add_neighbor(const Atom &node, const Atom &neighbor, double mu) {
    auto &adj = nodes[node];
    auto [it, inserted] = adj.emplace(neighbor, mu);
    if (!inserted)
        it->second = std::max(it->second, mu);
}

std::set<Atom> PLgg::vertices() const {
    std::set<Atom> out;
    for (const auto &[node, adj] : nodes) {
        out.insert(node);
        for (const auto &[n, mu] : adj)
            out.insert(n);
    }
    return out;
}

std::vector<std::pair<Ordering, double>> PLgg::orderings() const {
    std::vector<std::pair<Ordering, double>> out;
    for (const auto &[node, adj] : nodes)
        for (const auto &[n, mu] : adj) {
            if (side == PlggSide::init)
                out.push_back({{node, n}, mu});
            else
                out.push_back({{n, node}, mu});
        }
    std::sort(out.begin(), out.end());
    return out;
}

double PLgg::node_probability(const Atom &atom) const {
    double best = 0.0;
    for (const auto &[node, adj] : nodes)
        for (const auto &[n, mu] : adj)
            if (node == atom || n == atom)
                best = std::max(best, mu);
    return best;
}

namespace {

std::map<Atom, double> vertex_probabilities(const PLgg &plgg) {
    std::map<Atom, double> probs;
    for (const auto &[node, adj] : plgg.nodes) {
        probs.try_emplace(node, 0.0);
        for (const auto &[n, mu] : adj) {
            double &a = probs[node];
            a = std::max(a, mu);
            double &b = probs[n];
            b = std::max(b, mu);
        }
    }
    return probs;
}

// Variables renamed by first occurrence, objects kept. Two atoms with the same
// key differ only in variable names.
Atom alpha_key(const Atom &atom) {
    std::map<std::string, std::string> names;
    Atom out = atom;
    for (Term &t : out.args) {
        if (!t.is_variable())
            continue;
        auto [it, inserted] = names.try_emplace(t.name, "");
        if (inserted)
            it->second = "?v" + std::to_string(names.size() - 1);
        t.name = it->second;
    }
    return out;
}

void record_types(VarConstraintStore &store, const Atom &atom, const GroundTask &task) {
    const PredicateDecl *decl = task.find_predicate(atom.predicate);
    if (!decl || decl->params.size() != atom.arity())
        return;
    for (std::size_t i = 0; i < atom.arity(); ++i)
        if (atom.args[i].is_variable() && !store.type_of(atom.args[i].name))
            store.set_type(atom.args[i].name, decl->params[i].type);
}

PlggBuild generate_side(const PLog &plog, const GroundTask &task, VariableFactory &factory,
                        bool goal_side) {
    PlggBuild build{{}, VarConstraintStore(&task.typing)};
    PLgg &graph = build.graph;
    graph.side = goal_side ? PlggSide::goal : PlggSide::init;

    const auto &seed_ids = goal_side ? task.goal : task.init;
    const auto &stop_ids = goal_side ? task.init : task.goal;
    std::set<Atom> stop;
    for (FactId f : stop_ids)
        stop.insert(task.fact(f));

    std::deque<Atom> queue;
    for (FactId f : seed_ids) {
        graph.seeds.insert(task.fact(f));
        queue.push_back(task.fact(f));
    }

    std::set<Atom> expanded;
    while (!queue.empty()) {
        Atom lm = std::move(queue.front());
        queue.pop_front();
        graph.add_node(lm);
        if (lm.object_count() == 0 || stop.count(lm))
            continue;
        if (!expanded.insert(alpha_key(lm)).second)
            continue;

        const Atom lifted = lift_atom(lm);
        const auto edges = goal_side ? plog.in_edges(lifted) : plog.out_edges(lifted);
        if (edges.empty() && graph.seeds.count(lm))
            graph.unmatched_seeds.insert(lm);

        for (const Ordering &edge : edges) {
            const Ordering renamed = fresh_variables(edge, factory);
            const Atom &anchor = goal_side ? renamed.dst : renamed.src;
            const Atom &other = goal_side ? renamed.src : renamed.dst;
            if (anchor.arity() != lm.arity())
                continue;

            std::map<std::string, Term> unifier;
            bool ok = true;
            for (std::size_t i = 0; i < anchor.arity() && ok; ++i) {
                const Term &a = anchor.args[i];
                if (a.is_object()) {
                    ok = a == lm.args[i];
                    continue;
                }
                auto [it, inserted] = unifier.emplace(a.name, lm.args[i]);
                ok = inserted || it->second == lm.args[i];
            }
            if (!ok)
                continue;

            Atom neighbor = other;
            for (Term &t : neighbor.args) {
                if (!t.is_variable())
                    continue;
                auto it = unifier.find(t.name);
                if (it != unifier.end())
                    t = it->second;
            }
            record_types(build.store, neighbor, task);
            update_distinct_consts(build.store, neighbor, lm);
            graph.add_neighbor(lm, neighbor, plog.mu(edge));
            if (neighbor.object_count() > 0)
                queue.push_back(neighbor);
        }
    }
    return build;
}

bool binding_of(const Atom &candidate, const Atom &lm, Bindings &out) {
    for (std::size_t i = 0; i < candidate.arity(); ++i) {
        const Term &t = candidate.args[i];
        if (!t.is_variable())
            continue;
        auto [it, inserted] = out.emplace(t.name, lm.args[i].name);
        if (!inserted && it->second != lm.args[i].name)
            return false;
    }
    return true;
}

bool clashes(const Bindings &accepted, const std::string &var, const std::string &object,
             const VarConstraintStore &store) {
    auto it = accepted.find(var);
    if (it != accepted.end())
        return it->second != object;
    for (const auto &[y, o] : accepted)
        if (o == object && store.banned_pair(var, y))
            return true;
    return false;
}

std::vector<EquivCandidate> rank_from(const std::map<Atom, double> &lifted, const Atom &lm,
                                      const VarConstraintStore &store) {
    std::vector<EquivCandidate> out;
    if (!lm.is_ground())
        return out;
    for (auto it = lifted.lower_bound(Atom{lm.predicate, {}});
         it != lifted.end() && it->first.predicate == lm.predicate; ++it) {
        const Atom &v = it->first;
        if (!equivalent_atoms(v, lm, store))
            continue;
        Bindings scratch;
        if (!binding_of(v, lm, scratch))
            continue;
        out.push_back({v, equivalence_distance(v, lm), it->second});
    }
    std::sort(out.begin(), out.end(), [](const EquivCandidate &a, const EquivCandidate &b) {
        if (a.distance != b.distance)
            return a.distance < b.distance;
        if (a.prob != b.prob)
            return a.prob > b.prob;
        return a.candidate < b.candidate;
    });
    return out;
}

std::map<Atom, double> lifted_vertices(const PLgg &plgg) {
    std::map<Atom, double> out;
    for (const auto &[v, p] : vertex_probabilities(plgg))
        if (v.is_lifted())
            out.emplace(v, p);
    return out;
}

Bindings best_from(const std::map<Atom, double> &lifted, const Atom &lm,
                   const VarConstraintStore &store, std::size_t top_n) {
    Bindings result;
    auto ranked = rank_from(lifted, lm, store);
    if (ranked.empty() || top_n == 0)
        return result;
    const std::size_t best = ranked.front().distance;
    std::size_t taken = 0;
    for (const EquivCandidate &c : ranked) {
        if (c.distance != best || taken == top_n)
            break;
        ++taken;
        Bindings b;
        binding_of(c.candidate, lm, b);
        bool ok = true;
        for (const auto &[var, obj] : b)
            if (clashes(result, var, obj, store))
                ok = false;
        if (ok)
            result.insert(b.begin(), b.end());
    }
    return result;
}

} // namespace

PlggBuild generate_plgg_goal(const PLog &plog, const GroundTask &task, VariableFactory &factory) {
    return generate_side(plog, task, factory, true);
}

PlggBuild generate_plgg_init(const PLog &plog, const GroundTask &task, VariableFactory &factory) {
    return generate_side(plog, task, factory, false);
}

std::vector<EquivCandidate> rank_candidates(const PLgg &plgg, const Atom &lm,
                                            const VarConstraintStore &store) {
    return rank_from(lifted_vertices(plgg), lm, store);
}

Bindings search_best_equiv(const PLgg &plgg, const Atom &lm, const VarConstraintStore &store,
                           std::size_t top_n) {
    return best_from(lifted_vertices(plgg), lm, store, top_n);
}

std::vector<SkippedBinding> apply_instantiation(PLgg &plgg, const Bindings &bindings,
                                                const VarConstraintStore &store) {
    std::vector<SkippedBinding> skipped;
    Bindings accepted;
    for (const auto &[var, obj] : bindings) {
        if (!store.can_take(var, obj)) {
            skipped.push_back({var, obj, "forbidden or type-incompatible object"});
            continue;
        }
        if (clashes(accepted, var, obj, store)) {
            skipped.push_back({var, obj, "identifies variables that must differ"});
            continue;
        }
        accepted.emplace(var, obj);
    }
    if (accepted.empty())
        return skipped;

    std::vector<Atom> lifted;
    for (const Atom &v : plgg.vertices())
        if (v.is_lifted())
            lifted.push_back(v);

    for (const Atom &v : lifted) {
        Atom inst = substitute(v, accepted);
        if (inst == v)
            continue;
        std::map<Atom, double> adj;
        if (auto it = plgg.nodes.find(v); it != plgg.nodes.end())
            adj = it->second;
        plgg.add_node(inst);
        for (const auto &[n, mu] : adj)
            plgg.add_neighbor(inst, substitute(n, accepted), mu);
    }
    return skipped;
}

std::set<Atom> get_instantiated_lms(const PLgg &plgg, const GroundTask &task) {
    std::set<Atom> out;
    for (const Atom &v : plgg.vertices())
        if (v.is_ground() && task.find(v))
            out.insert(v);
    return out;
}

void instantiate(PLgg &plgg, const std::set<Atom> &lms, const VarConstraintStore &store,
                 std::size_t top_n) {
    const auto lifted = lifted_vertices(plgg);
    Bindings all;
    for (const Atom &lm : lms) {
        for (const auto &[var, obj] : best_from(lifted, lm, store, top_n)) {
            if (all.count(var) || clashes(all, var, obj, store))
                continue;
            all.emplace(var, obj);
        }
    }
    apply_instantiation(plgg, all, store);
}

CombineResult combine(const PLgg &a, const PLgg &b, const GroundTask &task,
                      const VarConstraintStore &store, std::size_t top_n) {
    if (a.side == b.side || a.side == PlggSide::combined || b.side == PlggSide::combined)
        throw std::invalid_argument("combine needs one goal-side and one init-side graph");
    PLgg g_init = a.side == PlggSide::init ? a : b;
    PLgg g_goal = a.side == PlggSide::goal ? a : b;

    std::set<Atom> lms_init, lms_goal;
    for (FactId f : task.init)
        lms_init.insert(task.fact(f));
    for (FactId f : task.goal)
        lms_goal.insert(task.fact(f));

    CombineResult result;
    std::set<Atom> current = lms_init;
    current.insert(lms_goal.begin(), lms_goal.end());
    for (;;) {
        const std::set<Atom> previous = current;
        instantiate(g_init, lms_goal, store, top_n);
        auto harvested = get_instantiated_lms(g_init, task);
        lms_init.insert(harvested.begin(), harvested.end());
        instantiate(g_goal, lms_init, store, top_n);
        harvested = get_instantiated_lms(g_goal, task);
        lms_goal.insert(harvested.begin(), harvested.end());

        current = lms_init;
        current.insert(lms_goal.begin(), lms_goal.end());
        ++result.iterations;
        result.known_per_iteration.push_back(current.size());
        if (current == previous)
            break;
    }

    PLgg &out = result.graph;
    out.side = PlggSide::combined;
    for (FactId f : task.init)
        out.seeds.insert(task.fact(f));
    for (FactId f : task.goal)
        out.seeds.insert(task.fact(f));
    out.unmatched_seeds = g_goal.unmatched_seeds;
    out.unmatched_seeds.insert(g_init.unmatched_seeds.begin(), g_init.unmatched_seeds.end());
    for (const auto &[node, preds] : g_goal.nodes) {
        out.add_node(node);
        for (const auto &[p, mu] : preds)
            out.add_neighbor(node, p, mu);
    }
    for (const auto &[node, succs] : g_init.nodes) {
        out.add_node(node);
        for (const auto &[s, mu] : succs)
            out.add_neighbor(s, node, mu);
    }
    for (const Atom &s : out.seeds)
        out.add_node(s);
    return result;
}

PlggRun instantiate_plgg(const PLog &plog, const GroundTask &task, std::size_t top_n) {
    VariableFactory factory;
    PlggBuild goal = generate_plgg_goal(plog, task, factory);
    PlggBuild init = generate_plgg_init(plog, task, factory);
    PlggRun run;
    run.store = VarConstraintStore(&task.typing);
    run.store.merge_from(goal.store);
    run.store.merge_from(init.store);
    run.goal_side = std::move(goal.graph);
    run.init_side = std::move(init.graph);
    run.combined = combine(run.goal_side, run.init_side, task, run.store, top_n);
    return run;
}

PlggResult extract_result(const PLgg &plgg, double threshold) {
    PlggResult result;
    auto probs = vertex_probabilities(plgg);
    for (const Atom &s : plgg.seeds)
        probs[s] = 1.0;
    for (const auto &[v, p] : probs) {
        if (p < threshold)
            continue;
        result.node_probability.emplace(v, p);
        (v.is_ground() ? result.grounded_landmarks : result.lifted_landmarks).insert(v);
    }
    for (const auto &[e, mu] : plgg.orderings()) {
        if (mu < threshold)
            continue;
        auto &target = e.src.is_ground() && e.dst.is_ground() ? result.grounded_orderings
                                                               : result.lifted_orderings;
        target.emplace(e, mu);
    }
    return result;
}

PLgg filter_plgg(const PLgg &plgg, double threshold) {
    PlggResult r = extract_result(plgg, threshold);
    PLgg out;
    out.side = PlggSide::combined;
    for (const auto &[v, p] : r.node_probability) {
        out.add_node(v);
        if (plgg.seeds.count(v))
            out.seeds.insert(v);
    }
    for (const auto *edges : {&r.grounded_orderings, &r.lifted_orderings})
        for (const auto &[e, mu] : *edges)
            out.add_neighbor(e.dst, e.src, mu);
    return out;
}

} // namespace lmlearn

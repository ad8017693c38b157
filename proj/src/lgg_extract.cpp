#include "lmlearn/lgg.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace lmlearn {

const char *to_string(LandmarkReason reason) {
    switch (reason) {
    case LandmarkReason::in_init_or_goal:
        return "in-init-or-goal";
    case LandmarkReason::goal_unreachable_without:
        return "goal-unreachable-without";
    case LandmarkReason::achievable_without:
        return "achievable-without";
    }
    return "?";
}

LandmarkVerdict LandmarkOracle::verdict(FactId fact) const {
    const GroundTask &task = exploration_.task();
    LandmarkVerdict v{task.fact(fact), true, LandmarkReason::in_init_or_goal};
    if (task.in_init(fact) || task.in_goal(fact))
        return v;
    std::vector<bool> forbidden(task.actions.size(), false);
    for (std::size_t a : exploration_.achievers(fact))
        forbidden[a] = true;
    if (exploration_.goal_reachable(exploration_.reachable(forbidden))) {
        v.is_landmark = false;
        v.reason = LandmarkReason::achievable_without;
    } else {
        v.reason = LandmarkReason::goal_unreachable_without;
    }
    return v;
}

LandmarkVerdict LandmarkOracle::verdict(const Atom &atom) const {
    auto found = exploration_.task().find(atom);
    if (!found)
        throw std::invalid_argument("atom is not a fact of the task: " + atom.str());
    return verdict(*found);
}

std::set<Atom> LandmarkOracle::all_landmarks() const {
    std::set<Atom> result;
    const GroundTask &task = exploration_.task();
    for (FactId f = 0; f < task.num_facts(); ++f)
        if (verdict(f).is_landmark)
            result.insert(task.fact(f));
    return result;
}

LandmarkVerdict is_landmark_oracle(const GroundTask &task, const Atom &atom) {
    return LandmarkOracle(task).verdict(atom);
}

std::vector<std::size_t> first_achievers(const RelaxedExploration &exploration, FactId fact) {
    const GroundTask &task = exploration.task();
    std::vector<bool> forbidden(task.actions.size(), false);
    for (std::size_t a : exploration.achievers(fact))
        forbidden[a] = true;
    std::vector<bool> reached = exploration.reachable(forbidden);
    std::vector<std::size_t> result;
    for (std::size_t a : exploration.achievers(fact)) {
        const auto &pre = task.actions[a].pre;
        if (std::all_of(pre.begin(), pre.end(), [&](FactId p) { return reached[p]; }))
            result.push_back(a);
    }
    return result;
}

Lgg extract_lgg(const GroundTask &task) {
    RelaxedExploration exploration(task);
    if (!exploration.goal_reachable(exploration.reachable()))
        throw UnsolvableTask(task.name);
    LandmarkOracle oracle(task);

    Lgg lgg;
    lgg.task = task.name;
    std::vector<bool> known(task.num_facts(), false);
    std::deque<FactId> queue;
    for (FactId g : task.goal) {
        known[g] = true;
        lgg.vertices.insert(task.fact(g));
        queue.push_back(g);
    }
    while (!queue.empty()) {
        FactId lm = queue.front();
        queue.pop_front();
        if (task.in_init(lm))
            continue;
        auto achievers = first_achievers(exploration, lm);
        if (achievers.empty())
            continue;
        std::vector<FactId> shared = task.actions[achievers.front()].pre;
        for (std::size_t i = 1; i < achievers.size() && !shared.empty(); ++i) {
            const auto &pre = task.actions[achievers[i]].pre;
            std::vector<FactId> next;
            std::set_intersection(shared.begin(), shared.end(), pre.begin(), pre.end(),
                                  std::back_inserter(next));
            shared = std::move(next);
        }
        for (FactId p : shared) {
            if (!known[p]) {
                if (!oracle.verdict(p).is_landmark)
                    continue;
                known[p] = true;
                lgg.vertices.insert(task.fact(p));
                queue.push_back(p);
            }
            lgg.edges.insert({task.fact(p), task.fact(lm)});
        }
    }
    return lgg;
}

bool has_cycle(const Lgg &lgg) {
    std::map<Atom, std::vector<const Atom *>> succ;
    for (const Ordering &e : lgg.edges)
        succ[e.src].push_back(&e.dst);
    enum class Mark { none, active, done };
    std::map<Atom, Mark> mark;
    // Iterative DFS with an explicit stack of (node, next child index).
    for (const Atom &start : lgg.vertices) {
        if (mark[start] != Mark::none)
            continue;
        std::vector<std::pair<const Atom *, std::size_t>> stack{{&start, 0}};
        mark[start] = Mark::active;
        while (!stack.empty()) {
            auto &[node, next] = stack.back();
            const auto &children = succ[*node];
            if (next == children.size()) {
                mark[*node] = Mark::done;
                stack.pop_back();
                continue;
            }
            const Atom *child = children[next++];
            Mark &m = mark[*child];
            if (m == Mark::active)
                return true;
            if (m == Mark::none) {
                m = Mark::active;
                stack.push_back({child, 0});
            }
        }
    }
    return false;
}

} // namespace lmlearn

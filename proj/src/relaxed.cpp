#include "lmlearn/relaxed.hpp"

namespace lmlearn {

RelaxedExploration::RelaxedExploration(const GroundTask &task)
    : task_(task), consumers_(task.num_facts()), achievers_(task.num_facts()) {
    for (std::size_t a = 0; a < task.actions.size(); ++a) {
        for (FactId f : task.actions[a].pre)
            consumers_[f].push_back(a);
        for (FactId f : task.actions[a].add)
            achievers_[f].push_back(a);
    }
}

std::vector<bool> RelaxedExploration::reachable(const std::vector<bool> &forbidden) const {
    const auto &actions = task_.actions;
    std::vector<bool> reached(task_.num_facts(), false);
    std::vector<std::size_t> unsatisfied(actions.size());
    std::vector<FactId> queue;
    queue.reserve(task_.num_facts());

    auto fire = [&](std::size_t a) {
        for (FactId f : actions[a].add) {
            if (!reached[f]) {
                reached[f] = true;
                queue.push_back(f);
            }
        }
    };

    for (FactId f : task_.init) {
        if (!reached[f]) {
            reached[f] = true;
            queue.push_back(f);
        }
    }
    for (std::size_t a = 0; a < actions.size(); ++a) {
        unsatisfied[a] = actions[a].pre.size();
        if (unsatisfied[a] == 0 && (forbidden.empty() || !forbidden[a]))
            fire(a);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (std::size_t a : consumers_[queue[head]]) {
            if (--unsatisfied[a] == 0 && (forbidden.empty() || !forbidden[a]))
                fire(a);
        }
    }
    return reached;
}

bool RelaxedExploration::goal_reachable(const std::vector<bool> &reached) const {
    for (FactId g : task_.goal)
        if (!reached[g])
            return false;
    return true;
}

} // namespace lmlearn

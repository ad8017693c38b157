#pragma once

#include "lmlearn/ground_task.hpp"

#include <vector>

namespace lmlearn {

// Delete-relaxed forward exploration over a grounded task. Precomputes the
// fact -> consumer/achiever indices once; each query is linear in the task.
class RelaxedExploration {
public:
    explicit RelaxedExploration(const GroundTask &task);
    explicit RelaxedExploration(GroundTask &&) = delete;

    // Facts reachable from init when the actions flagged in `forbidden` may
    // not be applied. An empty vector forbids nothing.
    std::vector<bool> reachable(const std::vector<bool> &forbidden = {}) const;

    bool goal_reachable(const std::vector<bool> &reached) const;

    const std::vector<std::size_t> &achievers(FactId fact) const { return achievers_[fact]; }

    const GroundTask &task() const { return task_; }

private:
    const GroundTask &task_;
    std::vector<std::vector<std::size_t>> consumers_;
    std::vector<std::vector<std::size_t>> achievers_;
};

} // namespace lmlearn

#pragma once

#include "lmlearn/atom.hpp"
#include "lmlearn/ground_task.hpp"
#include "lmlearn/relaxed.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace lmlearn {

// Landmark generation graph of one task: landmarks plus greedy-necessary
// orderings between them.
struct Lgg {
    std::string task;
    std::set<Atom> vertices;
    std::set<Ordering> edges;

    bool operator==(const Lgg &) const = default;
};

enum class LandmarkReason { in_init_or_goal, goal_unreachable_without, achievable_without };

const char *to_string(LandmarkReason reason);

struct LandmarkVerdict {
    Atom atom;
    bool is_landmark = false;
    LandmarkReason reason = LandmarkReason::achievable_without;
};

class UnsolvableTask : public std::runtime_error {
public:
    explicit UnsolvableTask(const std::string &task)
        : std::runtime_error("task " + task + " is unsolvable under delete relaxation"), task_(task) {}
    const std::string &task() const { return task_; }

private:
    std::string task_;
};

// Exhaustive relaxed-planning-graph landmark test: an atom is a landmark when
// it belongs to init or goal, or when the goal becomes relaxed-unreachable once
// every achiever of the atom is removed.
class LandmarkOracle {
public:
    explicit LandmarkOracle(const GroundTask &task) : exploration_(task) {}
    explicit LandmarkOracle(GroundTask &&) = delete; // keeps a reference to the task

    LandmarkVerdict verdict(FactId fact) const;
    LandmarkVerdict verdict(const Atom &atom) const;

    // Every landmark of the task's fact set.
    std::set<Atom> all_landmarks() const;

private:
    RelaxedExploration exploration_;
};

// Throws std::invalid_argument when `atom` is not a fact of the task.
LandmarkVerdict is_landmark_oracle(const GroundTask &task, const Atom &atom);

// Back-chains from the goal through the shared preconditions of first
// achievers. Throws UnsolvableTask when the goal is relaxed-unreachable.
Lgg extract_lgg(const GroundTask &task);

// First achievers of `fact`: achievers applicable in the relaxed exploration
// that never adds `fact`.
std::vector<std::size_t> first_achievers(const RelaxedExploration &exploration, FactId fact);

bool has_cycle(const Lgg &lgg);

} // namespace lmlearn

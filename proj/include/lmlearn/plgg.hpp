#pragma once

#include "lmlearn/atom.hpp"
#include "lmlearn/ground_task.hpp"
#include "lmlearn/plog.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lmlearn {

struct VarConstraint {
    std::set<std::string> objects;   // values the variable may not take
    std::set<std::string> variables; // variables it may not be identified with
};

// Distinct-value constraints per variable, plus the type each variable was
// created with (empty type = unconstrained).
class VarConstraintStore {
public:
    VarConstraintStore() = default;
    explicit VarConstraintStore(const Typing *typing) : typing_(typing) {}

    void set_type(const std::string &var, const std::string &type);
    std::optional<std::string> type_of(const std::string &var) const;

    // Both calls ignore self-references and type-incompatible objects.
    void forbid_object(const std::string &var, const std::string &object);
    void forbid_variable(const std::string &var, const std::string &other);

    const std::set<std::string> &objects(const std::string &var) const;
    const std::set<std::string> &variables(const std::string &var) const;

    // Type-compatible and not forbidden.
    bool can_take(const std::string &var, const std::string &object) const;
    bool banned_pair(const std::string &x, const std::string &y) const;

    // Union of both stores' constraints and types.
    void merge_from(const VarConstraintStore &other);

    const std::map<std::string, VarConstraint> &entries() const { return entries_; }
    const Typing *typing() const { return typing_; }

private:
    const Typing *typing_ = nullptr;
    std::map<std::string, VarConstraint> entries_;
    std::map<std::string, std::string> types_;
};

class VariableFactory {
public:
    explicit VariableFactory(std::size_t next = 0) : next_(next) {}
    std::string fresh() { return "?x" + std::to_string(next_++); }
    std::size_t next() const { return next_; }

private:
    std::size_t next_;
};

using Bindings = std::map<std::string, std::string>; // variable -> object

Atom substitute(const Atom &atom, const Bindings &bindings);

// Renames every variable of the edge to a fresh symbol, keeping co-reference.
Ordering fresh_variables(const Ordering &edge, VariableFactory &factory);

void update_distinct_consts(VarConstraintStore &store, const Atom &pred, const Atom &lm);

bool equivalent_params(const Term &x, const Term &y, const VarConstraintStore &store);
bool equivalent_atoms(const Atom &p, const Atom &q, const VarConstraintStore &store);

// Positions where exactly one side is a variable.
std::size_t equivalence_distance(const Atom &p, const Atom &q);

enum class PlggSide { goal, init, combined };

const char *to_string(PlggSide side);

// Goal side: node -> predecessors. Init side: node -> successors. Combined:
// node -> predecessors. Each neighbour carries the mu of the PLog edge it
// came from.
struct PLgg {
    PlggSide side = PlggSide::goal;
    std::map<Atom, std::map<Atom, double>> nodes;
    std::set<Atom> seeds;
    std::set<Atom> unmatched_seeds; // seeds whose lifted form has no PLog edge

    void add_node(const Atom &node);
    void add_neighbor(const Atom &node, const Atom &neighbor, double mu);

    // Keys plus every atom that only appears as a neighbour.
    std::set<Atom> vertices() const;
    std::vector<std::pair<Ordering, double>> orderings() const;
    // Highest mu over the edges touching `atom`; 0 when isolated.
    double node_probability(const Atom &atom) const;
};

struct PlggBuild {
    PLgg graph;
    VarConstraintStore store;
};

PlggBuild generate_plgg_goal(const PLog &plog, const GroundTask &task, VariableFactory &factory);
PlggBuild generate_plgg_init(const PLog &plog, const GroundTask &task, VariableFactory &factory);

struct EquivCandidate {
    Atom candidate;
    std::size_t distance = 0;
    double prob = 0.0;
};

// Lifted vertices of `plgg` equivalent to the ground atom `lm`, ordered by
// (distance, -prob, atom).
std::vector<EquivCandidate> rank_candidates(const PLgg &plgg, const Atom &lm,
                                            const VarConstraintStore &store);

Bindings search_best_equiv(const PLgg &plgg, const Atom &lm, const VarConstraintStore &store,
                           std::size_t top_n);

struct SkippedBinding {
    std::string variable;
    std::string object;
    std::string reason;
};

// Rewrites lifted vertices under the bindings that respect `store`; the
// others are dropped and returned.
std::vector<SkippedBinding> apply_instantiation(PLgg &plgg, const Bindings &bindings,
                                                const VarConstraintStore &store);

// Ground vertices of the graph that are facts of the task.
std::set<Atom> get_instantiated_lms(const PLgg &plgg, const GroundTask &task);

// One instantiation round of `plgg` against the known landmarks `lms`.
void instantiate(PLgg &plgg, const std::set<Atom> &lms, const VarConstraintStore &store,
                 std::size_t top_n);

struct CombineResult {
    PLgg graph;
    std::size_t iterations = 0;
    std::vector<std::size_t> known_per_iteration; // |Lms_I ∪ Lms_G| after each round
};

// Sides are recognised by their tag, so argument order does not matter.
CombineResult combine(const PLgg &a, const PLgg &b, const GroundTask &task,
                      const VarConstraintStore &store, std::size_t top_n);

struct PlggRun {
    PLgg goal_side;
    PLgg init_side;
    VarConstraintStore store;
    CombineResult combined;
};

PlggRun instantiate_plgg(const PLog &plog, const GroundTask &task, std::size_t top_n = 1);

struct PlggResult {
    std::set<Atom> grounded_landmarks;
    std::set<Atom> lifted_landmarks;
    std::map<Ordering, double> grounded_orderings;
    std::map<Ordering, double> lifted_orderings; // at least one lifted endpoint
    std::map<Atom, double> node_probability;     // seeds count as 1
};

PlggResult extract_result(const PLgg &plgg, double threshold = 0.0);

// Combined-side copy holding only what extract_result keeps at `threshold`.
PLgg filter_plgg(const PLgg &plgg, double threshold);

} // namespace lmlearn

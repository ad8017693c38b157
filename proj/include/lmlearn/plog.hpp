#pragma once

#include "lmlearn/atom.hpp"
#include "lmlearn/lgg.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lmlearn {

// Replaces every distinct parameter (object or variable) by ?x0, ?x1, ... in
// order of first occurrence. Idempotent.
Atom lift_atom(const Atom &atom);

// Joint lifting of an ordering: dst is scanned before src, so the destination
// owns the low indices and shared objects become shared variables.
Ordering lift_edge(const Atom &src, const Atom &dst);

// Lifted in-neighbourhood of one grounded landmark.
struct LocalLog {
    Atom root;
    std::set<Ordering> edges;
};

LocalLog build_log(const Lgg &lgg, const Atom &landmark);

// Weighted lifted ordering graph. edge_counts holds multiset multiplicities;
// log_counts holds how many LOGs are rooted at each lifted landmark.
struct WLog {
    std::set<Atom> vertices;
    std::map<Ordering, std::size_t> edge_counts;
    std::map<Atom, std::size_t> log_counts;

    bool operator==(const WLog &) const = default;
};

class VocabularyConflict : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

WLog build_task_log(const Lgg &lgg);

// Pointwise sum. Throws VocabularyConflict when a predicate is used with two
// different arities.
WLog merge_wlogs(std::span<const WLog> parts);

// Predicate -> arity over every atom of the graph.
std::map<std::string, std::size_t> predicate_arities(const WLog &w);

struct PLog {
    std::string domain;
    WLog counts;
    std::map<Ordering, double> probs;

    // Edges whose destination is the canonical lifted atom `dst`.
    std::vector<Ordering> in_edges(const Atom &dst) const;
    // Edges whose source lifts (on its own) to the canonical atom `src`.
    std::vector<Ordering> out_edges(const Atom &src) const;

    double mu(const Ordering &edge) const { return probs.at(edge); }

    void build_index();

    bool operator==(const PLog &other) const {
        return domain == other.domain && counts == other.counts && probs == other.probs;
    }

private:
    std::map<Atom, std::vector<Ordering>> by_dst_;
    std::map<Atom, std::vector<Ordering>> by_src_;
};

// mu(e) = n(e) / nGraph(dst(e)). Throws std::invalid_argument on a zero or
// too-small nGraph.
PLog finalize_plog(const WLog &w, std::string domain = {});

PLog learn_plog(std::span<const Lgg> lggs, std::string domain = {});

} // namespace lmlearn

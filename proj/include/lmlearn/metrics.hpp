#pragma once

#include "lmlearn/atom.hpp"
#include "lmlearn/lgg.hpp"
#include "lmlearn/plgg.hpp"

#include <cstddef>
#include <set>
#include <vector>

namespace lmlearn {

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t hits = 0;
    std::size_t misses = 0; // reference items not predicted
    std::size_t extras = 0; // predicted items not in the reference
};

// Empty predicted set: P = 1 if the reference is empty too, else 0. Same for R
// with the roles swapped.
Prf prf_from_counts(std::size_t hits, std::size_t predicted, std::size_t reference);

Prf grounded_prf(const std::set<Atom> &reference, const std::set<Atom> &predicted);
Prf grounded_prf(const std::set<Ordering> &reference, const std::set<Ordering> &predicted);

double harmonic_mean(double a, double b);

// Equivalence here is constraint-free. Both throw std::invalid_argument on a
// non-equivalent pair.
double likelihood_atom(const Atom &lifted, const Atom &grounded);
double likelihood_edge(const Ordering &lifted, const Ordering &grounded);

// Mean likelihood; throws std::invalid_argument on an empty candidate set.
double likelihood_set(const std::vector<Atom> &candidates, const Atom &target);
double likelihood_set(const std::vector<Ordering> &candidates, const Ordering &target);

struct PredictedGraph {
    std::set<Atom> vertices;
    std::set<Ordering> edges;
};

PredictedGraph predicted_graph(const PlggResult &result);

struct AlphaValues {
    double alpha_v = 0.0;
    double alpha_e = 0.0;
};

AlphaValues alpha_values(const Lgg &reference, const PredictedGraph &predicted);

struct AlphaPrf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

AlphaPrf alpha_prf(double precision, double recall, double alpha);

struct MetricReport {
    Prf landmarks;
    Prf orderings;
    double alpha_v = 0.0;
    double alpha_e = 0.0;
    AlphaPrf alpha_landmarks;
    AlphaPrf alpha_orderings;
};

// Grounded P/R/F1 use only the fully grounded part of the prediction.
MetricReport evaluate_prediction(const Lgg &reference, const PredictedGraph &predicted);

} // namespace lmlearn

#include "lmlearn/metrics.hpp"

#include <stdexcept>
#include <type_traits>

namespace lmlearn {

namespace {

const VarConstraintStore kNoConstraints;

template <typename T>
Prf prf_of_sets(const std::set<T> &reference, const std::set<T> &predicted) {
    std::size_t hits = 0;
    for (const T &x : predicted)
        hits += reference.count(x);
    return prf_from_counts(hits, predicted.size(), reference.size());
}

template <typename T>
double mean_likelihood(const std::vector<T> &candidates, const T &target) {
    if (candidates.empty())
        throw std::invalid_argument("likelihood of an empty candidate set is undefined");
    double sum = 0.0;
    for (const T &c : candidates) {
        if constexpr (std::is_same_v<T, Atom>)
            sum += likelihood_atom(c, target);
        else
            sum += likelihood_edge(c, target);
    }
    return sum / static_cast<double>(candidates.size());
}

bool edge_equivalent(const Ordering &lifted, const Ordering &grounded) {
    return equivalent_atoms(lifted.src, grounded.src, kNoConstraints) &&
           equivalent_atoms(lifted.dst, grounded.dst, kNoConstraints);
}

} // namespace

double harmonic_mean(double a, double b) {
    return a + b == 0.0 ? 0.0 : 2.0 * a * b / (a + b);
}

Prf prf_from_counts(std::size_t hits, std::size_t predicted, std::size_t reference) {
    Prf r;
    r.hits = hits;
    r.misses = reference - hits;
    r.extras = predicted - hits;
    if (predicted == 0)
        r.precision = reference == 0 ? 1.0 : 0.0;
    else
        r.precision = static_cast<double>(hits) / static_cast<double>(predicted);
    if (reference == 0)
        r.recall = predicted == 0 ? 1.0 : 0.0;
    else
        r.recall = static_cast<double>(hits) / static_cast<double>(reference);
    r.f1 = harmonic_mean(r.precision, r.recall);
    return r;
}

Prf grounded_prf(const std::set<Atom> &reference, const std::set<Atom> &predicted) {
    return prf_of_sets(reference, predicted);
}

Prf grounded_prf(const std::set<Ordering> &reference, const std::set<Ordering> &predicted) {
    return prf_of_sets(reference, predicted);
}

double likelihood_atom(const Atom &lifted, const Atom &grounded) {
    if (!grounded.is_ground())
        throw std::invalid_argument("likelihood target " + grounded.str() + " is not ground");
    if (!equivalent_atoms(lifted, grounded, kNoConstraints))
        throw std::invalid_argument(lifted.str() + " is not equivalent to " + grounded.str());
    if (grounded.arity() == 0)
        return 1.0;
    return static_cast<double>(lifted.object_count()) / static_cast<double>(grounded.object_count());
}

double likelihood_edge(const Ordering &lifted, const Ordering &grounded) {
    return 0.5 * (likelihood_atom(lifted.src, grounded.src) + likelihood_atom(lifted.dst, grounded.dst));
}

double likelihood_set(const std::vector<Atom> &candidates, const Atom &target) {
    return mean_likelihood(candidates, target);
}

double likelihood_set(const std::vector<Ordering> &candidates, const Ordering &target) {
    return mean_likelihood(candidates, target);
}

PredictedGraph predicted_graph(const PlggResult &result) {
    PredictedGraph g;
    g.vertices = result.grounded_landmarks;
    g.vertices.insert(result.lifted_landmarks.begin(), result.lifted_landmarks.end());
    for (const auto &[e, mu] : result.grounded_orderings)
        g.edges.insert(e);
    for (const auto &[e, mu] : result.lifted_orderings)
        g.edges.insert(e);
    return g;
}

AlphaValues alpha_values(const Lgg &reference, const PredictedGraph &predicted) {
    AlphaValues out;

    std::vector<Atom> lifted_vertices;
    for (const Atom &v : predicted.vertices)
        if (v.is_lifted() && !reference.vertices.count(v))
            lifted_vertices.push_back(v);
    std::size_t missed = 0;
    double sum = 0.0;
    for (const Atom &v : reference.vertices) {
        if (predicted.vertices.count(v))
            continue;
        ++missed;
        std::vector<Atom> candidates;
        for (const Atom &c : lifted_vertices)
            if (equivalent_atoms(c, v, kNoConstraints))
                candidates.push_back(c);
        if (!candidates.empty() && v.is_ground())
            sum += likelihood_set(candidates, v);
    }
    out.alpha_v = missed == 0 ? 0.0 : sum / static_cast<double>(missed);

    std::vector<Ordering> lifted_edges;
    for (const Ordering &e : predicted.edges)
        if ((e.src.is_lifted() || e.dst.is_lifted()) && !reference.edges.count(e))
            lifted_edges.push_back(e);
    missed = 0;
    sum = 0.0;
    for (const Ordering &e : reference.edges) {
        if (predicted.edges.count(e))
            continue;
        ++missed;
        std::vector<Ordering> candidates;
        for (const Ordering &c : lifted_edges)
            if (edge_equivalent(c, e))
                candidates.push_back(c);
        if (!candidates.empty() && e.src.is_ground() && e.dst.is_ground())
            sum += likelihood_set(candidates, e);
    }
    out.alpha_e = missed == 0 ? 0.0 : sum / static_cast<double>(missed);
    return out;
}

AlphaPrf alpha_prf(double precision, double recall, double alpha) {
    AlphaPrf r;
    r.precision = precision + alpha * (1.0 - precision);
    r.recall = recall + alpha * (1.0 - recall);
    r.f1 = harmonic_mean(r.precision, r.recall);
    return r;
}

MetricReport evaluate_prediction(const Lgg &reference, const PredictedGraph &predicted) {
    MetricReport m;
    std::set<Atom> ground_vertices;
    for (const Atom &v : predicted.vertices)
        if (v.is_ground())
            ground_vertices.insert(v);
    std::set<Ordering> ground_edges;
    for (const Ordering &e : predicted.edges)
        if (e.src.is_ground() && e.dst.is_ground())
            ground_edges.insert(e);
    m.landmarks = grounded_prf(reference.vertices, ground_vertices);
    m.orderings = grounded_prf(reference.edges, ground_edges);
    AlphaValues a = alpha_values(reference, predicted);
    m.alpha_v = a.alpha_v;
    m.alpha_e = a.alpha_e;
    m.alpha_landmarks = alpha_prf(m.landmarks.precision, m.landmarks.recall, a.alpha_v);
    m.alpha_orderings = alpha_prf(m.orderings.precision, m.orderings.recall, a.alpha_e);
    return m;
}

} // namespace lmlearn

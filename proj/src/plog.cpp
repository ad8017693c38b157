#include "lmlearn/plog.hpp"

namespace lmlearn {

namespace {

class Canonicalizer {
public:
    Atom apply(const Atom &atom) {
        Atom out{atom.predicate, {}};
        out.args.reserve(atom.args.size());
        for (const Term &t : atom.args) {
            auto [it, inserted] = names_.try_emplace(t, "");
            if (inserted)
                it->second = "?x" + std::to_string(names_.size() - 1);
            out.args.push_back(Term::variable(it->second));
        }
        return out;
    }

private:
    std::map<Term, std::string> names_;
};

} // namespace

Atom lift_atom(const Atom &atom) {
    return Canonicalizer().apply(atom);
}

Ordering lift_edge(const Atom &src, const Atom &dst) {
    Canonicalizer c;
    Atom lifted_dst = c.apply(dst);
    Atom lifted_src = c.apply(src);
    return {std::move(lifted_src), std::move(lifted_dst)};
}

LocalLog build_log(const Lgg &lgg, const Atom &landmark) {
    if (!lgg.vertices.count(landmark))
        throw std::invalid_argument("landmark not in LGG: " + landmark.str());
    LocalLog log{lift_atom(landmark), {}};
    for (const Ordering &e : lgg.edges)
        if (e.dst == landmark)
            log.edges.insert(lift_edge(e.src, e.dst));
    return log;
}

WLog build_task_log(const Lgg &lgg) {
    std::map<Atom, std::vector<const Ordering *>> incoming;
    for (const Ordering &e : lgg.edges)
        incoming[e.dst].push_back(&e);

    WLog w;
    for (const Atom &v : lgg.vertices) {
        Atom root = lift_atom(v);
        w.vertices.insert(root);
        ++w.log_counts[root];
        std::set<Ordering> local;
        for (const Ordering *e : incoming[v])
            local.insert(lift_edge(e->src, e->dst));
        for (const Ordering &le : local) {
            w.vertices.insert(le.src);
            ++w.edge_counts[le];
        }
    }
    return w;
}

std::map<std::string, std::size_t> predicate_arities(const WLog &w) {
    std::map<std::string, std::size_t> arities;
    auto note = [&](const Atom &a) {
        auto [it, inserted] = arities.emplace(a.predicate, a.arity());
        if (!inserted && it->second != a.arity())
            throw VocabularyConflict("predicate " + a.predicate + " used with arities " +
                                     std::to_string(it->second) + " and " + std::to_string(a.arity()));
    };
    for (const Atom &v : w.vertices)
        note(v);
    for (const auto &[e, n] : w.edge_counts) {
        note(e.src);
        note(e.dst);
    }
    return arities;
}

WLog merge_wlogs(std::span<const WLog> parts) {
    WLog merged;
    std::map<std::string, std::size_t> arities;
    for (const WLog &part : parts) {
        for (const auto &[pred, arity] : predicate_arities(part)) {
            auto [it, inserted] = arities.emplace(pred, arity);
            if (!inserted && it->second != arity)
                throw VocabularyConflict("predicate " + pred + " used with arities " +
                                         std::to_string(it->second) + " and " + std::to_string(arity));
        }
        merged.vertices.insert(part.vertices.begin(), part.vertices.end());
        for (const auto &[e, n] : part.edge_counts)
            merged.edge_counts[e] += n;
        for (const auto &[v, n] : part.log_counts)
            merged.log_counts[v] += n;
    }
    return merged;
}

void PLog::build_index() {
    by_dst_.clear();
    by_src_.clear();
    for (const auto &[e, n] : counts.edge_counts) {
        by_dst_[e.dst].push_back(e);
        by_src_[lift_atom(e.src)].push_back(e);
    }
}

std::vector<Ordering> PLog::in_edges(const Atom &dst) const {
    auto it = by_dst_.find(dst);
    return it == by_dst_.end() ? std::vector<Ordering>{} : it->second;
}

std::vector<Ordering> PLog::out_edges(const Atom &src) const {
    auto it = by_src_.find(src);
    return it == by_src_.end() ? std::vector<Ordering>{} : it->second;
}

PLog finalize_plog(const WLog &w, std::string domain) {
    PLog plog;
    plog.domain = std::move(domain);
    plog.counts = w;
    for (const auto &[e, n] : w.edge_counts) {
        auto it = w.log_counts.find(e.dst);
        std::size_t graphs = it == w.log_counts.end() ? 0 : it->second;
        if (graphs == 0)
            throw std::invalid_argument("no LOG rooted at edge destination " + e.dst.str());
        if (n == 0 || n > graphs)
            throw std::invalid_argument("edge count " + std::to_string(n) + " out of range for " +
                                        e.src.str() + " -> " + e.dst.str());
        plog.probs[e] = static_cast<double>(n) / static_cast<double>(graphs);
    }
    plog.build_index();
    return plog;
}

PLog learn_plog(std::span<const Lgg> lggs, std::string domain) {
    std::vector<WLog> parts;
    parts.reserve(lggs.size());
    for (const Lgg &lgg : lggs)
        parts.push_back(build_task_log(lgg));
    return finalize_plog(merge_wlogs(parts), std::move(domain));
}

} // namespace lmlearn

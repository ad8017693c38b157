#include "lmlearn/experiment.hpp"

#include "lmlearn/pddl.hpp"
#include "lmlearn/plgg.hpp"
#include "lmlearn/plog.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace lmlearn {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct LoadedProblem {
    std::string stem;
    GroundTask task;
    Lgg reference;
    std::set<Atom> oracle;
};

double recall_against(const std::set<Atom> &oracle, const std::set<Atom> &found) {
    return grounded_prf(oracle, found).recall;
}

void add_prf(Prf &acc, const Prf &p) {
    acc.precision += p.precision;
    acc.recall += p.recall;
    acc.f1 += p.f1;
    acc.hits += p.hits;
    acc.misses += p.misses;
    acc.extras += p.extras;
}

void add_alpha(AlphaPrf &acc, const AlphaPrf &p) {
    acc.precision += p.precision;
    acc.recall += p.recall;
    acc.f1 += p.f1;
}

template <typename T>
void scale(T &x, double k) {
    x.precision *= k;
    x.recall *= k;
    x.f1 *= k;
}

Json prf_row(double p, double r, double f1) {
    return Json{{"precision", p}, {"recall", r}, {"f1", f1}};
}

} // namespace

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i)
        idx[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

MetricReport mean_report(const std::vector<MetricReport> &reports) {
    MetricReport m;
    if (reports.empty())
        return m;
    for (const MetricReport &r : reports) {
        add_prf(m.landmarks, r.landmarks);
        add_prf(m.orderings, r.orderings);
        m.alpha_v += r.alpha_v;
        m.alpha_e += r.alpha_e;
        add_alpha(m.alpha_landmarks, r.alpha_landmarks);
        add_alpha(m.alpha_orderings, r.alpha_orderings);
    }
    const double k = 1.0 / static_cast<double>(reports.size());
    scale(m.landmarks, k);
    scale(m.orderings, k);
    scale(m.alpha_landmarks, k);
    scale(m.alpha_orderings, k);
    m.alpha_v *= k;
    m.alpha_e *= k;
    return m;
}

RunRecord run_experiment(const ExperimentConfig &config) {
    if (config.repetitions == 0)
        throw std::invalid_argument("repetitions must be at least 1");
    if (config.train_count == 0 || config.test_count == 0)
        throw std::invalid_argument("train and test counts must be positive");
    if (config.train_count + config.test_count > config.problems.size())
        throw std::invalid_argument("need " + std::to_string(config.train_count + config.test_count) +
                                    " problems for the split, got " + std::to_string(config.problems.size()));

    const Domain domain = read_domain_file(config.domain);
    RunRecord run;
    run.domain = domain.name;

    std::vector<LoadedProblem> problems;
    auto extract_start = Clock::now();
    for (const auto &path : config.problems) {
        LoadedProblem p;
        p.stem = path.stem().string();
        p.task = ground(read_problem_file(path, domain));
        if (config.reference_dir) {
            auto ref = *config.reference_dir / (p.stem + ".lgg.json");
            try {
                p.reference = lgg_from_json(read_json_file(ref));
            } catch (const SchemaError &e) {
                throw std::runtime_error(ref.string() + ": " + e.what());
            }
        } else {
            p.reference = extract_lgg(p.task);
        }
        p.oracle = LandmarkOracle(p.task).all_landmarks();
        problems.push_back(std::move(p));
    }
    run.extract_ms = ms_since(extract_start);

    std::vector<MetricReport> rep_means;
    for (std::size_t r = 0; r < config.repetitions; ++r) {
        RepetitionRecord rep;
        rep.seed = config.seed + r;
        auto order = shuffled_indices(problems.size(), rep.seed);

        std::vector<Lgg> train;
        for (std::size_t i = 0; i < config.train_count; ++i) {
            const LoadedProblem &p = problems[order[i]];
            rep.train.push_back(p.stem);
            train.push_back(p.reference);
        }
        auto learn_start = Clock::now();
        PLog plog = learn_plog(train, domain.name);
        rep.learn_ms = ms_since(learn_start);

        std::vector<MetricReport> reports;
        for (std::size_t i = config.train_count; i < config.train_count + config.test_count; ++i) {
            const LoadedProblem &p = problems[order[i]];
            rep.test.push_back(p.stem);
            TaskRecord t;
            t.task = p.stem;
            auto start = Clock::now();
            PlggRun plgg = instantiate_plgg(plog, p.task, config.top_n);
            PlggResult result = extract_result(plgg.combined.graph, config.threshold);
            t.instantiate_ms = ms_since(start);
            t.report = evaluate_prediction(p.reference, predicted_graph(result));
            t.oracle_landmarks = p.oracle.size();
            t.plgg_oracle_recall = recall_against(p.oracle, result.grounded_landmarks);
            t.reference_oracle_recall = recall_against(p.oracle, p.reference.vertices);
            reports.push_back(t.report);
            rep.plgg_oracle_recall += t.plgg_oracle_recall;
            rep.reference_oracle_recall += t.reference_oracle_recall;
            run.mean_instantiate_ms += t.instantiate_ms;
            rep.tasks.push_back(std::move(t));
        }
        rep.mean = mean_report(reports);
        rep.plgg_oracle_recall /= static_cast<double>(config.test_count);
        rep.reference_oracle_recall /= static_cast<double>(config.test_count);
        run.plgg_oracle_recall += rep.plgg_oracle_recall;
        run.reference_oracle_recall += rep.reference_oracle_recall;
        run.mean_learn_ms += rep.learn_ms;
        rep_means.push_back(rep.mean);
        run.repetitions.push_back(std::move(rep));
    }
    const double reps = static_cast<double>(config.repetitions);
    run.mean = mean_report(rep_means);
    run.plgg_oracle_recall /= reps;
    run.reference_oracle_recall /= reps;
    run.mean_learn_ms /= reps;
    run.mean_instantiate_ms /= reps * static_cast<double>(config.test_count);
    return run;
}

std::string format_metric_table(const RunRecord &run) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "%-16s | %-28s | %-28s\n", run.domain.c_str(), "orderings", "landmarks");
    out += buf;
    std::snprintf(buf, sizeof buf, "%-16s | %8s %8s %8s   | %8s %8s %8s\n", "", "P", "R", "F1", "P", "R", "F1");
    out += buf;
    const MetricReport &m = run.mean;
    std::snprintf(buf, sizeof buf, "%-16s | %8.2f %8.2f %8.2f   | %8.2f %8.2f %8.2f\n", "grounded",
                  m.orderings.precision, m.orderings.recall, m.orderings.f1, m.landmarks.precision,
                  m.landmarks.recall, m.landmarks.f1);
    out += buf;
    std::snprintf(buf, sizeof buf, "%-16s | %8.2f %8.2f %8.2f   | %8.2f %8.2f %8.2f\n", "lifted (a)",
                  m.alpha_orderings.precision, m.alpha_orderings.recall, m.alpha_orderings.f1,
                  m.alpha_landmarks.precision, m.alpha_landmarks.recall, m.alpha_landmarks.f1);
    out += buf;
    std::snprintf(buf, sizeof buf, "alpha_V = %.3f  alpha_E = %.3f\n", m.alpha_v, m.alpha_e);
    out += buf;
    std::snprintf(buf, sizeof buf, "time: extract %.1f ms total, learn %.1f ms mean, instantiate %.1f ms mean per task\n",
                  run.extract_ms, run.mean_learn_ms, run.mean_instantiate_ms);
    out += buf;
    return out;
}

std::string format_oracle_table(const RunRecord &run) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "%-16s | %-22s\n", run.domain.c_str(), "landmark recall vs oracle");
    out += buf;
    std::snprintf(buf, sizeof buf, "%-16s | %8.2f\n", "p-LGG", run.plgg_oracle_recall);
    out += buf;
    std::snprintf(buf, sizeof buf, "%-16s | %8.2f\n", "reference", run.reference_oracle_recall);
    out += buf;
    return out;
}

Json run_to_json(const RunRecord &run) {
    Json reps = Json::array();
    for (const RepetitionRecord &rep : run.repetitions) {
        Json tasks = Json::array();
        for (const TaskRecord &t : rep.tasks)
            tasks.push_back(Json{{"task", t.task},
                                 {"metrics", report_to_json(t.report)},
                                 {"oracle_landmarks", t.oracle_landmarks},
                                 {"plgg_oracle_recall", t.plgg_oracle_recall},
                                 {"reference_oracle_recall", t.reference_oracle_recall},
                                 {"timings_ms", Json{{"instantiate", t.instantiate_ms}}}});
        reps.push_back(Json{{"seed", rep.seed},
                            {"train", rep.train},
                            {"test", rep.test},
                            {"tasks", tasks},
                            {"mean", report_to_json(rep.mean)},
                            {"plgg_oracle_recall", rep.plgg_oracle_recall},
                            {"reference_oracle_recall", rep.reference_oracle_recall},
                            {"timings_ms", Json{{"learn", rep.learn_ms}}}});
    }
    const MetricReport &m = run.mean;
    Json table1{{"orderings", prf_row(m.orderings.precision, m.orderings.recall, m.orderings.f1)},
                {"landmarks", prf_row(m.landmarks.precision, m.landmarks.recall, m.landmarks.f1)},
                {"alpha_orderings",
                 prf_row(m.alpha_orderings.precision, m.alpha_orderings.recall, m.alpha_orderings.f1)},
                {"alpha_landmarks",
                 prf_row(m.alpha_landmarks.precision, m.alpha_landmarks.recall, m.alpha_landmarks.f1)}};
    Json table2{{"plgg_recall", run.plgg_oracle_recall}, {"reference_recall", run.reference_oracle_recall}};
    return Json{{"domain", run.domain},
                {"mean", report_to_json(run.mean)},
                {"table_metrics", table1},
                {"table_oracle", table2},
                {"repetitions", reps},
                {"timings_ms",
                 Json{{"extract_total", run.extract_ms},
                      {"learn_mean", run.mean_learn_ms},
                      {"instantiate_mean", run.mean_instantiate_ms}}}};
}

} // namespace lmlearn

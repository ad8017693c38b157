#include "lmlearn/experiment.hpp"
#include "lmlearn/io.hpp"
#include "lmlearn/lgg.hpp"
#include "lmlearn/pddl.hpp"
#include "lmlearn/plgg.hpp"
#include "lmlearn/plog.hpp"

#include <CLI11.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <vector>

namespace fs = std::filesystem;
using namespace lmlearn;

namespace {

constexpr int kUsage = 1;
constexpr int kTaskError = 2;

// Raised for problems in the inputs themselves (as opposed to bad flags).
struct TaskFailure {
    std::string message;
};

GroundTask load_task(const fs::path &problem, const Domain &domain) {
    try {
        return ground(read_problem_file(problem, domain));
    } catch (const PddlError &e) {
        throw TaskFailure{problem.string() + ":" + e.what()};
    }
}

Domain load_domain(const fs::path &path) {
    try {
        return read_domain_file(path);
    } catch (const PddlError &e) {
        throw TaskFailure{path.string() + ":" + e.what()};
    }
}

std::string dump(const Json &j) {
    return j.dump(2) + "\n";
}

int cmd_extract(const fs::path &domain_path, const std::vector<fs::path> &problems, const fs::path &out_dir,
                bool dot) {
    Domain domain = load_domain(domain_path);
    std::vector<std::pair<std::string, Lgg>> lggs;
    for (const fs::path &p : problems) {
        GroundTask task = load_task(p, domain);
        try {
            lggs.emplace_back(p.stem().string(), extract_lgg(task));
        } catch (const UnsolvableTask &e) {
            throw TaskFailure{p.string() + ": " + e.what()};
        }
    }
    fs::create_directories(out_dir);
    for (const auto &[stem, lgg] : lggs) {
        write_text_file(out_dir / (stem + ".lgg.json"), dump(lgg_to_json(lgg)));
        if (dot)
            write_text_file(out_dir / (stem + ".lgg.dot"), lgg_to_dot(lgg));
        std::cout << stem << ": " << lgg.vertices.size() << " landmarks, " << lgg.edges.size()
                  << " orderings\n";
    }
    return 0;
}

void check_vocabulary(const std::map<std::string, std::size_t> &arities, const Domain &domain) {
    for (const auto &[pred, arity] : arities) {
        const PredicateDecl *decl = domain.find_predicate(pred);
        if (!decl)
            throw TaskFailure{"predicate " + pred + " is not declared by domain " + domain.name};
        if (decl->params.size() != arity)
            throw TaskFailure{"predicate " + pred + " has arity " + std::to_string(arity) + " but domain " +
                              domain.name + " declares " + std::to_string(decl->params.size())};
    }
}

int cmd_learn(const std::vector<fs::path> &files, const fs::path &out, const std::string &domain_path,
              bool dot) {
    std::vector<Lgg> lggs;
    for (const fs::path &f : files) {
        try {
            lggs.push_back(lgg_from_json(read_json_file(f)));
        } catch (const SchemaError &e) {
            throw TaskFailure{f.string() + ": " + e.what()};
        } catch (const std::runtime_error &e) {
            throw TaskFailure{e.what()};
        }
    }
    std::string domain_name;
    std::optional<Domain> domain;
    if (!domain_path.empty()) {
        domain = load_domain(domain_path);
        domain_name = domain->name;
    }
    auto start = std::chrono::steady_clock::now();
    PLog plog;
    try {
        plog = learn_plog(lggs, domain_name);
    } catch (const VocabularyConflict &e) {
        throw TaskFailure{e.what()};
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (domain)
        check_vocabulary(predicate_arities(plog.counts), *domain);

    write_text_file(out, dump(plog_to_json(plog)));
    if (dot)
        write_text_file(fs::path(out).replace_extension(".dot"), plog_to_dot(plog));

    std::array<std::size_t, 5> hist{};
    for (const auto &[e, mu] : plog.probs)
        ++hist[mu >= 1.0 ? 4 : static_cast<std::size_t>(mu * 4.0)];
    std::printf("p-LOG: %zu vertices, %zu edges, %zu LOGs; mu histogram (0,.25):%zu [.25,.5):%zu "
                "[.5,.75):%zu [.75,1):%zu 1:%zu; %.1f ms\n",
                plog.counts.vertices.size(), plog.probs.size(), lggs.size(), hist[0], hist[1], hist[2], hist[3],
                hist[4], ms);
    return 0;
}

int cmd_instantiate(const fs::path &plog_path, const fs::path &domain_path, const fs::path &problem,
                    const fs::path &out, std::size_t top_n, double threshold, bool dot) {
    PLog plog;
    try {
        plog = plog_from_json(read_json_file(plog_path));
    } catch (const SchemaError &e) {
        throw TaskFailure{plog_path.string() + ": " + e.what()};
    } catch (const std::exception &e) {
        throw TaskFailure{e.what()};
    }
    Domain domain = load_domain(domain_path);
    if (!plog.domain.empty() && plog.domain != domain.name)
        throw TaskFailure{"p-LOG was learned for domain " + plog.domain + ", not " + domain.name};
    check_vocabulary(predicate_arities(plog.counts), domain);
    GroundTask task = load_task(problem, domain);

    auto start = std::chrono::steady_clock::now();
    PlggRun run = instantiate_plgg(plog, task, top_n);
    PLgg result = filter_plgg(run.combined.graph, threshold);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    write_text_file(out, dump(plgg_to_json(result)));
    if (dot)
        write_text_file(fs::path(out).replace_extension(".dot"), plgg_to_dot(result));

    PlggResult summary = extract_result(result, 0.0);
    std::printf("%s: %zu grounded + %zu lifted landmarks, %zu orderings, %zu combine iterations; %.1f ms\n",
                task.name.c_str(), summary.grounded_landmarks.size(), summary.lifted_landmarks.size(),
                summary.grounded_orderings.size() + summary.lifted_orderings.size(), run.combined.iterations, ms);
    for (const Atom &a : run.combined.graph.unmatched_seeds)
        std::fprintf(stderr, "note: no learned ordering for %s\n", a.str().c_str());
    return 0;
}

int cmd_evaluate(const ExperimentConfig &config, bool json) {
    if (config.train_count + config.test_count > config.problems.size()) {
        std::fprintf(stderr, "error: need %zu problems for --train %zu --test %zu, got %zu\n",
                     config.train_count + config.test_count, config.train_count, config.test_count,
                     config.problems.size());
        return kUsage;
    }
    RunRecord run;
    try {
        run = run_experiment(config);
    } catch (const PddlError &e) {
        throw TaskFailure{e.what()};
    } catch (const UnsolvableTask &e) {
        throw TaskFailure{e.what()};
    }
    if (json) {
        std::cout << dump(run_to_json(run));
    } else {
        std::cout << format_metric_table(run) << "\n" << format_oracle_table(run);
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Learn lifted landmark orderings and instantiate them on new planning tasks"};
    app.require_subcommand(1);

    auto *extract = app.add_subcommand("extract", "Extract a landmark graph per problem");
    std::string ex_domain;
    std::vector<std::string> ex_problems;
    std::string ex_out;
    bool ex_dot = false;
    extract->add_option("domain", ex_domain, "PDDL domain file")->required()->check(CLI::ExistingFile);
    extract->add_option("problems", ex_problems, "PDDL problem files")->required()->check(CLI::ExistingFile);
    extract->add_option("--out", ex_out, "Output directory")->required();
    extract->add_flag("--dot", ex_dot, "Also write Graphviz files");

    auto *learn = app.add_subcommand("learn", "Learn a p-LOG from landmark graphs");
    std::vector<std::string> ln_files;
    std::string ln_out, ln_domain;
    bool ln_dot = false;
    learn->add_option("lggs", ln_files, "LGG JSON files")->required()->check(CLI::ExistingFile);
    learn->add_option("--out", ln_out, "Output p-LOG file")->required();
    learn->add_option("--domain", ln_domain, "PDDL domain to check the vocabulary against")
        ->check(CLI::ExistingFile);
    learn->add_flag("--dot", ln_dot, "Also write a Graphviz file");

    auto *inst = app.add_subcommand("instantiate", "Instantiate a p-LOG on a problem");
    std::string in_plog, in_domain, in_problem, in_out;
    std::size_t in_top_n = 1;
    double in_threshold = 0.0;
    bool in_dot = false;
    inst->add_option("plog", in_plog, "p-LOG JSON file")->required()->check(CLI::ExistingFile);
    inst->add_option("domain", in_domain, "PDDL domain file")->required()->check(CLI::ExistingFile);
    inst->add_option("problem", in_problem, "PDDL problem file")->required()->check(CLI::ExistingFile);
    inst->add_option("--out", in_out, "Output p-LGG file")->required();
    inst->add_option("--top-n", in_top_n, "Candidates kept per equivalence search")->check(CLI::PositiveNumber);
    inst->add_option("--threshold", in_threshold, "Minimum edge probability")->check(CLI::Range(0.0, 1.0));
    inst->add_flag("--dot", in_dot, "Also write a Graphviz file");

    auto *eval = app.add_subcommand("evaluate", "Run the train/test protocol and report metrics");
    ExperimentConfig cfg;
    std::string ev_domain, ev_reference;
    std::vector<std::string> ev_problems;
    bool ev_json = false;
    eval->add_option("domain", ev_domain, "PDDL domain file")->required()->check(CLI::ExistingFile);
    eval->add_option("problems", ev_problems, "PDDL problem files")->required()->check(CLI::ExistingFile);
    eval->add_option("--train", cfg.train_count, "Training problems per repetition")->check(CLI::PositiveNumber);
    eval->add_option("--test", cfg.test_count, "Test problems per repetition")->check(CLI::PositiveNumber);
    eval->add_option("--reps", cfg.repetitions, "Repetitions")->check(CLI::PositiveNumber);
    eval->add_option("--seed", cfg.seed, "Base RNG seed");
    eval->add_option("--top-n", cfg.top_n, "Candidates kept per equivalence search")->check(CLI::PositiveNumber);
    eval->add_option("--threshold", cfg.threshold, "Minimum edge probability")->check(CLI::Range(0.0, 1.0));
    eval->add_option("--reference-dir", ev_reference, "Directory of <problem>.lgg.json reference graphs")
        ->check(CLI::ExistingDirectory);
    eval->add_flag("--json", ev_json, "Print the report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*extract)
            return cmd_extract(ex_domain, {ex_problems.begin(), ex_problems.end()}, ex_out, ex_dot);
        if (*learn)
            return cmd_learn({ln_files.begin(), ln_files.end()}, ln_out, ln_domain, ln_dot);
        if (*inst)
            return cmd_instantiate(in_plog, in_domain, in_problem, in_out, in_top_n, in_threshold, in_dot);
        cfg.domain = ev_domain;
        cfg.problems.assign(ev_problems.begin(), ev_problems.end());
        if (!ev_reference.empty())
            cfg.reference_dir = ev_reference;
        return cmd_evaluate(cfg, ev_json);
    } catch (const TaskFailure &f) {
        std::fprintf(stderr, "error: %s\n", f.message.c_str());
        return kTaskError;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kTaskError;
    }
}

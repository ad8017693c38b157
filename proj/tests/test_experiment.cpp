#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lmlearn/experiment.hpp"
#include "test_support.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

using namespace lmlearn;
namespace fs = std::filesystem;

namespace {

std::vector<fs::path> bw_problems(std::size_t count) {
    std::vector<fs::path> out;
    auto stems = testing::bw_stems();
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(testing::data_path("blocksworld/" + stems[i] + ".pddl"));
    return out;
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.domain = testing::data_path("blocksworld/domain.pddl");
    c.problems = bw_problems(8);
    c.train_count = 4;
    c.test_count = 3;
    c.repetitions = 2;
    c.seed = 3;
    return c;
}

void strip_timings(Json &j) {
    if (j.is_object()) {
        j.erase("timings_ms");
        for (auto &[k, v] : j.items())
            strip_timings(v);
    } else if (j.is_array()) {
        for (auto &v : j)
            strip_timings(v);
    }
}

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string &name) : dir(fs::temp_directory_path() / ("lmlearn_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
};

std::string quote(const fs::path &p) {
    return "'" + p.string() + "'";
}

// Runs the CLI with stdout/stderr captured into `scratch`; returns the exit code.
int cli(const std::string &args, const Scratch &scratch) {
    std::string cmd = std::string("'") + LMLEARN_CLI + "' " + args + " > " + quote(scratch.dir / "stdout.txt") +
                      " 2> " + quote(scratch.dir / "stderr.txt");
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string bw(const std::string &stem) {
    return quote(testing::data_path("blocksworld/" + stem + ".pddl"));
}

} // namespace

TEST_SUITE("protocol") {
    TEST_CASE("shuffled_indices is a seeded permutation") {
        auto a = shuffled_indices(14, 0);
        auto sorted = a;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < 14; ++i)
            CHECK(sorted[i] == i);
        CHECK(shuffled_indices(14, 0) == a);
        CHECK(shuffled_indices(14, 1) != a);
        CHECK(shuffled_indices(0, 5).empty());
    }

    TEST_CASE("mean_report averages ratios and sums counts") {
        MetricReport a, b;
        a.landmarks.recall = 1.0;
        a.landmarks.hits = 3;
        b.landmarks.recall = 0.5;
        b.landmarks.hits = 4;
        MetricReport m = mean_report({a, b});
        CHECK(m.landmarks.recall == 0.75);
        CHECK(m.landmarks.hits == 7);
    }

    TEST_CASE("split bookkeeping and determinism") {
        ExperimentConfig c = small_config();
        RunRecord r = run_experiment(c);
        REQUIRE(r.repetitions.size() == 2);
        for (std::size_t k = 0; k < r.repetitions.size(); ++k) {
            const RepetitionRecord &rep = r.repetitions[k];
            CHECK(rep.seed == c.seed + k);
            CHECK(rep.train.size() == 4);
            CHECK(rep.test.size() == 3);
            for (const auto &t : rep.test)
                CHECK(std::find(rep.train.begin(), rep.train.end(), t) == rep.train.end());
            CHECK(rep.tasks.size() == 3);
        }
        Json a = run_to_json(r), b = run_to_json(run_experiment(c));
        strip_timings(a);
        strip_timings(b);
        CHECK(a == b);
    }

    TEST_CASE("a split larger than the problem list is rejected") {
        ExperimentConfig c = small_config();
        c.test_count = 10;
        CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
    }

    TEST_CASE("full BlocksWorld protocol recovers every reference landmark") {
        ExperimentConfig c;
        c.domain = testing::data_path("blocksworld/domain.pddl");
        c.problems = bw_problems(14);
        RunRecord r = run_experiment(c);
        CHECK(r.repetitions.size() == 5);
        CHECK(r.mean.landmarks.recall >= 0.95);
        CHECK(r.plgg_oracle_recall >= r.reference_oracle_recall);
        std::string table = format_metric_table(r);
        CHECK(table.find("blocksworld") != std::string::npos);
        CHECK(format_oracle_table(r).find("blocksworld") != std::string::npos);
    }

    TEST_CASE("imported reference graphs replace the native extractor") {
        Scratch s("refdir");
        ExperimentConfig c = small_config();
        for (const fs::path &p : c.problems) {
            Lgg g = extract_lgg(ground(read_problem_file(p, testing::blocksworld())));
            write_text_file(s.dir / (p.stem().string() + ".lgg.json"), lgg_to_json(g).dump());
        }
        Json native = run_to_json(run_experiment(c));
        c.reference_dir = s.dir;
        Json imported = run_to_json(run_experiment(c));
        strip_timings(native);
        strip_timings(imported);
        CHECK(native == imported);

        fs::remove(s.dir / "p02.lgg.json");
        CHECK_THROWS(run_experiment(c));
    }
}

TEST_SUITE("cli") {
    TEST_CASE("extract writes one graph per problem, deterministically") {
        Scratch s("cli_extract");
        std::string args = "extract " + bw("domain") + " " + bw("p01") + " " + bw("p02") + " " + bw("p03");
        REQUIRE(cli(args + " --out " + quote(s.dir / "a"), s) == 0);
        REQUIRE(cli(args + " --out " + quote(s.dir / "b"), s) == 0);
        for (const char *stem : {"p01", "p02", "p03"}) {
            std::string name = std::string(stem) + ".lgg.json";
            REQUIRE(fs::exists(s.dir / "a" / name));
            CHECK(read_text_file(s.dir / "a" / name) == read_text_file(s.dir / "b" / name));
        }
        CHECK(std::distance(fs::directory_iterator(s.dir / "a"), fs::directory_iterator{}) == 3);
    }

    TEST_CASE("unsolvable task exits 2 and names the task") {
        Scratch s("cli_unsolvable");
        std::string data = LMLEARN_TEST_DATA;
        int code = cli("extract " + quote(data + "/unsolvable/domain.pddl") + " " +
                           quote(data + "/unsolvable/stuck.pddl") + " --out " + quote(s.dir / "out"),
                       s);
        CHECK(code == 2);
        CHECK(read_text_file(s.dir / "stderr.txt").find("stuck") != std::string::npos);
        CHECK_FALSE(fs::exists(s.dir / "out" / "stuck.lgg.json"));
    }

    TEST_CASE("usage errors exit 1") {
        Scratch s("cli_usage");
        CHECK(cli("learn --out " + quote(s.dir / "p.json"), s) == 1);
        CHECK(cli("frobnicate", s) == 1);
        CHECK(cli("evaluate " + bw("domain") + " " + bw("p01") + " " + bw("p02") + " --train 4 --test 10", s) == 1);
        CHECK(cli("instantiate " + bw("domain") + " " + bw("domain") + " " + bw("p01") + " --out x --threshold 2",
                  s) == 1);
    }

    TEST_CASE("learn on a graph with one landmark per lifted root gives mu 1") {
        Scratch s("cli_learn_single");
        Lgg g;
        g.task = "hand";
        for (const char *a : {"clear(a)", "holding(a)", "on(a,b)", "clear(b)"})
            g.vertices.insert(parse_atom(a));
        g.edges = {{parse_atom("clear(a)"), parse_atom("holding(a)")},
                   {parse_atom("holding(a)"), parse_atom("on(a,b)")},
                   {parse_atom("clear(b)"), parse_atom("on(a,b)")}};
        write_text_file(s.dir / "g.lgg.json", lgg_to_json(g).dump());
        REQUIRE(cli("learn " + quote(s.dir / "g.lgg.json") + " --out " + quote(s.dir / "p.json"), s) == 0);
        Json p = read_json_file(s.dir / "p.json");
        REQUIRE_FALSE(p["edges"].empty());
        for (const auto &e : p["edges"])
            CHECK(e["mu"].get<double>() == 1.0);
    }

    TEST_CASE("learn rejects a malformed graph with exit 2") {
        Scratch s("cli_learn_bad");
        write_text_file(s.dir / "bad.json", R"({"task":"t","vertices":[],"edges":[[0,1]],"order_type":"greedy_necessary"})");
        CHECK(cli("learn " + quote(s.dir / "bad.json") + " --out " + quote(s.dir / "p.json"), s) == 2);
        CHECK(read_text_file(s.dir / "stderr.txt").find("/edges/0/0") != std::string::npos);
        CHECK_FALSE(fs::exists(s.dir / "p.json"));
    }

    TEST_CASE("learn, instantiate, threshold and dot export") {
        Scratch s("cli_pipeline");
        REQUIRE(cli("extract " + bw("domain") + " " + bw("p01") + " " + bw("p02") + " " + bw("p03") + " " +
                        bw("p04") + " --out " + quote(s.dir / "lgg"),
                    s) == 0);
        std::string lggs;
        for (const char *stem : {"p01", "p02", "p03", "p04"})
            lggs += " " + quote(s.dir / "lgg" / (std::string(stem) + ".lgg.json"));
        REQUIRE(cli("learn" + lggs + " --domain " + bw("domain") + " --out " + quote(s.dir / "plog.json"), s) == 0);
        CHECK(read_text_file(s.dir / "stdout.txt").find("p-LOG:") != std::string::npos);

        write_text_file(s.dir / "onab.pddl",
                        "(define (problem onab) (:domain blocksworld) (:objects a b c - block)"
                        " (:init (ontable a) (ontable b) (ontable c) (clear a) (clear b) (clear c) (handempty))"
                        " (:goal (on a b)))");
        std::string base = "instantiate " + quote(s.dir / "plog.json") + " " + bw("domain") + " " +
                           quote(s.dir / "onab.pddl");
        REQUIRE(cli(base + " --out " + quote(s.dir / "plgg.json") + " --dot", s) == 0);
        PLgg g = plgg_from_json(read_json_file(s.dir / "plgg.json"));
        bool found = false;
        for (const auto &[e, mu] : g.orderings())
            found = found || (e.src == parse_atom("clear(b)") && e.dst == parse_atom("on(a,b)"));
        CHECK(found);
        std::string dot = read_text_file(s.dir / "plgg.dot");
        CHECK(dot.find("->") != std::string::npos);
        CHECK(dot.find("label=\"1.00\"") != std::string::npos);

        REQUIRE(cli(base + " --threshold 1.0 --out " + quote(s.dir / "certain.json"), s) == 0);
        Json certain = read_json_file(s.dir / "certain.json");
        REQUIRE_FALSE(certain["edges"].empty());
        for (const auto &e : certain["edges"])
            CHECK(e["mu"].get<double>() == 1.0);
    }

    TEST_CASE("evaluate prints tables or JSON") {
        Scratch s("cli_evaluate");
        std::string args = "evaluate " + bw("domain");
        for (const char *stem : {"p01", "p02", "p03", "p04", "p05", "p06"})
            args += " " + bw(stem);
        args += " --train 4 --test 2 --reps 1 --seed 0";
        REQUIRE(cli(args + " --json", s) == 0);
        Json a = Json::parse(read_text_file(s.dir / "stdout.txt"));
        REQUIRE(cli(args + " --json", s) == 0);
        Json b = Json::parse(read_text_file(s.dir / "stdout.txt"));
        strip_timings(a);
        strip_timings(b);
        CHECK(a == b);
        REQUIRE(cli(args, s) == 0);
        CHECK(read_text_file(s.dir / "stdout.txt").find("grounded") != std::string::npos);
    }
}

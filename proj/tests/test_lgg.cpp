#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lmlearn/lgg.hpp"
#include "test_support.hpp"

using namespace lmlearn;
using testing::blocksworld;
using testing::ground_problem;

namespace {

GroundTask bw(const std::string &objects, const std::string &init, const std::string &goal) {
    return ground_problem(blocksworld(), "(define (problem t) (:domain blocksworld) (:objects " + objects +
                                             " - block) (:init " + init + ") (:goal (and " + goal + ")))");
}

// a on b on c, c on the table.
GroundTask tower_abc(const std::string &goal) {
    return bw("a b c", "(on a b) (on b c) (ontable c) (clear a) (handempty)", goal);
}

Atom at(const char *text) {
    return parse_atom(text);
}

} // namespace

TEST_SUITE("oracle") {
    TEST_CASE("holding(a) is a landmark of on(a,b)") {
        GroundTask t = bw("a b c", "(ontable a) (ontable b) (ontable c) (clear a) (clear b) (clear c) (handempty)",
                          "(on a b)");
        auto v = is_landmark_oracle(t, at("holding(a)"));
        CHECK(v.is_landmark);
        CHECK(v.reason == LandmarkReason::goal_unreachable_without);
        CHECK(std::string(to_string(v.reason)) == "goal-unreachable-without");
    }

    TEST_CASE("goal atoms are landmarks") {
        GroundTask t = tower_abc("(on c a) (ontable b)");
        for (FactId g : t.goal) {
            auto v = LandmarkOracle(t).verdict(g);
            CHECK(v.is_landmark);
            CHECK(v.reason == LandmarkReason::in_init_or_goal);
        }
    }

    TEST_CASE("an atom the plan can avoid is not a landmark") {
        // c starts on a; moving c to the table is one option among several.
        GroundTask t = bw("a b c", "(on c a) (ontable a) (ontable b) (clear c) (clear b) (handempty)", "(on a b)");
        auto v = is_landmark_oracle(t, at("ontable(c)"));
        CHECK_FALSE(v.is_landmark);
        CHECK(v.reason == LandmarkReason::achievable_without);
        CHECK(is_landmark_oracle(t, at("holding(c)")).is_landmark);
    }

    TEST_CASE("initial atoms are landmarks") {
        GroundTask t = bw("a b c", "(ontable a) (ontable b) (ontable c) (clear a) (clear b) (clear c) (handempty)",
                          "(on a b)");
        auto v = is_landmark_oracle(t, at("ontable(c)"));
        CHECK(v.is_landmark);
        CHECK(v.reason == LandmarkReason::in_init_or_goal);
    }

    TEST_CASE("atoms outside the fact set are rejected") {
        GroundTask t = tower_abc("(on c a)");
        CHECK_THROWS_AS(is_landmark_oracle(t, at("on(a,z)")), std::invalid_argument);
    }
}

TEST_SUITE("extract_lgg") {
    TEST_CASE("on(a,b) is preceded by holding(a) and clear(b)") {
        GroundTask t = bw("a b c", "(ontable a) (ontable b) (ontable c) (clear a) (clear b) (clear c) (handempty)",
                          "(on a b)");
        Lgg g = extract_lgg(t);
        CHECK(g.edges.count({at("holding(a)"), at("on(a,b)")}));
        CHECK(g.edges.count({at("clear(b)"), at("on(a,b)")}));
    }

    TEST_CASE("goal already true: only goal vertices and no edges") {
        GroundTask t = tower_abc("(on a b) (ontable c)");
        Lgg g = extract_lgg(t);
        CHECK(g.vertices == std::set<Atom>{at("on(a,b)"), at("ontable(c)")});
        CHECK(g.edges.empty());
    }

    TEST_CASE("tower a/b/c with goal on(c,a): hand-derived graph") {
        GroundTask t = tower_abc("(on c a)");
        Lgg g = extract_lgg(t);
        std::set<Atom> vertices;
        for (const char *s : {"on(c,a)", "holding(c)", "clear(a)", "clear(c)", "ontable(c)", "handempty()",
                              "on(b,c)", "clear(b)", "on(a,b)"})
            vertices.insert(at(s));
        CHECK(g.vertices == vertices);

        std::set<Ordering> edges;
        auto e = [&](const char *s, const char *d) { edges.insert({at(s), at(d)}); };
        e("holding(c)", "on(c,a)");
        e("clear(a)", "on(c,a)");
        e("clear(c)", "holding(c)");
        e("ontable(c)", "holding(c)");
        e("handempty()", "holding(c)");
        e("on(b,c)", "clear(c)");
        e("clear(b)", "clear(c)");
        e("handempty()", "clear(c)");
        e("on(a,b)", "clear(b)");
        e("clear(a)", "clear(b)");
        e("handempty()", "clear(b)");
        CHECK(g.edges == edges);

        LandmarkOracle oracle(t);
        for (const Atom &v : g.vertices)
            CHECK(oracle.verdict(v).is_landmark);
    }

    TEST_CASE("relaxed-unsolvable goal raises UnsolvableTask") {
        GroundTask t = bw("a b", "(ontable a) (clear a)", "(on a b)");
        CHECK_THROWS_AS(extract_lgg(t), UnsolvableTask);
    }

    TEST_CASE("first achievers of holding(c) in the tower") {
        GroundTask t = tower_abc("(on c a)");
        RelaxedExploration ex(t);
        auto fa = first_achievers(ex, t.id(at("holding(c)")));
        REQUIRE(fa.size() == 1);
        CHECK(t.actions[fa[0]].name() == "pick-up(c)");
    }

    TEST_CASE("soundness, determinism and acyclicity on the corpus and random tasks") {
        std::vector<GroundTask> tasks;
        for (const auto &stem : testing::bw_stems())
            tasks.push_back(testing::bw_file(stem));
        for (int i = 1; i <= 4; ++i)
            tasks.push_back(ground(read_problem_file(
                testing::data_path("gripper/p0" + std::to_string(i) + ".pddl"), testing::gripper())));
        std::mt19937_64 rng(3);
        for (int i = 0; i < 60; ++i)
            tasks.push_back(ground_problem(blocksworld(), testing::random_bw_problem(2 + i % 5, rng)));

        for (const GroundTask &t : tasks) {
            CAPTURE(t.name);
            Lgg g = extract_lgg(t);
            LandmarkOracle oracle(t);
            for (const Atom &v : g.vertices)
                REQUIRE(oracle.verdict(v).is_landmark);
            for (const Ordering &e : g.edges) {
                REQUIRE(g.vertices.count(e.src));
                REQUIRE(g.vertices.count(e.dst));
            }
            CHECK(extract_lgg(t) == g);
            CHECK_FALSE(has_cycle(g));
        }
    }
}

TEST_CASE("has_cycle detects a back edge") {
    Lgg g;
    g.vertices = {at("p(a)"), at("q(a)"), at("r(a)")};
    g.edges = {{at("p(a)"), at("q(a)")}, {at("q(a)"), at("r(a)")}};
    CHECK_FALSE(has_cycle(g));
    g.edges.insert({at("r(a)"), at("p(a)")});
    CHECK(has_cycle(g));
}

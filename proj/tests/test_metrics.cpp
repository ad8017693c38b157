#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lmlearn/metrics.hpp"
#include "test_support.hpp"

#include <random>

using namespace lmlearn;

namespace {

Atom at(const char *text) {
    return parse_atom(text);
}

Ordering edge(const char *src, const char *dst) {
    return {at(src), at(dst)};
}

std::set<Atom> atoms(std::initializer_list<const char *> texts) {
    std::set<Atom> out;
    for (const char *t : texts)
        out.insert(at(t));
    return out;
}

Lgg lgg_of(const std::set<Atom> &vertices, const std::set<Ordering> &edges = {}) {
    Lgg g;
    g.vertices = vertices;
    g.edges = edges;
    return g;
}

// Renames every variable ?xN to ?yN+offset.
Atom rename(const Atom &a, int offset) {
    Atom out = a;
    for (Term &t : out.args)
        if (t.is_variable())
            t = Term::variable("?y" + std::to_string(std::stoi(t.name.substr(2)) + offset));
    return out;
}

} // namespace

TEST_SUITE("grounded") {
    TEST_CASE("exact, disjoint and partial overlap") {
        auto ref = atoms({"p(a)", "p(b)", "p(c)", "p(d)"});
        Prf same = grounded_prf(ref, ref);
        CHECK(same.precision == 1.0);
        CHECK(same.recall == 1.0);
        CHECK(same.f1 == 1.0);

        Prf none = grounded_prf(ref, atoms({"q(a)"}));
        CHECK(none.precision == 0.0);
        CHECK(none.recall == 0.0);
        CHECK(none.f1 == 0.0);

        Prf part = grounded_prf(ref, atoms({"p(a)", "p(b)", "p(e)"}));
        CHECK(part.precision == doctest::Approx(2.0 / 3.0));
        CHECK(part.recall == 0.5);
        CHECK(part.f1 == doctest::Approx(4.0 / 7.0));
        CHECK(part.hits == 2);
        CHECK(part.misses == 2);
        CHECK(part.extras == 1);
    }

    TEST_CASE("empty-set conventions") {
        Prf both = grounded_prf(std::set<Atom>{}, std::set<Atom>{});
        CHECK(both.precision == 1.0);
        CHECK(both.recall == 1.0);
        Prf no_pred = grounded_prf(atoms({"p(a)"}), std::set<Atom>{});
        CHECK(no_pred.precision == 0.0);
        CHECK(no_pred.recall == 0.0);
        Prf no_ref = grounded_prf(std::set<Atom>{}, atoms({"p(a)"}));
        CHECK(no_ref.precision == 0.0);
        CHECK(no_ref.recall == 0.0);
        CHECK(harmonic_mean(0.0, 0.0) == 0.0);
    }

    TEST_CASE("orderings") {
        std::set<Ordering> ref{edge("p(a)", "q(a)"), edge("p(b)", "q(b)")};
        Prf r = grounded_prf(ref, std::set<Ordering>{edge("p(a)", "q(a)")});
        CHECK(r.precision == 1.0);
        CHECK(r.recall == 0.5);
    }
}

TEST_SUITE("likelihood") {
    TEST_CASE("omega of atoms") {
        CHECK(likelihood_atom(at("on(b,?x0)"), at("on(b,a)")) == 0.5);
        CHECK(likelihood_atom(at("handempty()"), at("handempty()")) == 1.0);
        CHECK(likelihood_atom(at("on(a,b)"), at("on(a,b)")) == 1.0);
        CHECK(likelihood_atom(at("on(?x0,?x1)"), at("on(a,b)")) == 0.0);
        CHECK(likelihood_atom(at("on(?x0,?x0)"), at("on(a,a)")) == 0.0);
        CHECK_THROWS_AS(likelihood_atom(at("on(c,?x0)"), at("on(b,a)")), std::invalid_argument);
        // Equivalence is positional, so a repeated variable may face two objects.
        CHECK(likelihood_atom(at("on(?x0,?x0)"), at("on(a,b)")) == 0.0);
        CHECK_THROWS_AS(likelihood_atom(at("on(b,?x0)"), at("on(b,?x1)")), std::invalid_argument);
    }

    TEST_CASE("omega of edges") {
        CHECK(likelihood_edge(edge("clear(?x0)", "on(b,?x0)"), edge("clear(a)", "on(b,a)")) == 0.25);
        CHECK(likelihood_edge(edge("on(b,?x0)", "holding(b)"), edge("on(b,a)", "holding(b)")) == 0.75);
        CHECK(likelihood_edge(edge("on(a,b)", "holding(a)"), edge("on(a,b)", "holding(a)")) == 1.0);
        CHECK(likelihood_edge(edge("on(?x0,?x1)", "on(?x2,?x3)"), edge("on(a,b)", "on(c,d)")) == 0.0);
    }

    TEST_CASE("Omega of candidate sets") {
        CHECK(likelihood_set(std::vector<Atom>{at("on(b,?x0)")}, at("on(b,a)")) == 0.5);
        CHECK(likelihood_set(std::vector<Atom>{at("on(b,?x0)"), at("on(?x1,a)")}, at("on(b,a)")) == 0.5);
        CHECK(likelihood_set(std::vector<Atom>{at("on(b,?x0)"), at("on(?x0,?x1)")}, at("on(b,a)")) == 0.25);
        CHECK_THROWS_AS(likelihood_set(std::vector<Atom>{}, at("on(b,a)")), std::invalid_argument);
    }
}

TEST_SUITE("alpha") {
    TEST_CASE("worked example under the likelihood formula") {
        // ontable(?x0) has no object, so its likelihood against ontable(a) is
        // 0/1; on(b,?x0) scores 1/2. The mean over the two missed vertices is 1/4.
        Lgg ref = lgg_of(atoms({"on(b,a)", "on(c,d)", "ontable(a)", "ontable(d)"}));
        PredictedGraph pred{atoms({"on(c,d)", "ontable(d)", "on(b,?x0)", "ontable(?x0)"}), {}};
        CHECK(likelihood_set(std::vector<Atom>{at("on(b,?x0)")}, at("on(b,a)")) == 0.5);
        CHECK(likelihood_set(std::vector<Atom>{at("ontable(?x0)")}, at("ontable(a)")) == 0.0);
        AlphaValues a = alpha_values(ref, pred);
        CHECK(a.alpha_v == 0.25);
        CHECK(a.alpha_e == 0.0);
    }

    TEST_CASE("no lifted content gives zero") {
        Lgg ref = lgg_of(atoms({"on(b,a)", "ontable(a)"}), {edge("ontable(a)", "on(b,a)")});
        PredictedGraph pred{atoms({"on(b,a)"}), {}};
        AlphaValues a = alpha_values(ref, pred);
        CHECK(a.alpha_v == 0.0);
        CHECK(a.alpha_e == 0.0);
    }

    TEST_CASE("superset prediction has an empty difference") {
        Lgg ref = lgg_of(atoms({"on(b,a)"}));
        PredictedGraph pred{atoms({"on(b,a)", "on(?x0,a)"}), {}};
        CHECK(alpha_values(ref, pred).alpha_v == 0.0);
    }

    TEST_CASE("missed items without candidates contribute zero") {
        Lgg ref = lgg_of(atoms({"on(b,a)", "clear(c)"}));
        PredictedGraph pred{atoms({"on(b,?x0)"}), {}};
        CHECK(alpha_values(ref, pred).alpha_v == 0.25);
    }

    TEST_CASE("alpha_e uses edges with a lifted endpoint") {
        Lgg ref = lgg_of(atoms({"clear(a)", "on(b,a)", "holding(b)"}),
                         {edge("clear(a)", "on(b,a)"), edge("holding(b)", "on(b,a)")});
        PredictedGraph pred{atoms({"holding(b)", "clear(?x0)", "on(b,?x0)"}),
                            {edge("clear(?x0)", "on(b,?x0)"), edge("holding(b)", "on(b,?x0)")}};
        AlphaValues a = alpha_values(ref, pred);
        // clear(a): 0; on(b,a): 1/2.
        CHECK(a.alpha_v == 0.25);
        // (clear,on): (0 + 1/2)/2; (holding,on): (1 + 1/2)/2.
        CHECK(a.alpha_e == doctest::Approx((0.25 + 0.75) / 2.0));
    }

    TEST_CASE("alpha_prf") {
        CHECK(alpha_prf(1.0, 0.3, 0.7).precision == 1.0);
        AlphaPrf p = alpha_prf(0.5, 0.2, 0.5);
        CHECK(p.precision == 0.75);
        CHECK(p.recall == doctest::Approx(0.6));
        CHECK(p.f1 == doctest::Approx(harmonic_mean(0.75, 0.6)));
        AlphaPrf z = alpha_prf(0.4, 0.3, 0.0);
        CHECK(z.precision == 0.4);
        CHECK(z.recall == 0.3);
    }
}

TEST_SUITE("properties") {
    TEST_CASE("alpha metrics are monotone in alpha and bounded") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 5000; ++i) {
            double p = u(rng), r = u(rng), a1 = u(rng), a2 = u(rng);
            if (a1 > a2)
                std::swap(a1, a2);
            AlphaPrf lo = alpha_prf(p, r, a1), hi = alpha_prf(p, r, a2);
            REQUIRE(lo.precision <= hi.precision);
            REQUIRE(lo.recall <= hi.recall);
            REQUIRE(lo.precision >= p);
            REQUIRE(hi.precision <= 1.0);
            REQUIRE(alpha_prf(1.0, r, a1).precision == 1.0);
        }
    }

    TEST_CASE("swap symmetry of grounded P/R") {
        std::mt19937_64 rng(12);
        for (int i = 0; i < 2000; ++i) {
            Lgg a = testing::random_lgg(rng), b = testing::random_lgg(rng);
            Prf ab = grounded_prf(a.vertices, b.vertices), ba = grounded_prf(b.vertices, a.vertices);
            REQUIRE(ab.precision == ba.recall);
            REQUIRE(ab.recall == ba.precision);
            Prf eab = grounded_prf(a.edges, b.edges), eba = grounded_prf(b.edges, a.edges);
            REQUIRE(eab.precision == eba.recall);
            REQUIRE(eab.recall == eba.precision);
        }
    }

    TEST_CASE("likelihoods are bounded; 1 exactly for ground or nullary") {
        std::mt19937_64 rng(13);
        for (int i = 0; i < 2000; ++i) {
            Lgg g = testing::random_lgg(rng);
            for (const Atom &v : g.vertices) {
                Atom lifted = v;
                for (Term &t : lifted.args)
                    if (rng() % 2)
                        t = Term::variable("?x" + std::to_string(rng() % 3));
                bool consistent = true;
                std::map<std::string, std::string> seen;
                for (std::size_t k = 0; k < lifted.arity(); ++k)
                    if (lifted.args[k].is_variable()) {
                        auto [it, fresh] = seen.emplace(lifted.args[k].name, v.args[k].name);
                        consistent = consistent && it->second == v.args[k].name;
                    }
                if (!consistent)
                    continue;
                double w = likelihood_atom(lifted, v);
                REQUIRE(w >= 0.0);
                REQUIRE(w <= 1.0);
                REQUIRE((w == 1.0) == (lifted.is_ground() || lifted.arity() == 0));
            }
        }
    }

    TEST_CASE("alpha values ignore variable names") {
        std::mt19937_64 rng(14);
        for (int i = 0; i < 500; ++i) {
            Lgg ref = testing::random_lgg(rng, 3);
            PredictedGraph pred;
            std::vector<Atom> lifted;
            for (const Atom &v : ref.vertices) {
                if (rng() % 3 == 0)
                    continue;
                Atom p = v;
                for (Term &t : p.args)
                    if (rng() % 2)
                        t = Term::variable("?x" + std::to_string(rng() % 4));
                pred.vertices.insert(p);
                lifted.push_back(p);
            }
            for (std::size_t k = 0; k + 1 < lifted.size(); k += 2)
                pred.edges.insert({lifted[k], lifted[k + 1]});
            PredictedGraph renamed;
            for (const Atom &v : pred.vertices)
                renamed.vertices.insert(rename(v, 10));
            for (const Ordering &e : pred.edges)
                renamed.edges.insert({rename(e.src, 10), rename(e.dst, 10)});
            AlphaValues a = alpha_values(ref, pred), b = alpha_values(ref, renamed);
            REQUIRE(a.alpha_v == b.alpha_v);
            REQUIRE(a.alpha_e == b.alpha_e);
        }
    }

    TEST_CASE("fully grounded predictions degenerate to classical metrics") {
        std::mt19937_64 rng(15);
        for (int i = 0; i < 2000; ++i) {
            Lgg ref = testing::random_lgg(rng), other = testing::random_lgg(rng);
            PredictedGraph pred{other.vertices, other.edges};
            MetricReport m = evaluate_prediction(ref, pred);
            REQUIRE(m.alpha_v == 0.0);
            REQUIRE(m.alpha_e == 0.0);
            REQUIRE(m.alpha_landmarks.precision == m.landmarks.precision);
            REQUIRE(m.alpha_landmarks.recall == m.landmarks.recall);
            REQUIRE(m.alpha_orderings.precision == m.orderings.precision);
            REQUIRE(m.alpha_orderings.recall == m.orderings.recall);
        }
    }
}

TEST_CASE("evaluate_prediction splits grounded and lifted content") {
    Lgg ref = lgg_of(atoms({"on(b,a)", "clear(b)"}), {edge("clear(b)", "on(b,a)")});
    PredictedGraph pred{atoms({"clear(b)", "on(b,?x0)"}), {edge("clear(b)", "on(b,?x0)")}};
    MetricReport m = evaluate_prediction(ref, pred);
    CHECK(m.landmarks.precision == 1.0);
    CHECK(m.landmarks.recall == 0.5);
    CHECK(m.orderings.recall == 0.0);
    CHECK(m.alpha_v == 0.5);
    CHECK(m.alpha_e == 0.75);
    CHECK(m.alpha_landmarks.recall == 0.75);
}

#include "fqgraph/bounds.hpp"

#include "fqgraph/ensembles.hpp"

#include <doctest.h>

#include <cmath>

using namespace fqg;

TEST_CASE("theorem constants match the printed values") {
    CHECK(theorem_constants(4, 2, 2).gamma == -1.0);
    CHECK(theorem_constants(4, 2, 3).gamma == -0.5);
    CHECK(theorem_constants(4, 2, 4).gamma == -1.0);
    CHECK(theorem_constants(4, 2, 2).K_n == 48);
    CHECK(theorem_constants(4, 2, 2).c_n == 12);
    CHECK(theorem_constants(4, 2, 2).A_k == 10); // A_2
    CHECK(theorem_constants(6, 3, 2).K_n == 552);
    CHECK(theorem_constants(6, 3, 2).A_k == 60);
    CHECK(theorem_constants(5, 2, 2).K_n == 36 + 80 + 24);

    CHECK_THROWS_AS(theorem_constants(3, 2, 2), Error);
    CHECK_THROWS_AS(theorem_constants(4, 1, 2), Error);
    // delta out of the printed range: n = 6 needs delta < 1/18
    CHECK_THROWS_AS(theorem_constants(6, 3, 2, std::nullopt, 0.1), Error);
    CHECK(theorem_constants(6, 3, 2, std::nullopt, 0.05).delta == 0.05);
    // alpha below (k-2)/(k-1)
    CHECK_THROWS_AS(theorem_constants(6, 3, 2, 0.3, std::nullopt), Error);
    CHECK(theorem_constants(6, 3, 2, 0.75, std::nullopt).psi == doctest::Approx(0.5));
}

TEST_CASE("theorem ids round trip") {
    for (TheoremId id : {TheoremId::EdgeIdentity, TheoremId::Paths, TheoremId::EdgeFunctional,
                         TheoremId::BilinearDist, TheoremId::BilinearProd, TheoremId::Bilinear,
                         TheoremId::Cycles, TheoremId::CyclesLong, TheoremId::CyclesCor,
                         TheoremId::PathGrowth, TheoremId::PathRecursion, TheoremId::TreeEmbed,
                         TheoremId::Nondegenerate}) {
        CHECK(theorem_from_string(theorem_name(id)) == id);
    }
    CHECK_THROWS_AS(theorem_from_string("nope"), Error);
}

TEST_CASE("dot_pair_sum equals the quadratic-loop oracle") {
    FieldCtx ctx = make_context(5, 2);
    GridFunction f = random_grid_function(ctx, 6, 31);
    GridFunction g = random_grid_function(ctx, 6, 32);
    for (std::uint32_t t = 0; t < 5; ++t) {
        Int direct = 0;
        for (std::uint64_t rx = 0; rx < ctx.volume(); ++rx) {
            for (std::uint64_t ry = 0; ry < ctx.volume(); ++ry) {
                if (dot(ctx, rank_point(ctx, rx), rank_point(ctx, ry)) == t)
                    direct += Int(f.ints()[rx]) * g.ints()[ry];
            }
        }
        CHECK(dot_pair_sum(f, g, t) == direct);
    }
}

TEST_CASE("edge functional bound holds exactly on random functions") {
    for (auto [q, d] : {std::pair{5u, 2u}, {7u, 2u}, {5u, 3u}}) {
        FieldCtx ctx = make_context(q, d);
        for (int trial = 0; trial < 10; ++trial) {
            GridFunction f = random_grid_function(ctx, 9, 100 + trial);
            GridFunction g = random_grid_function(ctx, 9, 200 + trial);
            VerifyInput in;
            in.f_grid = &f;
            in.g_grid = &g;
            in.t = 1 + trial % (q - 1);
            BoundReport rep = verify(TheoremId::EdgeFunctional, in);
            CHECK(rep.pass());
            CHECK(rep.exact_comparison);
        }
    }
}

TEST_CASE("paths bound at the spec instance (q=5, d=3, |E|=110, k=2)") {
    FieldCtx ctx = make_context(5, 3);
    PointSet e = generate_set(ctx, "randn:m=110", 17);
    for (GraphSpec spec : {dot_product_spec(1), distance_spec(1)}) {
        Graph g = build_graph(e, spec);
        VerifyInput in;
        in.graph = &g;
        in.k = 2;
        BoundReport rep = verify(TheoremId::Paths, in);
        CHECK(rep.hypothesis_satisfied); // 110 > 72.13
        CHECK(rep.pass());
    }
}

TEST_CASE("paths bound is vacuous for tiny sets") {
    FieldCtx ctx = make_context(5, 3);
    Graph g = build_graph(generate_set(ctx, "randn:m=10", 3), dot_product_spec(1));
    VerifyInput in;
    in.graph = &g;
    in.k = 2;
    BoundReport rep = verify(TheoremId::Paths, in);
    CHECK(!rep.hypothesis_satisfied);
    CHECK(rep.vacuous());
}

TEST_CASE("bilinear bounds hold on random pair functions") {
    for (auto [q, d] : {std::pair{3u, 2u}, {5u, 2u}, {3u, 3u}}) {
        FieldCtx ctx = make_context(q, d);
        for (int trial = 0; trial < 6; ++trial) {
            PointSet e = generate_set(ctx, "rand:p=0.5", 300 + trial);
            IntMatrix f = random_pair_function(e.size(), 7, 41 + trial);
            IntMatrix g_fn = random_pair_function(e.size(), 7, 51 + trial);
            for (GraphSpec spec : {distance_spec(1), dot_product_spec(1)}) {
                Graph g = build_graph(e, spec);
                VerifyInput in;
                in.graph = &g;
                in.f = &f;
                in.g = &g_fn;
                BoundReport combined = verify(TheoremId::Bilinear, in);
                CHECK(combined.pass());
                if (spec.relation == Relation::Distance) {
                    CHECK(verify(TheoremId::BilinearDist, in).pass());
                    CHECK_THROWS_AS(verify(TheoremId::BilinearProd, in), Error);
                } else {
                    CHECK(verify(TheoremId::BilinearProd, in).pass());
                    CHECK_THROWS_AS(verify(TheoremId::BilinearDist, in), Error);
                }
            }
        }
    }
}

TEST_CASE("cycles bound is vacuous at desk scale and reports raw sides") {
    FieldCtx ctx = make_context(5, 3);
    Graph g = build_graph(generate_set(ctx, "rand:p=0.9", 5), distance_spec(1));
    VerifyInput in;
    in.graph = &g;
    in.n = 4;
    BoundReport rep = verify(TheoremId::Cycles, in);
    // 8 q^{d+2} / |E|^2 >= 8 * 5^5 / 125^2 = 1.6 > 1
    CHECK(!rep.hypothesis_satisfied);
    CHECK(rep.vacuous());
    CHECK(rep.rhs > 0); // raw sides still reported
    CHECK_THROWS_AS(verify(TheoremId::Cycles, [&] {
                        VerifyInput bad = in;
                        bad.n = 3;
                        return bad;
                    }()),
                    Error);
}

TEST_CASE("long-cycle and corollary forms never hard-fail at desk scale") {
    FieldCtx ctx = make_context(5, 2);
    Graph g = build_graph(generate_set(ctx, "rand:p=0.8", 9), distance_spec(1));
    VerifyInput in;
    in.graph = &g;
    in.delta = 0.05;
    in.n = 6;
    BoundReport rep = verify(TheoremId::CyclesLong, in);
    CHECK(rep.verdict != Verdict::Fail);
    in.n = 4;
    BoundReport cor = verify(TheoremId::CyclesCor, in);
    CHECK(cor.verdict != Verdict::Fail);
    CHECK_THROWS_AS(verify(TheoremId::CyclesLong, [&] {
                        VerifyInput bad = in;
                        bad.n = 4; // needs n >= 5
                        return bad;
                    }()),
                    Error);
    CHECK_THROWS_AS(verify(TheoremId::CyclesCor, [&] {
                        VerifyInput bad = in;
                        bad.delta = 0.9; // out of the printed range
                        return bad;
                    }()),
                    Error);
}

TEST_CASE("path growth bound holds exactly, including the full-space equality case") {
    // at q = 5, d = 3, t with |S_t| = q^2 + q the full space achieves
    // P_k = |E| X^k exactly; the exact comparison must accept equality
    FieldCtx ctx = make_context(5, 3);
    std::uint32_t t_plus = 0;
    for (std::uint32_t t = 1; t < 5; ++t)
        if (sphere(ctx, t).size() == 30) t_plus = t;
    REQUIRE(t_plus != 0);
    Graph full = build_graph(generate_set(ctx, "full", 0), distance_spec(t_plus));
    for (unsigned k : {1u, 2u, 3u}) {
        VerifyInput in;
        in.graph = &full;
        in.k = k;
        BoundReport rep = verify(TheoremId::PathGrowth, in);
        CHECK(rep.pass());
        CHECK(rep.exact_comparison);
    }
}

TEST_CASE("path growth and recursion bounds on random sets") {
    for (auto [q, d] : {std::pair{5u, 2u}, {7u, 2u}, {5u, 3u}}) {
        FieldCtx ctx = make_context(q, d);
        for (int trial = 0; trial < 8; ++trial) {
            PointSet e = generate_set(ctx, "rand:p=0.45", 900 + trial);
            for (GraphSpec spec : {distance_spec(1), dot_product_spec(1)}) {
                Graph g = build_graph(e, spec);
                for (unsigned k = 1; k <= 6; ++k) {
                    VerifyInput in;
                    in.graph = &g;
                    in.k = k;
                    CHECK(verify(TheoremId::PathGrowth, in).pass());
                }
                for (unsigned n = 2; n <= 6; ++n) {
                    VerifyInput in;
                    in.graph = &g;
                    in.n = n;
                    CHECK(verify(TheoremId::PathRecursion, in).pass());
                }
            }
        }
    }
}

TEST_CASE("tree embedding bound at the acceptance parameters") {
    FieldCtx ctx = make_context(5, 2);
    const double eps = 0.2;
    for (int trial = 0; trial < 5; ++trial) {
        PointSet e = generate_set(ctx, "randn:m=18", 700 + trial);
        GraphSpec spec = distance_spec(1);
        for (unsigned r : {1u, 2u, 3u}) {
            TreeShape tree = TreeShape::path(r + 1);
            VerifyInput in;
            in.set = &e;
            in.spec = &spec;
            in.tree = &tree;
            in.epsilon = eps;
            BoundReport rep = verify(TheoremId::TreeEmbed, in);
            CHECK(rep.hypothesis_satisfied); // 18 > 5^1.7 = 15.42
            CHECK(rep.pass());
        }
    }
}

TEST_CASE("nondegenerate bound reports conditional or pass with hypothesis") {
    FieldCtx ctx = make_context(5, 2);
    Graph g = build_graph(generate_set(ctx, "rand:p=0.9", 2), distance_spec(1));
    VerifyInput in;
    in.graph = &g;
    in.n = 4;
    in.delta = 0.05;
    BoundReport rep = verify(TheoremId::Nondegenerate, in);
    CHECK(rep.verdict != Verdict::Fail);
    CHECK(rep.theorem == "nondegenerate");
}

TEST_CASE("verify raises MissingInput when parts are absent") {
    VerifyInput empty;
    CHECK_THROWS_AS(verify(TheoremId::Paths, empty), Error);
    CHECK_THROWS_AS(verify(TheoremId::Bilinear, empty), Error);
    CHECK_THROWS_AS(verify(TheoremId::EdgeFunctional, empty), Error);
    CHECK_THROWS_AS(verify(TheoremId::TreeEmbed, empty), Error);
}

TEST_CASE("verify_sweep is deterministic and tallies correctly") {
    SweepJob job;
    job.q = 5;
    job.d = 2;
    job.t = 1;
    job.relation = Relation::Distance;
    job.recipe = "rand:p=0.5";
    job.theorems = {TheoremId::EdgeIdentity, TheoremId::EdgeFunctional, TheoremId::PathGrowth};
    job.repetitions = 4;
    job.seed = 99;
    job.k = 3;

    CHECK(verify_sweep({}).empty());

    std::vector<SweepRecord> a = verify_sweep({job});
    std::vector<SweepRecord> b = verify_sweep({job});
    REQUIRE(a.size() == 12);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].seed == b[i].seed);
        CHECK(a[i].set_size == b[i].set_size);
        CHECK(a[i].report.verdict == b[i].report.verdict);
        CHECK(a[i].report.lhs == b[i].report.lhs);
        CHECK(a[i].report.rhs == b[i].report.rhs);
    }
    SweepTally t = tally(a);
    CHECK(t.pass == 12);
    CHECK(t.fail == 0);
}

TEST_CASE("a sweep of edge functional checks passes across seeds") {
    SweepJob job;
    job.q = 5;
    job.d = 2;
    job.t = 2;
    job.recipe = "randn:m=12";
    job.theorems = {TheoremId::EdgeFunctional};
    job.repetitions = 25;
    job.seed = 1234;
    SweepTally t = tally(verify_sweep({job}));
    CHECK(t.pass == 25);
    CHECK(t.fail == 0);
}

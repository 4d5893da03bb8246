#include "fqgraph/graphs.hpp"

#include "fqgraph/ensembles.hpp"
#include "fqgraph/spectra.hpp"

#include <doctest.h>

#include <sstream>

using namespace fqg;

namespace {

Point pt(std::initializer_list<std::uint32_t> cs) { return Point(cs); }

/// The three-point set {(0,0),(1,0),(0,1)} in F_5^2 whose distance-1 graph
/// is the path b - a - c (center (0,0)).
PointSet star_set() {
    return PointSet::dedup(make_context(5, 2), {pt({0, 0}), pt({1, 0}), pt({0, 1})});
}

} // namespace

TEST_CASE("build_graph reproduces the hand-checked distance table") {
    Graph g = build_graph(star_set(), distance_spec(1));
    // lexicographic order: (0,0), (0,1), (1,0)
    REQUIRE(g.size() == 3);
    CHECK(g.adj.get(0, 1));
    CHECK(g.adj.get(0, 2));
    CHECK(!g.adj.get(1, 2)); // ||(0,1)-(1,0)|| = 2
    CHECK(g.symmetric);
    for (std::size_t i = 0; i < 3; ++i) CHECK(!g.adj.get(i, i)); // t != 0
}

TEST_CASE("dot-product graphs may carry self-loops") {
    FieldCtx ctx = make_context(3, 2);
    PointSet e = PointSet::dedup(ctx, {pt({1, 0})});
    Graph g = build_graph(e, dot_product_spec(1));
    CHECK(g.adj.get(0, 0)); // 1*1 + 0*0 = 1

    GraphSpec no_loops = dot_product_spec(1);
    no_loops.drop_loops = true;
    CHECK(!build_graph(e, no_loops).adj.get(0, 0));
}

TEST_CASE("build_graph is deterministic") {
    FieldCtx ctx = make_context(7, 2);
    PointSet e = generate_set(ctx, "rand:p=0.5", 5);
    Graph a = build_graph(e, distance_spec(2));
    Graph b = build_graph(e, distance_spec(2));
    CHECK(a.adj == b.adj);
}

TEST_CASE("distance adjacency is translation invariant; dot product is not") {
    FieldCtx ctx = make_context(5, 2);
    PointSet e = generate_set(ctx, "randn:m=12", 9);
    Point shift = pt({2, 3});
    std::vector<Point> shifted;
    for (const Point& p : e.points()) shifted.push_back(add(ctx, p, shift));
    PointSet e2 = PointSet::dedup(ctx, shifted);

    Graph g1 = build_graph(e, distance_spec(1));
    Graph g2 = build_graph(e2, distance_spec(1));
    // compare adjacency under the induced index map
    bool equal = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
        std::size_t i2 = e2.index_of(add(ctx, e[i], shift)).value();
        for (std::size_t j = 0; j < e.size(); ++j) {
            std::size_t j2 = e2.index_of(add(ctx, e[j], shift)).value();
            if (g1.adj.get(i, j) != g2.adj.get(i2, j2)) equal = false;
        }
    }
    CHECK(equal);
}

TEST_CASE("custom relations are audited for declared symmetry") {
    FieldCtx ctx = make_context(5, 2);
    PointSet e = generate_set(ctx, "randn:m=10", 1);

    GraphSpec sym;
    sym.relation = Relation::Custom;
    sym.t = 1;
    sym.phi = [](const FieldCtx& c, const Point& x, const Point& y) {
        return norm_of(c, sub(c, x, y));
    };
    CHECK(build_graph(e, sym).symmetric);

    GraphSpec asym;
    asym.relation = Relation::Custom;
    asym.t = 1;
    asym.custom_symmetric = true;
    asym.phi = [](const FieldCtx& c, const Point& x, const Point& y) -> std::uint32_t {
        return (2 * x[0] + y[1]) % c.q; // not symmetric
    };
    CHECK_THROWS_AS(build_graph(e, asym), Error);

    asym.custom_symmetric = false; // declared asymmetric: builds, flags
    Graph g = build_graph(e, asym);
    CHECK(!g.symmetric);
}

TEST_CASE("graph size cap") {
    FieldCtx ctx = make_context(149, 2); // q^d = 22201 > 20000
    PointSet e = generate_set(ctx, "full", 0);
    CHECK_THROWS_AS(build_graph(e, distance_spec(1)), Error);
}

TEST_CASE("edge_report on the empty set and on the full space") {
    FieldCtx ctx = make_context(5, 2);
    {
        Graph g = build_graph(PointSet::dedup(ctx, {}), distance_spec(1));
        BoundReport rep = edge_report(g);
        CHECK(rep.pass());
        CHECK(rep.lhs_exact.num == 0);
    }
    {
        Graph g = build_graph(generate_set(ctx, "full", 0), distance_spec(1));
        BoundReport rep = edge_report(g);
        Int n_pairs = g.adj.total_ones();
        Int expected = Int(25) * static_cast<std::int64_t>(sphere(ctx, 1).size());
        CHECK(n_pairs == expected); // N = q^d |S_t| by translation invariance
        CHECK(rep.pass());
    }
}

TEST_CASE("edge identities hold on seeded random sets for both relations") {
    for (std::uint32_t q : {5u, 7u}) {
        FieldCtx ctx = make_context(q, 2);
        for (int trial = 0; trial < 25; ++trial) {
            PointSet e = generate_set(ctx, "rand:p=0.5", 1000 + trial);
            for (GraphSpec spec : {distance_spec(1), dot_product_spec(1)}) {
                BoundReport rep = edge_report(build_graph(e, spec));
                CHECK(rep.pass());
            }
        }
    }
}

TEST_CASE("edge_report refuses t = 0 and custom relations") {
    FieldCtx ctx = make_context(5, 2);
    PointSet e = generate_set(ctx, "randn:m=5", 2);
    Graph g0 = build_graph(e, distance_spec(0));
    CHECK(g0.zero_t_warning);
    CHECK_THROWS_AS(edge_report(g0), Error);
}

TEST_CASE("edge_report counts ordered pairs including loops") {
    FieldCtx ctx = make_context(3, 2);
    PointSet e = PointSet::dedup(ctx, {pt({1, 0}), pt({0, 1}), pt({1, 1})});
    Graph g = build_graph(e, dot_product_spec(1));
    Int manual = 0;
    for (const Point& x : e.points())
        for (const Point& y : e.points())
            if (dot(ctx, x, y) == 1) ++manual;
    CHECK(g.adj.total_ones() == manual);
}

TEST_CASE("truncation keeps low-degree vertices against the full set") {
    FieldCtx ctx = make_context(5, 2);
    PointSet e = generate_set(ctx, "rand:p=0.7", 77);
    GraphSpec spec = distance_spec(1);

    // lambda >= q keeps everything: degree <= |E| <= lambda |E| / q
    TruncationResult all = truncate(e, spec, 5.0);
    CHECK(all.kept == e);
    CHECK(all.removed_count == 0);

    double lambda = 1.5;
    TruncationResult res = truncate(e, spec, lambda);
    CHECK(res.kept.size() + res.removed_count == e.size());
    // removed <= 2|E|/lambda on every tested instance
    CHECK(static_cast<double>(res.removed_count) <= 2.0 * e.size() / lambda + 1e-12);
    // every kept vertex obeys the cap against the ORIGINAL set
    Graph g = build_graph(e, spec);
    for (std::size_t i = 0; i < e.size(); ++i) {
        bool kept = res.kept.contains(e[i]);
        bool low = static_cast<double>(g.degree(i)) <= res.degree_cap;
        CHECK(kept == low);
    }
    // re-truncating with the same cap and reference set is idempotent
    TruncationResult again = truncate_with_cap(res.kept, e, spec, res.degree_cap);
    CHECK(again.kept == res.kept);

    CHECK_THROWS_AS(truncate(e, spec, 0.0), Error);
    CHECK_THROWS_AS(truncate(e, distance_spec(0), 1.0), Error);
}

TEST_CASE("adjacency export format") {
    Graph g = build_graph(star_set(), distance_spec(1));
    std::ostringstream out;
    write_adjacency(out, g);
    CHECK(out.str() == "0 1 2\n1 0\n2 0\n");
}

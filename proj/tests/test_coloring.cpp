#include <doctest.h>

#include "dim/coloring.hpp"
#include "dim/generate.hpp"
#include "dim/oracle.hpp"
#include "support.hpp"

using namespace dim;
using dim::test::edges_of;
using dim::test::make_graph;

TEST_CASE("reduction step") {
    const Graph p5 = gadget("P5");
    auto r = reduction_step(p5, EdgeSet{}, Edge{1, 2});
    REQUIRE(r.ok());
    CHECK(r.coloring.committed == edges_of({{1, 2}}));
    CHECK(r.coloring.is_excluded(Edge{3, 4}));
    CHECK(r.residual.graph.order() == 3);
    CHECK(r.residual.to_parent == std::vector<Vertex>{0, 3, 4});

    CHECK_FALSE(reduction_step(gadget("P3"), edges_of({{0, 1}}), Edge{1, 2}).ok());

    const Graph two = make_graph(4, {{0, 1}, {2, 3}});
    auto both = reduction_step(two, edges_of({{0, 1}}), Edge{2, 3});
    REQUIRE(both.ok());
    CHECK(both.residual.graph.size() == 0);
}

TEST_CASE("vertex C-reduction") {
    const Graph claw = gadget("claw");
    auto r = vertex_c_reduction(claw, Coloring(4), 0);
    REQUIRE(r.ok());
    for (Vertex v : {1, 2, 3}) CHECK(r.coloring.state[v] == Color::Black);
    // the Black leaves have no possible mate
    Coloring c = r.coloring;
    CHECK(propagate(claw, c) != Conflict::None);
    Coloring white_center(4);
    white_center.state[0] = Color::White;
    CHECK_FALSE(oracle_solve(claw, OracleMode::Exists, &white_center).feasible);
    CHECK(oracle_solve(claw).feasible);  // a center-leaf edge dominates the claw

    auto p3 = vertex_c_reduction(gadget("P3"), Coloring(3), 0);
    REQUIRE(p3.ok());
    CHECK(p3.coloring.state[1] == Color::Black);
    CHECK(p3.coloring.removed[0]);

    const Graph c4 = gadget("C4");
    auto q = vertex_c_reduction(c4, Coloring(4), 0);
    REQUIRE(q.ok());
    CHECK(q.coloring.state[1] == Color::Black);
    CHECK(q.coloring.state[3] == Color::Black);
    Coloring cq = q.coloring;
    CHECK(propagate(c4, cq) != Conflict::None);
}

TEST_CASE("edge C-reduction") {
    const Graph p4 = gadget("P4");
    auto r = edge_c_reduction(p4, Coloring(4), Edge{1, 2});
    REQUIRE(r.ok());
    CHECK(r.coloring.state[0] == Color::White);
    CHECK(r.coloring.state[3] == Color::White);
    CHECK(r.coloring.committed == edges_of({{1, 2}}));
    CHECK(r.residual.graph.size() == 0);

    const Graph diamond = gadget("diamond");
    auto d = edge_c_reduction(diamond, Coloring(4), Edge{1, 3});
    REQUIRE(d.ok());
    CHECK(d.coloring.state[0] == Color::White);
    CHECK(d.coloring.state[2] == Color::White);
    CHECK(is_feasible_partial(diamond, d.coloring));

    Coloring tri(3);
    const Graph c3 = gadget("C3");
    REQUIRE(paint(c3, tri, 0, Color::Black) == Conflict::None);
    REQUIRE(paint(c3, tri, 1, Color::Black) == Conflict::None);
    CHECK(paint(c3, tri, 2, Color::Black) == Conflict::BlackTwoBlackNeighbors);
}

TEST_CASE("forced-edge closure") {
    auto d = forced_edge_closure(gadget("diamond"), forced_edges_initial(gadget("diamond")));
    REQUIRE(d.ok());
    CHECK(d.coloring.committed == edges_of({{1, 3}}));
    CHECK(d.residual.graph.order() == 2);
    CHECK(d.residual.graph.size() == 0);

    auto b = forced_edge_closure(gadget("butterfly"), forced_edges_initial(gadget("butterfly")));
    REQUIRE(b.ok());
    CHECK(b.coloring.committed == edges_of({{0, 1}, {2, 3}}));
    CHECK(b.residual.to_parent == std::vector<Vertex>{4});

    auto k4 = forced_edge_closure(gadget("K4"), forced_edges_initial(gadget("K4")));
    CHECK(k4.ok());
    CHECK(k4.coloring.committed.empty());

    // two diamonds sharing their mid-edge region clash
    const Graph clash = make_graph(5, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}});
    CHECK_FALSE(forced_edge_closure(clash, forced_edges_initial(clash)).ok());
    CHECK_FALSE(oracle_solve(clash).feasible);
}

TEST_CASE("feasibility predicates and the coloring bijection") {
    const Graph c6 = gadget("C6");
    const Coloring c = coloring_from_matching(c6, edges_of({{0, 1}, {3, 4}}));
    CHECK(is_feasible_complete(c6, c));
    CHECK(black_pairs(c6, c) == edges_of({{0, 1}, {3, 4}}));
    Coloring partial(6);
    partial.state[0] = Color::White;
    partial.state[1] = Color::White;
    CHECK_FALSE(is_feasible_partial(c6, partial));

    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
        const Graph g = dim::test::random_graph(8, 0.3, seed);
        if (g.size() > 24) continue;
        CHECK(subset_scan(g) == coloring_scan(g));
    }
}

TEST_CASE("property: propagation never contradicts a d.i.m. it is consistent with") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 400; ++seed) {
        const Graph g = dim::test::random_graph(9, 0.2 + 0.03 * static_cast<double>(seed % 6), seed);
        if (g.size() > 24) continue;
        const auto dims = subset_scan(g);
        if (dims.empty()) continue;
        Rng rng(seed * 7 + 1);
        const EdgeSet& m = dims[rng.below(dims.size())];
        std::vector<Color> target(static_cast<std::size_t>(g.order()), Color::White);
        for (const Edge& e : m) target[e.u] = target[e.v] = Color::Black;

        Coloring c(g.order());
        for (Vertex v = 0; v < g.order(); ++v)
            if (rng.chance(0.3)) REQUIRE(paint(g, c, v, target[v]) == Conflict::None);
        for (const Edge& e : g.edges())
            if (!m.count(e) && rng.chance(0.2)) c.excluded.insert(e);
        REQUIRE(propagate(g, c) == Conflict::None);
        for (Vertex v = 0; v < g.order(); ++v)
            if (c.state[v] != Color::Unset) CHECK(c.state[v] == target[v]);
        for (const Edge& e : c.committed) CHECK(m.count(e) == 1);
        for (const Edge& e : c.excluded) CHECK(m.count(e) == 0);
        CHECK(is_feasible_partial(g, c));
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("property: forced-edge closure does not depend on seed order") {
    int compared = 0;
    for (std::uint64_t seed = 1; seed <= 3000; ++seed) {
        const Graph g = dim::test::random_graph(8, 0.35 + 0.05 * static_cast<double>(seed % 4), seed);
        const EdgeSet seeds = forced_edges_initial(g);
        if (seeds.size() < 2) continue;
        const auto forward = forced_edge_closure(g, seeds);
        Coloring reversed(g.order());
        bool clash = false;
        for (auto it = seeds.rbegin(); it != seeds.rend() && !clash; ++it) {
            if (reversed.committed.count(*it)) continue;
            if (!reversed.live(it->u) || !reversed.live(it->v)) {
                clash = true;
                break;
            }
            exclude_around(g, reversed, *it);
            clash = commit_edge(g, reversed, *it) != Conflict::None;
        }
        if (clash) {
            CHECK_FALSE(forward.ok());
            continue;
        }
        const auto backward = forced_edge_closure(g, reversed, {});
        REQUIRE(forward.ok() == backward.ok());
        if (forward.ok()) CHECK(forward.coloring.committed == backward.coloring.committed);
        ++compared;
    }
    CHECK(compared > 20);
}

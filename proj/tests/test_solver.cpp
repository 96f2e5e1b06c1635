#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "dim/generate.hpp"
#include "dim/io.hpp"
#include "dim/oracle.hpp"
#include "dim/solver.hpp"
#include "support.hpp"

using namespace dim;
using dim::test::edges_of;
using dim::test::make_graph;

namespace {

// g must outlive the returned state
AnchorState anchored(const Graph& g, Edge xy, Vertex r) {
    auto st = decompose(g, Coloring(g.order()), xy, r);
    REQUIRE(st);
    return std::move(*st);
}

bool has_dim_with(const Graph& g, Edge xy) {
    Coloring c(g.order());
    if (commit_edge(g, c, xy) != Conflict::None) return false;
    return oracle_solve(g, OracleMode::Exists, &c).feasible;
}

bool class_member(const Graph& g) { return !find_k4(g) && !find_induced_sijk(g, 1, 2, 4); }

// hub u with candidates a (touching a path into Y) and a pendant b
void add_gadget(std::vector<Edge>& e, Vertex p, Vertex base) {
    const Vertex u = base, a = base + 1, b = base + 2, z = base + 3, z1 = base + 4, z2 = base + 5;
    e.insert(e.end(), {{p, u}, {u, a}, {u, b}, {a, z}, {z, z1}, {z1, z2}});
}

Graph gadget_chain(int copies) {
    std::vector<Edge> e{{0, 1}, {1, 2}};
    for (int i = 0; i < copies; ++i) add_gadget(e, 2, 3 + 6 * i);
    return Graph(3 + 6 * copies, e);
}

}  // namespace

TEST_CASE("P3 anchors") {
    auto p3 = p3_anchor_edges(gadget("P3"));
    REQUIRE(p3.size() == 2);
    CHECK(p3[0] == std::pair<Edge, Vertex>{Edge{0, 1}, 2});
    CHECK(p3[1] == std::pair<Edge, Vertex>{Edge{1, 2}, 0});
    CHECK(p3_anchor_edges(gadget("C3")).empty());
    CHECK(p3_anchor_edges(gadget("P4")).size() == 3);
}

TEST_CASE("decomposition of P6") {
    const Graph p6 = gadget("P6");
    AnchorState st = anchored(p6, Edge{1, 2}, 0);
    const auto& d = st.levels;
    CHECK(d.s2 == VertexSet{4});
    REQUIRE(d.t.count(4));
    CHECK(d.t.at(4) == VertexSet{5});
    CHECK(d.m2.empty());
    CHECK(d.s3.empty());
    CHECK(d.y.empty());
    CHECK(st.coloring.committed == edges_of({{1, 2}}));
}

TEST_CASE("decomposition contradictions") {
    std::string reason;
    CHECK_FALSE(decompose(gadget("C4"), Coloring(4), Edge{0, 1}, 2, nullptr, &reason));
    CHECK(reason == "N1 is not independent");
    // N2 = {3, 4, 5} inducing the path 3-4-5
    const Graph g = make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 4}, {4, 5}});
    CHECK_FALSE(decompose(g, Coloring(6), Edge{0, 1}, 2, nullptr, &reason));
    CHECK(reason == "N2 has a vertex of degree two");
}

TEST_CASE("edge inside N2 is committed") {
    const Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {2, 4}, {3, 4}});
    AnchorState st = anchored(g, Edge{0, 1}, 2);
    CHECK(st.levels.m2 == edges_of({{3, 4}}));
    REQUIRE(apply_m2_and_triangle_forcing(st));
    CHECK(st.coloring.committed.count(Edge{3, 4}));
    CHECK(st.coloring.removed[3]);
    CHECK(st.coloring.removed[4]);
}

TEST_CASE("triangle with one corner in N3 forces the N4 edge") {
    // x0 y1 p2 q3, N3 = {4, 7}, N4 = {5, 6}
    const Graph g = make_graph(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {4, 6}, {5, 6}, {3, 7}});
    AnchorState st = anchored(g, Edge{0, 1}, 2);
    REQUIRE(apply_m2_and_triangle_forcing(st));
    CHECK(st.coloring.committed.count(Edge{5, 6}));
    CHECK(st.trace.count(Rule::TriangleForced) >= 1);
    auto out = dim_with_xy(g, Coloring(8), Edge{0, 1}, 2);
    REQUIRE(out.verdict == Verdict::Found);
    CHECK(out.matching == edges_of({{0, 1}, {3, 7}, {5, 6}}));
}

TEST_CASE("contact of a two-hub vertex is committed to its hub") {
    // hubs 3 and 4, s = 5 sees both, t = 6 in T of hub 3 sees s
    const Graph g = make_graph(8, {{0, 1}, {1, 2}, {2, 3}, {2, 4}, {3, 5}, {4, 5}, {3, 6}, {5, 6}, {4, 7}});
    AnchorState st = anchored(g, Edge{0, 1}, 2);
    CHECK(st.levels.s3 == VertexSet{5});
    REQUIRE(apply_lemma1_lemma2(st));
    CHECK(st.coloring.committed.count(Edge{3, 6}));
    CHECK(st.trace.count(Rule::MultiHubContactForced) >= 1);
    CHECK(has_dim_with(g, Edge{0, 1}));
}

TEST_CASE("double contact into another T-set is committed") {
    // t1 = 5 of hub 3 sees a = 6 and b = 7 of hub 4; 8 is a spare candidate of hub 4
    const Graph g =
        make_graph(9, {{0, 1}, {1, 2}, {2, 3}, {2, 4}, {3, 5}, {4, 6}, {4, 7}, {5, 6}, {5, 7}, {4, 8}});
    AnchorState st = anchored(g, Edge{0, 1}, 2);
    REQUIRE(apply_lemma1_lemma2(st));
    CHECK(st.coloring.committed.count(Edge{3, 5}));
    CHECK(st.trace.count(Rule::DoubleContactForced) >= 1);
}

TEST_CASE("two candidates joined to one N4 vertex leave no d.i.m. with xy") {
    const Graph g = make_graph(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 6}, {5, 6}});
    auto out = dim_with_xy(g, Coloring(7), Edge{0, 1}, 2);
    CHECK(out.verdict == Verdict::NoDimWithXY);
    CHECK_FALSE(has_dim_with(g, Edge{0, 1}));
}

TEST_CASE("N4 vertex without partner forces its only contact") {
    const Graph g = make_graph(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 6}});
    AnchorState st = anchored(g, Edge{0, 1}, 2);
    REQUIRE(force_to_fixpoint(st, false));
    CHECK(st.coloring.committed.count(Edge{3, 4}));
    CHECK(st.trace.count(Rule::IsolatedContactForced) >= 1);
}

TEST_CASE("singleton T-set is committed") {
    const Graph p6 = gadget("P6");
    AnchorState st = anchored(p6, Edge{1, 2}, 0);
    REQUIRE(preprocess_a1_a2_a3(st, false));
    CHECK(st.coloring.committed.count(Edge{4, 5}));
}

TEST_CASE("surplus pendant candidates are pruned") {
    const Graph g = make_graph(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {3, 6}});
    AnchorState st = anchored(g, Edge{0, 1}, 2);
    REQUIRE(closure(st));
    REQUIRE(preprocess_a1_a2_a3(st, false));
    CHECK(st.coloring.committed.count(Edge{3, 4}));
    CHECK(st.trace.count(Rule::InVertexPruned) == 2);

    const Graph w = make_graph(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {3, 6}}, {1, 1, 1, 4, 3, 2});
    AnchorState sw = anchored(w, Edge{0, 1}, 2);
    REQUIRE(closure(sw));
    REQUIRE(preprocess_a1_a2_a3(sw, true));
    CHECK(sw.coloring.committed.count(Edge{3, 6}));
}

TEST_CASE("component propagation") {
    // T1 = {5, 6} of hub 3, T2 = {7, 8} of hub 4, edges 5-7 and 6-8
    const Graph g = make_graph(9, {{0, 1}, {1, 2}, {2, 3}, {2, 4}, {3, 5}, {3, 6}, {4, 7}, {4, 8}, {5, 7}, {6, 8}});
    AnchorState st = anchored(g, Edge{0, 1}, 2);
    REQUIRE(force_to_fixpoint(st, false));
    auto q = classify_q_family(st);
    REQUIRE(q.independent.size() == 1);
    CHECK(q.interacting.empty());
    CHECK(q.independent[0].hubs == VertexSet{3, 4});
    auto all = propagate_component(st, q.independent[0]);
    std::sort(all.begin(), all.end());
    const std::vector<std::vector<Edge>> expected{{{3, 5}, {4, 8}}, {{3, 6}, {4, 7}}};
    CHECK(all == expected);

    // three disjoint contacts between T1 and T2: every seed fails
    const Graph h = make_graph(11, {{0, 1}, {1, 2}, {2, 3}, {2, 4}, {3, 5}, {3, 6}, {3, 7}, {4, 8}, {4, 9},
                                    {4, 10}, {5, 8}, {6, 9}, {7, 10}});
    CHECK(dim_with_xy(h, Coloring(11), Edge{0, 1}, 2).verdict == Verdict::NoDimWithXY);
    CHECK_FALSE(has_dim_with(h, Edge{0, 1}));
}

TEST_CASE("independent trivial components take their lightest candidate") {
    const Graph g = make_graph(10, {{0, 1}, {1, 2}, {0, 9}, {2, 3}, {2, 4}, {3, 5}, {3, 6}, {4, 7}, {4, 8}},
                               {1, 1, 1, 1, 1, 6, 2, 3, 7});
    SolveOptions opts;
    opts.minimize = true;
    auto out = solve(g, opts);
    REQUIRE(out.verdict == Verdict::Found);
    auto oracle = oracle_solve(g, OracleMode::MinWeight);
    REQUIRE(oracle.feasible);
    CHECK(out.weight == g.weight(*oracle.best));
}

TEST_CASE("interacting components") {
    const Graph chain = gadget_chain(2);
    AnchorState two = anchored(chain, Edge{0, 1}, 2);
    REQUIRE(force_to_fixpoint(two, false));
    auto q = classify_q_family(two);
    CHECK(q.interacting.size() == 2);
    CHECK_FALSE(q.shared_contact);
    auto xs = enumerate_x_colorings(two, q, false);
    CHECK(xs.size() == 4);

    // four interacting components only occur outside the class
    const Graph four = gadget_chain(4);
    CHECK(find_induced_sijk(four, 1, 2, 4));
    auto out = solve(four);
    CHECK(out.verdict == Verdict::ClassViolation);
    REQUIRE(out.witness);
    CHECK(verify_witness(four, *out.witness));
}

TEST_CASE("anchored search on small graphs") {
    auto p6 = dim_with_xy(gadget("P6"), Coloring(6), Edge{1, 2}, 0);
    REQUIRE(p6.verdict == Verdict::Found);
    CHECK(p6.matching == edges_of({{1, 2}, {4, 5}}));
    CHECK(dim_with_xy(gadget("C4"), Coloring(4), Edge{0, 1}, 2).verdict == Verdict::NoDimWithXY);
    auto p7 = dim_with_xy(gadget("P7"), Coloring(7), Edge{1, 2}, 0);
    REQUIRE(p7.verdict == Verdict::Found);
    CHECK(p7.matching == edges_of({{1, 2}, {4, 5}}));
}

TEST_CASE("full solver on named graphs") {
    auto d = solve(gadget("diamond"));
    REQUIRE(d.verdict == Verdict::Found);
    CHECK(d.matching == edges_of({{1, 3}}));
    CHECK(d.trace.count(Rule::ForcedPattern) == 1);
    CHECK(solve(gadget("C4")).verdict == Verdict::NoDim);
    auto c6 = solve(gadget("C6"));
    REQUIRE(c6.verdict == Verdict::Found);
    CHECK(c6.matching.size() == 2);
    CHECK(is_dim(gadget("C6"), c6.matching));
    auto k4 = solve(gadget("K4"));
    CHECK(k4.verdict == Verdict::NoDim);
    CHECK(k4.reason == "K4 found");
    SolveOptions strict;
    strict.verify_class = true;
    CHECK(solve(gadget("S_{1,2,4}"), strict).verdict == Verdict::ClassViolation);
    CHECK(solve(make_graph(1, {})).verdict == Verdict::Found);
    CHECK(solve(make_graph(3, {})).matching.empty());
}

TEST_CASE("property: solver agrees with the oracle on every small class member") {
    SolveStats stats;
    SolveOptions opts;
    opts.audit = true;
    for (int n = 1; n <= 6; ++n)
        enumerate_all_graphs(n, class_member, EnumerationMode::Labeled, [&](const Graph& g) {
            auto out = solve(g, opts, &stats);
            const bool feasible = oracle_solve(g).feasible;
            REQUIRE((out.verdict == Verdict::Found) == feasible);
            if (feasible) CHECK(is_dim(g, out.matching));
        });
    CHECK(stats.audit.violations() == 0);
}

TEST_CASE("property: every anchor agrees with the precolored oracle") {
    for (int n = 3; n <= 6; ++n)
        enumerate_all_graphs(n, class_member, EnumerationMode::Canonical, [&](const Graph& g) {
            auto step = forced_edge_closure(g, forced_edges_initial(g));
            if (!step.ok() || !step.coloring.committed.empty()) return;
            for (const auto& [xy, r] : p3_anchor_edges(g)) {
                auto out = dim_with_xy(g, Coloring(g.order()), xy, r);
                CHECK((out.verdict == Verdict::Found) == has_dim_with(g, xy));
                if (out.verdict == Verdict::Found) {
                    CHECK(out.matching.count(xy));
                    CHECK(is_dim(g, out.matching));
                }
            }
        });
}

TEST_CASE("property: minimum weight matches the oracle") {
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        GenSpec spec;
        spec.mode = GenMode::Rejection;
        spec.n = 8;
        spec.density = 0.25 + 0.05 * static_cast<double>(seed % 5);
        spec.seed = seed;
        spec.max_weight = 10;
        auto g = generate_rejection(spec).graph;
        REQUIRE(g);
        SolveOptions opts;
        opts.minimize = true;
        auto out = solve(*g, opts);
        auto oracle = oracle_solve(*g, OracleMode::MinWeight);
        REQUIRE((out.verdict == Verdict::Found) == oracle.feasible);
        if (oracle.feasible) CHECK(out.weight == g->weight(*oracle.best));
    }
}

TEST_CASE("planted instances are solved") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        GenSpec spec;
        spec.n = 50;
        spec.seed = seed;
        auto inst = generate_planted(spec);
        auto out = solve(inst.graph);
        REQUIRE(out.verdict == Verdict::Found);
        CHECK(is_dim(inst.graph, out.matching));
        CHECK(oracle_solve(inst.graph).feasible);
    }
}

TEST_CASE("the sub-solver finishes Y") {
    // propagation alone does not settle Y here
    std::istringstream text(
        "p edge 15 13\ne 1 14\ne 2 8\ne 2 13\ne 3 11\ne 4 11\ne 7 10\ne 7 11\ne 7 14\n"
        "e 8 13\ne 9 13\ne 10 11\ne 11 12\ne 12 13\n");
    const Graph g = read_graph(text);
    REQUIRE(class_member(g));
    int calls = 0;
    SolveOptions counting;
    counting.sub_solver = [&](const Graph& h, const Coloring& c, bool minimize) {
        ++calls;
        return default_sub_solver()(h, c, minimize);
    };
    auto out = solve(g, counting);
    REQUIRE(out.verdict == Verdict::Found);
    CHECK(is_dim(g, out.matching));
    CHECK(calls > 0);
    SolveOptions refusing;
    refusing.sub_solver = [](const Graph&, const Coloring&, bool) { return std::optional<EdgeSet>{}; };
    // other anchors may still succeed; whatever comes back must be sound
    auto fallback = solve(g, refusing);
    if (fallback.verdict == Verdict::Found) CHECK(is_dim(g, fallback.matching));
}

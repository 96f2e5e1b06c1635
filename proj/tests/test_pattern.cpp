#include <doctest.h>

#include <algorithm>
#include <functional>

#include "dim/generate.hpp"
#include "dim/pattern.hpp"
#include "support.hpp"

using namespace dim;
using dim::test::edges_of;
using dim::test::make_graph;
using dim::test::random_graph;

namespace {

// Brute force: does the vertex subset induce S_{i,j,k} (all legs >= 1)?
bool induces_spider(const Graph& g, const VertexSet& s, std::array<int, 3> legs) {
    auto sub = induced_subgraph(g, s).graph;
    if (sub.size() + 1 != s.size() || !is_connected(sub)) return false;
    Vertex center = -1;
    for (Vertex v = 0; v < sub.order(); ++v) {
        if (sub.degree(v) > 3) return false;
        if (sub.degree(v) == 3) {
            if (center >= 0) return false;
            center = v;
        }
    }
    if (center < 0) return false;
    std::vector<int> found;
    for (Vertex start : sub.neighbors(center)) {
        int len = 1;
        Vertex prev = center, cur = start;
        while (sub.degree(cur) == 2) {
            Vertex next = sub.neighbors(cur)[0] == prev ? sub.neighbors(cur)[1] : sub.neighbors(cur)[0];
            prev = cur;
            cur = next;
            ++len;
        }
        found.push_back(len);
    }
    std::sort(found.begin(), found.end());
    std::sort(legs.begin(), legs.end());
    return std::equal(found.begin(), found.end(), legs.begin());
}

bool brute_spider(const Graph& g, std::array<int, 3> legs) {
    const int k = legs[0] + legs[1] + legs[2] + 1;
    const int n = g.order();
    if (k > n) return false;
    std::vector<char> pick(static_cast<std::size_t>(n), 0);
    std::fill(pick.end() - k, pick.end(), 1);
    do {
        VertexSet s;
        for (int v = 0; v < n; ++v)
            if (pick[v]) s.push_back(v);
        if (induces_spider(g, s, legs)) return true;
    } while (std::next_permutation(pick.begin(), pick.end()));
    return false;
}

bool brute_k4(const Graph& g) {
    for (Vertex a = 0; a < g.order(); ++a)
        for (Vertex b = a + 1; b < g.order(); ++b)
            for (Vertex c = b + 1; c < g.order(); ++c)
                for (Vertex d = c + 1; d < g.order(); ++d)
                    if (g.adjacent(a, b) && g.adjacent(a, c) && g.adjacent(a, d) && g.adjacent(b, c) &&
                        g.adjacent(b, d) && g.adjacent(c, d))
                        return true;
    return false;
}

EdgeSet brute_c4_edges(const Graph& g) {
    EdgeSet out;
    const Vertex n = g.order();
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = 0; b < n; ++b)
            for (Vertex c = 0; c < n; ++c)
                for (Vertex d = 0; d < n; ++d) {
                    if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
                    if (g.adjacent(a, b) && g.adjacent(b, c) && g.adjacent(c, d) && g.adjacent(d, a) &&
                        !g.adjacent(a, c) && !g.adjacent(b, d)) {
                        out.insert(Edge{a, b});
                        out.insert(Edge{b, c});
                    }
                }
    return out;
}

}  // namespace

TEST_CASE("K4 detection") {
    auto k4 = find_k4(gadget("K4"));
    REQUIRE(k4);
    CHECK(k4->vertices.size() == 4);
    CHECK(verify_witness(gadget("K4"), *k4));
    CHECK_FALSE(find_k4(gadget("C4")));
    CHECK_FALSE(find_k4(gadget("diamond")));
}

TEST_CASE("diamonds and butterflies") {
    auto d = find_all_diamonds(gadget("diamond"));
    REQUIRE(d.size() == 1);
    CHECK(d[0].mid_edge() == Edge{1, 3});  // u v2
    CHECK(verify_witness(gadget("diamond"), d[0]));

    auto b = find_all_butterflies(gadget("butterfly"));
    REQUIRE(b.size() == 1);
    auto p = b[0].peripheral_edges();
    CHECK(EdgeSet(p.begin(), p.end()) == edges_of({{0, 1}, {2, 3}}));
    CHECK(verify_witness(gadget("butterfly"), b[0]));

    CHECK(find_all_diamonds(gadget("C6")).empty());
    CHECK(find_all_butterflies(gadget("C6")).empty());
    CHECK(find_all_diamonds(gadget("K4")).empty());
}

TEST_CASE("gem") {
    auto g = find_gem(gadget("gem"));
    REQUIRE(g);
    CHECK(verify_witness(gadget("gem"), *g));
    CHECK_FALSE(find_gem(gadget("diamond")));
}

TEST_CASE("spiders") {
    auto s = find_induced_sijk(gadget("S_{1,2,4}"), 1, 2, 4);
    REQUIRE(s);
    CHECK(s->vertices.size() == 8);
    CHECK(s->vertices[0] == 0);
    CHECK(verify_witness(gadget("S_{1,2,4}"), *s));
    CHECK_FALSE(find_induced_sijk(gadget("P7"), 1, 2, 4));
    auto claw = find_induced_sijk(gadget("claw"), 1, 1, 1);
    REQUIRE(claw);
    CHECK(claw->vertices[0] == 0);
    // leg order follows the request
    auto swapped = find_induced_sijk(gadget("S_{1,2,4}"), 4, 1, 2);
    REQUIRE(swapped);
    CHECK(swapped->legs[0] == 4);
    CHECK(verify_witness(gadget("S_{1,2,4}"), *swapped));
    CHECK_THROWS_AS(find_induced_sijk(gadget("P3"), -1, 0, 0), std::invalid_argument);
}

TEST_CASE("initial forced edges") {
    CHECK(forced_edges_initial(gadget("diamond")) == edges_of({{1, 3}}));
    CHECK(forced_edges_initial(gadget("butterfly")) == edges_of({{0, 1}, {2, 3}}));
    CHECK(forced_edges_initial(gadget("C6")).empty());
}

TEST_CASE("C4 edges") {
    const Graph c4 = gadget("C4");
    CHECK(c4_edges(c4) == EdgeSet(c4.edges().begin(), c4.edges().end()));
    CHECK(c4_edges(gadget("P5")).empty());
    CHECK(c4_edges(gadget("C6")).empty());
    auto w = find_c4_through(c4, Edge{0, 1});
    REQUIRE(w);
    CHECK(verify_witness(c4, *w));
}

TEST_CASE("property: detectors agree with brute force") {
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
        const double p = 0.15 + 0.05 * static_cast<double>(seed % 8);
        const Graph g = random_graph(9, p, seed);
        CHECK(find_k4(g).has_value() == brute_k4(g));
        CHECK(c4_edges(g) == brute_c4_edges(g));
        for (std::array<int, 3> legs : {std::array<int, 3>{1, 1, 1}, {1, 2, 2}, {1, 2, 4}, {1, 1, 4}}) {
            auto w = find_induced_sijk(g, legs[0], legs[1], legs[2]);
            CHECK(w.has_value() == brute_spider(g, legs));
            if (w) CHECK(verify_witness(g, *w));
        }
        for (const auto& d : find_all_diamonds(g)) CHECK(verify_witness(g, d));
        for (const auto& b : find_all_butterflies(g)) CHECK(verify_witness(g, b));
        if (auto gem = find_gem(g)) CHECK(verify_witness(g, *gem));
    }
}

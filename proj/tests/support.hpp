#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "dim/generate.hpp"
#include "dim/graph.hpp"

namespace dim::test {

/// Graph from 0-based edge pairs; the paper's v1..vn become 0..n-1.
inline Graph make_graph(Vertex n, std::initializer_list<std::pair<int, int>> pairs,
                        std::vector<double> weights = {}) {
    std::vector<Edge> edges;
    for (auto [u, v] : pairs) edges.emplace_back(u, v);
    return Graph(n, edges, weights);
}

inline EdgeSet edges_of(std::initializer_list<std::pair<int, int>> pairs) {
    EdgeSet m;
    for (auto [u, v] : pairs) m.insert(Edge{u, v});
    return m;
}

/// G(n, p) from a fixed seed.
inline Graph random_graph(Vertex n, double p, std::uint64_t seed, int max_weight = 0) {
    Rng rng(seed);
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (rng.chance(p)) edges.emplace_back(u, v);
    std::vector<double> w;
    if (max_weight > 0)
        for (std::size_t i = 0; i < edges.size(); ++i) w.push_back(static_cast<double>(rng.between(1, max_weight)));
    return Graph(n, edges, w);
}

inline Graph relabel(const Graph& g, const std::vector<Vertex>& perm) {
    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) edges.emplace_back(perm[e.u], perm[e.v]);
    return Graph(g.order(), edges);
}

}  // namespace dim::test

#include "dim/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

namespace dim {

Graph::Graph(Vertex n, std::span<const Edge> edges, std::span<const double> weights)
    : adjacency_(static_cast<std::size_t>(n)) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    if (!weights.empty() && weights.size() != edges.size())
        throw std::invalid_argument("weight count does not match edge count");

    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });

    edges_.reserve(edges.size());
    if (!weights.empty()) weights_.reserve(edges.size());
    for (std::size_t idx : order) {
        const Edge e = edges[idx];
        if (e.u < 0 || e.v >= n)
            throw std::invalid_argument("edge endpoint out of range: " + std::to_string(e.u) +
                                        "-" + std::to_string(e.v));
        if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
        if (!edges_.empty() && edges_.back() == e)
            throw std::invalid_argument("repeated edge " + std::to_string(e.u) + "-" +
                                        std::to_string(e.v));
        edges_.push_back(e);
        if (!weights.empty()) {
            if (!(weights[idx] >= 0.0)) throw std::invalid_argument("negative edge weight");
            weights_.push_back(weights[idx]);
        }
        adjacency_[e.u].push_back(e.v);
        adjacency_[e.v].push_back(e.u);
    }
    for (auto& row : adjacency_) std::sort(row.begin(), row.end());

    if (n <= kDenseLimit) {
        words_ = (static_cast<std::size_t>(n) + 63) / 64;
        matrix_.assign(words_ * static_cast<std::size_t>(n), 0);
        for (const Edge& e : edges_) {
            matrix_[e.u * words_ + e.v / 64] |= std::uint64_t{1} << (e.v % 64);
            matrix_[e.v * words_ + e.u / 64] |= std::uint64_t{1} << (e.u % 64);
        }
    }
}

std::span<const Vertex> Graph::neighbors(Vertex v) const {
    if (v < 0 || v >= order()) throw std::out_of_range("unknown vertex " + std::to_string(v));
    return adjacency_[v];
}

bool Graph::adjacent(Vertex a, Vertex b) const {
    if (a < 0 || b < 0 || a >= order() || b >= order() || a == b) return false;
    if (words_ != 0) return (matrix_[a * words_ + b / 64] >> (b % 64)) & 1U;
    const auto& ra = adjacency_[a];
    const auto& rb = adjacency_[b];
    if (ra.size() > rb.size()) return std::binary_search(rb.begin(), rb.end(), a);
    return std::binary_search(ra.begin(), ra.end(), b);
}

double Graph::weight(Edge e) const {
    if (weights_.empty()) return 1.0;
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) throw std::invalid_argument("weight of a non-edge");
    return weights_[static_cast<std::size_t>(it - edges_.begin())];
}

double Graph::weight(const EdgeSet& m) const {
    double total = 0.0;
    for (const Edge& e : m) total += weight(e);
    return total;
}

InducedSubgraph induced_subgraph(const Graph& g, std::span<const Vertex> vertices) {
    InducedSubgraph out;
    out.to_parent.assign(vertices.begin(), vertices.end());
    std::sort(out.to_parent.begin(), out.to_parent.end());
    out.to_parent.erase(std::unique(out.to_parent.begin(), out.to_parent.end()),
                        out.to_parent.end());

    std::vector<Vertex> local(static_cast<std::size_t>(g.order()), -1);
    for (std::size_t i = 0; i < out.to_parent.size(); ++i) {
        if (out.to_parent[i] < 0 || out.to_parent[i] >= g.order())
            throw std::out_of_range("induced_subgraph: unknown vertex");
        local[out.to_parent[i]] = static_cast<Vertex>(i);
    }

    std::vector<Edge> edges;
    std::vector<double> weights;
    for (Vertex p : out.to_parent) {
        for (Vertex q : g.neighbors(p)) {
            if (q <= p || local[q] < 0) continue;
            edges.emplace_back(local[p], local[q]);
            if (g.weighted()) weights.push_back(g.weight(Edge{p, q}));
        }
    }
    out.graph = Graph(static_cast<Vertex>(out.to_parent.size()), edges, weights);
    return out;
}

std::vector<VertexSet> connected_components(const Graph& g) {
    std::vector<VertexSet> components;
    std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < g.order(); ++s) {
        if (seen[s]) continue;
        VertexSet comp;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (Vertex w : g.neighbors(v)) {
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

bool is_connected(const Graph& g) { return connected_components(g).size() <= 1; }

std::vector<int> vertex_distances(const Graph& g, std::span<const Vertex> sources) {
    std::vector<int> dist(static_cast<std::size_t>(g.order()), kUnreachable);
    std::deque<Vertex> queue;
    for (Vertex s : sources) {
        if (dist[s] != 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (Vertex w : g.neighbors(v)) {
            if (dist[w] == kUnreachable) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

int edge_distance(const Graph& g, Edge e, Edge f) {
    if (!g.has_edge(e) || !g.has_edge(f)) throw std::invalid_argument("edge_distance: not an edge");
    const Vertex src[2] = {e.u, e.v};
    auto dist = vertex_distances(g, src);
    return std::min(dist[f.u], dist[f.v]);
}

std::vector<VertexSet> distance_levels(const Graph& g, Edge xy) {
    if (!g.has_edge(xy)) throw std::invalid_argument("distance_levels: anchor is not an edge");
    const Vertex src[2] = {xy.u, xy.v};
    auto dist = vertex_distances(g, src);
    std::vector<VertexSet> levels;
    for (Vertex v = 0; v < g.order(); ++v) {
        if (dist[v] == kUnreachable) continue;
        if (static_cast<std::size_t>(dist[v]) >= levels.size()) levels.resize(dist[v] + 1);
        levels[dist[v]].push_back(v);
    }
    return levels;
}

bool is_matching(const EdgeSet& m) {
    std::set<Vertex> used;
    for (const Edge& e : m) {
        if (!used.insert(e.u).second || !used.insert(e.v).second) return false;
    }
    return true;
}

bool is_induced_matching(const Graph& g, const EdgeSet& m) {
    if (!is_matching(m)) return false;
    std::vector<Vertex> owner(static_cast<std::size_t>(g.order()), -1);
    Vertex index = 0;
    for (const Edge& e : m) {
        owner[e.u] = owner[e.v] = index++;
    }
    for (const Edge& e : g.edges()) {
        if (owner[e.u] >= 0 && owner[e.v] >= 0 && owner[e.u] != owner[e.v]) return false;
    }
    return true;
}

bool is_dim(const Graph& g, const EdgeSet& m) {
    std::vector<Vertex> owner(static_cast<std::size_t>(g.order()), -1);
    Vertex index = 0;
    bool shared = false;
    for (const Edge& e : m) {
        if (!g.has_edge(e)) throw std::invalid_argument("is_dim: matching edge not in graph");
        if (owner[e.u] >= 0 || owner[e.v] >= 0) shared = true;
        owner[e.u] = owner[e.v] = index++;
    }
    // Two members sharing a vertex both meet each of those members twice.
    if (shared) return false;
    for (const Edge& e : g.edges()) {
        const Vertex a = owner[e.u];
        const Vertex b = owner[e.v];
        if (a < 0 && b < 0) return false;
        if (a >= 0 && b >= 0 && a != b) return false;
    }
    return true;
}

bool is_independent(const Graph& g, std::span<const Vertex> vertices) {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            if (g.adjacent(vertices[i], vertices[j])) return false;
    return true;
}

}  // namespace dim

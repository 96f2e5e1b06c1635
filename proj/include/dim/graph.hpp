#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <vector>

namespace dim {

using Vertex = std::int32_t;

/// Undirected edge stored with u < v so that equal vertex pairs compare equal.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    constexpr Edge() = default;
    constexpr Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

    constexpr bool contains(Vertex w) const { return u == w || v == w; }
    constexpr Vertex other(Vertex w) const { return w == u ? v : u; }

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

using EdgeSet = std::set<Edge>;
using VertexSet = std::vector<Vertex>;  // kept sorted

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// Immutable simple undirected graph on vertices 0..n-1.
///
/// Neighbor lists are sorted. Graphs up to kDenseLimit vertices also keep an
/// adjacency bit matrix so that pattern searches can test adjacency in O(1).
/// Edge weights are stored only when supplied; otherwise every edge weighs 1.
class Graph {
public:
    static constexpr Vertex kDenseLimit = 4096;

    Graph() = default;

    /// Throws std::invalid_argument on self-loops, repeated edges, out-of-range
    /// endpoints, negative weights, or a weight list whose length differs from
    /// the edge list.
    Graph(Vertex n, std::span<const Edge> edges, std::span<const double> weights = {});

    Vertex order() const { return static_cast<Vertex>(adjacency_.size()); }
    std::size_t size() const { return edges_.size(); }

    /// Throws std::out_of_range for a vertex outside 0..n-1.
    std::span<const Vertex> neighbors(Vertex v) const;
    Vertex degree(Vertex v) const { return static_cast<Vertex>(neighbors(v).size()); }

    bool adjacent(Vertex a, Vertex b) const;
    bool has_edge(Edge e) const { return adjacent(e.u, e.v); }

    const std::vector<Edge>& edges() const { return edges_; }

    bool weighted() const { return !weights_.empty(); }
    /// Weight of an edge of the graph; 1 for unweighted graphs.
    double weight(Edge e) const;
    double weight(const EdgeSet& m) const;
    std::span<const double> weights() const { return weights_; }

private:
    std::vector<std::vector<Vertex>> adjacency_;
    std::vector<Edge> edges_;
    std::vector<double> weights_;
    std::vector<std::uint64_t> matrix_;
    std::size_t words_ = 0;
};

struct InducedSubgraph {
    Graph graph;
    std::vector<Vertex> to_parent;  // subgraph vertex -> parent vertex

    Edge lift(Edge e) const { return {to_parent[e.u], to_parent[e.v]}; }
};

/// The subgraph induced by `vertices` (any order, duplicates ignored); vertices
/// are relabeled in increasing parent order and weights are carried over.
InducedSubgraph induced_subgraph(const Graph& g, std::span<const Vertex> vertices);

std::vector<VertexSet> connected_components(const Graph& g);
bool is_connected(const Graph& g);

/// Multi-source BFS; unreachable vertices get kUnreachable.
std::vector<int> vertex_distances(const Graph& g, std::span<const Vertex> sources);

/// Length of a shortest path between the two edges (0 iff they share a vertex),
/// or kUnreachable when they lie in different components.
int edge_distance(const Graph& g, Edge e, Edge f);

/// N_0 = {x, y}, N_i = vertices at distance exactly i from {x, y}. Only the
/// component of xy is covered. Throws std::invalid_argument if xy is not an edge.
std::vector<VertexSet> distance_levels(const Graph& g, Edge xy);

bool is_matching(const EdgeSet& m);
/// No graph edge joins endpoints of two distinct members.
bool is_induced_matching(const Graph& g, const EdgeSet& m);
/// Every edge of g meets exactly one member of m. Throws std::invalid_argument
/// if m contains a pair that is not an edge of g.
bool is_dim(const Graph& g, const EdgeSet& m);

bool is_independent(const Graph& g, std::span<const Vertex> vertices);

}  // namespace dim

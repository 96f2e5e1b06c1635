#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dim/graph.hpp"

namespace dim {

enum class Pattern { K4, Diamond, Butterfly, Gem, C4, Spider };

/// An induced copy of a fixed pattern, with vertices listed in role order:
///   K4        (a, b, c, d)
///   Diamond   (v1, v2, v3, u): path v1-v2-v3, u sees all three, mid-edge u-v2
///   Butterfly (v1, v2, v3, v4, u): peripheral edges v1-v2 and v3-v4
///   Gem       (v1, v2, v3, v4, u): path v1..v4, u sees all four
///   C4        (a, b, c, d) in cyclic order
///   Spider    S_{i,j,k}: center, then the i, j and k leg vertices outward
struct PatternWitness {
    Pattern pattern = Pattern::K4;
    std::vector<Vertex> vertices;
    int legs[3] = {0, 0, 0};  // Spider only

    std::string name() const;
    Edge mid_edge() const;                        // Diamond only
    std::vector<Edge> peripheral_edges() const;   // Butterfly only
    /// The edges the pattern prescribes between its role vertices.
    std::vector<Edge> pattern_edges() const;
};

/// True iff the witness vertices induce exactly pattern_edges() in g.
bool verify_witness(const Graph& g, const PatternWitness& w);

std::optional<PatternWitness> find_k4(const Graph& g);
std::optional<PatternWitness> find_gem(const Graph& g);

/// Every induced diamond, once per vertex set, ordered by (mid-edge, v1, v3).
std::vector<PatternWitness> find_all_diamonds(const Graph& g);
/// Every induced butterfly, once per vertex set, ordered by (u, v1v2, v3v4).
std::vector<PatternWitness> find_all_butterflies(const Graph& g);

/// Backtracking search for an induced S_{i,j,k}; any leg may be 0.
std::optional<PatternWitness> find_induced_sijk(const Graph& g, int i, int j, int k);

/// Mid-edges of all diamonds plus peripheral edges of all butterflies.
EdgeSet forced_edges_initial(const Graph& g);

/// Edges lying on at least one induced C4.
EdgeSet c4_edges(const Graph& g);
/// An induced C4 through `e`, if any.
std::optional<PatternWitness> find_c4_through(const Graph& g, Edge e);

}  // namespace dim

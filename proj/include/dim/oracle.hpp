#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dim/coloring.hpp"
#include "dim/graph.hpp"

namespace dim {

enum class OracleMode { Exists, MinWeight, Enumerate };

struct OracleResult {
    bool feasible = false;
    std::optional<EdgeSet> best;                 // Exists: some d.i.m.; MinWeight: a lightest one
    std::optional<std::vector<EdgeSet>> all_dims;  // Enumerate only, sorted
    bool truncated = false;                      // Enumerate hit the cap
    std::uint64_t nodes = 0;                     // search nodes visited
};

inline constexpr std::size_t kDefaultEnumerateCap = 1'000'000;

/// Exact backtracking d.i.m. search. With a precoloring, removed vertices are
/// ignored, Black vertices must be matched, White vertices stay unmatched and
/// excluded edges never enter the matching; committed edges are not repeated
/// in the answer. In Enumerate mode `best` is the lightest listed matching.
OracleResult oracle_solve(const Graph& g, OracleMode mode = OracleMode::Exists,
                          const Coloring* precoloring = nullptr,
                          std::size_t enumerate_cap = kDefaultEnumerateCap);

/// Intersection of all d.i.m.s; empty when there is none.
EdgeSet oracle_forced_edges(const Graph& g);

/// Every d.i.m. by testing every edge subset. Throws for more than 24 edges.
std::vector<EdgeSet> subset_scan(const Graph& g);
/// Every d.i.m. by testing every Black/White vertex coloring. Throws for more
/// than 24 vertices.
std::vector<EdgeSet> coloring_scan(const Graph& g);

enum class EnumerationMode {
    Labeled,   // every labeled connected graph, n <= 7
    Canonical  // one representative per isomorphism class, n <= 9
};

inline constexpr int kLabeledCap = 7;
inline constexpr int kCanonicalCap = 9;

/// Calls `visit` for every connected graph on n vertices accepted by
/// `predicate` (which may be empty). Throws std::invalid_argument above the
/// mode's cap. Returns the number of graphs visited.
std::uint64_t enumerate_all_graphs(int n, const std::function<bool(const Graph&)>& predicate,
                                   EnumerationMode mode,
                                   const std::function<void(const Graph&)>& visit);

/// Canonical adjacency certificate: equal iff the graphs are isomorphic.
/// Supports up to 11 vertices.
std::uint64_t canonical_certificate(const Graph& g);

}  // namespace dim

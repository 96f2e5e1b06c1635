#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dim/graph.hpp"

namespace dim {

/// Black = matched vertex, White = unmatched vertex.
enum class Color : std::uint8_t { Unset, Black, White };

enum class Conflict : std::uint8_t {
    None,
    SharedVertex,            // new M-edge touches an existing one
    DistanceOne,             // new M-edge is joined to an existing one by an edge
    WhiteAdjacentWhite,
    BlackTwoBlackNeighbors,
    ColorClash,              // a vertex forced to both colors
    ExcludedEdge,            // an excluded edge would enter M
    NoMate,                  // a Black vertex has no possible partner left
    TriangleUncovered,       // no edge of some triangle can enter M
    RemovedVertex,           // operation on a vertex that is no longer present
};

const char* conflict_name(Conflict c);

/// Partial black/white coloring of a host graph together with the reduction
/// bookkeeping. Vertices stay addressed by host ids; reductions only flag them
/// as removed, so any state can be mapped back to the input instance.
struct Coloring {
    std::vector<Color> state;
    std::vector<char> removed;
    EdgeSet excluded;
    EdgeSet committed;

    Coloring() = default;
    explicit Coloring(Vertex n)
        : state(static_cast<std::size_t>(n), Color::Unset), removed(static_cast<std::size_t>(n), 0) {}

    Vertex order() const { return static_cast<Vertex>(state.size()); }
    bool live(Vertex v) const { return !removed[v]; }
    Color color(Vertex v) const { return state[v]; }
    bool is_excluded(Edge e) const { return excluded.count(e) > 0; }
    std::vector<Vertex> live_vertices() const;
};

// In-place primitives. Each returns Conflict::None on success; on a conflict
// the coloring is left partially updated and must be discarded.

/// Colors v. Fails if v already has the other color, if a White v would touch
/// a live White vertex, or if a Black v would exceed one Black neighbor.
Conflict paint(const Graph& g, Coloring& c, Vertex v, Color color);

/// Edge C-Reduction: u, w Black, every other live neighbor White, u and w
/// removed, uw committed.
Conflict commit_edge(const Graph& g, Coloring& c, Edge uw);

/// Vertex C-Reduction: u White, its live neighbors Black, u removed.
Conflict reduce_white(const Graph& g, Coloring& c, Vertex u);

/// Marks every live edge with an endpoint in N(vw) as excluded.
void exclude_around(const Graph& g, Coloring& c, Edge vw);

enum class Deduction : std::uint8_t {
    WhiteReduced,          // vertex C-reduction of a White vertex
    PairCommitted,         // two adjacent Black vertices committed
    SingleCandidate,       // the only possible partner of a Black vertex
    ExcludedPartnerWhite,  // neighbor of a Black vertex across an excluded edge
    NoPartnerWhite,        // an Unset vertex with no possible partner
    TwoBlackWhite,         // an Unset vertex seeing two Black vertices
    SharedCandidateBlack,  // sees two candidates of one Black vertex
    TriangleCommit,        // the only coverable edge of a triangle
};

struct DeductionEvent {
    Deduction kind;
    Vertex v;
    Vertex w;  // partner for pair events, otherwise -1
};

/// Applies the sound local consequences of the d.i.m. definition until nothing
/// changes. Every triangle must contain exactly one M-edge, every Black vertex
/// exactly one Black neighbor, and every White vertex only Black neighbors.
Conflict propagate(const Graph& g, Coloring& c, std::vector<DeductionEvent>* log = nullptr);

/// White vertices independent, each Black vertex with at most one Black
/// neighbor, committed edges Black, pairwise induced and not excluded, and no
/// excluded edge between two Black vertices.
bool is_feasible_partial(const Graph& g, const Coloring& c);
/// Feasible-partial, every vertex colored and every Black vertex with exactly
/// one Black neighbor.
bool is_feasible_complete(const Graph& g, const Coloring& c);

/// Edges whose endpoints are both Black.
EdgeSet black_pairs(const Graph& g, const Coloring& c);

/// Coloring after committing each edge of m in turn (edge C-reduction).
Coloring coloring_from_matching(const Graph& g, const EdgeSet& m);

// Value-returning wrappers.

struct ReductionOutcome {
    Conflict status = Conflict::None;
    Coloring coloring;
    InducedSubgraph residual;  // live vertices; to_parent is the provenance map

    bool ok() const { return status == Conflict::None; }
};

/// Reduction-Step: stops if M + vw is not an induced matching; otherwise vw
/// is committed, v and w are removed and edges at distance 1 are excluded.
ReductionOutcome reduction_step(const Graph& g, const Coloring& c, Edge vw);
ReductionOutcome reduction_step(const Graph& g, const EdgeSet& committed, Edge vw);

ReductionOutcome vertex_c_reduction(const Graph& g, const Coloring& c, Vertex u);
ReductionOutcome edge_c_reduction(const Graph& g, const Coloring& c, Edge uw);

/// Commits the seed edges in sorted order by edge C-reduction (also
/// excluding edges at distance 1), then keeps committing mid-edges of
/// diamonds and peripheral edges of butterflies of the live graph until none
/// remain.
ReductionOutcome forced_edge_closure(const Graph& g, const EdgeSet& seed);
ReductionOutcome forced_edge_closure(const Graph& g, const Coloring& start, const EdgeSet& seed);

InducedSubgraph live_subgraph(const Graph& g, const Coloring& c);

}  // namespace dim

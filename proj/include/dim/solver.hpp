#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dim/coloring.hpp"
#include "dim/graph.hpp"
#include "dim/pattern.hpp"

namespace dim {

/// Deductions recorded in a solve trace.
enum class Rule : std::uint8_t {
    ForcedPattern,        // mid-edge of a diamond or peripheral edge of a butterfly
    SingleEdge,           // one edge dominates the whole component
    AnchorCommitted,      // the anchor edge xy enters M
    N2EdgeForced,         // an edge inside N2
    TriangleForced,       // triangle with one corner in N3, the other two in N4
    N3EdgeExcluded,       // edges inside N3 or between N3 and N4
    C4EdgeExcluded,       // edges on an induced C4
    MultiHubWhite,        // N3 vertex with two N2 neighbors
    MultiHubContactForced,// T-vertex next to such a vertex
    DoubleContactForced,  // T-vertex seeing two vertices of another T-set
    C4White,              // T-vertex on an induced C4 through its hub
    InVertexPruned,       // surplus pendant T-vertex
    SingletonForced,      // hub with a single candidate before coloring
    XorN3,                // across an edge inside N3 exactly one end is Black
    ExactlyOne,           // a hub takes exactly one Black T-vertex
    LastCandidate,        // the last candidate of a hub turns Black
    XorN4,                // across an N3-N4 edge exactly one end is Black
    IsolatedContactForced,// N4 vertex without partner in Y
    JoinContradiction,    // N4 vertex seeing two candidates of one hub
    Branch,               // a seed or a fallback branch in X-enumeration
    YForcing,             // consequence inside Y
    SubSolver,            // remaining part of Y handed to the sub-solver
    Closure,              // any other consequence of the d.i.m. definition
    Count
};

inline constexpr std::size_t kRuleCount = static_cast<std::size_t>(Rule::Count);
const char* rule_name(Rule r);

struct Trace {
    std::array<std::uint64_t, kRuleCount> fired{};
    std::vector<std::pair<Rule, std::uint64_t>> order;  // runs in firing order

    void add(Rule r, std::uint64_t times = 1);
    void merge(const Trace& other);
    std::uint64_t count(Rule r) const { return fired[static_cast<std::size_t>(r)]; }
};

/// Distance levels of an anchor edge together with the sets derived from the
/// current coloring. Levels are fixed on the component; derived sets only
/// contain vertices that are still present.
struct LevelDecomposition {
    Edge anchor;
    Vertex witness = -1;
    std::vector<int> level;              // per vertex, -1 outside the component
    std::vector<VertexSet> levels;       // N_0, N_1, ...
    EdgeSet m2;                          // edges inside N_2
    VertexSet s2;                        // hubs: present N_2 vertices
    std::map<Vertex, VertexSet> t;       // hub -> its private N_3 neighbors
    VertexSet t_one;
    VertexSet s3;                        // N_3 vertices with two or more hubs
    VertexSet x;                         // {x, y} and N_1..N_3
    VertexSet y;                         // N_4 and beyond
};

/// One component of G[S2 + T_one] restricted to unresolved hubs and their
/// remaining candidates.
struct ComponentColoringTask {
    VertexSet hubs;
    VertexSet candidates;
    bool trivial = false;     // one hub whose candidates see no other T-set
    bool touches_y = false;   // some candidate sees an undecided vertex of Y
};

struct QClassification {
    std::vector<ComponentColoringTask> independent;
    std::vector<ComponentColoringTask> interacting;
    bool shared_contact = false;  // an N4 vertex sees two interacting components
};

/// Per-anchor working state.
struct AnchorState {
    const Graph* graph = nullptr;
    LevelDecomposition levels;
    Coloring coloring;
    Trace trace;
    Conflict failure = Conflict::None;
    std::string reason;
};

/// Counters for structural assertions checked while solving.
struct AuditCounters {
    std::uint64_t y_s122_checks = 0, y_s122_violations = 0;
    std::uint64_t y_claw_checks = 0, y_claw_violations = 0;
    std::uint64_t n3_bipartite_checks = 0, n3_bipartite_violations = 0;
    std::uint64_t interacting_checks = 0, interacting_violations = 0;
    std::uint64_t m_edge_level_checks = 0, m_edge_level_violations = 0;
    std::uint64_t p5_endpoint_checks = 0, p5_endpoint_violations = 0;
    std::uint64_t enumeration_checks = 0, enumeration_violations = 0;
    std::uint64_t propagation_stalls = 0;
    std::uint64_t max_interacting = 0;

    std::uint64_t violations() const;
    void merge(const AuditCounters& o);
};

struct SolveStats {
    AuditCounters audit;
    Trace trace;  // over every anchor tried
    std::uint64_t anchors_tried = 0;
    std::uint64_t x_colorings = 0;
    std::uint64_t sub_solver_calls = 0;
    double closure_seconds = 0, decomposition_seconds = 0, x_enumeration_seconds = 0,
           y_solve_seconds = 0;

    void merge(const SolveStats& o);
};

/// Precolored d.i.m. on the present part of a graph: returns a matching of the
/// present vertices that respects the coloring, or nothing.
using SubSolver = std::function<std::optional<EdgeSet>(const Graph&, const Coloring&, bool minimize)>;

/// The exact backtracking oracle.
SubSolver default_sub_solver();

struct SolveOptions {
    bool minimize = false;      // lightest d.i.m. instead of any
    bool verify_class = false;  // reject inputs containing an induced S_{1,2,4}
    bool all_anchors = false;   // run every anchor even after success
    bool audit = false;         // evaluate structural assertions
    SubSolver sub_solver;       // empty: default_sub_solver()
};

enum class Verdict { Found, NoDim, NoDimWithXY, ClassViolation };
const char* verdict_name(Verdict v);

struct SolveOutcome {
    Verdict verdict = Verdict::NoDim;
    EdgeSet matching;
    double weight = 0;
    std::optional<Edge> anchor;
    std::optional<PatternWitness> witness;
    std::string reason;
    Trace trace;
};

/// Edges xy with a vertex r adjacent to x but not to y, as (xy, r) pairs with
/// the smallest such r, in edge order. x is the endpoint adjacent to r.
std::vector<std::pair<Edge, Vertex>> p3_anchor_edges(const Graph& g);

/// Distance levels of xy, static checks that N1 is independent and that N2
/// induces edges and isolated vertices, then xy committed and the edges
/// inside N3, between N3 and N4 and on induced C4s excluded.
std::optional<AnchorState> decompose(const Graph& g, const Coloring& base, Edge xy, Vertex r,
                                     Conflict* why = nullptr, std::string* reason = nullptr);

/// Recomputes the derived sets of st.levels from the current coloring.
void refresh_sets(AnchorState& st);

// Forcing passes. Each returns false on a contradiction (recorded in st).
bool closure(AnchorState& st);
bool apply_m2_and_triangle_forcing(AnchorState& st);
bool apply_lemma1_lemma2(AnchorState& st);
bool preprocess_a1_a2_a3(AnchorState& st, bool minimize);
bool apply_proposition1(AnchorState& st);
/// Runs the forcing passes until nothing changes.
bool force_to_fixpoint(AnchorState& st, bool minimize);

/// A hub's remaining partners: present non-White neighbors across allowed edges.
VertexSet hub_candidates(const AnchorState& st, Vertex hub);

QClassification classify_q_family(const AnchorState& st);

/// All completions of one component, each given by its hub-partner edges,
/// reached by trying every candidate of the first hub and closing; hubs left
/// open after closing are branched on in order.
std::vector<std::vector<Edge>> propagate_component(const AnchorState& st,
                                                   const ComponentColoringTask& task,
                                                   AuditCounters* audit = nullptr);

/// Applies hub-partner edges and closes.
bool apply_choice(AnchorState& st, const std::vector<Edge>& choice);

/// X-colorings: independent components fixed to a lightest completion, then
/// every combination of the interacting components' completions.
std::vector<Coloring> enumerate_x_colorings(AnchorState& st, const QClassification& q,
                                            bool minimize, AuditCounters* audit = nullptr);

/// Forces Y from a coloring of X and solves the rest of Y with the sub-solver.
/// Returns the full matching of the component on success.
std::optional<EdgeSet> color_y_and_finish(const AnchorState& st, const Coloring& cx,
                                          const SolveOptions& opts, SolveStats* stats = nullptr);

/// Used when N4 is empty: every component colored independently.
SolveOutcome solve_n4_empty(AnchorState& st, const SolveOptions& opts, SolveStats* stats = nullptr);

/// d.i.m. of the connected graph g containing xy, consistent with `base`
/// (the coloring left by the forced-edge closure).
SolveOutcome dim_with_xy(const Graph& g, const Coloring& base, Edge xy, Vertex r,
                         const SolveOptions& opts = {}, SolveStats* stats = nullptr);

/// Full algorithm on any graph.
SolveOutcome solve(const Graph& g, const SolveOptions& opts = {}, SolveStats* stats = nullptr);

}  // namespace dim

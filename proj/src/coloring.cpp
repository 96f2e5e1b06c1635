#include "dim/coloring.hpp"

#include <algorithm>
#include <stdexcept>

#include "dim/pattern.hpp"

namespace dim {

const char* conflict_name(Conflict c) {
    switch (c) {
        case Conflict::None: return "none";
        case Conflict::SharedVertex: return "shared-vertex";
        case Conflict::DistanceOne: return "distance-one";
        case Conflict::WhiteAdjacentWhite: return "white-adjacent-white";
        case Conflict::BlackTwoBlackNeighbors: return "black-two-black-neighbors";
        case Conflict::ColorClash: return "color-clash";
        case Conflict::ExcludedEdge: return "excluded-edge";
        case Conflict::NoMate: return "no-mate";
        case Conflict::TriangleUncovered: return "triangle-uncovered";
        case Conflict::RemovedVertex: return "removed-vertex";
    }
    return "?";
}

std::vector<Vertex> Coloring::live_vertices() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < order(); ++v)
        if (!removed[v]) out.push_back(v);
    return out;
}

Conflict paint(const Graph& g, Coloring& c, Vertex v, Color color) {
    if (c.state[v] == color) return Conflict::None;
    if (c.state[v] != Color::Unset) return Conflict::ColorClash;
    if (c.removed[v]) return Conflict::RemovedVertex;
    if (color == Color::White) {
        for (Vertex q : g.neighbors(v))
            if (!c.removed[q] && c.state[q] == Color::White) return Conflict::WhiteAdjacentWhite;
    } else {
        int black = 0;
        Vertex mate = -1;
        for (Vertex q : g.neighbors(v)) {
            if (c.state[q] != Color::Black) continue;
            if (c.removed[q]) return Conflict::DistanceOne;
            ++black;
            mate = q;
        }
        if (black >= 2) return Conflict::BlackTwoBlackNeighbors;
        if (black == 1 && c.is_excluded(Edge{v, mate})) return Conflict::ExcludedEdge;
    }
    c.state[v] = color;
    return Conflict::None;
}

namespace {

Conflict check_against_committed(const Graph& g, const Coloring& c, Edge vw) {
    for (Vertex end : {vw.u, vw.v}) {
        if (c.removed[end]) {
            return c.state[end] == Color::Black ? Conflict::SharedVertex : Conflict::ColorClash;
        }
        for (Vertex q : g.neighbors(end)) {
            if (vw.contains(q)) continue;
            if (c.removed[q] && c.state[q] == Color::Black) return Conflict::DistanceOne;
        }
    }
    return Conflict::None;
}

}  // namespace

Conflict commit_edge(const Graph& g, Coloring& c, Edge uw) {
    if (!g.has_edge(uw)) throw std::invalid_argument("commit_edge: not an edge");
    if (c.is_excluded(uw)) return Conflict::ExcludedEdge;
    if (Conflict k = check_against_committed(g, c, uw); k != Conflict::None) return k;
    if (c.state[uw.u] == Color::White || c.state[uw.v] == Color::White) return Conflict::ColorClash;
    for (Vertex end : {uw.u, uw.v}) {
        for (Vertex q : g.neighbors(end)) {
            if (uw.contains(q) || c.removed[q]) continue;
            if (c.state[q] == Color::Black) return Conflict::BlackTwoBlackNeighbors;
        }
    }
    c.state[uw.u] = Color::Black;
    c.state[uw.v] = Color::Black;
    c.removed[uw.u] = 1;
    c.removed[uw.v] = 1;
    for (Vertex end : {uw.u, uw.v}) {
        for (Vertex q : g.neighbors(end)) {
            if (c.removed[q]) continue;
            if (Conflict k = paint(g, c, q, Color::White); k != Conflict::None) return k;
        }
    }
    c.committed.insert(uw);
    return Conflict::None;
}

Conflict reduce_white(const Graph& g, Coloring& c, Vertex u) {
    if (c.removed[u]) return c.state[u] == Color::White ? Conflict::None : Conflict::ColorClash;
    if (Conflict k = paint(g, c, u, Color::White); k != Conflict::None) return k;
    c.removed[u] = 1;
    for (Vertex q : g.neighbors(u)) {
        if (c.removed[q]) continue;
        if (Conflict k = paint(g, c, q, Color::Black); k != Conflict::None) return k;
    }
    return Conflict::None;
}

void exclude_around(const Graph& g, Coloring& c, Edge vw) {
    for (Vertex end : {vw.u, vw.v}) {
        for (Vertex q : g.neighbors(end)) {
            if (vw.contains(q) || c.removed[q]) continue;
            for (Vertex p : g.neighbors(q)) {
                if (vw.contains(p) || c.removed[p]) continue;
                c.excluded.insert(Edge{q, p});
            }
        }
    }
}

namespace {

bool can_match(const Coloring& c, Vertex v, Vertex q) {
    return !c.removed[q] && c.state[q] != Color::White && !c.is_excluded(Edge{v, q});
}

class Propagator {
public:
    Propagator(const Graph& g, Coloring& c, std::vector<DeductionEvent>* log)
        : g_(g), c_(c), log_(log), count_(static_cast<std::size_t>(g.order()), 0) {}

    Conflict run() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (Vertex v = 0; v < g_.order(); ++v) {
                if (c_.removed[v]) continue;
                Conflict k = Conflict::None;
                switch (c_.state[v]) {
                    case Color::White: k = white(v, changed); break;
                    case Color::Black: k = black(v, changed); break;
                    case Color::Unset: k = unset(v, changed); break;
                }
                if (k != Conflict::None) return k;
            }
            if (changed) continue;
            if (Conflict k = shared_candidates(changed); k != Conflict::None) return k;
            if (changed) continue;
            if (Conflict k = triangles(changed); k != Conflict::None) return k;
        }
        return Conflict::None;
    }

private:
    void note(Deduction d, Vertex v, Vertex w = -1) {
        if (log_) log_->push_back({d, v, w});
    }

    Conflict white(Vertex v, bool& changed) {
        note(Deduction::WhiteReduced, v);
        changed = true;
        return reduce_white(g_, c_, v);
    }

    Conflict black(Vertex v, bool& changed) {
        for (Vertex q : g_.neighbors(v)) {
            if (!c_.removed[q] && c_.state[q] == Color::Black) {
                note(Deduction::PairCommitted, v, q);
                changed = true;
                return commit_edge(g_, c_, Edge{v, q});
            }
        }
        Vertex candidate = -1;
        int candidates = 0;
        for (Vertex q : g_.neighbors(v)) {
            if (c_.removed[q] || c_.state[q] != Color::Unset) continue;
            if (c_.is_excluded(Edge{v, q})) {
                note(Deduction::ExcludedPartnerWhite, q, v);
                changed = true;
                if (Conflict k = paint(g_, c_, q, Color::White); k != Conflict::None) return k;
                continue;
            }
            ++candidates;
            candidate = q;
        }
        if (candidates == 0) return Conflict::NoMate;
        if (candidates == 1) {
            note(Deduction::SingleCandidate, candidate, v);
            changed = true;
            return paint(g_, c_, candidate, Color::Black);
        }
        return Conflict::None;
    }

    Conflict unset(Vertex v, bool& changed) {
        int black = 0;
        int possible = 0;
        for (Vertex q : g_.neighbors(v)) {
            if (c_.removed[q]) continue;
            if (c_.state[q] == Color::Black) ++black;
            if (can_match(c_, v, q)) ++possible;
        }
        if (black >= 2) {
            note(Deduction::TwoBlackWhite, v);
            changed = true;
            return paint(g_, c_, v, Color::White);
        }
        if (possible == 0) {
            note(Deduction::NoPartnerWhite, v);
            changed = true;
            return paint(g_, c_, v, Color::White);
        }
        return Conflict::None;
    }

    // A vertex seeing two possible partners of one Black vertex cannot be
    // White, since both partners would turn Black.
    Conflict shared_candidates(bool& changed) {
        std::vector<Vertex> touched;
        for (Vertex b = 0; b < g_.order(); ++b) {
            if (c_.removed[b] || c_.state[b] != Color::Black) continue;
            touched.clear();
            for (Vertex cand : g_.neighbors(b)) {
                if (!can_match(c_, b, cand)) continue;
                for (Vertex q : g_.neighbors(cand)) {
                    if (q == b || c_.removed[q]) continue;
                    if (count_[q]++ == 0) touched.push_back(q);
                }
            }
            Conflict result = Conflict::None;
            for (Vertex q : touched) {
                if (result == Conflict::None && count_[q] >= 2 && c_.state[q] == Color::Unset) {
                    note(Deduction::SharedCandidateBlack, q, b);
                    changed = true;
                    result = paint(g_, c_, q, Color::Black);
                }
                count_[q] = 0;
            }
            if (result != Conflict::None || changed) return result;
        }
        return Conflict::None;
    }

    // Every triangle holds exactly one M-edge.
    Conflict triangles(bool& changed) {
        for (const Edge& ab : g_.edges()) {
            if (c_.removed[ab.u] || c_.removed[ab.v]) continue;
            auto na = g_.neighbors(ab.u);
            auto nb = g_.neighbors(ab.v);
            auto ia = na.begin();
            auto ib = nb.begin();
            while (ia != na.end() && ib != nb.end()) {
                if (*ia < *ib) {
                    ++ia;
                } else if (*ib < *ia) {
                    ++ib;
                } else {
                    const Vertex x = *ia;
                    ++ia;
                    ++ib;
                    if (x <= ab.v || c_.removed[x]) continue;
                    const Edge tri[3] = {ab, Edge{ab.u, x}, Edge{ab.v, x}};
                    int open = 0;
                    Edge only;
                    for (const Edge& e : tri) {
                        if (c_.state[e.u] == Color::White || c_.state[e.v] == Color::White ||
                            c_.is_excluded(e))
                            continue;
                        ++open;
                        only = e;
                    }
                    if (open == 0) return Conflict::TriangleUncovered;
                    if (open == 1 &&
                        (c_.state[only.u] != Color::Black || c_.state[only.v] != Color::Black)) {
                        note(Deduction::TriangleCommit, only.u, only.v);
                        changed = true;
                        if (Conflict k = paint(g_, c_, only.u, Color::Black); k != Conflict::None)
                            return k;
                        return paint(g_, c_, only.v, Color::Black);
                    }
                }
            }
        }
        return Conflict::None;
    }

    const Graph& g_;
    Coloring& c_;
    std::vector<DeductionEvent>* log_;
    std::vector<int> count_;
};

}  // namespace

Conflict propagate(const Graph& g, Coloring& c, std::vector<DeductionEvent>* log) {
    return Propagator(g, c, log).run();
}

bool is_feasible_partial(const Graph& g, const Coloring& c) {
    std::vector<int> black_neighbors(static_cast<std::size_t>(g.order()), 0);
    for (const Edge& e : g.edges()) {
        const Color a = c.state[e.u];
        const Color b = c.state[e.v];
        if (a == Color::White && b == Color::White) return false;
        if (a == Color::Black && b == Color::Black) {
            if (c.is_excluded(e)) return false;
            ++black_neighbors[e.u];
            ++black_neighbors[e.v];
        }
    }
    for (Vertex v = 0; v < g.order(); ++v)
        if (black_neighbors[v] > 1) return false;
    for (const Edge& e : c.committed) {
        if (!g.has_edge(e) || c.is_excluded(e)) return false;
        if (c.state[e.u] != Color::Black || c.state[e.v] != Color::Black) return false;
    }
    return is_induced_matching(g, c.committed);
}

bool is_feasible_complete(const Graph& g, const Coloring& c) {
    if (!is_feasible_partial(g, c)) return false;
    for (Vertex v = 0; v < g.order(); ++v) {
        if (c.state[v] == Color::Unset) return false;
        if (c.state[v] == Color::Black) {
            int black = 0;
            for (Vertex q : g.neighbors(v)) black += c.state[q] == Color::Black;
            if (black != 1) return false;
        }
    }
    return true;
}

EdgeSet black_pairs(const Graph& g, const Coloring& c) {
    EdgeSet out;
    for (const Edge& e : g.edges())
        if (c.state[e.u] == Color::Black && c.state[e.v] == Color::Black) out.insert(e);
    return out;
}

Coloring coloring_from_matching(const Graph& g, const EdgeSet& m) {
    Coloring c(g.order());
    for (const Edge& e : m) {
        if (Conflict k = commit_edge(g, c, e); k != Conflict::None)
            throw std::invalid_argument(std::string("matching is not induced: ") + conflict_name(k));
    }
    return c;
}

InducedSubgraph live_subgraph(const Graph& g, const Coloring& c) {
    auto live = c.live_vertices();
    return induced_subgraph(g, live);
}

namespace {

ReductionOutcome finish(const Graph& g, Coloring c, Conflict status) {
    ReductionOutcome out;
    out.status = status;
    if (status == Conflict::None) out.residual = live_subgraph(g, c);
    out.coloring = std::move(c);
    return out;
}

Conflict induced_with_committed(const Graph& g, const Coloring& c, Edge vw) {
    for (const Edge& e : c.committed) {
        if (e.contains(vw.u) || e.contains(vw.v)) return Conflict::SharedVertex;
        if (g.adjacent(e.u, vw.u) || g.adjacent(e.u, vw.v) || g.adjacent(e.v, vw.u) ||
            g.adjacent(e.v, vw.v))
            return Conflict::DistanceOne;
    }
    return Conflict::None;
}

Conflict raw_reduction_step(const Graph& g, Coloring& c, Edge vw) {
    if (!g.has_edge(vw)) throw std::invalid_argument("reduction_step: not an edge");
    if (Conflict k = induced_with_committed(g, c, vw); k != Conflict::None) return k;
    if (c.is_excluded(vw)) return Conflict::ExcludedEdge;
    if (c.state[vw.u] == Color::White || c.state[vw.v] == Color::White) return Conflict::ColorClash;
    exclude_around(g, c, vw);
    c.state[vw.u] = c.state[vw.v] = Color::Black;
    c.removed[vw.u] = c.removed[vw.v] = 1;
    c.committed.insert(vw);
    return Conflict::None;
}

}  // namespace

ReductionOutcome reduction_step(const Graph& g, const Coloring& c, Edge vw) {
    Coloring next = c;
    Conflict k = raw_reduction_step(g, next, vw);
    return finish(g, std::move(next), k);
}

ReductionOutcome reduction_step(const Graph& g, const EdgeSet& committed, Edge vw) {
    Coloring c(g.order());
    for (const Edge& e : committed) {
        if (raw_reduction_step(g, c, e) != Conflict::None)
            throw std::invalid_argument("reduction_step: committed set is not an induced matching");
    }
    return reduction_step(g, c, vw);
}

ReductionOutcome vertex_c_reduction(const Graph& g, const Coloring& c, Vertex u) {
    Coloring next = c;
    Conflict k = reduce_white(g, next, u);
    return finish(g, std::move(next), k);
}

ReductionOutcome edge_c_reduction(const Graph& g, const Coloring& c, Edge uw) {
    Coloring next = c;
    Conflict k = commit_edge(g, next, uw);
    return finish(g, std::move(next), k);
}

ReductionOutcome forced_edge_closure(const Graph& g, const EdgeSet& seed) {
    return forced_edge_closure(g, Coloring(g.order()), seed);
}

ReductionOutcome forced_edge_closure(const Graph& g, const Coloring& start, const EdgeSet& seed) {
    Coloring c = start;
    EdgeSet batch = seed;
    while (!batch.empty()) {
        for (const Edge& e : batch) {
            if (c.committed.count(e)) continue;
            if (Conflict k = induced_with_committed(g, c, e); k != Conflict::None)
                return finish(g, std::move(c), k);
            exclude_around(g, c, e);
            if (Conflict k = commit_edge(g, c, e); k != Conflict::None)
                return finish(g, std::move(c), k);
        }
        auto residual = live_subgraph(g, c);
        batch.clear();
        for (const Edge& e : forced_edges_initial(residual.graph)) batch.insert(residual.lift(e));
    }
    return finish(g, std::move(c), Conflict::None);
}

}  // namespace dim

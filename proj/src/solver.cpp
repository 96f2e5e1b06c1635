#include "dim/solver.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

#include "dim/oracle.hpp"

namespace dim {

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::ForcedPattern: return "forced-pattern-edge";
        case Rule::SingleEdge: return "single-edge";
        case Rule::AnchorCommitted: return "anchor-committed";
        case Rule::N2EdgeForced: return "n2-edge-forced";
        case Rule::TriangleForced: return "n3-n4-triangle-forced";
        case Rule::N3EdgeExcluded: return "n3-edge-excluded";
        case Rule::C4EdgeExcluded: return "c4-edge-excluded";
        case Rule::MultiHubWhite: return "multi-hub-white";
        case Rule::MultiHubContactForced: return "multi-hub-contact-forced";
        case Rule::DoubleContactForced: return "double-contact-forced";
        case Rule::C4White: return "c4-white";
        case Rule::InVertexPruned: return "in-vertex-pruned";
        case Rule::SingletonForced: return "singleton-forced";
        case Rule::XorN3: return "xor-n3";
        case Rule::ExactlyOne: return "exactly-one";
        case Rule::LastCandidate: return "last-candidate";
        case Rule::XorN4: return "xor-n4";
        case Rule::IsolatedContactForced: return "isolated-contact-forced";
        case Rule::JoinContradiction: return "join-contradiction";
        case Rule::Branch: return "branch";
        case Rule::YForcing: return "y-forcing";
        case Rule::SubSolver: return "sub-solver";
        case Rule::Closure: return "closure";
        case Rule::Count: break;
    }
    return "?";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Found: return "found";
        case Verdict::NoDim: return "no-dim";
        case Verdict::NoDimWithXY: return "no-dim-with-xy";
        case Verdict::ClassViolation: return "class-violation";
    }
    return "?";
}

void Trace::add(Rule r, std::uint64_t times) {
    if (times == 0) return;
    fired[static_cast<std::size_t>(r)] += times;
    if (!order.empty() && order.back().first == r) {
        order.back().second += times;
    } else {
        order.emplace_back(r, times);
    }
}

void Trace::merge(const Trace& other) {
    for (const auto& [r, n] : other.order) add(r, n);
}

std::uint64_t AuditCounters::violations() const {
    return y_s122_violations + y_claw_violations + n3_bipartite_violations +
           interacting_violations + m_edge_level_violations + p5_endpoint_violations +
           enumeration_violations;
}

void AuditCounters::merge(const AuditCounters& o) {
    y_s122_checks += o.y_s122_checks;
    y_s122_violations += o.y_s122_violations;
    y_claw_checks += o.y_claw_checks;
    y_claw_violations += o.y_claw_violations;
    n3_bipartite_checks += o.n3_bipartite_checks;
    n3_bipartite_violations += o.n3_bipartite_violations;
    interacting_checks += o.interacting_checks;
    interacting_violations += o.interacting_violations;
    m_edge_level_checks += o.m_edge_level_checks;
    m_edge_level_violations += o.m_edge_level_violations;
    p5_endpoint_checks += o.p5_endpoint_checks;
    p5_endpoint_violations += o.p5_endpoint_violations;
    enumeration_checks += o.enumeration_checks;
    enumeration_violations += o.enumeration_violations;
    propagation_stalls += o.propagation_stalls;
    max_interacting = std::max(max_interacting, o.max_interacting);
}

void SolveStats::merge(const SolveStats& o) {
    audit.merge(o.audit);
    trace.merge(o.trace);
    anchors_tried += o.anchors_tried;
    x_colorings += o.x_colorings;
    sub_solver_calls += o.sub_solver_calls;
    closure_seconds += o.closure_seconds;
    decomposition_seconds += o.decomposition_seconds;
    x_enumeration_seconds += o.x_enumeration_seconds;
    y_solve_seconds += o.y_solve_seconds;
}

SubSolver default_sub_solver() {
    return [](const Graph& g, const Coloring& c, bool minimize) -> std::optional<EdgeSet> {
        auto r = oracle_solve(g, minimize ? OracleMode::MinWeight : OracleMode::Exists, &c);
        if (!r.feasible) return std::nullopt;
        return r.best;
    };
}

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
public:
    explicit Stopwatch(double* sink) : sink_(sink), start_(Clock::now()) {}
    ~Stopwatch() {
        if (sink_) *sink_ += std::chrono::duration<double>(Clock::now() - start_).count();
    }

private:
    double* sink_;
    Clock::time_point start_;
};

int level_of(const std::vector<int>& level, Vertex v) { return v >= 0 ? level[v] : -1; }

Rule attribute(const DeductionEvent& e, const std::vector<int>& level) {
    const int a = level_of(level, e.v);
    const int b = level_of(level, e.w);
    switch (e.kind) {
        case Deduction::WhiteReduced:
            if (a == 3) return Rule::XorN3;
            return a >= 4 ? Rule::YForcing : Rule::Closure;
        case Deduction::PairCommitted:
            if (a == 2 && b == 2) return Rule::N2EdgeForced;
            if (std::min(a, b) == 2 && std::max(a, b) == 3) return Rule::ExactlyOne;
            return std::min(a, b) >= 4 ? Rule::YForcing : Rule::Closure;
        case Deduction::SingleCandidate:
            if (b == 2) return Rule::LastCandidate;
            return b >= 4 ? Rule::YForcing : Rule::Closure;
        case Deduction::ExcludedPartnerWhite:
            if (a == 3 && b == 3) return Rule::XorN3;
            if (std::min(a, b) == 3 && std::max(a, b) == 4) return Rule::XorN4;
            if (b == 2 && a == 3) return Rule::C4White;
            return Rule::Closure;
        case Deduction::NoPartnerWhite:
            return a == 4 ? Rule::IsolatedContactForced : Rule::Closure;
        case Deduction::TwoBlackWhite:
            if (a == 3) return Rule::MultiHubWhite;
            return a >= 4 ? Rule::XorN4 : Rule::Closure;
        case Deduction::SharedCandidateBlack:
            if (a == 3) return Rule::DoubleContactForced;
            return a >= 4 ? Rule::JoinContradiction : Rule::Closure;
        case Deduction::TriangleCommit:
            return a >= 4 && b >= 4 ? Rule::TriangleForced : Rule::Closure;
    }
    return Rule::Closure;
}

bool close_coloring(const Graph& g, const std::vector<int>& level, Coloring& c, Trace* trace,
                    Conflict* why) {
    std::vector<DeductionEvent> log;
    const Conflict k = propagate(g, c, trace ? &log : nullptr);
    if (trace)
        for (const auto& e : log) trace->add(attribute(e, level));
    if (why) *why = k;
    return k == Conflict::None;
}

bool fail(AnchorState& st, Conflict k, std::string reason) {
    st.failure = k;
    st.reason = std::move(reason);
    return false;
}

std::size_t signature(const Coloring& c) {
    std::size_t s = c.committed.size() + c.excluded.size();
    for (Vertex v = 0; v < c.order(); ++v) s += (c.state[v] != Color::Unset) + c.removed[v];
    return s;
}

bool is_hub(const AnchorState& st, Vertex v) {
    const auto& c = st.coloring;
    return st.levels.level[v] == 2 && c.live(v) && c.state[v] == Color::Black;
}

VertexSet candidates_in(const Coloring& c, const Graph& g, Vertex hub) {
    VertexSet out;
    for (Vertex q : g.neighbors(hub))
        if (c.live(q) && c.state[q] != Color::White && !c.is_excluded(Edge{hub, q})) out.push_back(q);
    return out;
}

Vertex mate_of(const Coloring& c, Vertex v) {
    for (const Edge& e : c.committed)
        if (e.contains(v)) return e.other(v);
    return -1;
}

bool bipartite(const Graph& g, const VertexSet& part) {
    auto sub = induced_subgraph(g, part);
    std::vector<int> side(static_cast<std::size_t>(sub.graph.order()), -1);
    for (Vertex s = 0; s < sub.graph.order(); ++s) {
        if (side[s] >= 0) continue;
        side[s] = 0;
        std::vector<Vertex> stack{s};
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            for (Vertex q : sub.graph.neighbors(v)) {
                if (side[q] < 0) {
                    side[q] = 1 - side[v];
                    stack.push_back(q);
                } else if (side[q] == side[v]) {
                    return false;
                }
            }
        }
    }
    return true;
}

// Induced path of five vertices starting at v through strictly lower levels.
bool p5_endpoint(const Graph& g, const std::vector<int>& level, Vertex v) {
    std::vector<Vertex> path{v};
    std::function<bool()> extend = [&]() -> bool {
        if (path.size() == 5) return true;
        for (Vertex q : g.neighbors(path.back())) {
            if (level[q] < 0 || level[q] >= level[v]) continue;
            bool clean = true;
            for (std::size_t i = 0; i + 1 < path.size() && clean; ++i)
                if (path[i] == q || g.adjacent(path[i], q)) clean = false;
            if (!clean || q == path.back()) continue;
            path.push_back(q);
            if (extend()) return true;
            path.pop_back();
        }
        return false;
    };
    return extend();
}

void static_audits(const AnchorState& st, bool s114_free, AuditCounters& audit) {
    const Graph& g = *st.graph;
    const auto& lv = st.levels;
    for (std::size_t i = 3; i < lv.levels.size(); ++i)
        for (Vertex v : lv.levels[i]) {
            ++audit.p5_endpoint_checks;
            if (!p5_endpoint(g, lv.level, v)) ++audit.p5_endpoint_violations;
        }
    VertexSet y;
    for (std::size_t i = 4; i < lv.levels.size(); ++i)
        y.insert(y.end(), lv.levels[i].begin(), lv.levels[i].end());
    std::sort(y.begin(), y.end());
    if (y.size() < 4) return;
    auto gy = induced_subgraph(g, y);
    if (y.size() >= 6) {
        ++audit.y_s122_checks;
        if (find_induced_sijk(gy.graph, 1, 2, 2)) ++audit.y_s122_violations;
    }
    if (s114_free) {
        ++audit.y_claw_checks;
        if (find_induced_sijk(gy.graph, 1, 1, 1)) ++audit.y_claw_violations;
    }
}

void found_audits(const AnchorState& st, const EdgeSet& m, AuditCounters& audit) {
    const auto& level = st.levels.level;
    for (const Edge& e : m) {
        ++audit.m_edge_level_checks;
        const int a = std::min(level[e.u], level[e.v]);
        const int b = std::max(level[e.u], level[e.v]);
        if (a == 3 && (b == 3 || b == 4)) ++audit.m_edge_level_violations;
    }
    if (st.levels.levels.size() > 3) {
        ++audit.n3_bipartite_checks;
        if (!bipartite(*st.graph, st.levels.levels[3])) ++audit.n3_bipartite_violations;
    }
}

}  // namespace

std::vector<std::pair<Edge, Vertex>> p3_anchor_edges(const Graph& g) {
    std::vector<std::pair<Edge, Vertex>> out;
    for (const Edge& e : g.edges()) {
        Vertex best = -1;
        for (Vertex end : {e.u, e.v})
            for (Vertex r : g.neighbors(end)) {
                if (e.contains(r) || g.adjacent(r, e.other(end))) continue;
                if (best < 0 || r < best) best = r;
                break;
            }
        if (best >= 0) out.emplace_back(e, best);
    }
    return out;
}

void refresh_sets(AnchorState& st) {
    const Graph& g = *st.graph;
    auto& d = st.levels;
    const auto& c = st.coloring;
    d.m2.clear();
    d.s2.clear();
    d.t.clear();
    d.t_one.clear();
    d.s3.clear();
    d.x.clear();
    d.y.clear();
    for (Vertex v = 0; v < g.order(); ++v) {
        const int l = d.level[v];
        if (l < 0 || !c.live(v)) continue;
        (l <= 3 ? d.x : d.y).push_back(v);
        if (l == 2) {
            d.s2.push_back(v);
            d.t[v];
            for (Vertex q : g.neighbors(v))
                if (q > v && d.level[q] == 2 && c.live(q)) d.m2.insert(Edge{v, q});
        }
    }
    for (Vertex v = 0; v < g.order(); ++v) {
        if (d.level[v] != 3 || !c.live(v)) continue;
        Vertex hub = -1;
        int hubs = 0;
        for (Vertex q : g.neighbors(v))
            if (d.level[q] == 2 && c.live(q)) {
                ++hubs;
                hub = q;
            }
        if (hubs == 1) {
            d.t[hub].push_back(v);
            d.t_one.push_back(v);
        } else if (hubs >= 2) {
            d.s3.push_back(v);
        }
    }
}

std::optional<AnchorState> decompose(const Graph& g, const Coloring& base, Edge xy, Vertex r,
                                     Conflict* why, std::string* reason) {
    auto reject = [&](Conflict k, const char* text) -> std::optional<AnchorState> {
        if (why) *why = k;
        if (reason) *reason = text;
        return std::nullopt;
    };
    if (!g.has_edge(xy)) throw std::invalid_argument("decompose: anchor is not an edge");
    AnchorState st;
    st.graph = &g;
    auto& d = st.levels;
    d.anchor = xy;
    d.witness = r;
    const Vertex src[2] = {xy.u, xy.v};
    auto dist = vertex_distances(g, src);
    d.level.assign(static_cast<std::size_t>(g.order()), -1);
    for (Vertex v = 0; v < g.order(); ++v) {
        if (dist[v] == kUnreachable) continue;
        d.level[v] = dist[v];
        if (static_cast<std::size_t>(dist[v]) >= d.levels.size()) d.levels.resize(dist[v] + 1);
        d.levels[dist[v]].push_back(v);
    }
    if (d.levels.size() > 1 && !is_independent(g, d.levels[1]))
        return reject(Conflict::WhiteAdjacentWhite, "N1 is not independent");
    if (d.levels.size() > 2)
        for (Vertex v : d.levels[2]) {
            int inside = 0;
            for (Vertex q : g.neighbors(v)) inside += d.level[q] == 2;
            if (inside > 1) return reject(Conflict::BlackTwoBlackNeighbors, "N2 has a vertex of degree two");
        }

    st.coloring = base;
    if (Conflict k = commit_edge(g, st.coloring, xy); k != Conflict::None)
        return reject(k, "anchor cannot enter the matching");
    st.trace.add(Rule::AnchorCommitted);

    std::uint64_t excluded = 0;
    for (const Edge& e : g.edges()) {
        const int a = std::min(d.level[e.u], d.level[e.v]);
        const int b = std::max(d.level[e.u], d.level[e.v]);
        if (a == 3 && (b == 3 || b == 4)) excluded += st.coloring.excluded.insert(e).second;
    }
    st.trace.add(Rule::N3EdgeExcluded, excluded);
    refresh_sets(st);
    return st;
}

bool closure(AnchorState& st) {
    Conflict k;
    if (!close_coloring(*st.graph, st.levels.level, st.coloring, &st.trace, &k))
        return fail(st, k, std::string("closure: ") + conflict_name(k));
    refresh_sets(st);
    return true;
}

bool apply_m2_and_triangle_forcing(AnchorState& st) {
    const Graph& g = *st.graph;
    refresh_sets(st);
    for (const Edge& e : st.levels.m2) {
        if (!st.coloring.live(e.u) || !st.coloring.live(e.v)) continue;
        if (Conflict k = commit_edge(g, st.coloring, e); k != Conflict::None)
            return fail(st, k, "edge inside N2 cannot be committed");
        st.trace.add(Rule::N2EdgeForced);
    }
    const auto& level = st.levels.level;
    for (const Edge& bc : g.edges()) {
        if (level[bc.u] != 4 || level[bc.v] != 4) continue;
        if (!st.coloring.live(bc.u) || !st.coloring.live(bc.v)) continue;
        for (Vertex a : g.neighbors(bc.u)) {
            if (level[a] != 3 || !st.coloring.live(a) || !g.adjacent(a, bc.v)) continue;
            if (Conflict k = commit_edge(g, st.coloring, bc); k != Conflict::None)
                return fail(st, k, "triangle edge in N4 cannot be committed");
            st.trace.add(Rule::TriangleForced);
            break;
        }
    }
    return closure(st);
}

bool apply_lemma1_lemma2(AnchorState& st) {
    const Graph& g = *st.graph;
    refresh_sets(st);
    auto& c = st.coloring;
    for (Vertex s : st.levels.s3) {
        if (Conflict k = paint(g, c, s, Color::White); k != Conflict::None)
            return fail(st, k, "N3 vertex with two hubs cannot be White");
        st.trace.add(Rule::MultiHubWhite);
        for (Vertex t : g.neighbors(s)) {
            if (st.levels.level[t] != 3 || !c.live(t) || c.state[t] != Color::Unset) continue;
            if (Conflict k = paint(g, c, t, Color::Black); k != Conflict::None)
                return fail(st, k, "contact of a two-hub vertex cannot be Black");
            st.trace.add(Rule::MultiHubContactForced);
        }
    }
    for (const auto& [hub, members] : st.levels.t) {
        for (Vertex t : members) {
            if (c.state[t] != Color::Unset) continue;
            for (const auto& [other, others] : st.levels.t) {
                if (other == hub) continue;
                int seen = 0;
                for (Vertex q : others)
                    if (c.state[q] != Color::White && g.adjacent(t, q)) ++seen;
                if (seen >= 2) {
                    if (Conflict k = paint(g, c, t, Color::Black); k != Conflict::None)
                        return fail(st, k, "double contact cannot be Black");
                    st.trace.add(Rule::DoubleContactForced);
                    break;
                }
            }
        }
    }
    return closure(st);
}

VertexSet hub_candidates(const AnchorState& st, Vertex hub) {
    return candidates_in(st.coloring, *st.graph, hub);
}

bool preprocess_a1_a2_a3(AnchorState& st, bool minimize) {
    (void)minimize;  // the pruning rule is the same for both objectives
    const Graph& g = *st.graph;
    refresh_sets(st);
    auto& c = st.coloring;
    for (Vertex hub : st.levels.s2) {
        if (!is_hub(st, hub)) continue;
        for (Vertex t : st.levels.t[hub]) {
            if (c.state[t] != Color::Unset || !c.is_excluded(Edge{hub, t})) continue;
            if (Conflict k = paint(g, c, t, Color::White); k != Conflict::None)
                return fail(st, k, "C4 vertex cannot be White");
            st.trace.add(Rule::C4White);
        }
        // Pendant candidates are interchangeable: keep the lightest.
        Vertex keep = -1;
        for (Vertex t : st.levels.t[hub]) {
            if (c.state[t] != Color::Unset || c.is_excluded(Edge{hub, t})) continue;
            int live = 0;
            for (Vertex q : g.neighbors(t)) live += c.live(q);
            if (live != 1) continue;
            if (keep < 0 || g.weight(Edge{hub, t}) < g.weight(Edge{hub, keep})) keep = t;
        }
        if (keep >= 0) {
            for (Vertex t : st.levels.t[hub]) {
                if (t == keep || c.state[t] != Color::Unset || c.is_excluded(Edge{hub, t})) continue;
                int live = 0;
                for (Vertex q : g.neighbors(t)) live += c.live(q);
                if (live != 1) continue;
                if (Conflict k = paint(g, c, t, Color::White); k != Conflict::None)
                    return fail(st, k, "surplus pendant vertex cannot be White");
                st.trace.add(Rule::InVertexPruned);
            }
        }
        auto cands = candidates_in(c, g, hub);
        if (cands.empty()) return fail(st, Conflict::NoMate, "hub without candidates");
        if (cands.size() == 1 && c.state[cands[0]] == Color::Unset) {
            if (Conflict k = paint(g, c, cands[0], Color::Black); k != Conflict::None)
                return fail(st, k, "single candidate cannot be Black");
            st.trace.add(Rule::SingletonForced);
        }
    }
    return closure(st);
}

bool apply_proposition1(AnchorState& st) {
    const Graph& g = *st.graph;
    refresh_sets(st);
    auto& c = st.coloring;
    const auto& level = st.levels.level;
    for (Vertex z : st.levels.y) {
        if (level[z] != 4 || c.state[z] != Color::Unset) continue;
        bool partner = false;
        for (Vertex q : g.neighbors(z))
            if (level[q] >= 4 && c.live(q) && c.state[q] != Color::White &&
                !c.is_excluded(Edge{z, q}))
                partner = true;
        if (partner) continue;
        for (const auto& [hub, members] : st.levels.t) {
            int seen = 0;
            for (Vertex t : members)
                if (c.state[t] != Color::White && g.adjacent(z, t)) ++seen;
            if (seen >= 2) {
                st.trace.add(Rule::JoinContradiction);
                return fail(st, Conflict::BlackTwoBlackNeighbors,
                            "N4 vertex without partner sees two candidates of one hub");
            }
        }
        if (Conflict k = paint(g, c, z, Color::White); k != Conflict::None)
            return fail(st, k, "N4 vertex without partner cannot be White");
        st.trace.add(Rule::IsolatedContactForced);
    }
    return closure(st);
}

bool force_to_fixpoint(AnchorState& st, bool minimize) {
    if (!closure(st)) return false;
    const bool has_n4 = st.levels.levels.size() > 4;
    while (true) {
        const std::size_t before = signature(st.coloring);
        if (!apply_m2_and_triangle_forcing(st)) return false;
        if (!apply_lemma1_lemma2(st)) return false;
        if (!preprocess_a1_a2_a3(st, minimize)) return false;
        if (has_n4 && !apply_proposition1(st)) return false;
        if (signature(st.coloring) == before) return true;
    }
}

QClassification classify_q_family(const AnchorState& st) {
    const Graph& g = *st.graph;
    const auto& c = st.coloring;
    const auto& level = st.levels.level;
    VertexSet hubs;
    for (Vertex v : st.levels.s2)
        if (is_hub(st, v)) hubs.push_back(v);

    std::vector<VertexSet> cands;
    std::vector<int> owner(static_cast<std::size_t>(g.order()), -1);
    for (std::size_t i = 0; i < hubs.size(); ++i) {
        cands.push_back(candidates_in(c, g, hubs[i]));
        for (Vertex t : cands.back()) owner[t] = static_cast<int>(i);
    }
    std::vector<int> parent(hubs.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
    for (std::size_t i = 0; i < hubs.size(); ++i)
        for (Vertex t : cands[i])
            for (Vertex q : g.neighbors(t))
                if (owner[q] >= 0 && owner[q] != static_cast<int>(i)) parent[find(owner[q])] = find(static_cast<int>(i));

    std::map<int, ComponentColoringTask> groups;
    for (std::size_t i = 0; i < hubs.size(); ++i) {
        auto& task = groups[find(static_cast<int>(i))];
        task.hubs.push_back(hubs[i]);
        task.candidates.insert(task.candidates.end(), cands[i].begin(), cands[i].end());
    }
    QClassification out;
    std::vector<std::vector<int>> contact_of(static_cast<std::size_t>(g.order()));
    for (auto& [root, task] : groups) {
        std::sort(task.candidates.begin(), task.candidates.end());
        task.trivial = task.hubs.size() == 1;
        for (Vertex t : task.candidates)
            for (Vertex z : g.neighbors(t))
                if (level[z] >= 4 && c.live(z) && c.state[z] != Color::White) task.touches_y = true;
        if (task.touches_y) {
            const int index = static_cast<int>(out.interacting.size());
            for (Vertex t : task.candidates)
                for (Vertex z : g.neighbors(t))
                    if (level[z] >= 4 && c.live(z) && c.state[z] != Color::White &&
                        (contact_of[z].empty() || contact_of[z].back() != index))
                        contact_of[z].push_back(index);
            out.interacting.push_back(task);
        } else {
            out.independent.push_back(task);
        }
    }
    for (const auto& list : contact_of)
        if (list.size() >= 2) out.shared_contact = true;
    return out;
}

std::vector<std::vector<Edge>> propagate_component(const AnchorState& st,
                                                   const ComponentColoringTask& task,
                                                   AuditCounters* audit) {
    const Graph& g = *st.graph;
    std::vector<std::vector<Edge>> results;
    std::function<void(const Coloring&, bool)> branch = [&](const Coloring& c, bool seeded) {
        Vertex open = -1;
        for (Vertex h : task.hubs)
            if (c.live(h)) {
                open = h;
                break;
            }
        if (open < 0) {
            std::vector<Edge> choice;
            for (Vertex h : task.hubs) choice.emplace_back(h, mate_of(c, h));
            results.push_back(std::move(choice));
            return;
        }
        if (seeded && audit) ++audit->propagation_stalls;
        for (Vertex t : candidates_in(c, g, open)) {
            Coloring next = c;
            if (paint(g, next, t, Color::Black) != Conflict::None) continue;
            if (!close_coloring(g, st.levels.level, next, nullptr, nullptr)) continue;
            branch(next, true);
        }
    };
    branch(st.coloring, false);
    return results;
}

bool apply_choice(AnchorState& st, const std::vector<Edge>& choice) {
    for (const Edge& e : choice) {
        if (st.coloring.committed.count(e)) continue;
        if (Conflict k = commit_edge(*st.graph, st.coloring, e); k != Conflict::None)
            return fail(st, k, "component choice clashes");
    }
    st.trace.add(Rule::Branch, choice.empty() ? 0 : 1);
    return closure(st);
}

std::vector<Coloring> enumerate_x_colorings(AnchorState& st, const QClassification& q, bool minimize,
                                            AuditCounters* audit) {
    const Graph& g = *st.graph;
    std::size_t max_t = 1;
    for (const auto* family : {&q.independent, &q.interacting})
        for (const auto& task : *family)
            for (Vertex h : task.hubs) max_t = std::max(max_t, hub_candidates(st, h).size());

    for (const auto& task : q.independent) {
        auto options = propagate_component(st, task, audit);
        if (options.empty()) {
            fail(st, Conflict::NoMate, "a component has no feasible coloring");
            return {};
        }
        std::size_t pick = 0;
        if (minimize) {
            double best = 0;
            for (std::size_t i = 0; i < options.size(); ++i) {
                double w = 0;
                for (const Edge& e : options[i]) w += g.weight(e);
                if (i == 0 || w < best) {
                    best = w;
                    pick = i;
                }
            }
        }
        if (!apply_choice(st, options[pick])) return {};
    }

    std::vector<std::vector<std::vector<Edge>>> per;
    for (const auto& task : q.interacting) {
        per.push_back(propagate_component(st, task, audit));
        if (per.back().empty()) {
            fail(st, Conflict::NoMate, "an interacting component has no feasible coloring");
            return {};
        }
    }
    std::uint64_t combos = 1;
    for (const auto& p : per) combos *= p.size();
    if (audit) {
        ++audit->enumeration_checks;
        const std::size_t comps = std::max<std::size_t>(1, q.independent.size() + q.interacting.size());
        std::uint64_t bound = comps;
        const std::size_t exponent = std::min<std::size_t>(3, per.size());
        for (std::size_t i = 0; i < exponent; ++i) bound *= max_t;
        if (combos > bound) ++audit->enumeration_violations;
    }

    std::vector<Coloring> out;
    std::vector<std::size_t> digit(per.size(), 0);
    while (true) {
        AnchorState next = st;
        bool ok = true;
        for (std::size_t i = 0; i < per.size() && ok; ++i)
            for (const Edge& e : per[i][digit[i]]) {
                if (next.coloring.committed.count(e)) continue;
                if (commit_edge(g, next.coloring, e) != Conflict::None) {
                    ok = false;
                    break;
                }
            }
        if (ok && close_coloring(g, st.levels.level, next.coloring, nullptr, nullptr))
            out.push_back(std::move(next.coloring));
        std::size_t i = 0;
        while (i < per.size() && ++digit[i] == per[i].size()) digit[i++] = 0;
        if (i == per.size()) break;
    }
    if (out.empty()) fail(st, Conflict::NoMate, "no combination of interacting components is feasible");
    return out;
}

std::optional<EdgeSet> color_y_and_finish(const AnchorState& st, const Coloring& cx,
                                          const SolveOptions& opts, SolveStats* stats) {
    const Graph& g = *st.graph;
    Coloring c = cx;
    Trace local;
    if (!close_coloring(g, st.levels.level, c, stats ? &local : nullptr, nullptr)) {
        if (stats) stats->trace.merge(local);
        return std::nullopt;
    }
    EdgeSet full = c.committed;
    bool pending = false;
    for (Vertex v = 0; v < g.order(); ++v) pending = pending || c.live(v);
    if (pending) {
        const SubSolver& sub = opts.sub_solver ? opts.sub_solver : default_sub_solver();
        if (stats) ++stats->sub_solver_calls;
        local.add(Rule::SubSolver);
        auto rest = sub(g, c, opts.minimize);
        if (stats) stats->trace.merge(local);
        if (!rest) return std::nullopt;
        for (const Edge& e : *rest) {
            if (c.is_excluded(e)) return std::nullopt;
            full.insert(e);
        }
    } else if (stats) {
        stats->trace.merge(local);
    }
    if (!is_dim(g, full)) return std::nullopt;
    for (const Edge& e : full)
        if (c.is_excluded(e)) return std::nullopt;
    return full;
}

namespace {

SolveOutcome finish_anchor(AnchorState& st, const SolveOptions& opts, SolveStats* stats) {
    SolveOutcome out;
    out.verdict = Verdict::NoDimWithXY;
    out.anchor = st.levels.anchor;
    AuditCounters scratch;
    AuditCounters& audit = stats ? stats->audit : scratch;

    QClassification q;
    std::vector<Coloring> colorings;
    {
        Stopwatch sw(stats ? &stats->x_enumeration_seconds : nullptr);
        q = classify_q_family(st);
        const bool has_n4 = st.levels.levels.size() > 4;
        if (has_n4) {
            ++audit.interacting_checks;
            audit.max_interacting = std::max<std::uint64_t>(audit.max_interacting, q.interacting.size());
            if (q.interacting.size() > 3) {
                if (auto w = find_induced_sijk(*st.graph, 1, 2, 4)) {
                    out.verdict = Verdict::ClassViolation;
                    out.witness = w;
                    out.reason = "more than three interacting components";
                    return out;
                }
                ++audit.interacting_violations;
            }
        }
        colorings = enumerate_x_colorings(st, q, opts.minimize, &audit);
    }
    if (stats) stats->x_colorings += colorings.size();
    if (colorings.empty()) {
        out.reason = st.reason.empty() ? "no feasible coloring of X" : st.reason;
        out.trace = st.trace;
        return out;
    }
    std::optional<EdgeSet> best;
    double best_weight = 0;
    {
        Stopwatch sw(stats ? &stats->y_solve_seconds : nullptr);
        for (const Coloring& cx : colorings) {
            auto m = color_y_and_finish(st, cx, opts, stats);
            if (!m) continue;
            const double w = st.graph->weight(*m);
            if (!best || w < best_weight) {
                best = std::move(m);
                best_weight = w;
            }
            if (!opts.minimize) break;
        }
    }
    out.trace = st.trace;
    if (!best) {
        out.reason = "no coloring of X extends to Y";
        return out;
    }
    if (opts.audit) found_audits(st, *best, audit);
    out.verdict = Verdict::Found;
    out.matching = std::move(*best);
    out.weight = best_weight;
    return out;
}

}  // namespace

SolveOutcome solve_n4_empty(AnchorState& st, const SolveOptions& opts, SolveStats* stats) {
    return finish_anchor(st, opts, stats);
}

SolveOutcome dim_with_xy(const Graph& g, const Coloring& base, Edge xy, Vertex r,
                         const SolveOptions& opts, SolveStats* stats) {
    SolveOutcome out;
    out.verdict = Verdict::NoDimWithXY;
    out.anchor = xy;
    if (stats) ++stats->anchors_tried;

    std::optional<AnchorState> st;
    {
        Stopwatch sw(stats ? &stats->decomposition_seconds : nullptr);
        st = decompose(g, base, xy, r, nullptr, &out.reason);
    }
    if (!st) return out;
    bool ok;
    {
        Stopwatch sw(stats ? &stats->closure_seconds : nullptr);
        ok = force_to_fixpoint(*st, opts.minimize);
    }
    if (!ok) {
        out.reason = st->reason;
        out.trace = st->trace;
        if (stats) stats->trace.merge(st->trace);
        return out;
    }
    out = finish_anchor(*st, opts, stats);
    if (stats) stats->trace.merge(st->trace);
    return out;
}

namespace {

SolveOutcome solve_component(const Graph& h, const Coloring& base, const SolveOptions& opts,
                             SolveStats* stats, bool s114_free) {
    SolveOutcome out;
    out.verdict = Verdict::NoDim;

    // A single edge that dominates everything rules out larger d.i.m.s.
    std::optional<Edge> single;
    for (const Edge& e : h.edges()) {
        if (base.is_excluded(e) || base.state[e.u] == Color::White || base.state[e.v] == Color::White)
            continue;
        if (!is_dim(h, EdgeSet{e})) continue;
        if (!single || h.weight(e) < h.weight(*single)) single = e;
        if (!opts.minimize) break;
    }
    if (single) {
        out.verdict = Verdict::Found;
        out.matching = {*single};
        out.weight = h.weight(*single);
        out.trace.add(Rule::SingleEdge);
        if (stats) stats->trace.add(Rule::SingleEdge);
        return out;
    }

    std::optional<SolveOutcome> best;
    for (const auto& [xy, r] : p3_anchor_edges(h)) {
        if (best && !opts.minimize && !opts.all_anchors) break;
        if (opts.audit && stats) {
            Conflict k;
            std::string why;
            if (auto st = decompose(h, base, xy, r, &k, &why)) static_audits(*st, s114_free, stats->audit);
        }
        SolveOutcome res = dim_with_xy(h, base, xy, r, opts, stats);
        if (res.verdict == Verdict::ClassViolation) return res;
        if (res.verdict != Verdict::Found) continue;
        if (!best || (opts.minimize && res.weight < best->weight)) best = std::move(res);
    }
    if (best) return *best;
    out.reason = "no anchor edge extends to a d.i.m.";
    return out;
}

}  // namespace

SolveOutcome solve(const Graph& g, const SolveOptions& opts, SolveStats* stats) {
    SolveOutcome out;
    out.verdict = Verdict::NoDim;
    if (auto k4 = find_k4(g)) {
        out.reason = "K4 found";
        out.witness = k4;
        return out;
    }
    if (opts.verify_class) {
        if (auto w = find_induced_sijk(g, 1, 2, 4)) {
            out.verdict = Verdict::ClassViolation;
            out.reason = "induced S_{1,2,4} found";
            out.witness = w;
            return out;
        }
    }
    const bool s114_free = opts.audit && !find_induced_sijk(g, 1, 1, 4);

    ReductionOutcome reduced;
    {
        Stopwatch sw(stats ? &stats->closure_seconds : nullptr);
        reduced = forced_edge_closure(g, forced_edges_initial(g));
    }
    if (!reduced.ok()) {
        out.reason = std::string("forced edges clash: ") + conflict_name(reduced.status);
        return out;
    }
    Coloring& c = reduced.coloring;
    out.trace.add(Rule::ForcedPattern, c.committed.size());
    if (stats) stats->trace.add(Rule::ForcedPattern, c.committed.size());

    EdgeSet matching = c.committed;
    const InducedSubgraph& live = reduced.residual;
    for (const VertexSet& comp : connected_components(live.graph)) {
        if (comp.size() < 2) continue;
        std::vector<Vertex> host;
        for (Vertex v : comp) host.push_back(live.to_parent[v]);
        InducedSubgraph part = induced_subgraph(g, host);
        const Graph& h = part.graph;
        Coloring base(h.order());
        for (Vertex v = 0; v < h.order(); ++v) base.state[v] = c.state[part.to_parent[v]];
        for (const Edge& e : h.edges())
            if (c.is_excluded(part.lift(e))) base.excluded.insert(e);
        const EdgeSet c4 = c4_edges(h);
        std::uint64_t added = 0;
        for (const Edge& e : c4) added += base.excluded.insert(e).second;
        out.trace.add(Rule::C4EdgeExcluded, added);

        SolveOutcome res = solve_component(h, base, opts, stats, s114_free);
        if (res.verdict == Verdict::ClassViolation) {
            if (res.witness)
                for (Vertex& v : res.witness->vertices) v = part.to_parent[v];
            if (res.anchor) res.anchor = part.lift(*res.anchor);
            return res;
        }
        if (res.verdict != Verdict::Found) {
            out.reason = res.reason;
            out.trace.merge(res.trace);
            return out;
        }
        out.trace.merge(res.trace);
        for (const Edge& e : res.matching) matching.insert(part.lift(e));
    }
    if (!is_dim(g, matching)) throw std::logic_error("solve: assembled matching is not a d.i.m.");
    out.verdict = Verdict::Found;
    out.matching = std::move(matching);
    out.weight = g.weight(out.matching);
    out.reason.clear();
    return out;
}

}  // namespace dim

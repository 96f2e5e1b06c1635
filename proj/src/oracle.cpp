#include "dim/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace dim {

namespace {

constexpr Vertex kUnknown = -2;
constexpr Vertex kFree = -1;

// Search over a compact graph: local ids, per-edge permission flags and
// per-vertex requirements translated from the precoloring.
class Backtracker {
public:
    Backtracker(const Graph& g, std::vector<char> allowed, std::vector<Vertex> start,
                std::vector<char> must_match, OracleMode mode, std::size_t cap)
        : g_(g),
          allowed_(std::move(allowed)),
          must_match_(std::move(must_match)),
          mode_(mode),
          cap_(cap),
          start_(std::move(start)) {}

    void run(OracleResult& out) {
        auto mate = start_;
        if (consistent(mate)) search(mate, 0.0, 0);
        out.nodes += nodes_;
        if (mode_ == OracleMode::Enumerate) {
            std::sort(found_.begin(), found_.end());
            out.truncated = out.truncated || truncated_;
        }
    }

    bool feasible() const { return have_best_; }
    double best_weight() const { return best_weight_; }
    const std::vector<Edge>& best() const { return best_; }
    std::vector<std::vector<Edge>>& found() { return found_; }

private:
    bool allowed(Vertex a, Vertex b) const { return allowed_[edge_index(a, b)]; }

    std::size_t edge_index(Vertex a, Vertex b) const {
        const auto& es = g_.edges();
        return static_cast<std::size_t>(std::lower_bound(es.begin(), es.end(), Edge{a, b}) - es.begin());
    }

    // Forward check: a free vertex forces its neighbors to be matched, so
    // every such neighbor and every Black-required vertex still needs a
    // possible partner.
    bool consistent(const std::vector<Vertex>& mate) const {
        for (Vertex v = 0; v < g_.order(); ++v) {
            if (mate[v] != kUnknown) continue;
            bool needs = must_match_[v];
            if (!needs) {
                for (Vertex q : g_.neighbors(v))
                    if (mate[q] == kFree) {
                        needs = true;
                        break;
                    }
            }
            if (!needs) continue;
            bool partner = false;
            for (Vertex q : g_.neighbors(v))
                if (mate[q] == kUnknown && allowed(v, q)) {
                    partner = true;
                    break;
                }
            if (!partner) return false;
        }
        return true;
    }

    bool set_free(std::vector<Vertex>& mate, Vertex v) const {
        if (mate[v] == kFree) return true;
        if (mate[v] != kUnknown || must_match_[v]) return false;
        for (Vertex q : g_.neighbors(v))
            if (mate[q] == kFree) return false;
        mate[v] = kFree;
        return true;
    }

    bool set_pair(std::vector<Vertex>& mate, Vertex a, Vertex b) const {
        if (mate[a] != kUnknown || mate[b] != kUnknown || !allowed(a, b)) return false;
        mate[a] = b;
        mate[b] = a;
        for (Vertex end : {a, b})
            for (Vertex q : g_.neighbors(end)) {
                if (q == a || q == b) continue;
                if (!set_free(mate, q)) return false;
            }
        return true;
    }

    std::size_t next_open_edge(const std::vector<Vertex>& mate, std::size_t from) const {
        const auto& es = g_.edges();
        for (std::size_t i = from; i < es.size(); ++i)
            if (mate[es[i].u] < 0 && mate[es[i].v] < 0) return i;
        return es.size();
    }

    double weight_of(Vertex a, Vertex b) const { return g_.weight(Edge{a, b}); }

    bool done() const {
        if (mode_ == OracleMode::Exists) return have_best_;
        if (mode_ == OracleMode::Enumerate) return truncated_;
        return false;
    }

    void search(std::vector<Vertex>& mate, double weight, std::size_t from) {
        ++nodes_;
        if (done()) return;
        if (mode_ == OracleMode::MinWeight && have_best_ && weight >= best_weight_) return;
        const std::size_t i = next_open_edge(mate, from);
        if (i == g_.edges().size()) {
            record(mate, weight);
            return;
        }
        const Edge e = g_.edges()[i];
        {
            auto next = mate;
            if (set_pair(next, e.u, e.v) && consistent(next))
                search(next, weight + weight_of(e.u, e.v), i + 1);
        }
        for (int side = 0; side < 2 && !done(); ++side) {
            const Vertex a = side == 0 ? e.u : e.v;
            const Vertex b = e.other(a);
            for (Vertex w : g_.neighbors(a)) {
                if (w == b || done()) continue;
                auto next = mate;
                if (set_free(next, b) && set_pair(next, a, w) && consistent(next))
                    search(next, weight + weight_of(a, w), i + 1);
            }
        }
    }

    void record(const std::vector<Vertex>& mate, double weight) {
        // Unknown vertices left here have every edge dominated by a neighbor.
        for (Vertex v = 0; v < g_.order(); ++v)
            if (mate[v] == kUnknown && must_match_[v]) return;
        std::vector<Edge> m;
        for (Vertex v = 0; v < g_.order(); ++v)
            if (mate[v] > v) m.emplace_back(v, mate[v]);
        if (mode_ == OracleMode::Enumerate) {
            if (found_.size() >= cap_) {
                truncated_ = true;
                return;
            }
            found_.push_back(m);
        }
        if (!have_best_ || weight < best_weight_) {
            have_best_ = true;
            best_weight_ = weight;
            best_ = std::move(m);
        }
    }

    const Graph& g_;
    std::vector<char> allowed_;
    std::vector<char> must_match_;
    OracleMode mode_;
    std::size_t cap_;
    std::vector<Vertex> start_;

    std::uint64_t nodes_ = 0;
    bool have_best_ = false;
    bool truncated_ = false;
    double best_weight_ = 0.0;
    std::vector<Edge> best_;
    std::vector<std::vector<Edge>> found_;
};

struct Instance {
    InducedSubgraph sub;
    std::vector<char> allowed;
    std::vector<Vertex> start;
    std::vector<char> must_match;
};

Instance make_instance(const Graph& g, const Coloring* pre, std::span<const Vertex> vertices) {
    Instance in;
    in.sub = induced_subgraph(g, vertices);
    const Graph& h = in.sub.graph;
    in.allowed.assign(h.size(), 1);
    in.start.assign(static_cast<std::size_t>(h.order()), kUnknown);
    in.must_match.assign(static_cast<std::size_t>(h.order()), 0);
    if (pre) {
        for (std::size_t i = 0; i < h.size(); ++i)
            if (pre->is_excluded(in.sub.lift(h.edges()[i]))) in.allowed[i] = 0;
        for (Vertex v = 0; v < h.order(); ++v) {
            const Color col = pre->state[in.sub.to_parent[v]];
            if (col == Color::White) in.start[v] = kFree;
            if (col == Color::Black) in.must_match[v] = 1;
        }
    }
    return in;
}

std::vector<Vertex> present_vertices(const Graph& g, const Coloring* pre) {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < g.order(); ++v)
        if (!pre || !pre->removed[v]) out.push_back(v);
    return out;
}

bool white_conflict(const Instance& in) {
    for (const Edge& e : in.sub.graph.edges())
        if (in.start[e.u] == kFree && in.start[e.v] == kFree) return true;
    return false;
}

}  // namespace

OracleResult oracle_solve(const Graph& g, OracleMode mode, const Coloring* pre, std::size_t cap) {
    if (pre && pre->order() != g.order()) throw std::invalid_argument("precoloring size mismatch");
    OracleResult out;
    const auto present = present_vertices(g, pre);

    if (mode == OracleMode::Enumerate) {
        Instance in = make_instance(g, pre, present);
        if (white_conflict(in)) {
            out.all_dims.emplace();
            return out;
        }
        Backtracker bt(in.sub.graph, in.allowed, in.start, in.must_match, mode, cap);
        bt.run(out);
        out.all_dims.emplace();
        for (const auto& m : bt.found()) {
            EdgeSet lifted;
            for (const Edge& e : m) lifted.insert(in.sub.lift(e));
            out.all_dims->push_back(std::move(lifted));
        }
        std::sort(out.all_dims->begin(), out.all_dims->end());
        out.feasible = !out.all_dims->empty();
        if (out.feasible) {
            const auto lightest = std::min_element(
                out.all_dims->begin(), out.all_dims->end(),
                [&](const EdgeSet& a, const EdgeSet& b) { return g.weight(a) < g.weight(b); });
            out.best = *lightest;
        }
        return out;
    }

    // Exists and MinWeight decompose over the components of the present graph.
    InducedSubgraph whole = induced_subgraph(g, present);
    EdgeSet total;
    for (const VertexSet& comp : connected_components(whole.graph)) {
        std::vector<Vertex> host;
        for (Vertex v : comp) host.push_back(whole.to_parent[v]);
        Instance in = make_instance(g, pre, host);
        if (white_conflict(in)) return out;
        Backtracker bt(in.sub.graph, in.allowed, in.start, in.must_match, mode, cap);
        bt.run(out);
        if (!bt.feasible()) return out;
        for (const Edge& e : bt.best()) total.insert(in.sub.lift(e));
    }
    out.feasible = true;
    out.best = std::move(total);
    return out;
}

EdgeSet oracle_forced_edges(const Graph& g) {
    auto all = oracle_solve(g, OracleMode::Enumerate);
    if (!all.feasible) return {};
    EdgeSet common = all.all_dims->front();
    for (const auto& m : *all.all_dims) {
        EdgeSet keep;
        std::set_intersection(common.begin(), common.end(), m.begin(), m.end(),
                              std::inserter(keep, keep.end()));
        common.swap(keep);
    }
    return common;
}

std::vector<EdgeSet> subset_scan(const Graph& g) {
    const auto& es = g.edges();
    if (es.size() > 24) throw std::invalid_argument("subset_scan: too many edges");
    std::vector<EdgeSet> out;
    const std::size_t m = es.size();
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
        std::vector<int> owner(static_cast<std::size_t>(g.order()), -1);
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) {
            if (!((mask >> i) & 1U)) continue;
            if (owner[es[i].u] >= 0 || owner[es[i].v] >= 0) ok = false;
            owner[es[i].u] = owner[es[i].v] = static_cast<int>(i);
        }
        // Each edge must meet exactly one chosen edge.
        for (std::size_t i = 0; i < m && ok; ++i) {
            const int a = owner[es[i].u];
            const int b = owner[es[i].v];
            int meets = (a >= 0) + (b >= 0);
            if (a >= 0 && a == b) meets = 1;
            if (meets != 1) ok = false;
        }
        if (!ok) continue;
        EdgeSet chosen;
        for (std::size_t i = 0; i < m; ++i)
            if ((mask >> i) & 1U) chosen.insert(es[i]);
        out.push_back(std::move(chosen));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<EdgeSet> coloring_scan(const Graph& g) {
    const Vertex n = g.order();
    if (n > 24) throw std::invalid_argument("coloring_scan: too many vertices");
    std::vector<EdgeSet> out;
    for (std::uint32_t black = 0; black < (std::uint32_t{1} << n); ++black) {
        bool ok = true;
        for (const Edge& e : g.edges())
            if (!((black >> e.u) & 1U) && !((black >> e.v) & 1U)) {
                ok = false;
                break;
            }
        for (Vertex v = 0; v < n && ok; ++v) {
            if (!((black >> v) & 1U)) continue;
            int count = 0;
            for (Vertex q : g.neighbors(v)) count += (black >> q) & 1U;
            if (count != 1) ok = false;
        }
        if (!ok) continue;
        EdgeSet m;
        for (const Edge& e : g.edges())
            if (((black >> e.u) & 1U) && ((black >> e.v) & 1U)) m.insert(e);
        out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Graph enumeration

namespace {

using Adj = std::vector<std::uint32_t>;  // bit rows, n <= 11

Adj rows_of(const Graph& g) {
    Adj rows(static_cast<std::size_t>(g.order()), 0);
    for (const Edge& e : g.edges()) {
        rows[e.u] |= 1U << e.v;
        rows[e.v] |= 1U << e.u;
    }
    return rows;
}

Graph graph_of(const Adj& rows) {
    std::vector<Edge> edges;
    const int n = static_cast<int>(rows.size());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if ((rows[a] >> b) & 1U) edges.emplace_back(a, b);
    return Graph(n, edges);
}

bool rows_connected(const Adj& rows) {
    const int n = static_cast<int>(rows.size());
    if (n == 0) return true;
    std::uint32_t seen = 1;
    std::uint32_t frontier = 1;
    while (frontier) {
        std::uint32_t next = 0;
        for (int v = 0; v < n; ++v)
            if ((frontier >> v) & 1U) next |= rows[v];
        frontier = next & ~seen;
        seen |= next;
    }
    return seen == (n == 32 ? ~0U : (1U << n) - 1);
}

// Equitable refinement: colors are ranks of (color, sorted neighbor colors).
void refine(const Adj& rows, std::vector<int>& color) {
    const int n = static_cast<int>(rows.size());
    int classes = static_cast<int>(std::set<int>(color.begin(), color.end()).size());
    while (true) {
        std::vector<std::pair<std::vector<int>, int>> sig(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            std::vector<int> s{color[v]};
            std::vector<int> around;
            for (int q = 0; q < n; ++q)
                if ((rows[v] >> q) & 1U) around.push_back(color[q]);
            std::sort(around.begin(), around.end());
            s.insert(s.end(), around.begin(), around.end());
            sig[v] = {std::move(s), v};
        }
        std::vector<std::vector<int>> keys;
        for (auto& s : sig) keys.push_back(s.first);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (int v = 0; v < n; ++v)
            color[v] = static_cast<int>(std::lower_bound(keys.begin(), keys.end(), sig[v].first) -
                                        keys.begin());
        const int now = static_cast<int>(keys.size());
        if (now == classes) return;
        classes = now;
    }
}

std::uint64_t certificate_for(const Adj& rows, const std::vector<int>& color) {
    const int n = static_cast<int>(rows.size());
    std::vector<int> at(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) at[color[v]] = v;
    std::uint64_t bits = 0;
    int pos = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b, ++pos)
            if ((rows[at[a]] >> at[b]) & 1U) bits |= std::uint64_t{1} << pos;
    return bits;
}

void search_certificate(const Adj& rows, std::vector<int> color, std::uint64_t& best, bool& have) {
    refine(rows, color);
    const int n = static_cast<int>(rows.size());
    std::vector<int> size(static_cast<std::size_t>(n), 0);
    for (int c : color) ++size[c];
    int target = -1;
    for (int c = 0; c < n; ++c)
        if (size[c] > 1) {
            target = c;
            break;
        }
    if (target < 0) {
        const std::uint64_t cert = certificate_for(rows, color);
        if (!have || cert < best) best = cert;
        have = true;
        return;
    }
    for (int v = 0; v < n; ++v) {
        if (color[v] != target) continue;
        std::vector<int> next(color.size());
        for (int q = 0; q < n; ++q) next[q] = 2 * color[q] + (q == v ? 0 : 1);
        search_certificate(rows, std::move(next), best, have);
    }
}

std::uint64_t certificate_rows(const Adj& rows) {
    std::vector<int> color(rows.size(), 0);
    std::uint64_t best = 0;
    bool have = false;
    search_certificate(rows, std::move(color), best, have);
    // Distinguish orders so that graphs of different size never collide.
    return best ^ (static_cast<std::uint64_t>(rows.size()) << 58);
}

}  // namespace

std::uint64_t canonical_certificate(const Graph& g) {
    if (g.order() > 11) throw std::invalid_argument("canonical_certificate: at most 11 vertices");
    return certificate_rows(rows_of(g));
}

std::uint64_t enumerate_all_graphs(int n, const std::function<bool(const Graph&)>& predicate,
                                   EnumerationMode mode,
                                   const std::function<void(const Graph&)>& visit) {
    if (n < 1) throw std::invalid_argument("enumerate_all_graphs: n must be positive");
    const int cap = mode == EnumerationMode::Labeled ? kLabeledCap : kCanonicalCap;
    if (n > cap) throw std::invalid_argument("enumerate_all_graphs: n exceeds the cap");

    std::uint64_t count = 0;
    auto offer = [&](const Adj& rows) {
        Graph g = graph_of(rows);
        if (predicate && !predicate(g)) return;
        ++count;
        visit(g);
    };

    if (mode == EnumerationMode::Labeled) {
        std::vector<std::pair<int, int>> pairs;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
        const std::uint64_t total = std::uint64_t{1} << pairs.size();
        Adj rows(static_cast<std::size_t>(n));
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            std::fill(rows.begin(), rows.end(), 0U);
            for (std::size_t i = 0; i < pairs.size(); ++i)
                if ((mask >> i) & 1U) {
                    rows[pairs[i].first] |= 1U << pairs[i].second;
                    rows[pairs[i].second] |= 1U << pairs[i].first;
                }
            if (rows_connected(rows)) offer(rows);
        }
        return count;
    }

    // Every connected graph has a vertex whose deletion leaves it connected,
    // so extending connected graphs by one vertex reaches every class.
    std::vector<Adj> layer{Adj{0U}};
    for (int size = 2; size <= n; ++size) {
        std::vector<Adj> next;
        std::unordered_set<std::uint64_t> seen;
        for (const Adj& base : layer) {
            for (std::uint32_t attach = 1; attach < (1U << (size - 1)); ++attach) {
                Adj rows = base;
                rows.push_back(attach);
                for (int v = 0; v < size - 1; ++v)
                    if ((attach >> v) & 1U) rows[v] |= 1U << (size - 1);
                if (seen.insert(certificate_rows(rows)).second) next.push_back(std::move(rows));
            }
        }
        layer = std::move(next);
    }
    for (const Adj& rows : layer) offer(rows);
    return count;
}

}  // namespace dim

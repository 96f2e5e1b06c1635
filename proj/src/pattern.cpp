#include "dim/pattern.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace dim {

std::string PatternWitness::name() const {
    switch (pattern) {
        case Pattern::K4: return "K4";
        case Pattern::Diamond: return "diamond";
        case Pattern::Butterfly: return "butterfly";
        case Pattern::Gem: return "gem";
        case Pattern::C4: return "C4";
        case Pattern::Spider:
            return "S_{" + std::to_string(legs[0]) + "," + std::to_string(legs[1]) + "," +
                   std::to_string(legs[2]) + "}";
    }
    return "?";
}

Edge PatternWitness::mid_edge() const {
    if (pattern != Pattern::Diamond) throw std::logic_error("mid_edge of a non-diamond");
    return {vertices[3], vertices[1]};
}

std::vector<Edge> PatternWitness::peripheral_edges() const {
    if (pattern != Pattern::Butterfly) throw std::logic_error("peripheral_edges of a non-butterfly");
    return {Edge{vertices[0], vertices[1]}, Edge{vertices[2], vertices[3]}};
}

std::vector<Edge> PatternWitness::pattern_edges() const {
    const auto& v = vertices;
    switch (pattern) {
        case Pattern::K4:
            return {{v[0], v[1]}, {v[0], v[2]}, {v[0], v[3]}, {v[1], v[2]}, {v[1], v[3]}, {v[2], v[3]}};
        case Pattern::Diamond:
            return {{v[0], v[1]}, {v[1], v[2]}, {v[3], v[0]}, {v[3], v[1]}, {v[3], v[2]}};
        case Pattern::Butterfly:
            return {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[0]}, {v[4], v[1]}, {v[4], v[2]}, {v[4], v[3]}};
        case Pattern::Gem:
            return {{v[0], v[1]}, {v[1], v[2]}, {v[2], v[3]},
                    {v[4], v[0]}, {v[4], v[1]}, {v[4], v[2]}, {v[4], v[3]}};
        case Pattern::C4:
            return {{v[0], v[1]}, {v[1], v[2]}, {v[2], v[3]}, {v[3], v[0]}};
        case Pattern::Spider: {
            std::vector<Edge> out;
            std::size_t pos = 1;
            for (int leg : legs) {
                Vertex prev = v[0];
                for (int s = 0; s < leg; ++s, ++pos) {
                    out.emplace_back(prev, v[pos]);
                    prev = v[pos];
                }
            }
            return out;
        }
    }
    return {};
}

bool verify_witness(const Graph& g, const PatternWitness& w) {
    std::vector<Vertex> sorted = w.vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (Vertex v : sorted)
        if (v < 0 || v >= g.order()) return false;
    std::set<Edge> expected;
    for (const Edge& e : w.pattern_edges()) expected.insert(e);
    for (std::size_t a = 0; a < w.vertices.size(); ++a)
        for (std::size_t b = a + 1; b < w.vertices.size(); ++b) {
            Edge e{w.vertices[a], w.vertices[b]};
            if (g.has_edge(e) != (expected.count(e) > 0)) return false;
        }
    return true;
}

namespace {

std::vector<Vertex> common_neighbors(const Graph& g, Vertex a, Vertex b) {
    std::vector<Vertex> out;
    auto na = g.neighbors(a);
    auto nb = g.neighbors(b);
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(out));
    return out;
}

}  // namespace

std::optional<PatternWitness> find_k4(const Graph& g) {
    for (const Edge& e : g.edges()) {
        auto common = common_neighbors(g, e.u, e.v);
        for (std::size_t i = 0; i < common.size(); ++i)
            for (std::size_t j = i + 1; j < common.size(); ++j)
                if (g.adjacent(common[i], common[j]))
                    return PatternWitness{Pattern::K4, {e.u, e.v, common[i], common[j]}};
    }
    return std::nullopt;
}

std::optional<PatternWitness> find_gem(const Graph& g) {
    for (Vertex u = 0; u < g.order(); ++u) {
        auto nu = g.neighbors(u);
        for (Vertex b : nu)
            for (Vertex c : nu) {
                if (c == b || !g.adjacent(b, c)) continue;
                for (Vertex a : nu) {
                    if (a == b || a == c || !g.adjacent(a, b) || g.adjacent(a, c)) continue;
                    for (Vertex d : nu) {
                        if (d == a || d == b || d == c) continue;
                        if (g.adjacent(d, c) && !g.adjacent(d, b) && !g.adjacent(d, a))
                            return PatternWitness{Pattern::Gem, {a, b, c, d, u}};
                    }
                }
            }
    }
    return std::nullopt;
}

std::vector<PatternWitness> find_all_diamonds(const Graph& g) {
    std::vector<PatternWitness> out;
    for (const Edge& mid : g.edges()) {
        auto common = common_neighbors(g, mid.u, mid.v);
        for (std::size_t i = 0; i < common.size(); ++i)
            for (std::size_t j = i + 1; j < common.size(); ++j)
                if (!g.adjacent(common[i], common[j]))
                    out.push_back({Pattern::Diamond, {common[i], mid.u, common[j], mid.v}});
    }
    return out;
}

std::vector<PatternWitness> find_all_butterflies(const Graph& g) {
    std::vector<PatternWitness> out;
    std::vector<Edge> inner;
    for (Vertex u = 0; u < g.order(); ++u) {
        auto nu = g.neighbors(u);
        inner.clear();
        for (std::size_t i = 0; i < nu.size(); ++i)
            for (std::size_t j = i + 1; j < nu.size(); ++j)
                if (g.adjacent(nu[i], nu[j])) inner.emplace_back(nu[i], nu[j]);
        for (std::size_t i = 0; i < inner.size(); ++i)
            for (std::size_t j = i + 1; j < inner.size(); ++j) {
                const Edge a = inner[i];
                const Edge b = inner[j];
                if (a.contains(b.u) || a.contains(b.v)) continue;
                if (g.adjacent(a.u, b.u) || g.adjacent(a.u, b.v) || g.adjacent(a.v, b.u) ||
                    g.adjacent(a.v, b.v))
                    continue;
                out.push_back({Pattern::Butterfly, {a.u, a.v, b.u, b.v, u}});
            }
    }
    return out;
}

namespace {

class SpiderSearch {
public:
    SpiderSearch(const Graph& g, std::array<int, 3> legs) : g_(g), requested_(legs) {
        order_ = {0, 1, 2};
        std::stable_sort(order_.begin(), order_.end(),
                         [&](int a, int b) { return requested_[a] > requested_[b]; });
        for (int i = 0; i < 3; ++i) sorted_[i] = requested_[order_[i]];
        used_.assign(static_cast<std::size_t>(g.order()), 0);
    }

    std::optional<PatternWitness> run() {
        const int total = sorted_[0] + sorted_[1] + sorted_[2] + 1;
        if (g_.order() < total) return std::nullopt;
        const int branches = (sorted_[0] > 0) + (sorted_[1] > 0) + (sorted_[2] > 0);
        for (Vertex c = 0; c < g_.order(); ++c) {
            if (g_.degree(c) < branches) continue;
            center_ = c;
            chosen_ = {c};
            used_[c] = 1;
            for (auto& p : paths_) p.clear();
            const bool found = extend(0);
            used_[c] = 0;
            if (found) return witness();
        }
        return std::nullopt;
    }

private:
    bool extend(int leg) {
        if (leg == 3) return true;
        auto& path = paths_[leg];
        if (static_cast<int>(path.size()) == sorted_[leg]) return extend(leg + 1);
        const Vertex prev = path.empty() ? center_ : path.back();
        for (Vertex w : g_.neighbors(prev)) {
            if (used_[w]) continue;
            // Equal-length legs are generated with increasing first vertices.
            if (path.empty() && leg > 0 && sorted_[leg] == sorted_[leg - 1] &&
                w < paths_[leg - 1].front())
                continue;
            bool clean = true;
            for (Vertex c : chosen_) {
                if (c != prev && g_.adjacent(w, c)) {
                    clean = false;
                    break;
                }
            }
            if (!clean) continue;
            used_[w] = 1;
            chosen_.push_back(w);
            path.push_back(w);
            if (extend(leg)) {
                used_[w] = 0;  // keep `used_` clean for the caller
                return true;
            }
            path.pop_back();
            chosen_.pop_back();
            used_[w] = 0;
        }
        return false;
    }

    PatternWitness witness() const {
        PatternWitness w;
        w.pattern = Pattern::Spider;
        w.vertices.push_back(center_);
        for (int want = 0; want < 3; ++want) {
            w.legs[want] = requested_[want];
            for (int i = 0; i < 3; ++i) {
                if (order_[i] == want) {
                    w.vertices.insert(w.vertices.end(), paths_[i].begin(), paths_[i].end());
                }
            }
        }
        return w;
    }

    const Graph& g_;
    std::array<int, 3> requested_;
    std::array<int, 3> order_{};
    std::array<int, 3> sorted_{};
    std::array<std::vector<Vertex>, 3> paths_;
    std::vector<Vertex> chosen_;
    std::vector<char> used_;
    Vertex center_ = 0;
};

}  // namespace

std::optional<PatternWitness> find_induced_sijk(const Graph& g, int i, int j, int k) {
    if (i < 0 || j < 0 || k < 0) throw std::invalid_argument("spider legs must be non-negative");
    auto found = SpiderSearch(g, {i, j, k}).run();
    return found;
}

EdgeSet forced_edges_initial(const Graph& g) {
    EdgeSet out;
    for (const auto& d : find_all_diamonds(g)) out.insert(d.mid_edge());
    for (const auto& b : find_all_butterflies(g))
        for (const Edge& e : b.peripheral_edges()) out.insert(e);
    return out;
}

std::optional<PatternWitness> find_c4_through(const Graph& g, Edge e) {
    // Cycle u - v - w - x - u with u = e.u, v = e.v.
    for (Vertex w : g.neighbors(e.v)) {
        if (w == e.u || g.adjacent(w, e.u)) continue;
        for (Vertex x : g.neighbors(w)) {
            if (x == e.v || g.adjacent(x, e.v) || !g.adjacent(x, e.u)) continue;
            return PatternWitness{Pattern::C4, {e.u, e.v, w, x}};
        }
    }
    return std::nullopt;
}

EdgeSet c4_edges(const Graph& g) {
    EdgeSet out;
    for (const Edge& e : g.edges()) {
        if (out.count(e)) continue;
        if (auto c = find_c4_through(g, e)) {
            for (const Edge& f : c->pattern_edges()) out.insert(f);
        }
    }
    return out;
}

}  // namespace dim

#include "dim/generate.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace dim {

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: empty range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("Rng::between: empty range");
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

ClassFilter ClassFilter::spider(int i, int j, int k) {
    ClassFilter f;
    f.pattern = Pattern::Spider;
    f.legs[0] = i;
    f.legs[1] = j;
    f.legs[2] = k;
    return f;
}

ClassFilter ClassFilter::of(Pattern p) {
    ClassFilter f;
    f.pattern = p;
    return f;
}

std::string ClassFilter::name() const {
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

std::vector<ClassFilter> default_filters() {
    return {ClassFilter::spider(1, 2, 4), ClassFilter::of(Pattern::K4)};
}

std::optional<PatternWitness> find_filter(const Graph& g, const ClassFilter& f) {
    switch (f.pattern) {
        case Pattern::K4: return find_k4(g);
        case Pattern::Gem: return find_gem(g);
        case Pattern::Diamond: {
            auto all = find_all_diamonds(g);
            if (all.empty()) return std::nullopt;
            return all.front();
        }
        case Pattern::Butterfly: {
            auto all = find_all_butterflies(g);
            if (all.empty()) return std::nullopt;
            return all.front();
        }
        case Pattern::C4:
            for (const Edge& e : g.edges())
                if (auto w = find_c4_through(g, e)) return w;
            return std::nullopt;
        case Pattern::Spider: return find_induced_sijk(g, f.legs[0], f.legs[1], f.legs[2]);
    }
    return std::nullopt;
}

std::optional<PatternWitness> first_violation(const Graph& g, const std::vector<ClassFilter>& filters) {
    for (const auto& f : filters)
        if (auto w = find_filter(g, f)) return w;
    return std::nullopt;
}

namespace {

struct Piece {
    std::vector<Edge> edges;
    std::vector<Edge> matching;
};

Piece draw_piece(Vertex s, double density, Rng& rng) {
    Piece piece;
    if (s < 2) return piece;
    const Vertex pairs = static_cast<Vertex>(rng.between(1, std::max<Vertex>(1, (s + 1) / 3)));
    const Vertex first_white = 2 * pairs;
    for (Vertex i = 0; i < pairs; ++i) piece.matching.emplace_back(2 * i, 2 * i + 1);
    std::set<Edge> edges(piece.matching.begin(), piece.matching.end());
    for (Vertex w = first_white; w < s; ++w) {
        edges.insert(Edge{w, static_cast<Vertex>(rng.below(first_white))});
        for (Vertex b = 0; b < first_white; ++b)
            if (rng.chance(density)) edges.insert(Edge{w, b});
    }

    std::vector<Vertex> parent(s);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Vertex v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const Edge& e : edges) parent[find(e.u)] = find(e.v);
    while (true) {
        std::vector<Vertex> roots;
        for (Vertex v = 0; v < s; ++v)
            if (find(v) == v) roots.push_back(v);
        if (roots.size() <= 1) break;
        // A white vertex sits in some component; join it to a black vertex elsewhere.
        Vertex w = first_white + static_cast<Vertex>(rng.below(s - first_white));
        std::vector<Vertex> blacks;
        for (Vertex b = 0; b < first_white; ++b)
            if (find(b) != find(w)) blacks.push_back(b);
        const Vertex b = blacks[rng.below(blacks.size())];
        edges.insert(Edge{w, b});
        parent[find(w)] = find(b);
    }
    piece.edges.assign(edges.begin(), edges.end());
    return piece;
}

std::vector<Vertex> piece_sizes(Vertex n, Vertex cluster, Rng& rng) {
    std::vector<Vertex> sizes;
    const Vertex hi = std::max<Vertex>(2, cluster);
    const Vertex lo = std::max<Vertex>(2, hi / 2);
    Vertex rest = n;
    while (rest > 0) {
        Vertex s;
        if (rest <= hi) {
            s = rest;
        } else {
            s = static_cast<Vertex>(rng.between(lo, std::min<Vertex>(hi, rest - 2)));
        }
        sizes.push_back(s);
        rest -= s;
    }
    return sizes;
}

std::vector<double> draw_weights(std::size_t m, int max_weight, Rng& rng) {
    std::vector<double> w;
    if (max_weight <= 0) return w;
    for (std::size_t i = 0; i < m; ++i) w.push_back(static_cast<double>(rng.between(1, max_weight)));
    return w;
}

int parse_int(const std::string& s, std::size_t pos, std::size_t* end) {
    std::size_t i = pos;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == pos) throw std::invalid_argument("gadget: expected a number in '" + s + "'");
    *end = i;
    return std::stoi(s.substr(pos, i - pos));
}

Graph make(Vertex n, const std::vector<Edge>& edges) { return Graph(n, edges); }

}  // namespace

PlantedInstance generate_planted(const GenSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("generate_planted: need at least two vertices");
    Rng rng(spec.seed);
    std::vector<Edge> edges;
    std::vector<Edge> matching;
    Vertex offset = 0;
    for (Vertex s : piece_sizes(spec.n, spec.cluster, rng)) {
        Piece piece;
        bool clean = false;
        for (int attempt = 0; attempt < spec.retry_budget && !clean; ++attempt) {
            piece = draw_piece(s, spec.density, rng);
            clean = !first_violation(make(s, piece.edges), spec.filters);
        }
        if (!clean) throw GenError("generate_planted: retry budget exhausted");
        for (const Edge& e : piece.edges) edges.emplace_back(e.u + offset, e.v + offset);
        for (const Edge& e : piece.matching) matching.emplace_back(e.u + offset, e.v + offset);
        offset += s;
    }

    std::vector<Vertex> label(spec.n);
    std::iota(label.begin(), label.end(), 0);
    rng.shuffle(label);
    std::set<Edge> relabeled;
    for (const Edge& e : edges) relabeled.insert(Edge{label[e.u], label[e.v]});
    std::vector<Edge> sorted(relabeled.begin(), relabeled.end());
    auto weights = draw_weights(sorted.size(), spec.max_weight, rng);

    PlantedInstance out{Graph(spec.n, sorted, weights), {}};
    for (const Edge& e : matching) out.matching.insert(Edge{label[e.u], label[e.v]});
    return out;
}

RejectionResult generate_rejection(const GenSpec& spec) {
    Rng rng(spec.seed);
    RejectionResult out;
    for (out.attempts = 1; out.attempts <= spec.retry_budget; ++out.attempts) {
        std::set<Edge> edges;
        for (Vertex u = 0; u < spec.n; ++u)
            for (Vertex v = u + 1; v < spec.n; ++v)
                if (rng.chance(spec.density)) edges.insert(Edge{u, v});
        while (true) {
            Graph g = make(spec.n, std::vector<Edge>(edges.begin(), edges.end()));
            auto w = first_violation(g, spec.filters);
            if (!w) {
                auto weights = draw_weights(g.size(), spec.max_weight, rng);
                out.graph = Graph(spec.n, g.edges(), weights);
                return out;
            }
            if (!spec.repair) break;
            auto candidates = w->pattern_edges();
            edges.erase(candidates[rng.below(candidates.size())]);
            ++out.repairs;
        }
    }
    out.attempts = spec.retry_budget;
    return out;
}

Graph gadget(const std::string& raw) {
    std::string name;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) name += static_cast<char>(std::tolower(ch));
    if (name == "diamond") return make(4, {{0, 1}, {1, 2}, {0, 3}, {1, 3}, {2, 3}});
    if (name == "butterfly") return make(5, {{0, 1}, {2, 3}, {0, 4}, {1, 4}, {2, 4}, {3, 4}});
    if (name == "gem") return make(5, {{0, 1}, {1, 2}, {2, 3}, {0, 4}, {1, 4}, {2, 4}, {3, 4}});
    if (name == "claw") return make(4, {{0, 1}, {0, 2}, {0, 3}});
    if (name == "k4") return make(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    if (name.size() >= 2 && (name[0] == 'c' || name[0] == 'p')) {
        std::size_t end;
        const int k = parse_int(name, 1, &end);
        if (end != name.size()) throw std::invalid_argument("unknown gadget '" + raw + "'");
        std::vector<Edge> edges;
        if (name[0] == 'c') {
            if (k < 3 || k > 12) throw std::invalid_argument("cycle gadget needs 3 <= k <= 12");
            for (int i = 0; i < k; ++i) edges.emplace_back(i, (i + 1) % k);
        } else {
            if (k < 1 || k > 12) throw std::invalid_argument("path gadget needs 1 <= k <= 12");
            for (int i = 0; i + 1 < k; ++i) edges.emplace_back(i, i + 1);
        }
        return make(k, edges);
    }
    if (!name.empty() && name[0] == 's') {
        std::string digits;
        for (char ch : name.substr(1))
            if (std::isdigit(static_cast<unsigned char>(ch))) digits += ch;
            else if (ch != '_' && ch != '{' && ch != '}' && ch != ',')
                throw std::invalid_argument("unknown gadget '" + raw + "'");
        if (digits.size() != 3) throw std::invalid_argument("spider gadget needs three leg lengths");
        const int legs[3] = {digits[0] - '0', digits[1] - '0', digits[2] - '0'};
        if (legs[0] + legs[1] + legs[2] > 8) throw std::invalid_argument("spider gadget needs i+j+k <= 8");
        std::vector<Edge> edges;
        Vertex next = 1;
        for (int leg : legs) {
            Vertex prev = 0;
            for (int i = 0; i < leg; ++i, ++next) {
                edges.emplace_back(prev, next);
                prev = next;
            }
        }
        return make(next, edges);
    }
    throw std::invalid_argument("unknown gadget '" + raw + "'");
}

PlantedInstance generate(const GenSpec& spec) {
    switch (spec.mode) {
        case GenMode::Planted: return generate_planted(spec);
        case GenMode::Rejection: {
            auto r = generate_rejection(spec);
            if (!r.graph) throw GenError("generate_rejection: retry budget exhausted");
            return {std::move(*r.graph), {}};
        }
        case GenMode::Gadget: return {gadget(spec.gadget), {}};
    }
    throw std::invalid_argument("generate: unknown mode");
}

}  // namespace dim

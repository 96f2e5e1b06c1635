#include "dim/io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

namespace dim {

namespace {

long parse_count(const std::string& token, int line, const char* what) {
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size() || value < 0) throw ParseError(std::string("bad ") + what + " '" + token + "'", line);
    return value;
}

double parse_weight(const std::string& token, int line) {
    std::size_t used = 0;
    double value = 0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size() || !(value >= 0)) throw ParseError("bad weight '" + token + "'", line);
    return value;
}

std::ifstream open(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return in;
}

bool skippable(const std::string& line) {
    std::size_t i = line.find_first_not_of(" \t\r");
    return i == std::string::npos || line[i] == 'c';
}

}  // namespace

Graph read_graph(std::istream& in) {
    std::string text;
    int number = 0;
    long n = -1, m = -1;
    std::vector<Edge> edges;
    std::vector<double> weights;
    int weighted_lines = 0;
    while (std::getline(in, text)) {
        ++number;
        if (skippable(text)) continue;
        std::istringstream tokens(text);
        std::vector<std::string> t{std::istream_iterator<std::string>(tokens), {}};
        if (t[0] == "p") {
            if (n >= 0) throw ParseError("second header line", number);
            if (t.size() != 4 || t[1] != "edge") throw ParseError("expected 'p edge <n> <m>'", number);
            n = parse_count(t[2], number, "vertex count");
            m = parse_count(t[3], number, "edge count");
        } else if (t[0] == "e") {
            if (n < 0) throw ParseError("edge before header", number);
            if (t.size() != 3 && t.size() != 4) throw ParseError("expected 'e <u> <v> [w]'", number);
            const long u = parse_count(t[1], number, "vertex");
            const long v = parse_count(t[2], number, "vertex");
            if (u < 1 || v < 1 || u > n || v > n) throw ParseError("vertex out of range", number);
            if (u == v) throw ParseError("self-loop", number);
            edges.emplace_back(static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1));
            if (t.size() == 4) {
                weights.push_back(parse_weight(t[3], number));
                ++weighted_lines;
            } else {
                weights.push_back(1);
            }
        } else {
            throw ParseError("unknown line type '" + t[0] + "'", number);
        }
    }
    if (n < 0) throw ParseError("missing 'p edge' header", 0);
    if (static_cast<long>(edges.size()) != m)
        throw ParseError("header announces " + std::to_string(m) + " edges, found " + std::to_string(edges.size()), 0);
    if (weighted_lines != 0 && weighted_lines != static_cast<int>(edges.size()))
        throw ParseError("some edges carry weights and some do not", 0);
    if (weighted_lines == 0) weights.clear();
    try {
        return Graph(static_cast<Vertex>(n), edges, weights);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 0);
    }
}

Graph read_graph_file(const std::string& path) {
    auto in = open(path);
    return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g, const std::string& comment) {
    if (!comment.empty()) out << "c " << comment << '\n';
    out << "p edge " << g.order() << ' ' << g.size() << '\n';
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const Edge& e = g.edges()[i];
        out << "e " << e.u + 1 << ' ' << e.v + 1;
        if (g.weighted()) out << ' ' << g.weights()[i];
        out << '\n';
    }
}

EdgeSet read_matching(std::istream& in) {
    std::string all{std::istreambuf_iterator<char>(in), {}};
    EdgeSet m;
    const std::size_t first = all.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && all[first] == '{') {
        nlohmann::json report;
        try {
            report = nlohmann::json::parse(all);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad JSON: ") + e.what(), 0);
        }
        if (!report.contains("matching") || !report["matching"].is_array())
            throw ParseError("JSON report has no matching", 0);
        for (const auto& pair : report["matching"]) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
                throw ParseError("matching entries must be integer pairs", 0);
            const long u = pair[0].get<long>(), v = pair[1].get<long>();
            if (u < 1 || v < 1 || u == v) throw ParseError("bad matching pair", 0);
            m.insert(Edge{static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1)});
        }
        return m;
    }
    std::istringstream lines(all);
    std::string text;
    int number = 0;
    while (std::getline(lines, text)) {
        ++number;
        if (skippable(text)) continue;
        std::istringstream tokens(text);
        std::vector<std::string> t{std::istream_iterator<std::string>(tokens), {}};
        if (t.size() != 3 || t[0] != "m") throw ParseError("expected 'm <u> <v>'", number);
        const long u = parse_count(t[1], number, "vertex");
        const long v = parse_count(t[2], number, "vertex");
        if (u < 1 || v < 1 || u == v) throw ParseError("bad matching pair", number);
        m.insert(Edge{static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1)});
    }
    return m;
}

EdgeSet read_matching_file(const std::string& path) {
    auto in = open(path);
    return read_matching(in);
}

void write_matching(std::ostream& out, const EdgeSet& m) {
    for (const Edge& e : m) out << "m " << e.u + 1 << ' ' << e.v + 1 << '\n';
}

}  // namespace dim

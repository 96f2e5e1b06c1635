#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "dim/graph.hpp"

namespace dim {

/// Malformed input; `line` is 1-based, 0 when not tied to a line.
struct ParseError : std::runtime_error {
    int line = 0;
    ParseError(const std::string& what, int at) : std::runtime_error(what), line(at) {}
};

/// Edge-list format: `c` comment lines, one `p edge <n> <m>` header, then m
/// lines `e <u> <v> [w]` with 1-based vertices. Either every edge carries a
/// weight or none does.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g, const std::string& comment = {});

/// Matching as `m <u> <v>` lines (1-based, `c` comments allowed), or a JSON
/// solve report whose "matching" member lists 1-based pairs.
EdgeSet read_matching(std::istream& in);
EdgeSet read_matching_file(const std::string& path);
void write_matching(std::ostream& out, const EdgeSet& m);

}  // namespace dim

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "qcongest/graph.hpp"

namespace qcongest {

// Text format: first line "n m", then m lines "u v w" with 0-based ids.
// JSON format: {"n": n, "m": m, "edges": [{"u":..,"v":..,"w":..}, ...]};
// u/v may alternatively be strings, in which case ids follow sorted name order.

WeightedGraph read_graph_text(std::istream& in);
void write_graph_text(std::ostream& out, const WeightedGraph& g);

WeightedGraph read_graph_json(const std::string& text);
std::string write_graph_json(const WeightedGraph& g);

/// Dispatches on extension: ".json" is JSON, anything else is text.
WeightedGraph load_graph(const std::filesystem::path& path);

}  // namespace qcongest

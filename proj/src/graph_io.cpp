#include "qcongest/graph_io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace qcongest {

WeightedGraph read_graph_text(std::istream& in) {
  long long n = 0, m = 0;
  if (!(in >> n >> m)) throw std::invalid_argument("graph text: expected header \"n m\"");
  if (n <= 0 || m < 0) throw std::invalid_argument("graph text: bad header values");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = 0, v = 0, w = 0;
    if (!(in >> u >> v >> w)) {
      throw std::invalid_argument("graph text: expected " + std::to_string(m) + " edge lines, got " +
                                  std::to_string(i));
    }
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), static_cast<Weight>(w)});
  }
  return WeightedGraph(static_cast<std::size_t>(n), std::move(edges));
}

void write_graph_text(std::ostream& out, const WeightedGraph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

WeightedGraph read_graph_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  const auto& edges_json = doc.at("edges");
  std::vector<Edge> edges;
  const bool named = !edges_json.empty() && edges_json.front().at("u").is_string();
  if (named) {
    std::map<std::string, NodeId> ids;
    for (const auto& e : edges_json) {
      ids.emplace(e.at("u").get<std::string>(), 0);
      ids.emplace(e.at("v").get<std::string>(), 0);
    }
    if (doc.contains("nodes")) {
      for (const auto& name : doc.at("nodes")) ids.emplace(name.get<std::string>(), 0);
    }
    NodeId next = 0;
    for (auto& [name, id] : ids) id = next++;
    for (const auto& e : edges_json) {
      edges.push_back({ids.at(e.at("u").get<std::string>()), ids.at(e.at("v").get<std::string>()),
                       e.at("w").get<Weight>()});
    }
    return WeightedGraph(ids.size(), std::move(edges));
  }
  const auto n = doc.at("n").get<long long>();
  if (n <= 0) throw std::invalid_argument("graph json: n must be positive");
  for (const auto& e : edges_json) {
    edges.push_back({e.at("u").get<NodeId>(), e.at("v").get<NodeId>(), e.at("w").get<Weight>()});
  }
  if (doc.contains("m") && doc.at("m").get<std::size_t>() != edges.size())
    throw std::invalid_argument("graph json: m does not match edge count");
  return WeightedGraph(static_cast<std::size_t>(n), std::move(edges));
}

std::string write_graph_json(const WeightedGraph& g) {
  nlohmann::json doc;
  doc["n"] = g.node_count();
  doc["m"] = g.edge_count();
  auto& edges = doc["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"w", e.w}});
  return doc.dump();
}

WeightedGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path.string());
  if (path.extension() == ".json") {
    std::stringstream buffer;
    buffer << in.rdbuf();
    return read_graph_json(buffer.str());
  }
  return read_graph_text(in);
}

}  // namespace qcongest

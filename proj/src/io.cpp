#include "lazysp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lazysp {

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

nlohmann::json graph_to_json(const ExplicitGraph& graph) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : graph.edges()) edges.push_back({e.id, e.u, e.v, e.length});
  nlohmann::json doc;
  doc["magic"] = kGraphMagic;
  doc["version"] = kGraphVersion;
  doc["vertices"] = std::vector<VertexId>(graph.vertices().begin(), graph.vertices().end());
  doc["edges"] = std::move(edges);
  doc["start"] = graph.start();
  doc["goal"] = graph.goal();
  return doc;
}

ExplicitGraph graph_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("magic").get<std::string>() != kGraphMagic) throw FormatError("not a graph document");
    if (doc.at("version").get<int>() != kGraphVersion)
      throw FormatError("unsupported graph version " + doc.at("version").dump());
    auto vertices = doc.at("vertices").get<std::vector<VertexId>>();
    std::vector<Edge> edges;
    for (const auto& row : doc.at("edges")) {
      if (!row.is_array() || row.size() != 4) throw FormatError("edge rows must be [id, u, v, length]");
      edges.push_back({row[0].get<EdgeId>(), row[1].get<VertexId>(), row[2].get<VertexId>(), row[3].get<double>()});
    }
    return ExplicitGraph(std::move(vertices), std::move(edges), doc.at("start").get<VertexId>(),
                         doc.at("goal").get<VertexId>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed graph document: ") + e.what());
  } catch (const GraphError& e) {
    throw FormatError(std::string("invalid graph: ") + e.what());
  }
}

void save_graph(const ExplicitGraph& graph, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw FormatError("cannot write " + file.string());
  out << graph_to_json(graph).dump(1) << '\n';
}

ExplicitGraph load_graph(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError("cannot read " + file.string());
  try {
    return graph_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(file.string() + ": " + e.what());
  }
}

WorldSet make_world_set(const ExplicitGraph& graph, std::vector<World> worlds) {
  for (const World& w : worlds)
    if (w.size() != graph.edge_count()) throw FormatError("world size does not match graph");
  return {graph.hash(), graph.edge_count(), std::move(worlds)};
}

void write_world_set(std::ostream& out, const WorldSet& set) {
  out << kWorldSetMagic << ' ' << kWorldSetVersion << '\n';
  out << "graph_hash " << hex64(set.graph_hash) << " edges " << set.edge_count << " count " << set.worlds.size()
      << '\n';
  std::string row;
  for (const World& w : set.worlds) {
    row.assign(w.size(), '0');
    for (EdgeId e = 0; e < w.size(); ++e)
      if (w.is_valid(e)) row[e] = '1';
    out << row << '\n';
  }
}

WorldSet read_world_set(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kWorldSetMagic) throw FormatError("not a world-set file");
  if (version != kWorldSetVersion) throw FormatError("unsupported world-set version " + std::to_string(version));
  std::string k1, hash, k2, k3;
  WorldSet set;
  std::size_t count = 0;
  if (!(in >> k1 >> hash >> k2 >> set.edge_count >> k3 >> count) || k1 != "graph_hash" || k2 != "edges" ||
      k3 != "count" || hash.size() != 16)
    throw FormatError("malformed world-set header");
  set.graph_hash = std::stoull(hash, nullptr, 16);
  set.worlds.reserve(count);
  std::string row;
  for (std::size_t i = 0; i < count; ++i) {
    if (!(in >> row)) throw FormatError("world-set truncated at row " + std::to_string(i));
    if (row.size() != set.edge_count) throw FormatError("world row " + std::to_string(i) + " has wrong length");
    World w(set.edge_count);
    for (EdgeId e = 0; e < row.size(); ++e) {
      if (row[e] != '0' && row[e] != '1') throw FormatError("world rows must contain only 0/1");
      w.set(e, row[e] == '1');
    }
    set.worlds.push_back(std::move(w));
  }
  if (in >> row) throw FormatError("world-set has more rows than its header declares");
  return set;
}

void save_world_set(const WorldSet& set, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw FormatError("cannot write " + file.string());
  write_world_set(out, set);
}

WorldSet load_world_set(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError("cannot read " + file.string());
  return read_world_set(in);
}

void check_world_set(const ExplicitGraph& graph, const WorldSet& set) {
  if (set.graph_hash != graph.hash() || set.edge_count != graph.edge_count())
    throw FormatError("graph hash mismatch: world set was generated for graph " + hex64(set.graph_hash) +
                      ", not " + hex64(graph.hash()));
}

}  // namespace lazysp

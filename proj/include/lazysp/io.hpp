#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lazysp/graph.hpp"
#include "lazysp/worlds.hpp"

namespace lazysp {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kGraphMagic = "lazysp-graph";
inline constexpr int kGraphVersion = 1;
inline constexpr const char* kWorldSetMagic = "LAZYSP-WORLDS";
inline constexpr int kWorldSetVersion = 1;

// Graph document:
//   {"magic": "lazysp-graph", "version": 1,
//    "vertices": [0, 1, ...],
//    "edges": [[id, u, v, length], ...],
//    "start": 0, "goal": 1}
// Lengths are written with shortest round-trip precision, so load(save(g)) == g.
nlohmann::json graph_to_json(const ExplicitGraph& graph);
ExplicitGraph graph_from_json(const nlohmann::json& doc);
void save_graph(const ExplicitGraph& graph, const std::filesystem::path& file);
ExplicitGraph load_graph(const std::filesystem::path& file);

// World-set file:
//   LAZYSP-WORLDS 1
//   graph_hash <16 hex digits> edges <|E|> count <N>
//   <N rows of |E| characters '0'/'1', one per edge id>
struct WorldSet {
  std::uint64_t graph_hash = 0;
  std::size_t edge_count = 0;
  std::vector<World> worlds;
};

WorldSet make_world_set(const ExplicitGraph& graph, std::vector<World> worlds);
void write_world_set(std::ostream& out, const WorldSet& set);
WorldSet read_world_set(std::istream& in);
void save_world_set(const WorldSet& set, const std::filesystem::path& file);
WorldSet load_world_set(const std::filesystem::path& file);

/// Throws FormatError unless the world set was generated for `graph`.
void check_world_set(const ExplicitGraph& graph, const WorldSet& set);

std::string hex64(std::uint64_t value);

}  // namespace lazysp

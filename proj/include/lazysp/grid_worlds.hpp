#pragma once

#include <cstdint>
#include <string>

#include "lazysp/worlds.hpp"

namespace lazysp {

enum class ObstacleKind { kOneWall, kTwoWall, kForest, kGate };

ObstacleKind parse_obstacle_kind(const std::string& name);
std::string to_string(ObstacleKind kind);

/// Parameters of the 8-connected grid datasets. Vertex (x, y) has id
/// y * width + x; the start is the left-middle vertex and the goal the
/// right-middle one. Walls sit between two grid columns.
struct GridSpec {
  ObstacleKind kind = ObstacleKind::kOneWall;
  int width = 11;
  int height = 11;

  double wall_position = 0.5;         // fraction of the width (first wall)
  double second_wall_position = 0.75;  // twowall only
  int gap_width = 1;
  double wall_thickness = 0.1;

  int obstacle_count = 8;  // forest
  double radius_min = 0.6;
  double radius_max = 1.2;

  int gate_count = 3;  // gate
  double gate_open_prob = 0.5;

  int max_retries = 1000;
  std::size_t training_count = 200;
};

ExplicitGraph grid_graph(int width, int height);

/// Column c such that the wall lies between columns c and c + 1.
int wall_column(const GridSpec& spec, double position);

/// Samples one world (rejection-sampled until feasible). Throws
/// DistributionError after spec.max_retries infeasible draws.
World sample_grid_world(const ExplicitGraph& graph, const GridSpec& spec, Rng& rng);

/// Grid graph plus a distribution whose training worlds are drawn with `seed`.
Environment grid_world_generator(const GridSpec& spec, std::uint64_t seed);

}  // namespace lazysp

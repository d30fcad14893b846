#include "lazysp/worlds.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace lazysp {

EdgeSet invalid_edges(const World& world) {
  EdgeSet out(world.size());
  for (EdgeId e = 0; e < world.size(); ++e)
    if (!world.is_valid(e)) out.insert(e);
  return out;
}

bool is_feasible(const ExplicitGraph& graph, const World& world) {
  if (world.size() != graph.edge_count()) throw DistributionError("world size does not match graph edge count");
  const auto dist = distances_to_goal(graph, invalid_edges(world));
  return std::isfinite(dist[graph.index_of(graph.start())]);
}

WorldDistribution::WorldDistribution(Sampler sampler, std::vector<World> training_worlds,
                                     std::optional<std::vector<SupportPoint>> support)
    : sampler_(std::move(sampler)), training_(std::move(training_worlds)), support_(std::move(support)) {
  if (support_) {
    double total = 0.0;
    for (const auto& p : *support_) {
      if (p.probability < 0.0) throw DistributionError("negative support probability");
      total += p.probability;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw DistributionError("support probabilities must sum to 1");
  }
}

std::span<const SupportPoint> WorldDistribution::support() const {
  if (!support_) throw DistributionError("distribution has no exact support");
  return *support_;
}

WorldDistribution WorldDistribution::from_support(std::vector<SupportPoint> support, std::size_t training_count,
                                                  std::uint64_t training_seed) {
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& p : support) cumulative.push_back(acc += p.probability);
  auto worlds = std::make_shared<std::vector<World>>();
  for (const auto& p : support) worlds->push_back(p.world);

  Sampler sampler = [cumulative, worlds](Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, cumulative.back());
    const double x = u(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), worlds->size() - 1);
    return (*worlds)[idx];
  };

  Rng rng(training_seed);
  std::vector<World> training;
  training.reserve(training_count);
  for (std::size_t i = 0; i < training_count; ++i) training.push_back(sampler(rng));
  return WorldDistribution(std::move(sampler), std::move(training), std::move(support));
}

WorldDistribution WorldDistribution::empirical(std::vector<World> worlds) {
  if (worlds.empty()) throw DistributionError("empirical distribution needs at least one world");
  auto shared = std::make_shared<const std::vector<World>>(worlds);
  Sampler sampler = [shared](Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, shared->size() - 1);
    return (*shared)[pick(rng)];
  };
  return WorldDistribution(std::move(sampler), std::move(worlds));
}

std::vector<std::string> toy_edge_names(std::size_t route_count) {
  static const char* kRoutes[] = {"top", "middle", "bottom", "base"};
  if (route_count > 4) throw DistributionError("toy environments have at most four routes");
  std::vector<std::string> names;
  for (std::size_t r = 0; r < route_count; ++r) {
    names.push_back(std::string(kRoutes[r]) + "_left");
    names.push_back(std::string(kRoutes[r]) + "_right");
  }
  return names;
}

EdgeId toy_edge(const Environment& env, const std::string& name) {
  const auto names = toy_edge_names(env.graph.edge_count() / 2);
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DistributionError("unknown toy edge " + name);
  return static_cast<EdgeId>(it - names.begin());
}

namespace {

// Start 0, goal 1, route r passes through vertex 2 + r. Route r has
// per-edge length 1 + 0.1 r so routes are strictly ordered by length.
ExplicitGraph parallel_routes(std::size_t routes) {
  std::vector<VertexId> vertices{0, 1};
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < routes; ++r) {
    const VertexId mid = static_cast<VertexId>(2 + r);
    vertices.push_back(mid);
    const double len = 1.0 + 0.1 * static_cast<double>(r);
    edges.push_back({edges.size(), 0, mid, len});
    edges.push_back({edges.size(), mid, 1, len});
  }
  return ExplicitGraph(std::move(vertices), std::move(edges), 0, 1);
}

World world_with_invalid(std::size_t edge_count, std::initializer_list<EdgeId> invalid) {
  World w(edge_count);
  for (EdgeId e : invalid) w.set(e, false);
  return w;
}

}  // namespace

Environment env1_distribution(std::size_t training_count, std::uint64_t training_seed) {
  ExplicitGraph graph = parallel_routes(3);
  constexpr EdgeId top_left = 0, top_right = 1, middle_left = 2, middle_right = 3, bottom_left = 4, bottom_right = 5;
  std::vector<SupportPoint> support;
  support.push_back({world_with_invalid(6, {top_left, middle_right}), 0.7});
  support.push_back({World(6), 0.15});
  for (EdgeId other : {middle_left, middle_right, bottom_left, bottom_right})
    support.push_back({world_with_invalid(6, {top_right, other}), 0.15 / 4.0});
  return {std::move(graph), WorldDistribution::from_support(std::move(support), training_count, training_seed)};
}

Environment env2_distribution(std::size_t training_count, std::uint64_t training_seed) {
  ExplicitGraph graph = parallel_routes(4);
  constexpr EdgeId top_left = 0, top_right = 1, middle_right = 3, bottom_left = 4;
  std::vector<SupportPoint> support;
  support.push_back({world_with_invalid(8, {top_left, middle_right, bottom_left}), 0.6});
  support.push_back({world_with_invalid(8, {top_right, middle_right}), 0.4});
  return {std::move(graph), WorldDistribution::from_support(std::move(support), training_count, training_seed)};
}

std::vector<double> prior_edge_prob(std::span<const World> training_worlds) {
  if (training_worlds.empty()) throw DistributionError("prior needs at least one training world");
  const std::size_t m = training_worlds.front().size();
  std::vector<double> invalid_count(m, 0.0);
  for (const World& w : training_worlds) {
    if (w.size() != m) throw DistributionError("training worlds disagree on edge count");
    for (EdgeId e = 0; e < m; ++e)
      if (!w.is_valid(e)) invalid_count[e] += 1.0;
  }
  const double n = static_cast<double>(training_worlds.size());
  for (double& c : invalid_count) c /= n;
  return invalid_count;
}

std::vector<double> posterior_world_weights(const SearchState& state, std::span<const World> training_worlds) {
  if (training_worlds.empty()) throw DistributionError("posterior needs at least one training world");
  std::vector<double> z(training_worlds.size(), 0.0);
  for (std::size_t i = 0; i < training_worlds.size(); ++i) {
    const World& w = training_worlds[i];
    if (w.size() != state.edge_count()) throw DistributionError("training world size does not match state");
    int discrepancy = 0;
    for (EdgeId e : state.evaluated())
      if (w.is_valid(e) != state.is_valid(e)) ++discrepancy;
    z[i] = -static_cast<double>(discrepancy);
  }
  const double top = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double& v : z) total += (v = std::exp(v - top));
  for (double& v : z) v /= total;
  return z;
}

std::vector<double> posterior_edge_prob(const SearchState& state, std::span<const World> training_worlds,
                                        std::span<const EdgeId> edges) {
  const std::vector<double> weight = posterior_world_weights(state, training_worlds);
  std::vector<double> p(edges.size(), 0.0);
  for (std::size_t i = 0; i < training_worlds.size(); ++i)
    for (std::size_t k = 0; k < edges.size(); ++k)
      if (!training_worlds[i].is_valid(edges[k])) p[k] += weight[i];
  for (double& v : p) v = std::clamp(v, 0.0, 1.0);
  return p;
}

std::vector<double> posterior_edge_prob(const SearchState& state, std::span<const World> training_worlds) {
  std::vector<EdgeId> all(state.edge_count());
  std::iota(all.begin(), all.end(), EdgeId{0});
  return posterior_edge_prob(state, training_worlds, all);
}

}  // namespace lazysp

#include "lazysp/features.hpp"

#include <algorithm>
#include <stdexcept>

namespace lazysp {

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names{"prior",     "posterior",  "location",
                                                            "delta_len", "delta_eval", "pdl"};
  return names;
}

std::shared_ptr<const Experience> Experience::from_worlds(std::span<const World> worlds) {
  auto exp = std::make_shared<Experience>();
  exp->training_worlds.assign(worlds.begin(), worlds.end());
  exp->invalid_prior = prior_edge_prob(worlds);
  return exp;
}

double disconnect_sentinel(const ExplicitGraph& graph) { return 2.0 * graph.total_length(); }

double location_score(std::size_t rank, std::size_t count) {
  if (count <= 1) return 1.0;
  return 1.0 - static_cast<double>(rank) / static_cast<double>(count - 1);
}

namespace {

struct Hallucination {
  double delta_len;
  double delta_eval;
};

Hallucination hallucinate_invalid(const ExplicitGraph& graph, const Path& path, EdgeId edge, const SearchState& state) {
  EdgeSet excluded = state.invalid();
  excluded.insert(edge);
  auto replacement = shortest_path(graph, excluded);
  if (!replacement) return {disconnect_sentinel(graph), 1.0};
  std::size_t unevaluated = 0;
  for (EdgeId e : replacement->edges)
    if (!state.is_evaluated(e)) ++unevaluated;
  return {std::max(0.0, replacement->length - path.length),
          static_cast<double>(unevaluated) / static_cast<double>(replacement->edges.size())};
}

}  // namespace

FeatureVector compute_features(const ExplicitGraph& graph, const Path& path, EdgeId edge, const SearchState& state,
                               std::span<const World> training_worlds, std::span<const double> priors) {
  if (state.is_evaluated(edge) || !path.contains(edge))
    throw std::invalid_argument("features are defined for unevaluated path edges only");
  std::size_t rank = 0, count = 0;
  for (EdgeId e : path.edges) {
    if (state.is_evaluated(e)) continue;
    if (e == edge) rank = count;
    ++count;
  }
  FeatureVector f;
  f.prior = priors[edge];
  const EdgeId single[] = {edge};
  f.posterior = posterior_edge_prob(state, training_worlds, single).front();
  f.location = location_score(rank, count);
  const Hallucination h = hallucinate_invalid(graph, path, edge, state);
  f.delta_len = h.delta_len;
  f.delta_eval = h.delta_eval;
  f.pdl = f.posterior * f.delta_len;
  return f;
}

std::vector<FeatureVector> compute_candidate_features(const ExplicitGraph& graph, const Path& path,
                                                      std::span<const EdgeId> candidates, const SearchState& state,
                                                      const Experience& experience) {
  const std::vector<double> posterior = posterior_edge_prob(state, experience.training_worlds, candidates);
  std::vector<FeatureVector> out(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    FeatureVector& f = out[i];
    f.prior = experience.invalid_prior[candidates[i]];
    f.posterior = posterior[i];
    f.location = location_score(i, candidates.size());
    const Hallucination h = hallucinate_invalid(graph, path, candidates[i], state);
    f.delta_len = h.delta_len;
    f.delta_eval = h.delta_eval;
    f.pdl = f.posterior * f.delta_len;
  }
  return out;
}

std::vector<std::array<double, kFeatureCount>> normalize_per_decision(std::span<const FeatureVector> features) {
  std::vector<std::array<double, kFeatureCount>> out;
  out.reserve(features.size());
  for (const auto& f : features) out.push_back(f.values());
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    double lo = kInfinity, hi = -kInfinity;
    for (const auto& row : out) {
      lo = std::min(lo, row[k]);
      hi = std::max(hi, row[k]);
    }
    const double range = hi - lo;
    for (auto& row : out) row[k] = range > 0.0 ? (row[k] - lo) / range : 0.0;
  }
  return out;
}

}  // namespace lazysp

#include "lazysp/qlearning.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "lazysp/io.hpp"
#include "lazysp/seeding.hpp"

namespace lazysp {

QTable::QTable(std::size_t edge_count) : edge_count_(edge_count) {
  if (edge_count > kMaxTabularEdges)
    throw std::invalid_argument("tabular Q-learning supports at most " + std::to_string(kMaxTabularEdges) + " edges");
}

std::uint64_t QTable::key(const SearchState& state, EdgeId edge) const {
  return state.code() * edge_count_ + edge;
}

double QTable::value(const SearchState& state, EdgeId edge) const {
  auto it = entries_.find(key(state, edge));
  return it == entries_.end() ? 0.0 : it->second.value;
}

std::size_t QTable::visits(const SearchState& state, EdgeId edge) const {
  auto it = entries_.find(key(state, edge));
  return it == entries_.end() ? 0 : it->second.visits;
}

void QTable::update(const SearchState& state, EdgeId edge, double target, double alpha) {
  Entry& e = entries_[key(state, edge)];
  e.value += alpha * (target - e.value);
  ++e.visits;
}

double QTable::max_value(const SearchState& state, std::span<const EdgeId> candidates) const {
  if (candidates.empty()) return 0.0;
  double best = value(state, candidates.front());
  for (EdgeId e : candidates) best = std::max(best, value(state, e));
  return best;
}

EdgeId QTable::greedy(const SearchState& state, std::span<const EdgeId> candidates) const {
  if (candidates.empty()) throw ContractError("greedy action requested at an absorbing state");
  EdgeId best = candidates.front();
  double best_value = value(state, best);
  for (EdgeId e : candidates) {
    const double v = value(state, e);
    if (v > best_value) {
      best = e;
      best_value = v;
    }
  }
  return best;
}

nlohmann::json QTable::to_json() const {
  // Sorted by key so that identical tables serialize identically.
  std::map<std::uint64_t, Entry> sorted(entries_.begin(), entries_.end());
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [k, e] : sorted) rows.push_back({k / edge_count_, k % edge_count_, e.value, e.visits});
  return {{"magic", "lazysp-qtable"}, {"version", 1}, {"edges", edge_count_}, {"entries", rows}};
}

QTable QTable::from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("magic").get<std::string>() != "lazysp-qtable" || doc.at("version").get<int>() != 1)
      throw FormatError("not a version-1 Q-table document");
    QTable t(doc.at("edges").get<std::size_t>());
    for (const auto& row : doc.at("entries")) {
      const std::uint64_t code = row.at(0).get<std::uint64_t>();
      const std::uint64_t edge = row.at(1).get<std::uint64_t>();
      t.entries_[code * t.edge_count_ + edge] = {row.at(2).get<double>(), row.at(3).get<std::size_t>()};
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed Q-table document: ") + e.what());
  }
}

void save_qtable(const QTable& table, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw FormatError("cannot write " + file.string());
  out << table.to_json().dump() << '\n';
}

QTable load_qtable(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError("cannot read " + file.string());
  return QTable::from_json(nlohmann::json::parse(in));
}

QTable q_learning(const ExplicitGraph& graph, const WorldDistribution& distribution, const QLearningConfig& config,
                  std::uint64_t seed, TrainingLog* log) {
  if (!(config.gamma > 0.0 && config.gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  QTable table(graph.edge_count());
  for (std::size_t episode = 0; episode < config.episodes; ++episode) {
    Rng rng(derive_seed(seed, {episode}));
    const World world = distribution.sample(rng);
    double epsilon = 0.0;
    if (episode < config.exploration_episodes)
      epsilon = config.epsilon0 * (1.0 - static_cast<double>(episode) / static_cast<double>(config.exploration_episodes));
    std::bernoulli_distribution explore(std::clamp(epsilon, 0.0, 1.0));

    SearchState state(graph.edge_count());
    std::optional<Path> path = shortest_path(graph, state.invalid());
    std::vector<EdgeId> candidates = path ? unevaluated_edges(*path, state) : std::vector<EdgeId>{};
    double reward = 0.0;
    while (path && !candidates.empty()) {
      EdgeId action;
      if (explore(rng)) {
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        action = candidates[pick(rng)];
      } else {
        action = table.greedy(state, candidates);
      }
      SearchState next = transition(state, action, world);
      std::optional<Path> next_path = shortest_path(graph, next.invalid());
      std::vector<EdgeId> next_candidates = next_path ? unevaluated_edges(*next_path, next) : std::vector<EdgeId>{};
      // Absorbing (goal or infeasible) successors bootstrap 0.
      const double target = -1.0 + config.gamma * table.max_value(next, next_candidates);
      table.update(state, action, target, config.alpha);
      reward -= 1.0;
      state = std::move(next);
      path = std::move(next_path);
      candidates = std::move(next_candidates);
    }
    if (log) log->add({0, episode, reward, {}});
  }
  return table;
}

}  // namespace lazysp

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "lazysp/search.hpp"
#include "lazysp/training_log.hpp"
#include "lazysp/worlds.hpp"

namespace lazysp {

inline constexpr std::size_t kMaxTabularEdges = 12;

struct QLearningConfig {
  std::size_t episodes = 3000;
  std::size_t exploration_episodes = 100;
  double epsilon0 = 1.0;
  double gamma = 1.0;
  double alpha = 0.5;
};

/// Tabular action values keyed by (evaluation record, edge). Unvisited
/// entries read as 0, which is optimistic because every reward is -1.
class QTable {
 public:
  explicit QTable(std::size_t edge_count);

  std::size_t edge_count() const { return edge_count_; }
  double value(const SearchState& state, EdgeId edge) const;
  std::size_t visits(const SearchState& state, EdgeId edge) const;
  void update(const SearchState& state, EdgeId edge, double target, double alpha);

  /// max over candidates; 0 for an empty candidate list (absorbing state).
  double max_value(const SearchState& state, std::span<const EdgeId> candidates) const;
  /// Greedy candidate; ties go to the earliest.
  EdgeId greedy(const SearchState& state, std::span<const EdgeId> candidates) const;

  std::size_t size() const { return entries_.size(); }

  nlohmann::json to_json() const;
  static QTable from_json(const nlohmann::json& doc);

 private:
  struct Entry {
    double value = 0.0;
    std::size_t visits = 0;
  };
  std::uint64_t key(const SearchState& state, EdgeId edge) const;

  std::size_t edge_count_;
  std::unordered_map<std::uint64_t, Entry> entries_;
};

void save_qtable(const QTable& table, const std::filesystem::path& file);
QTable load_qtable(const std::filesystem::path& file);

/// Epsilon-greedy tabular Q-learning; epsilon decays linearly from epsilon0
/// to 0 over the exploration episodes and stays 0 afterwards. Throws
/// std::invalid_argument if the graph has more than kMaxTabularEdges edges.
QTable q_learning(const ExplicitGraph& graph, const WorldDistribution& distribution, const QLearningConfig& config,
                  std::uint64_t seed, TrainingLog* log = nullptr);

/// Greedy policy of a Q-table.
class QTableSelector : public EdgeSelector {
 public:
  explicit QTableSelector(const QTable& table) : table_(table) {}
  std::string name() const override { return "qlearning"; }
  EdgeId select(const SelectionContext& ctx) override { return table_.greedy(ctx.state, ctx.candidates); }

 private:
  const QTable& table_;
};

}  // namespace lazysp

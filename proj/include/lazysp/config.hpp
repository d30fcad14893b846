#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lazysp/grid_worlds.hpp"
#include "lazysp/qlearning.hpp"
#include "lazysp/stroll.hpp"

namespace lazysp {

/// Schema violation; the message starts with the offending field path
/// (e.g. "stroll.iterations").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Config document: a JSON object with optional sections
//   "qlearning": episodes, exploration_episodes, epsilon0, gamma, alpha
//   "stroll":    iterations, episodes_per_iteration, betas, rollin, heuristic,
//                heuristic_selection_worlds, validation_worlds, regularization, normalize
//   "grid":      kind, width, height, wall_position, second_wall_position, gap_width,
//                wall_thickness, obstacle_count, radius_min, radius_max, gate_count,
//                gate_open_prob, max_retries, training_count
// Missing keys keep their defaults; unknown keys are errors.
struct RunConfig {
  QLearningConfig qlearning;
  StrollConfig stroll;
  GridSpec grid;
};

RunConfig parse_config(const nlohmann::json& doc, RunConfig defaults = {});
RunConfig load_config(const std::filesystem::path& file, RunConfig defaults = {});

/// Q-learning parameters used for the toy environments ("env1", "env2").
QLearningConfig toy_qlearning_config(const std::string& env);

}  // namespace lazysp

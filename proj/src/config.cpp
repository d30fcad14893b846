#include "lazysp/config.hpp"

#include <fstream>
#include <set>

namespace lazysp {

namespace {

using nlohmann::json;

class Section {
 public:
  Section(const json& doc, std::string name) : name_(std::move(name)) {
    if (!doc.contains(name_)) return;
    obj_ = &doc.at(name_);
    if (!obj_->is_object()) throw ConfigError(name_, "section must be an object");
  }

  ~Section() noexcept(false) {
    if (!obj_ || std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : obj_->items())
      if (!seen_.count(key)) throw ConfigError(name_ + "." + key, "unknown field");
  }

  void count(const char* key, std::size_t& out, std::size_t min_value = 0) {
    if (const json* v = field(key)) {
      if (!v->is_number_integer() || v->get<long long>() < static_cast<long long>(min_value))
        throw ConfigError(path(key), "expected an integer >= " + std::to_string(min_value));
      out = v->get<std::size_t>();
    }
  }
  void integer(const char* key, int& out, int min_value) {
    if (const json* v = field(key)) {
      if (!v->is_number_integer() || v->get<long long>() < min_value)
        throw ConfigError(path(key), "expected an integer >= " + std::to_string(min_value));
      out = v->get<int>();
    }
  }
  void real(const char* key, double& out, double lo, double hi) {
    if (const json* v = field(key)) {
      if (!v->is_number() || v->get<double>() < lo || v->get<double>() > hi)
        throw ConfigError(path(key), "expected a number in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      out = v->get<double>();
    }
  }
  void boolean(const char* key, bool& out) {
    if (const json* v = field(key)) {
      if (!v->is_boolean()) throw ConfigError(path(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  const json* field(const char* key) {
    seen_.insert(key);
    if (!obj_ || !obj_->contains(key)) return nullptr;
    return &obj_->at(key);
  }
  std::string path(const char* key) const { return name_ + "." + key; }

 private:
  std::string name_;
  const json* obj_ = nullptr;
  std::set<std::string> seen_;
};

}  // namespace

RunConfig parse_config(const json& doc, RunConfig cfg) {
  if (!doc.is_object()) throw ConfigError("$", "config must be an object");
  for (const auto& [key, value] : doc.items())
    if (key != "qlearning" && key != "stroll" && key != "grid") throw ConfigError(key, "unknown section");

  {
    Section s(doc, "qlearning");
    auto& q = cfg.qlearning;
    s.count("episodes", q.episodes, 1);
    s.count("exploration_episodes", q.exploration_episodes);
    s.real("epsilon0", q.epsilon0, 0.0, 1.0);
    s.real("gamma", q.gamma, 1e-12, 1.0);
    s.real("alpha", q.alpha, 1e-12, 1.0);
  }
  {
    Section s(doc, "stroll");
    auto& st = cfg.stroll;
    s.count("iterations", st.iterations, 1);
    s.count("episodes_per_iteration", st.episodes_per_iteration, 1);
    if (const json* v = s.field("betas")) {
      if (!v->is_array()) throw ConfigError(s.path("betas"), "expected a list of numbers");
      st.betas.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        const json& b = v->at(i);
        const std::string p = s.path("betas") + "[" + std::to_string(i) + "]";
        if (!b.is_number() || b.get<double>() < 0.0 || b.get<double>() > 1.0)
          throw ConfigError(p, "expected a number in [0, 1]");
        if (!st.betas.empty() && b.get<double>() > st.betas.back())
          throw ConfigError(p, "mixing weights must be non-increasing");
        st.betas.push_back(b.get<double>());
      }
    }
    if (const json* v = s.field("rollin")) {
      if (!v->is_string() || (*v != "oracle" && *v != "heuristic"))
        throw ConfigError(s.path("rollin"), "expected \"oracle\" or \"heuristic\"");
      st.rollin = *v == "oracle" ? RollinKind::kOracle : RollinKind::kHeuristic;
    }
    if (const json* v = s.field("heuristic")) {
      if (!v->is_string()) throw ConfigError(s.path("heuristic"), "expected a selector name");
      st.heuristic = v->get<std::string>();
    }
    s.count("heuristic_selection_worlds", st.heuristic_selection_worlds, 1);
    s.count("validation_worlds", st.validation_worlds, 1);
    s.real("regularization", st.fit.regularization, 0.0, 1e6);
    s.boolean("normalize", st.fit.normalize);
  }
  {
    Section s(doc, "grid");
    auto& g = cfg.grid;
    if (const json* v = s.field("kind")) {
      if (!v->is_string()) throw ConfigError(s.path("kind"), "expected onewall, twowall, forest or gate");
      try {
        g.kind = parse_obstacle_kind(v->get<std::string>());
      } catch (const DistributionError& e) {
        throw ConfigError(s.path("kind"), e.what());
      }
    }
    s.integer("width", g.width, 3);
    s.integer("height", g.height, 3);
    s.real("wall_position", g.wall_position, 0.0, 1.0);
    s.real("second_wall_position", g.second_wall_position, 0.0, 1.0);
    s.integer("gap_width", g.gap_width, 1);
    s.real("wall_thickness", g.wall_thickness, 0.0, 0.9);
    s.integer("obstacle_count", g.obstacle_count, 0);
    s.real("radius_min", g.radius_min, 0.0, 1e6);
    s.real("radius_max", g.radius_max, 0.0, 1e6);
    s.integer("gate_count", g.gate_count, 1);
    s.real("gate_open_prob", g.gate_open_prob, 0.0, 1.0);
    s.integer("max_retries", g.max_retries, 1);
    s.count("training_count", g.training_count, 1);
    if (g.radius_max < g.radius_min) throw ConfigError(s.path("radius_max"), "must be >= grid.radius_min");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& file, RunConfig defaults) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string(), "cannot read config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string(), e.what());
  }
  return parse_config(doc, std::move(defaults));
}

QLearningConfig toy_qlearning_config(const std::string& env) {
  QLearningConfig q;
  if (env == "env1") {
    q.episodes = 3000;
    q.exploration_episodes = 100;
  } else if (env == "env2") {
    q.episodes = 3500;
    q.exploration_episodes = 150;
  } else {
    throw std::invalid_argument("no Q-learning preset for '" + env + "'");
  }
  q.epsilon0 = 1.0;
  q.gamma = 1.0;
  q.alpha = 0.5;
  return q;
}

}  // namespace lazysp

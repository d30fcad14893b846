#include "lazysp/selectors.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "lazysp/io.hpp"

namespace lazysp {

EdgeId baseline_select(BaselineKind kind, std::span<const EdgeId> candidates, std::size_t selection_index, Rng& rng) {
  if (candidates.empty()) throw ContractError("no unevaluated edge on the path; the goal test should have stopped");
  switch (kind) {
    case BaselineKind::kForward: return candidates.front();
    case BaselineKind::kBackward: return candidates.back();
    case BaselineKind::kAlternate: return selection_index % 2 == 0 ? candidates.front() : candidates.back();
    case BaselineKind::kRandom: {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      return candidates[pick(rng)];
    }
  }
  throw ContractError("unknown baseline kind");
}

EdgeId select_failfast(std::span<const EdgeId> candidates, std::span<const double> invalid_prob) {
  if (candidates.empty()) throw ContractError("no unevaluated edge on the path");
  EdgeId best = candidates.front();
  for (EdgeId e : candidates)
    if (invalid_prob[e] > invalid_prob[best]) best = e;
  return best;
}

EdgeId select_post_failfast(std::span<const EdgeId> candidates, const SearchState& state,
                            std::span<const World> training_worlds) {
  if (candidates.empty()) throw ContractError("no unevaluated edge on the path");
  const std::vector<double> p = posterior_edge_prob(state, training_worlds, candidates);
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (p[i] > p[best]) best = i;
  return candidates[best];
}

double expected_evaluations_to_invalidate(std::span<const double> p_valid) {
  double total = 0.0;
  double survive = 1.0;
  for (std::size_t l = 0; l < p_valid.size(); ++l) {
    total += survive * (1.0 - p_valid[l]) * static_cast<double>(l + 1);
    survive *= p_valid[l];
  }
  return total;
}

double adjacent_swap_delta(std::span<const double> p_valid, std::size_t i) {
  if (i + 1 >= p_valid.size()) throw std::out_of_range("swap position out of range");
  double prefix = 1.0;
  for (std::size_t m = 0; m < i; ++m) prefix *= p_valid[m];
  return prefix * (p_valid[i] - p_valid[i + 1]);
}

double LinearPolicy::score(const std::array<double, kFeatureCount>& f) const {
  double s = 0.0;
  for (std::size_t k = 0; k < kFeatureCount; ++k) s += weights[k] * f[k];
  return s;
}

std::size_t linear_select(const LinearPolicy& policy, std::span<const FeatureVector> features) {
  if (features.empty()) throw ContractError("linear_select needs at least one candidate");
  std::vector<std::array<double, kFeatureCount>> rows;
  if (policy.normalize) {
    rows = normalize_per_decision(features);
  } else {
    for (const auto& f : features) rows.push_back(f.values());
  }
  std::size_t best = 0;
  double best_score = policy.score(rows[0]);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double s = policy.score(rows[i]);
    if (s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

nlohmann::json policy_to_json(const LinearPolicy& policy) {
  nlohmann::json weights = nlohmann::json::object();
  for (std::size_t k = 0; k < kFeatureCount; ++k) weights[feature_names()[k]] = policy.weights[k];
  return {{"magic", kPolicyMagic}, {"version", kPolicyVersion}, {"normalize", policy.normalize}, {"weights", weights}};
}

LinearPolicy policy_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("magic").get<std::string>() != kPolicyMagic) throw FormatError("not a policy document");
    if (doc.at("version").get<int>() != kPolicyVersion) throw FormatError("unsupported policy version");
    LinearPolicy p;
    p.normalize = doc.at("normalize").get<bool>();
    const auto& w = doc.at("weights");
    if (w.size() != kFeatureCount) throw FormatError("policy must carry exactly six named weights");
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      p.weights[k] = w.at(feature_names()[k]).get<double>();
      if (!std::isfinite(p.weights[k])) throw FormatError("policy weights must be finite");
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed policy document: ") + e.what());
  }
}

void save_policy(const LinearPolicy& policy, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw FormatError("cannot write " + file.string());
  out << policy_to_json(policy).dump(2) << '\n';
}

LinearPolicy load_policy(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError("cannot read " + file.string());
  try {
    return policy_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(file.string() + ": " + e.what());
  }
}

std::string BaselineSelector::name() const {
  switch (kind_) {
    case BaselineKind::kForward: return "forward";
    case BaselineKind::kBackward: return "backward";
    case BaselineKind::kAlternate: return "alternate";
    case BaselineKind::kRandom: return "random";
  }
  return "?";
}

EdgeId BaselineSelector::select(const SelectionContext& ctx) {
  return baseline_select(kind_, ctx.candidates, ctx.selection_index, ctx.rng);
}

std::vector<std::pair<EdgeId, double>> BaselineSelector::action_distribution(const SelectionContext& ctx) {
  if (kind_ != BaselineKind::kRandom) return EdgeSelector::action_distribution(ctx);
  std::vector<std::pair<EdgeId, double>> out;
  const double p = 1.0 / static_cast<double>(ctx.candidates.size());
  for (EdgeId e : ctx.candidates) out.emplace_back(e, p);
  return out;
}

EdgeId FailFastSelector::select(const SelectionContext& ctx) {
  return select_failfast(ctx.candidates, experience_->invalid_prior);
}

EdgeId PostFailFastSelector::select(const SelectionContext& ctx) {
  return select_post_failfast(ctx.candidates, ctx.state, experience_->training_worlds);
}

EdgeId LinearSelector::select(const SelectionContext& ctx) {
  const auto features = compute_candidate_features(ctx.graph, ctx.path, ctx.candidates, ctx.state, *experience_);
  return ctx.candidates[linear_select(policy_, features)];
}

LinearPolicy pdl_policy() {
  LinearPolicy p;
  p.weights = {0, 0, 0, 0, 0, 1};
  return p;
}

const std::vector<std::string>& baseline_names() {
  static const std::vector<std::string> names{"forward",  "backward",     "alternate", "random",
                                              "failfast", "postfailfast", "pdl"};
  return names;
}

std::unique_ptr<EdgeSelector> make_baseline(const std::string& name, std::shared_ptr<const Experience> experience) {
  if (name == "forward") return std::make_unique<BaselineSelector>(BaselineKind::kForward);
  if (name == "backward") return std::make_unique<BaselineSelector>(BaselineKind::kBackward);
  if (name == "alternate") return std::make_unique<BaselineSelector>(BaselineKind::kAlternate);
  if (name == "random") return std::make_unique<BaselineSelector>(BaselineKind::kRandom);
  if (!experience) throw std::invalid_argument("selector '" + name + "' needs training worlds");
  if (name == "failfast") return std::make_unique<FailFastSelector>(std::move(experience));
  if (name == "postfailfast") return std::make_unique<PostFailFastSelector>(std::move(experience));
  if (name == "pdl") return std::make_unique<LinearSelector>(pdl_policy(), std::move(experience), "pdl");
  throw std::invalid_argument("unknown selector '" + name + "'");
}

}  // namespace lazysp

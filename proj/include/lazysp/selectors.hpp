#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lazysp/features.hpp"
#include "lazysp/search.hpp"

namespace lazysp {

enum class BaselineKind { kForward, kBackward, kAlternate, kRandom };

/// Forward: first candidate. Backward: last. Alternate: forward on even
/// selection counts, backward on odd (counted per episode). Random: uniform.
/// Throws ContractError when there is no candidate.
EdgeId baseline_select(BaselineKind kind, std::span<const EdgeId> candidates, std::size_t selection_index, Rng& rng);

/// Candidate with the largest invalid-probability; ties go to the earliest.
EdgeId select_failfast(std::span<const EdgeId> candidates, std::span<const double> invalid_prob);
EdgeId select_post_failfast(std::span<const EdgeId> candidates, const SearchState& state,
                            std::span<const World> training_worlds);

/// Expected number of evaluations needed to invalidate a path whose edges are
/// evaluated in the given order and are independently valid with the given
/// probabilities (evaluation stops at the first invalid edge).
double expected_evaluations_to_invalidate(std::span<const double> p_valid);

/// Change in expected_evaluations_to_invalidate from swapping positions i and
/// i + 1: E(order) - E(swapped) = prod_{m<i} p_m * (p_i - p_{i+1}).
double adjacent_swap_delta(std::span<const double> p_valid, std::size_t i);

struct LinearPolicy {
  std::array<double, kFeatureCount> weights{};
  bool normalize = true;

  double score(const std::array<double, kFeatureCount>& f) const;
  friend bool operator==(const LinearPolicy&, const LinearPolicy&) = default;
};

/// Index of the candidate with the highest weights^T f; ties go to the earliest.
std::size_t linear_select(const LinearPolicy& policy, std::span<const FeatureVector> features);

inline constexpr const char* kPolicyMagic = "lazysp-policy";
inline constexpr int kPolicyVersion = 1;
nlohmann::json policy_to_json(const LinearPolicy& policy);
LinearPolicy policy_from_json(const nlohmann::json& doc);
void save_policy(const LinearPolicy& policy, const std::filesystem::path& file);
LinearPolicy load_policy(const std::filesystem::path& file);

class BaselineSelector : public EdgeSelector {
 public:
  explicit BaselineSelector(BaselineKind kind) : kind_(kind) {}
  std::string name() const override;
  EdgeId select(const SelectionContext& ctx) override;
  std::vector<std::pair<EdgeId, double>> action_distribution(const SelectionContext& ctx) override;

 private:
  BaselineKind kind_;
};

class FailFastSelector : public EdgeSelector {
 public:
  explicit FailFastSelector(std::shared_ptr<const Experience> experience) : experience_(std::move(experience)) {}
  std::string name() const override { return "failfast"; }
  EdgeId select(const SelectionContext& ctx) override;

 private:
  std::shared_ptr<const Experience> experience_;
};

class PostFailFastSelector : public EdgeSelector {
 public:
  explicit PostFailFastSelector(std::shared_ptr<const Experience> experience) : experience_(std::move(experience)) {}
  std::string name() const override { return "postfailfast"; }
  EdgeId select(const SelectionContext& ctx) override;

 private:
  std::shared_ptr<const Experience> experience_;
};

class LinearSelector : public EdgeSelector {
 public:
  LinearSelector(LinearPolicy policy, std::shared_ptr<const Experience> experience, std::string name = "linear")
      : policy_(policy), experience_(std::move(experience)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  EdgeId select(const SelectionContext& ctx) override;
  const LinearPolicy& policy() const { return policy_; }

 private:
  LinearPolicy policy_;
  std::shared_ptr<const Experience> experience_;
  std::string name_;
};

/// The PDL heuristic: a linear policy with all weight on f_pdl.
LinearPolicy pdl_policy();

/// Names accepted by make_baseline: forward, backward, alternate, random,
/// failfast, postfailfast, pdl.
const std::vector<std::string>& baseline_names();
std::unique_ptr<EdgeSelector> make_baseline(const std::string& name, std::shared_ptr<const Experience> experience);

}  // namespace lazysp

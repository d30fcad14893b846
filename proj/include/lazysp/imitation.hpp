#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lazysp/features.hpp"
#include "lazysp/search.hpp"
#include "lazysp/selectors.hpp"

namespace lazysp {

/// One labelled decision: features of every candidate edge and the index of
/// the candidate the oracle chose.
struct Decision {
  std::vector<FeatureVector> candidates;
  std::size_t chosen = 0;
  std::size_t episode = 0;
  std::size_t iteration = 0;
};

/// Append-only aggregate of labelled decisions.
class ImitationDataset {
 public:
  void add(Decision d);
  void append(const ImitationDataset& other);
  std::span<const Decision> decisions() const { return decisions_; }
  std::size_t size() const { return decisions_.size(); }
  bool empty() const { return decisions_.empty(); }

 private:
  std::vector<Decision> decisions_;
};

struct FitOptions {
  double regularization = 1e-3;
  bool normalize = true;
  std::size_t max_iterations = 100;
  double tolerance = 1e-10;
};

struct FitResult {
  LinearPolicy policy;
  double loss = 0.0;
  std::size_t iterations = 0;
  bool degenerate = false;  // no decision had more than one candidate
};

/// Softmax-over-candidates cross-entropy, averaged over decisions, plus
/// (regularization / 2) * |w|^2. Convex in the weights.
double imitation_loss(const ImitationDataset& data, const LinearPolicy& policy, double regularization);

/// Fraction of decisions where the policy picks the oracle's candidate.
double imitation_accuracy(const ImitationDataset& data, const LinearPolicy& policy);

/// Fits linear weights by damped Newton iterations on imitation_loss.
/// Deterministic for a given dataset order. Throws std::invalid_argument on
/// an empty dataset; a dataset of single-candidate decisions yields zero
/// weights with `degenerate` set.
FitResult classifier_fit(const ImitationDataset& data, const FitOptions& options = {});

/// Per-episode mixture: with probability beta the roll-in policy drives the
/// whole episode, otherwise the learner does.
EdgeSelector& mixture_rollin(EdgeSelector& learner, EdgeSelector& rollin, double beta, Rng& rng);

/// Wraps the selector that drives an episode and, at every step, records the
/// candidate features together with the approximate oracle's choice.
class RecordingSelector : public EdgeSelector {
 public:
  RecordingSelector(EdgeSelector& driver, const World& world, const Experience& experience, ImitationDataset& sink,
                    std::size_t iteration, std::size_t episode)
      : driver_(driver), world_(world), experience_(experience), sink_(sink), iteration_(iteration), episode_(episode) {}

  std::string name() const override { return driver_.name(); }
  EdgeSelector& driver() { return driver_; }
  EdgeId select(const SelectionContext& ctx) override;
  std::size_t oracle_fallbacks() const { return fallbacks_; }

 private:
  EdgeSelector& driver_;
  const World& world_;
  const Experience& experience_;
  ImitationDataset& sink_;
  std::size_t iteration_;
  std::size_t episode_;
  std::size_t fallbacks_ = 0;
};

}  // namespace lazysp

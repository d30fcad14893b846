#include "lazysp/imitation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include <Eigen/Dense>

#include "lazysp/oracle.hpp"

namespace lazysp {

namespace {

using Vec = Eigen::Matrix<double, kFeatureCount, 1>;
using Mat = Eigen::Matrix<double, kFeatureCount, kFeatureCount>;

struct Prepared {
  std::vector<Eigen::Matrix<double, Eigen::Dynamic, kFeatureCount>> rows;
  std::vector<std::size_t> chosen;
};

Prepared prepare(const ImitationDataset& data, bool normalize) {
  Prepared p;
  for (const Decision& d : data.decisions()) {
    Eigen::Matrix<double, Eigen::Dynamic, kFeatureCount> m(d.candidates.size(), kFeatureCount);
    if (normalize) {
      const auto norm = normalize_per_decision(d.candidates);
      for (std::size_t i = 0; i < norm.size(); ++i)
        for (std::size_t k = 0; k < kFeatureCount; ++k) m(i, k) = norm[i][k];
    } else {
      for (std::size_t i = 0; i < d.candidates.size(); ++i) {
        const auto v = d.candidates[i].values();
        for (std::size_t k = 0; k < kFeatureCount; ++k) m(i, k) = v[k];
      }
    }
    p.rows.push_back(std::move(m));
    p.chosen.push_back(d.chosen);
  }
  return p;
}

// Loss, gradient and Hessian of the averaged softmax cross-entropy plus L2.
double evaluate(const Prepared& p, const Vec& w, double reg, Vec* grad, Mat* hess) {
  double loss = 0.0;
  if (grad) grad->setZero();
  if (hess) hess->setZero();
  for (std::size_t d = 0; d < p.rows.size(); ++d) {
    const auto& m = p.rows[d];
    const Eigen::VectorXd scores = m * w;
    const double top = scores.maxCoeff();
    const Eigen::VectorXd ex = (scores.array() - top).exp().matrix();
    const double z = ex.sum();
    loss += std::log(z) + top - scores(static_cast<Eigen::Index>(p.chosen[d]));
    if (grad || hess) {
      const Eigen::VectorXd prob = ex / z;
      const Vec mean = m.transpose() * prob;
      if (grad) *grad += mean - m.row(static_cast<Eigen::Index>(p.chosen[d])).transpose();
      if (hess) *hess += m.transpose() * prob.asDiagonal() * m - mean * mean.transpose();
    }
  }
  const double n = static_cast<double>(p.rows.size());
  loss = loss / n + 0.5 * reg * w.squaredNorm();
  if (grad) *grad = *grad / n + reg * w;
  if (hess) *hess = *hess / n + reg * Mat::Identity();
  return loss;
}

Vec to_vec(const LinearPolicy& policy) {
  Vec w;
  for (std::size_t k = 0; k < kFeatureCount; ++k) w(static_cast<Eigen::Index>(k)) = policy.weights[k];
  return w;
}

}  // namespace

void ImitationDataset::add(Decision d) {
  if (d.candidates.empty() || d.chosen >= d.candidates.size())
    throw std::invalid_argument("decision label outside its candidate list");
  decisions_.push_back(std::move(d));
}

void ImitationDataset::append(const ImitationDataset& other) {
  decisions_.insert(decisions_.end(), other.decisions_.begin(), other.decisions_.end());
}

double imitation_loss(const ImitationDataset& data, const LinearPolicy& policy, double regularization) {
  if (data.empty()) throw std::invalid_argument("imitation loss of an empty dataset");
  return evaluate(prepare(data, policy.normalize), to_vec(policy), regularization, nullptr, nullptr);
}

double imitation_accuracy(const ImitationDataset& data, const LinearPolicy& policy) {
  if (data.empty()) return 0.0;
  std::size_t hits = 0;
  for (const Decision& d : data.decisions())
    if (linear_select(policy, d.candidates) == d.chosen) ++hits;
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

FitResult classifier_fit(const ImitationDataset& data, const FitOptions& options) {
  if (data.empty()) throw std::invalid_argument("cannot fit a classifier on an empty dataset");
  FitResult result;
  result.policy.normalize = options.normalize;
  const bool informative = std::any_of(data.decisions().begin(), data.decisions().end(),
                                       [](const Decision& d) { return d.candidates.size() > 1; });
  if (!informative) {
    std::cerr << "warning: imitation dataset has only single-candidate decisions; returning zero weights\n";
    result.degenerate = true;
    return result;
  }

  const Prepared prepared = prepare(data, options.normalize);
  const double reg = std::max(options.regularization, 1e-12);
  Vec w = Vec::Zero();
  Vec grad;
  Mat hess;
  double loss = evaluate(prepared, w, reg, &grad, &hess);
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    result.iterations = it + 1;
    const Vec step = hess.ldlt().solve(-grad);
    const double decrement = -grad.dot(step);
    if (decrement / 2.0 <= options.tolerance) break;
    // Backtracking line search on the Newton direction.
    double t = 1.0;
    Vec candidate = w + step;
    double candidate_loss = evaluate(prepared, candidate, reg, nullptr, nullptr);
    while (candidate_loss > loss - 0.25 * t * decrement && t > 1e-10) {
      t *= 0.5;
      candidate = w + t * step;
      candidate_loss = evaluate(prepared, candidate, reg, nullptr, nullptr);
    }
    if (candidate_loss >= loss) break;
    w = candidate;
    loss = evaluate(prepared, w, reg, &grad, &hess);
  }
  for (std::size_t k = 0; k < kFeatureCount; ++k) result.policy.weights[k] = w(static_cast<Eigen::Index>(k));
  result.loss = loss;
  return result;
}

EdgeSelector& mixture_rollin(EdgeSelector& learner, EdgeSelector& rollin, double beta, Rng& rng) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("mixing weight beta must lie in [0, 1]");
  std::bernoulli_distribution coin(beta);
  return coin(rng) ? rollin : learner;
}

EdgeId RecordingSelector::select(const SelectionContext& ctx) {
  Decision d;
  d.candidates = compute_candidate_features(ctx.graph, ctx.path, ctx.candidates, ctx.state, experience_);
  const OracleChoice oracle = approx_oracle_choice(ctx.graph, ctx.state, world_);
  if (oracle.fallback) ++fallbacks_;
  d.chosen = static_cast<std::size_t>(std::find(ctx.candidates.begin(), ctx.candidates.end(), oracle.edge) -
                                      ctx.candidates.begin());
  d.iteration = iteration_;
  d.episode = episode_;
  sink_.add(std::move(d));
  return driver_.select(ctx);
}

}  // namespace lazysp

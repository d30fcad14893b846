#include "lazysp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "lazysp/io.hpp"
#include "lazysp/oracle.hpp"
#include "lazysp/qlearning.hpp"
#include "lazysp/seeding.hpp"

namespace lazysp {

namespace {

// Owns a Q-table so the selector can outlive the factory call.
class OwningQSelector : public EdgeSelector {
 public:
  explicit OwningQSelector(std::shared_ptr<const QTable> table) : table_(std::move(table)) {}
  std::string name() const override { return "qtable"; }
  EdgeId select(const SelectionContext& ctx) override { return table_->greedy(ctx.state, ctx.candidates); }

 private:
  std::shared_ptr<const QTable> table_;
};

}  // namespace

SelectorFactory selector_factory(const std::string& spec, std::shared_ptr<const Experience> experience) {
  if (spec == "oracle")
    return [](const World& w) { return std::make_unique<ApproxOracleSelector>(w); };
  if (spec.rfind("policy:", 0) == 0) {
    if (!experience) throw std::invalid_argument("policy selectors need training worlds");
    const LinearPolicy policy = load_policy(spec.substr(7));
    return [policy, experience](const World&) { return std::make_unique<LinearSelector>(policy, experience, "policy"); };
  }
  if (spec.rfind("qtable:", 0) == 0) {
    auto table = std::make_shared<const QTable>(load_qtable(spec.substr(7)));
    return [table](const World&) { return std::make_unique<OwningQSelector>(table); };
  }
  // Validate eagerly so that typos fail before any episode runs.
  (void)make_baseline(spec, experience);
  return [spec, experience](const World&) { return make_baseline(spec, experience); };
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ConfidenceInterval bootstrap_median_ci(std::span<const double> values, std::size_t resamples, double confidence,
                                       std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("bootstrap of an empty sample");
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<double> medians;
  medians.reserve(resamples);
  std::vector<double> sample(values.size());
  for (std::size_t r = 0; r < resamples; ++r) {
    for (double& s : sample) s = values[pick(rng)];
    medians.push_back(median(sample));
  }
  std::sort(medians.begin(), medians.end());
  const double alpha = (1.0 - confidence) / 2.0;
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(medians.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, medians.size() - 1);
    return medians[lo] + (pos - static_cast<double>(lo)) * (medians[hi] - medians[lo]);
  };
  return {quantile(alpha), quantile(1.0 - alpha)};
}

std::vector<std::size_t> run_episodes(const ExplicitGraph& graph, std::span<const World> worlds,
                                      const SelectorFactory& factory, std::size_t episodes, std::uint64_t seed,
                                      const EpisodeSink& sink) {
  if (episodes == 0) throw std::invalid_argument("episode count must be positive");
  if (worlds.empty()) throw std::invalid_argument("world set is empty");
  std::vector<std::size_t> out;
  out.reserve(episodes);
  for (std::size_t i = 0; i < episodes; ++i) {
    const World& world = worlds[i % worlds.size()];
    auto selector = factory(world);
    Rng rng(derive_seed(seed, {i}));
    const EpisodeResult result = run_lazysp(graph, world, *selector, rng);
    if (sink) sink(i, result);
    out.push_back(result.evaluations());
  }
  return out;
}

SelectorReport summarize(const std::string& name, std::vector<std::size_t> evaluations, std::uint64_t seed,
                         std::size_t resamples) {
  SelectorReport r;
  r.selector = name;
  r.seed = seed;
  r.episodes = evaluations.size();
  std::vector<double> values(evaluations.begin(), evaluations.end());
  r.median = median(values);
  const ConfidenceInterval ci = bootstrap_median_ci(values, resamples, 0.95, derive_seed(seed, {0xb007}));
  r.lower = std::min(ci.lower, r.median);
  r.upper = std::max(ci.upper, r.median);
  double total = 0.0;
  for (double v : values) total += v;
  r.mean_reward = -total / static_cast<double>(values.size());
  r.evaluations = std::move(evaluations);
  return r;
}

EvalReport evaluate_selectors(const ExplicitGraph& graph, std::span<const World> worlds,
                              const std::vector<std::string>& specs, std::shared_ptr<const Experience> experience,
                              std::size_t episodes, std::uint64_t seed) {
  if (episodes == 0) throw std::invalid_argument("episode count must be positive");
  EvalReport report;
  for (const std::string& spec : specs) {
    const auto factory = selector_factory(spec, experience);
    report.rows.push_back(summarize(spec, run_episodes(graph, worlds, factory, episodes, seed), seed));
  }
  return report;
}

std::vector<World> contaminated_worlds(std::span<const World> clean, std::span<const World> contaminant,
                                       double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw std::invalid_argument("contamination fraction must lie in [0, 1]");
  const std::size_t n = clean.size();
  const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  if (k > contaminant.size()) throw std::invalid_argument("not enough contaminant worlds for the requested fraction");
  std::vector<World> mixed(clean.begin(), clean.end());
  for (std::size_t i = 0; i < k; ++i) mixed[i] = contaminant[i];
  return mixed;
}

std::vector<ContaminationRow> contamination_series(const ExplicitGraph& graph, std::span<const World> clean,
                                                   std::span<const World> contaminant,
                                                   const std::vector<double>& fractions, const std::string& spec,
                                                   std::shared_ptr<const Experience> experience, std::uint64_t seed) {
  const auto factory = selector_factory(spec, experience);
  std::vector<ContaminationRow> rows;
  for (double f : fractions) {
    const auto worlds = contaminated_worlds(clean, contaminant, f);
    rows.push_back({f, summarize(spec, run_episodes(graph, worlds, factory, worlds.size(), seed), seed)});
  }
  return rows;
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"selector", r.selector},
                    {"median", r.median},
                    {"lower", r.lower},
                    {"upper", r.upper},
                    {"mean_reward", r.mean_reward},
                    {"episodes", r.episodes},
                    {"seed", r.seed},
                    {"evaluations", r.evaluations}});
  return {{"magic", "lazysp-report"}, {"version", 1}, {"rows", rows}};
}

EvalReport report_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("magic").get<std::string>() != "lazysp-report" || doc.at("version").get<int>() != 1)
      throw FormatError("not a version-1 report");
    EvalReport report;
    for (const auto& row : doc.at("rows")) {
      SelectorReport r;
      r.selector = row.at("selector").get<std::string>();
      r.median = row.at("median").get<double>();
      r.lower = row.at("lower").get<double>();
      r.upper = row.at("upper").get<double>();
      r.mean_reward = row.at("mean_reward").get<double>();
      r.episodes = row.at("episodes").get<std::size_t>();
      r.seed = row.at("seed").get<std::uint64_t>();
      r.evaluations = row.at("evaluations").get<std::vector<std::size_t>>();
      report.rows.push_back(std::move(r));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
}

void write_report_table(std::ostream& out, const EvalReport& report) {
  std::size_t width = 8;
  for (const auto& r : report.rows) width = std::max(width, r.selector.size());
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s %9s %9s %9s %12s %9s\n", static_cast<int>(width), "selector", "median",
                "lower", "upper", "mean_reward", "episodes");
  out << buf;
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%-*s %9.1f %9.1f %9.1f %12.3f %9zu\n", static_cast<int>(width),
                  r.selector.c_str(), r.median, r.lower, r.upper, r.mean_reward, r.episodes);
    out << buf;
  }
}

void write_episode_log(std::ostream& out, const EvalReport& report) {
  out << "selector,episode,evaluations\n";
  for (const auto& r : report.rows)
    for (std::size_t i = 0; i < r.evaluations.size(); ++i) out << r.selector << ',' << i << ',' << r.evaluations[i] << '\n';
}

}  // namespace lazysp

// lazysp: generate worlds, train edge selectors, evaluate and stress-test them.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lazysp/config.hpp"
#include "lazysp/evaluation.hpp"
#include "lazysp/io.hpp"
#include "lazysp/qlearning.hpp"
#include "lazysp/seeding.hpp"
#include "lazysp/stroll.hpp"
#include "lazysp/value_iteration.hpp"

namespace fs = std::filesystem;
using namespace lazysp;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string config;
  std::string out_dir = ".";
};

RunConfig read_config(const Globals& g, RunConfig defaults = {}) {
  return g.config.empty() ? defaults : load_config(g.config, std::move(defaults));
}

fs::path out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

void write_json(const fs::path& file, const json& doc) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << doc.dump(2) << '\n';
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << text;
}

// A graph with a world set, either loaded from files or built from a named
// environment ("env1", "env2", "grid").
struct Problem {
  std::unique_ptr<ExplicitGraph> graph;
  std::unique_ptr<WorldDistribution> distribution;
  std::optional<std::vector<SupportPoint>> support;
};

Problem named_problem(const std::string& env, const RunConfig& cfg, std::uint64_t seed) {
  if (env == "env1" || env == "env2") {
    Environment e = env == "env1" ? env1_distribution(1000, seed) : env2_distribution(1000, seed);
    Problem p{std::make_unique<ExplicitGraph>(e.graph), std::make_unique<WorldDistribution>(e.distribution), {}};
    const auto sup = p.distribution->support();
    p.support.emplace(sup.begin(), sup.end());
    return p;
  }
  if (env == "grid") {
    Environment e = grid_world_generator(cfg.grid, seed);
    return {std::make_unique<ExplicitGraph>(e.graph), std::make_unique<WorldDistribution>(e.distribution), {}};
  }
  throw std::invalid_argument("unknown environment '" + env + "' (expected env1, env2 or grid)");
}

std::vector<World> load_worlds_for(const ExplicitGraph& graph, const std::string& file) {
  WorldSet set = load_world_set(file);
  check_world_set(graph, set);
  return std::move(set.worlds);
}

std::vector<double> parse_fractions(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad fraction '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty fraction list");
  return out;
}

// ---- generate-worlds ----

struct GenerateArgs {
  std::string env = "grid";
  std::string kind;
  std::string name = "worlds";
  std::size_t count = 100;
};

void cmd_generate(const Globals& g, const GenerateArgs& a) {
  RunConfig cfg = read_config(g);
  if (!a.kind.empty()) cfg.grid.kind = parse_obstacle_kind(a.kind);
  Problem p = named_problem(a.env, cfg, derive_seed(g.seed, {1}));
  Rng rng(derive_seed(g.seed, {2}));
  std::vector<World> worlds;
  worlds.reserve(a.count);
  for (std::size_t i = 0; i < a.count; ++i) worlds.push_back(p.distribution->sample(rng));
  save_graph(*p.graph, out_path(g, a.name + ".graph.json"));
  save_world_set(make_world_set(*p.graph, std::move(worlds)), out_path(g, a.name + ".worlds"));
  std::cout << "wrote " << a.count << " worlds on " << p.graph->edge_count() << " edges to "
            << out_path(g, a.name + ".worlds").string() << '\n';
}

// ---- train ----

struct TrainArgs {
  std::string algorithm;
  std::string env;
  std::string graph;
  std::string worlds;
  std::string validation;
};

void write_checkpoint(const Globals& g, const IterationSummary& s) {
  char name[64];
  std::snprintf(name, sizeof(name), "checkpoint_%03zu.json", s.iteration);
  fs::create_directories(fs::path(g.out_dir) / "checkpoints");
  write_json(fs::path(g.out_dir) / "checkpoints" / name,
             {{"magic", "lazysp-checkpoint"},
              {"version", 1},
              {"iteration", s.iteration},
              {"beta", s.beta},
              {"dataset_size", s.dataset_size},
              {"validation_reward", s.validation_reward},
              {"training_accuracy", s.training_accuracy},
              {"oracle_fallbacks", s.oracle_fallbacks},
              {"policy", policy_to_json(s.policy)}});
}

void cmd_train(const Globals& g, const TrainArgs& a) {
  RunConfig defaults;
  if (a.env == "env1" || a.env == "env2") defaults.qlearning = toy_qlearning_config(a.env);
  const RunConfig cfg = read_config(g, defaults);
  Problem p;
  if (!a.env.empty()) {
    p = named_problem(a.env, cfg, derive_seed(g.seed, {1}));
  } else {
    if (a.graph.empty() || a.worlds.empty()) throw std::invalid_argument("train needs --env or --graph with --worlds");
    p.graph = std::make_unique<ExplicitGraph>(load_graph(a.graph));
    p.distribution = std::make_unique<WorldDistribution>(WorldDistribution::empirical(load_worlds_for(*p.graph, a.worlds)));
  }
  const std::uint64_t train_seed = derive_seed(g.seed, {3});

  if (a.algorithm == "qlearn") {
    QLearningConfig q = cfg.qlearning;
    TrainingLog log;
    const QTable table = q_learning(*p.graph, *p.distribution, q, train_seed, &log);
    save_qtable(table, out_path(g, "qtable.json"));
    log.save(out_path(g, "train_log.jsonl"));
    json summary = {{"algorithm", "qlearn"}, {"entries", table.size()}, {"episodes", q.episodes}};
    if (p.support) {
      QTableSelector sel(table);
      summary["expected_reward"] = -expected_evaluations(*p.graph, *p.support, sel);
      summary["optimal_reward"] = -value_iteration_exact(*p.graph, *p.distribution);
    }
    write_json(out_path(g, "train_summary.json"), summary);
    std::cout << summary.dump() << '\n';
    return;
  }

  StrollConfig sc = cfg.stroll;
  if (a.algorithm == "supervised") {
    sc = supervised_config(sc);
  } else if (a.algorithm == "strollh") {
    sc.rollin = RollinKind::kHeuristic;
  } else if (a.algorithm != "stroll") {
    throw std::invalid_argument("unknown algorithm '" + a.algorithm + "'");
  }
  std::vector<World> validation;
  if (!a.validation.empty()) validation = load_worlds_for(*p.graph, a.validation);
  const StrollResult r = stroll_train(*p.graph, *p.distribution, sc, train_seed, validation,
                                      [&](const IterationSummary& s) { write_checkpoint(g, s); });
  save_policy(r.policy, out_path(g, "policy.json"));
  r.log.save(out_path(g, "train_log.jsonl"));
  json iters = json::array();
  for (const auto& s : r.iterations)
    iters.push_back({{"iteration", s.iteration},
                     {"beta", s.beta},
                     {"dataset_size", s.dataset_size},
                     {"validation_reward", s.validation_reward}});
  json summary = {{"algorithm", a.algorithm},
                  {"rollin_policy", r.rollin_policy},
                  {"best_iteration", r.best_iteration},
                  {"dataset_size", r.dataset.size()},
                  {"iterations", iters}};
  if (p.support) {
    LinearSelector sel(r.policy, Experience::from_worlds(p.distribution->training_worlds()));
    summary["expected_reward"] = -expected_evaluations(*p.graph, *p.support, sel);
  }
  write_json(out_path(g, "train_summary.json"), summary);
  std::cout << "rollin " << r.rollin_policy << ", best iteration " << r.best_iteration << ", dataset "
            << r.dataset.size() << '\n';
}

// ---- evaluate ----

struct EvaluateArgs {
  std::string graph;
  std::string worlds;
  std::string train_worlds;
  std::vector<std::string> selectors;
  std::optional<std::size_t> episodes;
  bool traces = false;
};

std::shared_ptr<const Experience> experience_from(const ExplicitGraph& graph, const std::string& file) {
  if (file.empty()) return nullptr;
  const auto worlds = load_worlds_for(graph, file);
  return Experience::from_worlds(worlds);
}

void cmd_evaluate(const Globals& g, const EvaluateArgs& a) {
  const ExplicitGraph graph = load_graph(a.graph);
  const auto worlds = load_worlds_for(graph, a.worlds);
  const auto experience = experience_from(graph, a.train_worlds);
  std::vector<std::string> specs = a.selectors;
  if (specs.empty()) {
    specs = {"forward", "backward", "alternate", "random"};
    if (experience)
      for (const char* s : {"failfast", "postfailfast", "pdl"}) specs.emplace_back(s);
  }
  const std::size_t episodes = a.episodes.value_or(worlds.size());
  const EvalReport report = evaluate_selectors(graph, worlds, specs, experience, episodes, g.seed);

  write_json(out_path(g, "report.json"), report_to_json(report));
  std::ostringstream table, episodes_csv;
  write_report_table(table, report);
  write_episode_log(episodes_csv, report);
  write_text(out_path(g, "report.txt"), table.str());
  write_text(out_path(g, "episodes.csv"), episodes_csv.str());
  if (a.traces) {
    std::ostringstream traces;
    traces << std::setprecision(17) << "selector,episode,step,edge,valid,path_length\n";
    for (const std::string& spec : specs)
      run_episodes(graph, worlds, selector_factory(spec, experience), episodes, g.seed,
                   [&](std::size_t ep, const EpisodeResult& r) {
                     for (std::size_t k = 0; k < r.trace.size(); ++k)
                       traces << spec << ',' << ep << ',' << k << ',' << r.trace[k].edge << ','
                              << (r.trace[k].valid ? 1 : 0) << ',' << r.trace[k].path_length << '\n';
                   });
    write_text(out_path(g, "traces.csv"), traces.str());
  }
  std::cout << table.str();
}

// ---- contaminate ----

struct ContaminateArgs {
  std::string selector;
  std::string graph;
  std::string clean;
  std::string contaminant;
  std::string train_worlds;
  std::string fractions = "0,0.2,0.4,0.6,0.8,1";
};

void cmd_contaminate(const Globals& g, const ContaminateArgs& a) {
  const ExplicitGraph graph = load_graph(a.graph);
  const auto clean = load_worlds_for(graph, a.clean);
  const auto contaminant = load_worlds_for(graph, a.contaminant);
  const auto experience = experience_from(graph, a.train_worlds);
  const auto rows = contamination_series(graph, clean, contaminant, parse_fractions(a.fractions), a.selector,
                                         experience, g.seed);
  json doc = {{"magic", "lazysp-contamination"}, {"version", 1}, {"selector", a.selector}};
  json series = json::array();
  std::ostringstream tsv;
  tsv << "fraction\tmedian\tlower\tupper\tmean_reward\n";
  for (const auto& row : rows) {
    EvalReport one{{row.report}};
    json entry = report_to_json(one)["rows"][0];
    entry["fraction"] = row.fraction;
    series.push_back(entry);
    tsv << row.fraction << '\t' << row.report.median << '\t' << row.report.lower << '\t' << row.report.upper << '\t'
        << row.report.mean_reward << '\n';
  }
  doc["series"] = series;
  write_json(out_path(g, "contamination.json"), doc);
  write_text(out_path(g, "contamination.tsv"), tsv.str());
  std::cout << tsv.str();
}

// ---- report ----

struct ReportArgs {
  std::string log;
  std::string report;
};

void cmd_report(const Globals& g, const ReportArgs& a) {
  if (!a.report.empty()) {
    std::ifstream in(a.report);
    if (!in) throw std::runtime_error("cannot read " + a.report);
    const EvalReport report = report_from_json(json::parse(in));
    std::ostringstream table;
    write_report_table(table, report);
    write_text(out_path(g, "report.txt"), table.str());
    std::cout << table.str();
  }
  if (!a.log.empty()) {
    std::ifstream in(a.log);
    if (!in) throw std::runtime_error("cannot read " + a.log);
    const TrainingLog log = TrainingLog::read(in);
    std::ostringstream episodes, iterations;
    episodes << "iteration\tepisode\treward\n";
    std::map<std::size_t, std::pair<double, std::size_t>> per_iter;
    for (const auto& r : log.records()) {
      if (!r.note.empty() && r.note.rfind("rollin=", 0) == 0) continue;
      episodes << r.iteration << '\t' << r.episode << '\t' << r.reward << '\n';
      auto& acc = per_iter[r.iteration];
      acc.first += r.reward;
      acc.second += 1;
    }
    iterations << "iteration\tmean_reward\tepisodes\n";
    for (const auto& [it, acc] : per_iter)
      iterations << it << '\t' << std::setprecision(10) << acc.first / static_cast<double>(acc.second) << '\t'
                 << acc.second << '\n';
    write_text(out_path(g, "plot_episodes.tsv"), episodes.str());
    write_text(out_path(g, "plot_iterations.tsv"), iterations.str());
    std::cout << iterations.str();
  }
  if (a.log.empty() && a.report.empty()) throw std::invalid_argument("report needs --log and/or --report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lazysp: lazy shortest path edge selection experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "base random seed");
  app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out-dir", g.out_dir, "directory for outputs");

  GenerateArgs gen;
  auto* sub_gen = app.add_subcommand("generate-worlds", "sample a world set and write graph + worlds");
  sub_gen->add_option("--env", gen.env, "env1, env2 or grid")->capture_default_str();
  sub_gen->add_option("--kind", gen.kind, "grid obstacle kind: onewall, twowall, forest, gate");
  sub_gen->add_option("--name", gen.name, "output file stem")->capture_default_str();
  sub_gen->add_option("--count", gen.count, "number of worlds")->capture_default_str();

  TrainArgs tr;
  auto* sub_train = app.add_subcommand("train", "train a selector");
  sub_train->add_option("algorithm", tr.algorithm, "qlearn, stroll, strollh or supervised")
      ->required()
      ->check(CLI::IsMember({"qlearn", "stroll", "strollh", "supervised"}));
  sub_train->add_option("--env", tr.env, "env1, env2 or grid");
  sub_train->add_option("--graph", tr.graph, "graph file")->check(CLI::ExistingFile);
  sub_train->add_option("--worlds", tr.worlds, "training world set")->check(CLI::ExistingFile);
  sub_train->add_option("--validation", tr.validation, "validation world set")->check(CLI::ExistingFile);

  EvaluateArgs ev;
  auto* sub_eval = app.add_subcommand("evaluate", "evaluate selectors on a world set");
  sub_eval->add_option("--graph", ev.graph)->required()->check(CLI::ExistingFile);
  sub_eval->add_option("--worlds", ev.worlds)->required()->check(CLI::ExistingFile);
  sub_eval->add_option("--train-worlds", ev.train_worlds, "worlds for priors/posteriors")->check(CLI::ExistingFile);
  sub_eval->add_option("--selector", ev.selectors, "baseline name, oracle, policy:<file> or qtable:<file>");
  sub_eval->add_option("--episodes", ev.episodes, "episodes (default: one per world)");
  sub_eval->add_flag("--traces", ev.traces, "also write per-evaluation traces.csv");

  ContaminateArgs ct;
  auto* sub_ct = app.add_subcommand("contaminate", "evaluate on increasingly contaminated world sets");
  sub_ct->add_option("--selector", ct.selector)->required();
  sub_ct->add_option("--graph", ct.graph)->required()->check(CLI::ExistingFile);
  sub_ct->add_option("--clean", ct.clean)->required()->check(CLI::ExistingFile);
  sub_ct->add_option("--contaminant", ct.contaminant)->required()->check(CLI::ExistingFile);
  sub_ct->add_option("--train-worlds", ct.train_worlds)->check(CLI::ExistingFile);
  sub_ct->add_option("--fractions", ct.fractions)->capture_default_str();

  ReportArgs rp;
  auto* sub_rp = app.add_subcommand("report", "emit tables and plot data");
  sub_rp->add_option("--log", rp.log, "train_log.jsonl")->check(CLI::ExistingFile);
  sub_rp->add_option("--report", rp.report, "report.json")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sub_gen) cmd_generate(g, gen);
    if (*sub_train) cmd_train(g, tr);
    if (*sub_eval) cmd_evaluate(g, ev);
    if (*sub_ct) cmd_contaminate(g, ct);
    if (*sub_rp) cmd_report(g, rp);
  } catch (const std::exception& e) {
    std::cerr << "lazysp: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

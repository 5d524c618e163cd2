// Command-line front end: graph synthesis, belief simulation, closed-form
// estimation, control-set optimization, alpha learning and the experiment
// pipelines. Exit codes: 0 success, 2 configuration error, 3 non-convergence
// or learning failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "beliefflow/alpha_learning.hpp"
#include "beliefflow/control_opt.hpp"
#include "beliefflow/errors.hpp"
#include "beliefflow/estimators.hpp"
#include "beliefflow/graph.hpp"
#include "beliefflow/harness.hpp"
#include "beliefflow/dynamics.hpp"
#include "beliefflow/synthesis.hpp"
#include "beliefflow/version.hpp"

namespace bf = beliefflow;
namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bf::ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw bf::ConfigError("cannot open output file: " + path);
  out << content;
}

bf::ControlStrategy read_control_file(const std::string& path) {
  const auto doc = json::parse(read_text(path));
  bf::ControlStrategy c;
  c.control_set = doc.at("control_set").get<std::vector<int>>();
  c.controlled_beliefs =
      doc.at("controlled_beliefs").get<std::vector<double>>();
  return c;
}

std::vector<double> read_vector_file(const std::string& path,
                                     const char* key) {
  const auto doc = json::parse(read_text(path));
  if (doc.is_array()) return doc.get<std::vector<double>>();
  return doc.at(key).get<std::vector<double>>();
}

std::vector<double> parse_grid(const std::string& text) {
  double lo, hi, step;
  char c1, c2;
  std::istringstream ss(text);
  if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
      step <= 0.0 || hi < lo)
    throw bf::ConfigError("grid must be LO:HI:STEP with STEP > 0");
  std::vector<double> grid;
  for (double a = lo; a <= hi + 1e-12; a += step) grid.push_back(a);
  return grid;
}

int run_synth(const std::string& model, int n, int m, double alpha,
              std::uint64_t seed, const std::string& out) {
  bf::SynthesisConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.alpha = alpha;
  cfg.seed = seed;
  const bf::Graph g = bf::model_kind_from_string(model) == bf::ModelKind::ba
                          ? bf::synthesize_ba(cfg)
                          : bf::synthesize_gmg(cfg);
  bf::write_edge_list_file(g, out);
  std::cerr << "wrote " << g.node_count() << " nodes, " << g.edge_count()
            << " edges to " << out << "\n";
  return 0;
}

int run_simulate(const std::string& graph_path, const std::string& w_path,
                 bool w_uniform, std::uint64_t seed,
                 const std::string& control_path, double tol,
                 const std::string& out) {
  const bf::Graph g = bf::read_edge_list_file(graph_path);
  std::vector<double> w;
  if (w_uniform) {
    bf::Rng rng(seed);
    w.resize(g.node_count());
    for (double& x : w) x = rng.uniform(-1.0, 1.0);
  } else if (!w_path.empty()) {
    w = read_vector_file(w_path, "w");
  } else {
    throw bf::ConfigError("give --w FILE or --w-uniform");
  }
  bf::ControlStrategy control = control_path.empty()
                                    ? bf::ControlStrategy::none()
                                    : read_control_file(control_path);
  const auto result = bf::converge_iterative(g, w, control, tol);
  write_text(out, bf::belief_document_json(w, control, result.beliefs));
  std::cerr << "converged in " << result.steps
            << " steps (residual " << result.residual << ")\n";
  return 0;
}

int run_estimate(const std::string& model, const std::string& graph_path,
                 const std::string& degrees_path, double alpha,
                 const std::string& control_path,
                 const std::string& w_bar_path, const std::string& out) {
  const bf::ModelKind kind = bf::model_kind_from_string(model);
  std::vector<double> w_bar;
  if (!w_bar_path.empty()) w_bar = read_vector_file(w_bar_path, "w_bar");

  bf::ModelParams params;
  if (!graph_path.empty()) {
    const bf::Graph g = bf::read_edge_list_file(graph_path);
    params = kind == bf::ModelKind::ba
                 ? bf::ModelParams::ba_params(g, w_bar)
                 : bf::ModelParams::gmg_params(g, alpha, w_bar);
  } else if (!degrees_path.empty()) {
    const auto doc = json::parse(read_text(degrees_path));
    auto degrees = doc.at("degrees").get<std::vector<double>>();
    std::vector<double> clusterings;
    if (doc.contains("clusterings"))
      clusterings = doc.at("clusterings").get<std::vector<double>>();
    params = bf::ModelParams::from_lists(kind, std::move(degrees),
                                         std::move(clusterings), alpha, w_bar);
  } else {
    throw bf::ConfigError("give --graph or --degrees");
  }

  bf::ControlStrategy control = control_path.empty()
                                    ? bf::ControlStrategy::none()
                                    : read_control_file(control_path);
  const auto est = bf::model_control_power(params, control);

  ordered_json doc;
  doc["model"] = model;
  if (kind == bf::ModelKind::gmg) doc["alpha"] = alpha;
  doc["beta"] = est.beta;
  doc["convergent"] = est.convergent;
  doc["cp"] = est.cp;
  doc["cp_corrected"] = est.cp_corrected;
  doc["expected_beliefs"] = est.expected_beliefs;
  doc["pinned_beliefs"] = est.pinned_beliefs;
  write_text(out, doc.dump(2) + "\n");
  return 0;
}

int run_optimize(const std::string& model, const std::string& graph_path,
                 int budget, double alpha, bool brute_force,
                 const std::string& objective, const std::string& out) {
  const bf::ModelKind kind = bf::model_kind_from_string(model);
  const bf::Graph g = bf::read_edge_list_file(graph_path);
  const bf::ModelParams params = kind == bf::ModelKind::ba
                                     ? bf::ModelParams::ba_params(g)
                                     : bf::ModelParams::gmg_params(g, alpha);

  bf::OptimizationResult result;
  if (brute_force) {
    const bf::Objective obj = objective == "exact"
                                  ? bf::Objective::exact_cp
                                  : bf::Objective::model_cp;
    result = bf::brute_force_control_set(params, budget, obj, &g);
  } else {
    result = bf::optimal_control_set(params, budget);
  }

  ordered_json doc;
  doc["model"] = model;
  if (kind == bf::ModelKind::gmg) doc["alpha"] = alpha;
  doc["budget"] = budget;
  doc["brute_force"] = brute_force;
  doc["control_set"] = result.strategy.control_set;
  doc["controlled_beliefs"] = result.strategy.controlled_beliefs;
  doc["predicted_cp"] = result.predicted_cp;
  doc["beta"] = result.beta;
  doc["condition_satisfied"] = result.condition_satisfied;
  write_text(out, doc.dump(2) + "\n");
  return 0;
}

int run_learn_alpha(const std::string& method, const std::string& train_dir,
                    const std::string& grid_spec, std::uint64_t seed,
                    int trials, double control_fraction, double refine_step,
                    std::string subcategory, const std::string& out) {
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(train_dir))
    if (entry.is_regular_file()) paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  if (paths.empty())
    throw bf::ConfigError("no training files in " + train_dir);

  std::vector<bf::Graph> graphs;
  graphs.reserve(paths.size());
  for (const auto& p : paths) graphs.push_back(bf::read_edge_list_file(p));

  bf::AlphaSearchConfig cfg;
  cfg.grid = parse_grid(grid_spec);
  cfg.seed = seed;
  cfg.trials = trials;
  cfg.control_fraction = control_fraction;
  cfg.refine_step = refine_step;

  bf::AlphaLearningResult result;
  if (method == "full") {
    result = bf::learn_alpha_full(graphs, cfg);
  } else if (method == "partial") {
    std::vector<bf::GraphSummary> summaries;
    summaries.reserve(graphs.size());
    for (const auto& g : graphs) summaries.push_back(bf::GraphSummary::of(g));
    result = bf::learn_alpha_partial(summaries, cfg);
  } else {
    throw bf::ConfigError("method must be full or partial");
  }

  if (subcategory.empty())
    subcategory = fs::path(train_dir).filename().string();
  write_text(out, bf::model_card_json(subcategory, method, result, seed));
  std::cerr << "learned alpha = " << result.alpha << " (training error "
            << result.error << ")\n";
  return 0;
}

int run_experiment_cmd(const std::string& family, const std::string& config_path,
                       std::optional<std::uint64_t> seed,
                       const std::string& out_dir) {
  auto doc = json::parse(read_text(config_path));
  if (!family.empty()) doc["family"] = family;
  bf::ExperimentConfig cfg = bf::ExperimentConfig::from_json(doc);
  if (seed) cfg.master_seed = *seed;
  cfg.validate();

  const bf::ExperimentReport report = bf::run_experiment(cfg);

  fs::create_directories(out_dir);
  write_text((fs::path(out_dir) / "report.json").string(),
             report.to_canonical_json());
  write_text((fs::path(out_dir) / "cells.csv").string(), report.to_csv());
  std::cerr << "experiment '" << bf::to_string(cfg.family) << "' finished in "
            << report.wall_time_seconds << " s; report in " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Belief diffusion on social networks: simulation, closed-form "
               "estimation and control-strategy optimization"};
  app.set_version_flag("--version", bf::kVersion);
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a BA or GMG network");
  std::string sy_model = "ba", sy_out;
  int sy_n = 100, sy_m = 3;
  double sy_alpha = 0.0;
  std::uint64_t sy_seed = 0;
  synth->add_option("--model", sy_model)->check(CLI::IsMember({"ba", "gmg"}));
  synth->add_option("--nodes", sy_n)->required();
  synth->add_option("--m", sy_m)->required();
  synth->add_option("--alpha", sy_alpha);
  synth->add_option("--seed", sy_seed);
  synth->add_option("--out", sy_out)->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate",
                                      "Run the belief dynamics to convergence");
  std::string si_graph, si_w, si_control, si_out;
  bool si_w_uniform = false;
  double si_tol = 1e-10;
  std::uint64_t si_seed = 0;
  simulate->add_option("--graph", si_graph)->required();
  simulate->add_option("--w", si_w);
  simulate->add_flag("--w-uniform", si_w_uniform);
  simulate->add_option("--seed", si_seed);
  simulate->add_option("--control", si_control);
  simulate->add_option("--tol", si_tol);
  simulate->add_option("--out", si_out)->required();

  // estimate
  auto* estimate = app.add_subcommand(
      "estimate", "Closed-form converged beliefs and control power");
  std::string es_model = "ba", es_graph, es_degrees, es_control, es_wbar,
      es_out;
  double es_alpha = 0.0;
  estimate->add_option("--model", es_model)
      ->check(CLI::IsMember({"ba", "gmg"}));
  estimate->add_option("--graph", es_graph);
  estimate->add_option("--degrees", es_degrees);
  estimate->add_option("--alpha", es_alpha);
  estimate->add_option("--control", es_control);
  estimate->add_option("--w-bar", es_wbar);
  estimate->add_option("--out", es_out)->required();

  // optimize
  auto* optimize = app.add_subcommand("optimize",
                                      "Build an optimal control set");
  std::string op_model = "ba", op_graph, op_objective = "model", op_out;
  int op_budget = 0;
  double op_alpha = 0.0;
  bool op_brute = false;
  optimize->add_option("--model", op_model)
      ->check(CLI::IsMember({"ba", "gmg"}));
  optimize->add_option("--graph", op_graph)->required();
  optimize->add_option("--budget", op_budget)->required();
  optimize->add_option("--alpha", op_alpha);
  optimize->add_flag("--brute-force", op_brute);
  optimize->add_option("--objective", op_objective)
      ->check(CLI::IsMember({"model", "exact"}));
  optimize->add_option("--out", op_out)->required();

  // learn-alpha
  auto* learn = app.add_subcommand("learn-alpha",
                                   "Learn the clustering weight from data");
  std::string le_method = "full", le_train, le_grid = "-4:4:0.1",
      le_subcategory, le_out;
  std::uint64_t le_seed = 0;
  int le_trials = 100;
  double le_fraction = 0.05, le_refine = 0.01;
  learn->add_option("--method", le_method)
      ->check(CLI::IsMember({"full", "partial"}));
  learn->add_option("--train", le_train)->required();
  learn->add_option("--grid", le_grid);
  learn->add_option("--seed", le_seed);
  learn->add_option("--trials", le_trials);
  learn->add_option("--control-fraction", le_fraction);
  learn->add_option("--refine-step", le_refine);
  learn->add_option("--subcategory", le_subcategory);
  learn->add_option("--out", le_out)->required();

  // experiment
  auto* experiment = app.add_subcommand("experiment",
                                        "Run a seeded experiment family");
  std::string ex_family, ex_config, ex_out;
  std::optional<std::uint64_t> ex_seed;
  experiment->add_option("--family", ex_family)
      ->check(CLI::IsMember({"pij", "cp", "strategy"}));
  experiment->add_option("--config", ex_config)->required();
  experiment->add_option("--seed", ex_seed);
  experiment->add_option("--out", ex_out)->required();

  try {
    app.parse(argc, argv);
    if (*synth) return run_synth(sy_model, sy_n, sy_m, sy_alpha, sy_seed, sy_out);
    if (*simulate)
      return run_simulate(si_graph, si_w, si_w_uniform, si_seed, si_control,
                          si_tol, si_out);
    if (*estimate)
      return run_estimate(es_model, es_graph, es_degrees, es_alpha, es_control,
                          es_wbar, es_out);
    if (*optimize)
      return run_optimize(op_model, op_graph, op_budget, op_alpha, op_brute,
                          op_objective, op_out);
    if (*learn)
      return run_learn_alpha(le_method, le_train, le_grid, le_seed, le_trials,
                             le_fraction, le_refine, le_subcategory, le_out);
    if (*experiment)
      return run_experiment_cmd(ex_family, ex_config, ex_seed, ex_out);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  } catch (const bf::NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const bf::LearningError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const bf::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const bf::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "beliefflow/estimators.hpp"
#include "beliefflow/graph.hpp"

namespace beliefflow {

enum class ExperimentFamily { pij, cp, strategy };

const char* to_string(ExperimentFamily f);
ExperimentFamily family_from_string(const std::string& s);

/// Synthetic data source: one experiment cell per (m, alpha) combination
/// (per m for BA).
struct SyntheticSource {
  ModelKind model = ModelKind::gmg;
  int n = 100;
  std::vector<int> m_values = {3};
  std::vector<double> alpha_values;
};

struct ExperimentConfig {
  ExperimentFamily family = ExperimentFamily::pij;
  std::optional<SyntheticSource> synthetic;
  std::vector<std::string> graph_files;
  int realizations = 1000;  ///< graphs per cell (ensemble size / test networks)
  int trials = 100;         ///< private-belief draws per network
  double control_fraction = 0.05;
  std::optional<double> gmg_alpha;  ///< estimator alpha for cp/strategy
  std::string learn_method;         ///< "", "full" or "partial"
  std::uint64_t master_seed = 0;

  void validate() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
};

/// One (model, m, alpha) cell of the edge-probability verification.
struct PijCellReport {
  ModelKind model = ModelKind::ba;
  int m = 0;
  double alpha = 0.0;
  int n = 0;
  int realizations = 0;
  double aggregate_rel_error = 0.0;  ///< L1 ratio over off-diagonal pairs
  double per_pair_rel_error = 0.0;   ///< secondary eps-guarded mean ratio
  double clamped_fraction = 0.0;     ///< share of raw P values above 1
};

/// One test network of the converged-belief estimation experiment.
struct CpNetworkReport {
  int cell_m = 0;
  double cell_alpha = 0.0;
  int index = 0;
  int n = 0;
  double alpha_used = 0.0;
  double beta2 = 0.0;
  bool gmg_convergent = false;
  double mean_exact_cp = 0.0;
  double ba_rel_error = 0.0;
  double gmg_rel_error = 0.0;  ///< NaN when excluded (beta2 >= 1)
};

/// One test network of the strategy comparison.
struct StrategyNetworkReport {
  int cell_m = 0;
  double cell_alpha = 0.0;
  int index = 0;
  int n = 0;
  double alpha_used = 0.0;
  bool identical_sets = false;
  double mean_cp_ba_strategy = 0.0;
  double mean_cp_gmg_strategy = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string library_version;
  std::uint64_t master_seed = 0;
  double wall_time_seconds = 0.0;  ///< volatile; excluded from canonical output

  std::vector<PijCellReport> pij_cells;
  std::vector<CpNetworkReport> cp_networks;
  std::vector<StrategyNetworkReport> strategy_networks;

  // family aggregates (only the relevant block is serialized)
  double max_cell_error = 0.0;
  double mean_cell_error = 0.0;
  double ba_error_mean = 0.0;
  double gmg_error_mean = 0.0;
  double gmg_win_fraction = 0.0;
  int gmg_excluded_count = 0;
  double mean_cp_ba = 0.0;
  double mean_cp_gmg = 0.0;
  double strategy_win_fraction = 0.0;
  std::optional<double> learned_alpha;

  nlohmann::ordered_json to_json() const;
  static ExperimentReport from_json(const nlohmann::json& j);
  std::string to_canonical_json() const;
  std::string to_csv() const;
};

ExperimentReport run_pij_experiment(const ExperimentConfig& config);
ExperimentReport run_cp_experiment(const ExperimentConfig& config);
ExperimentReport run_strategy_experiment(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Regenerates the private-belief vector used by (cell, network, trial) in
/// the cp/strategy pipelines; any trial is reproducible in isolation.
std::vector<double> trial_belief_vector(std::uint64_t master_seed,
                                        int cell_index, int network_index,
                                        int trial_index, int n);

}  // namespace beliefflow

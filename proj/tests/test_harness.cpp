#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "beliefflow/errors.hpp"
#include "beliefflow/harness.hpp"
#include "test_util.hpp"

using namespace beliefflow;

namespace {

ExperimentConfig pij_config() {
  ExperimentConfig cfg;
  cfg.family = ExperimentFamily::pij;
  SyntheticSource src;
  src.model = ModelKind::gmg;
  src.n = 30;
  src.m_values = {1, 2};
  src.alpha_values = {-1.0, 1.0};
  cfg.synthetic = src;
  cfg.realizations = 50;
  cfg.master_seed = 11;
  return cfg;
}

ExperimentConfig cp_config() {
  ExperimentConfig cfg;
  cfg.family = ExperimentFamily::cp;
  SyntheticSource src;
  src.model = ModelKind::gmg;
  src.n = 40;
  src.m_values = {3};
  src.alpha_values = {1.0};
  cfg.synthetic = src;
  cfg.realizations = 4;
  cfg.trials = 10;
  cfg.gmg_alpha = 1.0;
  cfg.master_seed = 21;
  return cfg;
}

ExperimentConfig strategy_config() {
  ExperimentConfig cfg = cp_config();
  cfg.family = ExperimentFamily::strategy;
  cfg.master_seed = 31;
  return cfg;
}

}  // namespace

TEST_CASE("configs validate their invariants") {
  ExperimentConfig cfg = pij_config();
  cfg.synthetic.reset();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);  // no source at all

  cfg = pij_config();
  cfg.graph_files = {"x.txt"};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);  // two sources

  cfg = pij_config();
  cfg.realizations = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = cp_config();
  cfg.gmg_alpha.reset();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);  // neither alpha nor learning

  cfg = cp_config();
  cfg.learn_method = "full";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);  // both alpha and learning

  cfg = pij_config();
  cfg.synthetic->alpha_values.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);  // gmg pij needs alphas

  CHECK_THROWS_AS(run_cp_experiment(pij_config()), ConfigError);
}

TEST_CASE("config json round trip") {
  const ExperimentConfig cfg = cp_config();
  const auto j = cfg.to_json();
  const ExperimentConfig back = ExperimentConfig::from_json(j);
  CHECK(back.to_json() == j);
  CHECK(back.family == cfg.family);
  CHECK(back.synthetic->n == 40);
  CHECK(back.gmg_alpha == cfg.gmg_alpha);
}

TEST_CASE("pij reports are deterministic byte for byte") {
  const auto a = run_pij_experiment(pij_config());
  const auto b = run_pij_experiment(pij_config());
  CHECK(a.to_canonical_json() == b.to_canonical_json());
  CHECK(a.to_csv() == b.to_csv());
  CHECK(a.pij_cells.size() == 4);
  for (const auto& cell : a.pij_cells) {
    CHECK(std::isfinite(cell.aggregate_rel_error));
    CHECK(cell.aggregate_rel_error > 0.0);
    CHECK(cell.aggregate_rel_error < 1.0);
    CHECK(cell.realizations == 50);
  }
}

TEST_CASE("pij aggregates are recomputable from the cells") {
  const auto r = run_pij_experiment(pij_config());
  double max_err = 0.0, mean_err = 0.0;
  for (const auto& c : r.pij_cells) {
    max_err = std::max(max_err, c.aggregate_rel_error);
    mean_err += c.aggregate_rel_error;
  }
  CHECK(r.max_cell_error == max_err);
  CHECK(r.mean_cell_error == mean_err / r.pij_cells.size());
}

TEST_CASE("pij report round trips through json") {
  const auto r = run_pij_experiment(pij_config());
  const auto text = r.to_canonical_json();
  const auto back = ExperimentReport::from_json(nlohmann::json::parse(text));
  CHECK(back.to_canonical_json() == text);
}

TEST_CASE("cp experiment records per-network errors and aggregates") {
  const auto r = run_cp_experiment(cp_config());
  CHECK(r.cp_networks.size() == 4);

  double ba_sum = 0.0, gmg_sum = 0.0;
  int wins = 0, comparable = 0, excluded = 0;
  for (const auto& rec : r.cp_networks) {
    CHECK(std::isfinite(rec.ba_rel_error));
    CHECK(rec.alpha_used == 1.0);
    ba_sum += rec.ba_rel_error;
    if (rec.gmg_convergent) {
      gmg_sum += rec.gmg_rel_error;
      ++comparable;
      if (rec.gmg_rel_error < rec.ba_rel_error) ++wins;
    } else {
      CHECK(std::isnan(rec.gmg_rel_error));
      ++excluded;
    }
  }
  CHECK(r.ba_error_mean == ba_sum / r.cp_networks.size());
  if (comparable > 0) {
    CHECK(r.gmg_error_mean == gmg_sum / comparable);
    CHECK(r.gmg_win_fraction == static_cast<double>(wins) / comparable);
  }
  CHECK(r.gmg_excluded_count == excluded);

  const auto text = r.to_canonical_json();
  const auto back = ExperimentReport::from_json(nlohmann::json::parse(text));
  CHECK(back.to_canonical_json() == text);

  const auto again = run_cp_experiment(cp_config());
  CHECK(again.to_canonical_json() == text);
}

TEST_CASE("null control yields near-zero exact control power") {
  ExperimentConfig cfg = cp_config();
  cfg.control_fraction = 0.0;
  cfg.trials = 150;
  cfg.realizations = 3;
  const auto r = run_cp_experiment(cfg);
  for (const auto& rec : r.cp_networks) {
    // roughly a 3-sigma band for 150 seeded uniform draws on 40 nodes
    CHECK(std::abs(rec.mean_exact_cp) < 0.02);
  }
}

TEST_CASE("strategy experiment is deterministic and internally consistent") {
  const auto r = run_strategy_experiment(strategy_config());
  CHECK(r.strategy_networks.size() == 4);

  double cp_ba = 0.0, cp_gmg = 0.0;
  int wins = 0;
  for (const auto& rec : r.strategy_networks) {
    cp_ba += rec.mean_cp_ba_strategy;
    cp_gmg += rec.mean_cp_gmg_strategy;
    if (rec.mean_cp_gmg_strategy >= rec.mean_cp_ba_strategy) ++wins;
    CHECK(rec.mean_cp_ba_strategy > 0.0);  // pinning hubs to +1 lifts beliefs
  }
  CHECK(r.mean_cp_ba == cp_ba / r.strategy_networks.size());
  CHECK(r.mean_cp_gmg == cp_gmg / r.strategy_networks.size());
  CHECK(r.strategy_win_fraction ==
        static_cast<double>(wins) / r.strategy_networks.size());

  const auto again = run_strategy_experiment(strategy_config());
  CHECK(again.to_canonical_json() == r.to_canonical_json());

  const auto text = r.to_canonical_json();
  const auto back = ExperimentReport::from_json(nlohmann::json::parse(text));
  CHECK(back.to_canonical_json() == text);
}

TEST_CASE("null-control strategy cells report near-zero cp for both rules") {
  ExperimentConfig cfg = strategy_config();
  cfg.control_fraction = 0.0;
  cfg.trials = 100;
  cfg.realizations = 3;
  const auto r = run_strategy_experiment(cfg);
  for (const auto& rec : r.strategy_networks) {
    CHECK(rec.identical_sets);  // both rules pick the empty set
    CHECK(rec.mean_cp_ba_strategy == rec.mean_cp_gmg_strategy);
    CHECK(std::abs(rec.mean_cp_ba_strategy) < 0.03);
  }
}

TEST_CASE("alpha 0 on BA networks selects identical sets and equal cp") {
  ExperimentConfig cfg = strategy_config();
  cfg.synthetic->model = ModelKind::ba;
  cfg.synthetic->alpha_values.clear();
  cfg.gmg_alpha = 0.0;  // xi reduces to the degree list
  const auto r = run_strategy_experiment(cfg);
  for (const auto& rec : r.strategy_networks) {
    CHECK(rec.identical_sets);
    CHECK(rec.mean_cp_ba_strategy == rec.mean_cp_gmg_strategy);
  }
  CHECK(r.strategy_win_fraction == 1.0);
}

TEST_CASE("trial belief vectors are reproducible in isolation") {
  const auto a = trial_belief_vector(21, 0, 2, 5, 40);
  const auto b = trial_belief_vector(21, 0, 2, 5, 40);
  CHECK(a == b);
  const auto c = trial_belief_vector(21, 0, 2, 6, 40);
  CHECK(a != c);
  for (double x : a) {
    CHECK(x >= -1.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("learning inside the harness produces a usable alpha") {
  ExperimentConfig cfg = cp_config();
  cfg.gmg_alpha.reset();
  cfg.learn_method = "partial";
  cfg.synthetic->n = 30;
  cfg.synthetic->m_values = {2};
  cfg.synthetic->alpha_values = {1.0};
  cfg.realizations = 3;
  cfg.trials = 5;
  const auto r = run_cp_experiment(cfg);
  REQUIRE(r.learned_alpha.has_value());
  CHECK(std::isfinite(*r.learned_alpha));
  for (const auto& rec : r.cp_networks) CHECK(rec.alpha_used == *r.learned_alpha);
}

TEST_CASE("csv tables carry one row per record") {
  const auto pij = run_pij_experiment(pij_config());
  const auto csv = pij.to_csv();
  const auto rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 1 + static_cast<long>(pij.pij_cells.size()));
  CHECK(csv.find("aggregate_rel_error") != std::string::npos);
}

#include "beliefflow/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <utility>

#include "beliefflow/alpha_learning.hpp"
#include "beliefflow/control_opt.hpp"
#include "beliefflow/errors.hpp"
#include "beliefflow/dynamics.hpp"
#include "beliefflow/rng.hpp"
#include "beliefflow/synthesis.hpp"
#include "beliefflow/version.hpp"

namespace beliefflow {

namespace {

// Independent seed streams of the experiment pipelines.
constexpr std::uint64_t kPijStream = 1;
constexpr std::uint64_t kNetworkStream = 2;
constexpr std::uint64_t kTrialStream = 3;
constexpr std::uint64_t kTrainStream = 4;
constexpr std::uint64_t kLearnStream = 5;
constexpr std::uint64_t kSplitStream = 6;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double relative_error(double estimate, double exact) {
  const double diff = std::abs(estimate - exact);
  return std::abs(exact) < 1e-9 ? diff : diff / std::abs(exact);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Cell {
  int m = 0;
  double alpha = 0.0;
};

std::vector<Cell> synthetic_cells(const SyntheticSource& src) {
  std::vector<Cell> cells;
  if (src.model == ModelKind::ba || src.alpha_values.empty()) {
    for (int m : src.m_values) cells.push_back({m, 0.0});
  } else {
    for (double a : src.alpha_values)
      for (int m : src.m_values) cells.push_back({m, a});
  }
  return cells;
}

Graph synthesize_cell_graph(const SyntheticSource& src, const Cell& cell,
                            std::uint64_t seed) {
  SynthesisConfig sc;
  sc.n = src.n;
  sc.m = cell.m;
  sc.alpha = cell.alpha;
  sc.seed = seed;
  return src.model == ModelKind::ba ? synthesize_ba(sc) : synthesize_gmg(sc);
}

std::vector<Graph> load_graph_files(const std::vector<std::string>& paths) {
  std::vector<Graph> graphs;
  graphs.reserve(paths.size());
  for (const auto& p : paths) graphs.push_back(read_edge_list_file(p));
  return graphs;
}

double double_or_nan(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return kNaN;
  return j.at(key).get<double>();
}

nlohmann::ordered_json json_or_null(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

}  // namespace

const char* to_string(ExperimentFamily f) {
  switch (f) {
    case ExperimentFamily::pij: return "pij";
    case ExperimentFamily::cp: return "cp";
    case ExperimentFamily::strategy: return "strategy";
  }
  return "?";
}

ExperimentFamily family_from_string(const std::string& s) {
  if (s == "pij") return ExperimentFamily::pij;
  if (s == "cp") return ExperimentFamily::cp;
  if (s == "strategy") return ExperimentFamily::strategy;
  throw ConfigError("unknown experiment family '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (synthetic.has_value() == !graph_files.empty())
    throw ConfigError("exactly one data source (synthetic or files) required");
  if (realizations < 1) throw ConfigError("realizations must be >= 1");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!(control_fraction >= 0.0 && control_fraction <= 1.0))
    throw ConfigError("control_fraction must lie in [0, 1]");
  if (synthetic) {
    if (synthetic->n < 2) throw ConfigError("synthetic n must be >= 2");
    if (synthetic->m_values.empty())
      throw ConfigError("synthetic source needs at least one m value");
    for (int m : synthetic->m_values) {
      if (m < 1 || synthetic->n < m + 1)
        throw ConfigError("each m must satisfy 1 <= m <= n-1");
    }
    if (synthetic->model == ModelKind::gmg &&
        family == ExperimentFamily::pij && synthetic->alpha_values.empty())
      throw ConfigError("GMG pij cells need alpha values");
  }
  if (!learn_method.empty() && learn_method != "full" &&
      learn_method != "partial")
    throw ConfigError("learn_method must be 'full' or 'partial'");
  if (family != ExperimentFamily::pij) {
    if (gmg_alpha && !learn_method.empty())
      throw ConfigError("give either gmg_alpha or learn_method, not both");
    if (!gmg_alpha && learn_method.empty())
      throw ConfigError(
          "cp/strategy experiments need gmg_alpha or learn_method");
  }
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.family = family_from_string(j.at("family").get<std::string>());
  if (j.contains("synthetic")) {
    const auto& s = j.at("synthetic");
    SyntheticSource src;
    src.model = model_kind_from_string(s.at("model").get<std::string>());
    src.n = s.at("n").get<int>();
    if (s.contains("m")) {
      if (s.at("m").is_array())
        src.m_values = s.at("m").get<std::vector<int>>();
      else
        src.m_values = {s.at("m").get<int>()};
    }
    if (s.contains("alpha")) {
      if (s.at("alpha").is_array())
        src.alpha_values = s.at("alpha").get<std::vector<double>>();
      else
        src.alpha_values = {s.at("alpha").get<double>()};
    }
    cfg.synthetic = std::move(src);
  }
  if (j.contains("files"))
    cfg.graph_files = j.at("files").get<std::vector<std::string>>();
  if (j.contains("realizations")) cfg.realizations = j.at("realizations").get<int>();
  if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
  if (j.contains("control_fraction"))
    cfg.control_fraction = j.at("control_fraction").get<double>();
  if (j.contains("gmg_alpha") && !j.at("gmg_alpha").is_null())
    cfg.gmg_alpha = j.at("gmg_alpha").get<double>();
  if (j.contains("learn_method"))
    cfg.learn_method = j.at("learn_method").get<std::string>();
  if (j.contains("master_seed"))
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  return cfg;
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["family"] = to_string(family);
  if (synthetic) {
    nlohmann::ordered_json s;
    s["model"] = to_string(synthetic->model);
    s["n"] = synthetic->n;
    s["m"] = synthetic->m_values;
    s["alpha"] = synthetic->alpha_values;
    j["synthetic"] = std::move(s);
  } else {
    j["files"] = graph_files;
  }
  j["realizations"] = realizations;
  j["trials"] = trials;
  j["control_fraction"] = control_fraction;
  if (gmg_alpha) j["gmg_alpha"] = *gmg_alpha;
  if (!learn_method.empty()) j["learn_method"] = learn_method;
  j["master_seed"] = master_seed;
  return j;
}

std::vector<double> trial_belief_vector(std::uint64_t master_seed,
                                        int cell_index, int network_index,
                                        int trial_index, int n) {
  Rng rng(derive_seed(master_seed,
                      {kTrialStream, static_cast<std::uint64_t>(cell_index),
                       static_cast<std::uint64_t>(network_index),
                       static_cast<std::uint64_t>(trial_index)}));
  std::vector<double> w(n);
  for (double& x : w) x = rng.uniform(-1.0, 1.0);
  return w;
}

namespace {

/// Test networks (and optionally training networks) for one cp/strategy cell.
struct CellNetworks {
  std::vector<Graph> test;
  std::vector<Graph> training;
};

CellNetworks cell_networks(const ExperimentConfig& cfg, const Cell& cell,
                           int cell_index, bool need_training) {
  CellNetworks out;
  if (cfg.synthetic) {
    for (int k = 0; k < cfg.realizations; ++k) {
      out.test.push_back(synthesize_cell_graph(
          *cfg.synthetic, cell,
          derive_seed(cfg.master_seed,
                      {kNetworkStream, static_cast<std::uint64_t>(cell_index),
                       static_cast<std::uint64_t>(k)})));
    }
    if (need_training) {
      for (int k = 0; k < cfg.realizations; ++k) {
        out.training.push_back(synthesize_cell_graph(
            *cfg.synthetic, cell,
            derive_seed(cfg.master_seed,
                        {kTrainStream, static_cast<std::uint64_t>(cell_index),
                         static_cast<std::uint64_t>(k)})));
      }
    }
    return out;
  }
  auto graphs = load_graph_files(cfg.graph_files);
  if (!need_training) {
    out.test = std::move(graphs);
    return out;
  }
  // Seeded random half/half split, training first.
  std::vector<int> order(graphs.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(cfg.master_seed, {kSplitStream}));
  rng.shuffle(order);
  const std::size_t half = graphs.size() / 2;
  if (half == 0 || half == graphs.size())
    throw ConfigError("learning from files needs at least two graphs");
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    auto& dst = i < half ? out.training : out.test;
    dst.push_back(std::move(graphs[order[i]]));
  }
  return out;
}

double resolve_alpha(const ExperimentConfig& cfg, int cell_index,
                     const std::vector<Graph>& training) {
  if (cfg.gmg_alpha) return *cfg.gmg_alpha;
  AlphaSearchConfig learn_cfg = AlphaSearchConfig::defaults();
  learn_cfg.trials = cfg.trials;
  learn_cfg.control_fraction =
      cfg.control_fraction > 0.0 ? cfg.control_fraction : 0.05;
  learn_cfg.seed = derive_seed(
      cfg.master_seed, {kLearnStream, static_cast<std::uint64_t>(cell_index)});
  if (cfg.learn_method == "full") return learn_alpha_full(training, learn_cfg).alpha;
  std::vector<GraphSummary> summaries;
  summaries.reserve(training.size());
  for (const auto& g : training) summaries.push_back(GraphSummary::of(g));
  return learn_alpha_partial(summaries, learn_cfg).alpha;
}

}  // namespace

ExperimentReport run_pij_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.family != ExperimentFamily::pij)
    throw ConfigError("config family is not pij");
  const auto start = std::chrono::steady_clock::now();

  ExperimentReport report;
  report.config = cfg;
  report.library_version = kVersion;
  report.master_seed = cfg.master_seed;

  struct Ensemble {
    Cell cell;
    int n = 0;
    int realizations = 0;
    ModelKind model = ModelKind::ba;
    Eigen::MatrixXd mean_adj;
    std::vector<double> mean_deg;
    std::vector<double> mean_clus;
  };
  std::vector<Ensemble> ensembles;

  if (cfg.synthetic) {
    const auto cells = synthetic_cells(*cfg.synthetic);
    const int n = cfg.synthetic->n;
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
      Ensemble e;
      e.cell = cells[ci];
      e.n = n;
      e.realizations = cfg.realizations;
      e.model = cfg.synthetic->model;
      e.mean_adj = Eigen::MatrixXd::Zero(n, n);
      e.mean_deg.assign(n, 0.0);
      e.mean_clus.assign(n, 0.0);
      for (int r = 0; r < cfg.realizations; ++r) {
        const Graph g = synthesize_cell_graph(
            *cfg.synthetic, cells[ci],
            derive_seed(cfg.master_seed, {kPijStream, ci,
                                          static_cast<std::uint64_t>(r)}));
        for (const auto& [u, v] : g.edges()) {
          e.mean_adj(u, v) += 1.0;
          e.mean_adj(v, u) += 1.0;
        }
        for (int i = 0; i < n; ++i) {
          e.mean_deg[i] += g.degree_list()[i];
          e.mean_clus[i] += g.clustering_list()[i];
        }
      }
      e.mean_adj /= cfg.realizations;
      for (int i = 0; i < n; ++i) {
        e.mean_deg[i] /= cfg.realizations;
        e.mean_clus[i] /= cfg.realizations;
      }
      ensembles.push_back(std::move(e));
    }
  } else {
    // Ingested ensemble: the files are the realizations of a single cell.
    auto graphs = load_graph_files(cfg.graph_files);
    const int n = graphs.front().node_count();
    if (n >= AdjustedAdjacency::kDenseNodeLimit)
      throw ConfigError("pij ensembles need n < 2000; snowball-sample first");
    long long edge_total = 0;
    Ensemble e;
    e.n = n;
    e.realizations = static_cast<int>(graphs.size());
    e.model = cfg.gmg_alpha ? ModelKind::gmg : ModelKind::ba;
    e.cell.alpha = cfg.gmg_alpha.value_or(0.0);
    e.mean_adj = Eigen::MatrixXd::Zero(n, n);
    e.mean_deg.assign(n, 0.0);
    e.mean_clus.assign(n, 0.0);
    for (const auto& g : graphs) {
      if (g.node_count() != n)
        throw ConfigError("all pij ensemble graphs must share a node count");
      edge_total += g.edge_count();
      for (const auto& [u, v] : g.edges()) {
        e.mean_adj(u, v) += 1.0;
        e.mean_adj(v, u) += 1.0;
      }
      for (int i = 0; i < n; ++i) {
        e.mean_deg[i] += g.degree_list()[i];
        e.mean_clus[i] += g.clustering_list()[i];
      }
    }
    e.mean_adj /= e.realizations;
    for (int i = 0; i < n; ++i) {
      e.mean_deg[i] /= e.realizations;
      e.mean_clus[i] /= e.realizations;
    }
    e.cell.m = static_cast<int>(std::max<long long>(
        1, std::llround(static_cast<double>(edge_total) / e.realizations / n)));
    ensembles.push_back(std::move(e));
  }

  for (const auto& e : ensembles) {
    PijCellReport cell;
    cell.model = e.model;
    cell.m = e.cell.m;
    cell.alpha = e.cell.alpha;
    cell.n = e.n;
    cell.realizations = e.realizations;

    ModelParams params =
        e.model == ModelKind::ba
            ? ModelParams::from_lists(ModelKind::ba, e.mean_deg, {}, 0.0)
            : ModelParams::from_lists(ModelKind::gmg, e.mean_deg, e.mean_clus,
                                      e.cell.alpha);

    const double eps = 1.0 / e.realizations;
    double abs_diff_sum = 0.0, abar_sum = 0.0, ratio_sum = 0.0;
    long clamped = 0, pairs = 0;
    for (int i = 0; i < e.n; ++i) {
      for (int j = 0; j < e.n; ++j) {
        if (i == j) continue;
        double p = e.model == ModelKind::ba
                       ? edge_prob_ba(params.degrees, i, j)
                       : edge_prob_gmg(params, i, j);
        if (p > 1.0) {
          ++clamped;
          p = 1.0;  // probability semantics for the validation metric
        }
        const double abar = e.mean_adj(i, j);
        abs_diff_sum += std::abs(p - abar);
        abar_sum += abar;
        ratio_sum += std::abs(p - abar) / std::max(abar, eps);
        ++pairs;
      }
    }
    cell.aggregate_rel_error = abs_diff_sum / abar_sum;
    cell.per_pair_rel_error = ratio_sum / pairs;
    cell.clamped_fraction = static_cast<double>(clamped) / pairs;
    report.pij_cells.push_back(cell);
  }

  report.max_cell_error = 0.0;
  report.mean_cell_error = 0.0;
  for (const auto& c : report.pij_cells) {
    report.max_cell_error = std::max(report.max_cell_error, c.aggregate_rel_error);
    report.mean_cell_error += c.aggregate_rel_error;
  }
  report.mean_cell_error /= report.pij_cells.size();

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

ExperimentReport run_cp_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.family != ExperimentFamily::cp)
    throw ConfigError("config family is not cp");
  const auto start = std::chrono::steady_clock::now();

  ExperimentReport report;
  report.config = cfg;
  report.library_version = kVersion;
  report.master_seed = cfg.master_seed;

  const std::vector<Cell> cells =
      cfg.synthetic ? synthetic_cells(*cfg.synthetic) : std::vector<Cell>{{0, 0.0}};
  const bool learning = !cfg.learn_method.empty();

  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    auto nets = cell_networks(cfg, cells[ci], static_cast<int>(ci), learning);
    const double alpha_used =
        resolve_alpha(cfg, static_cast<int>(ci), nets.training);
    if (learning && cells.size() == 1) report.learned_alpha = alpha_used;

    for (std::size_t k = 0; k < nets.test.size(); ++k) {
      const Graph& g = nets.test[k];
      const int n = g.node_count();
      ControlStrategy strategy = ControlStrategy::pin_all(
          top_degree_control_set(g, cfg.control_fraction), 1.0);

      CpNetworkReport rec;
      rec.cell_m = cells[ci].m;
      rec.cell_alpha = cells[ci].alpha;
      rec.index = static_cast<int>(k);
      rec.n = n;
      rec.alpha_used = alpha_used;

      ModelParams ba = ModelParams::ba_params(g);
      ModelParams gmg = ModelParams::gmg_params(g, alpha_used);
      rec.beta2 = beta(gmg, strategy);
      rec.gmg_convergent = std::abs(rec.beta2) < 1.0;

      ExactSolver solver(g, strategy);
      double exact_sum = 0.0, ba_err_sum = 0.0, gmg_err_sum = 0.0;
      for (int t = 0; t < cfg.trials; ++t) {
        const auto w = trial_belief_vector(cfg.master_seed, static_cast<int>(ci),
                                           static_cast<int>(k), t, n);
        const double exact_cp = control_power_of(solver.solve(w), w);
        exact_sum += exact_cp;

        ba.w_bar = w;
        ba_err_sum += relative_error(model_control_power(ba, strategy).cp,
                                     exact_cp);
        if (rec.gmg_convergent) {
          gmg.w_bar = w;
          gmg_err_sum += relative_error(model_control_power(gmg, strategy).cp,
                                        exact_cp);
        }
      }
      rec.mean_exact_cp = exact_sum / cfg.trials;
      rec.ba_rel_error = ba_err_sum / cfg.trials;
      rec.gmg_rel_error = rec.gmg_convergent ? gmg_err_sum / cfg.trials : kNaN;
      report.cp_networks.push_back(std::move(rec));
    }
  }

  double ba_sum = 0.0, gmg_sum = 0.0;
  int gmg_count = 0, wins = 0, comparable = 0;
  for (const auto& rec : report.cp_networks) {
    ba_sum += rec.ba_rel_error;
    if (rec.gmg_convergent) {
      gmg_sum += rec.gmg_rel_error;
      ++gmg_count;
      ++comparable;
      if (rec.gmg_rel_error < rec.ba_rel_error) ++wins;
    } else {
      ++report.gmg_excluded_count;
    }
  }
  report.ba_error_mean = ba_sum / report.cp_networks.size();
  report.gmg_error_mean = gmg_count ? gmg_sum / gmg_count : kNaN;
  report.gmg_win_fraction =
      comparable ? static_cast<double>(wins) / comparable : kNaN;

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

ExperimentReport run_strategy_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.family != ExperimentFamily::strategy)
    throw ConfigError("config family is not strategy");
  const auto start = std::chrono::steady_clock::now();

  ExperimentReport report;
  report.config = cfg;
  report.library_version = kVersion;
  report.master_seed = cfg.master_seed;

  const std::vector<Cell> cells =
      cfg.synthetic ? synthetic_cells(*cfg.synthetic) : std::vector<Cell>{{0, 0.0}};
  const bool learning = !cfg.learn_method.empty();

  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    auto nets = cell_networks(cfg, cells[ci], static_cast<int>(ci), learning);
    const double alpha_used =
        resolve_alpha(cfg, static_cast<int>(ci), nets.training);
    if (learning && cells.size() == 1) report.learned_alpha = alpha_used;

    for (std::size_t k = 0; k < nets.test.size(); ++k) {
      const Graph& g = nets.test[k];
      const int n = g.node_count();
      const int c = std::min(
          n, static_cast<int>(std::ceil(cfg.control_fraction * n)));

      StrategyNetworkReport rec;
      rec.cell_m = cells[ci].m;
      rec.cell_alpha = cells[ci].alpha;
      rec.index = static_cast<int>(k);
      rec.n = n;
      rec.alpha_used = alpha_used;

      ControlStrategy ba_strategy =
          optimal_control_set(ModelParams::ba_params(g), c).strategy;
      ControlStrategy gmg_strategy =
          optimal_control_set(ModelParams::gmg_params(g, alpha_used), c)
              .strategy;

      auto sorted = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        return v;
      };
      rec.identical_sets =
          sorted(ba_strategy.control_set) == sorted(gmg_strategy.control_set);

      ExactSolver ba_solver(g, ba_strategy);
      ExactSolver gmg_solver(g, gmg_strategy);
      double ba_sum = 0.0, gmg_sum = 0.0;
      for (int t = 0; t < cfg.trials; ++t) {
        const auto w = trial_belief_vector(cfg.master_seed, static_cast<int>(ci),
                                           static_cast<int>(k), t, n);
        ba_sum += control_power_of(ba_solver.solve(w), w);
        gmg_sum += control_power_of(gmg_solver.solve(w), w);
      }
      rec.mean_cp_ba_strategy = ba_sum / cfg.trials;
      rec.mean_cp_gmg_strategy = gmg_sum / cfg.trials;
      report.strategy_networks.push_back(std::move(rec));
    }
  }

  double cp_ba = 0.0, cp_gmg = 0.0;
  int wins = 0;
  for (const auto& rec : report.strategy_networks) {
    cp_ba += rec.mean_cp_ba_strategy;
    cp_gmg += rec.mean_cp_gmg_strategy;
    if (rec.mean_cp_gmg_strategy >= rec.mean_cp_ba_strategy) ++wins;
  }
  report.mean_cp_ba = cp_ba / report.strategy_networks.size();
  report.mean_cp_gmg = cp_gmg / report.strategy_networks.size();
  report.strategy_win_fraction =
      static_cast<double>(wins) / report.strategy_networks.size();

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.family) {
    case ExperimentFamily::pij: return run_pij_experiment(cfg);
    case ExperimentFamily::cp: return run_cp_experiment(cfg);
    case ExperimentFamily::strategy: return run_strategy_experiment(cfg);
  }
  throw ConfigError("unknown experiment family");
}

nlohmann::ordered_json ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = config.to_json();
  j["library_version"] = library_version;
  j["master_seed"] = master_seed;
  switch (config.family) {
    case ExperimentFamily::pij: {
      nlohmann::ordered_json cells = nlohmann::ordered_json::array();
      for (const auto& c : pij_cells) {
        nlohmann::ordered_json jc;
        jc["model"] = to_string(c.model);
        jc["m"] = c.m;
        jc["alpha"] = c.alpha;
        jc["n"] = c.n;
        jc["realizations"] = c.realizations;
        jc["aggregate_rel_error"] = c.aggregate_rel_error;
        jc["per_pair_rel_error"] = c.per_pair_rel_error;
        jc["clamped_fraction"] = c.clamped_fraction;
        cells.push_back(std::move(jc));
      }
      j["cells"] = std::move(cells);
      nlohmann::ordered_json agg;
      agg["max_cell_error"] = max_cell_error;
      agg["mean_cell_error"] = mean_cell_error;
      j["aggregates"] = std::move(agg);
      break;
    }
    case ExperimentFamily::cp: {
      nlohmann::ordered_json nets = nlohmann::ordered_json::array();
      for (const auto& r : cp_networks) {
        nlohmann::ordered_json jr;
        jr["cell_m"] = r.cell_m;
        jr["cell_alpha"] = r.cell_alpha;
        jr["index"] = r.index;
        jr["n"] = r.n;
        jr["alpha_used"] = r.alpha_used;
        jr["beta2"] = r.beta2;
        jr["gmg_convergent"] = r.gmg_convergent;
        jr["mean_exact_cp"] = r.mean_exact_cp;
        jr["ba_rel_error"] = r.ba_rel_error;
        jr["gmg_rel_error"] = json_or_null(r.gmg_rel_error);
        nets.push_back(std::move(jr));
      }
      j["networks"] = std::move(nets);
      nlohmann::ordered_json agg;
      agg["ba_error_mean"] = ba_error_mean;
      agg["gmg_error_mean"] = json_or_null(gmg_error_mean);
      agg["gmg_win_fraction"] = json_or_null(gmg_win_fraction);
      agg["gmg_excluded_count"] = gmg_excluded_count;
      if (learned_alpha) agg["learned_alpha"] = *learned_alpha;
      j["aggregates"] = std::move(agg);
      break;
    }
    case ExperimentFamily::strategy: {
      nlohmann::ordered_json nets = nlohmann::ordered_json::array();
      for (const auto& r : strategy_networks) {
        nlohmann::ordered_json jr;
        jr["cell_m"] = r.cell_m;
        jr["cell_alpha"] = r.cell_alpha;
        jr["index"] = r.index;
        jr["n"] = r.n;
        jr["alpha_used"] = r.alpha_used;
        jr["identical_sets"] = r.identical_sets;
        jr["mean_cp_ba_strategy"] = r.mean_cp_ba_strategy;
        jr["mean_cp_gmg_strategy"] = r.mean_cp_gmg_strategy;
        nets.push_back(std::move(jr));
      }
      j["networks"] = std::move(nets);
      nlohmann::ordered_json agg;
      agg["mean_cp_ba"] = mean_cp_ba;
      agg["mean_cp_gmg"] = mean_cp_gmg;
      agg["strategy_win_fraction"] = strategy_win_fraction;
      if (learned_alpha) agg["learned_alpha"] = *learned_alpha;
      j["aggregates"] = std::move(agg);
      break;
    }
  }
  return j;
}

ExperimentReport ExperimentReport::from_json(const nlohmann::json& j) {
  ExperimentReport r;
  r.config = ExperimentConfig::from_json(j.at("config"));
  r.library_version = j.at("library_version").get<std::string>();
  r.master_seed = j.at("master_seed").get<std::uint64_t>();
  const auto& agg = j.at("aggregates");
  switch (r.config.family) {
    case ExperimentFamily::pij: {
      for (const auto& jc : j.at("cells")) {
        PijCellReport c;
        c.model = model_kind_from_string(jc.at("model").get<std::string>());
        c.m = jc.at("m").get<int>();
        c.alpha = jc.at("alpha").get<double>();
        c.n = jc.at("n").get<int>();
        c.realizations = jc.at("realizations").get<int>();
        c.aggregate_rel_error = jc.at("aggregate_rel_error").get<double>();
        c.per_pair_rel_error = jc.at("per_pair_rel_error").get<double>();
        c.clamped_fraction = jc.at("clamped_fraction").get<double>();
        r.pij_cells.push_back(c);
      }
      r.max_cell_error = agg.at("max_cell_error").get<double>();
      r.mean_cell_error = agg.at("mean_cell_error").get<double>();
      break;
    }
    case ExperimentFamily::cp: {
      for (const auto& jr : j.at("networks")) {
        CpNetworkReport c;
        c.cell_m = jr.at("cell_m").get<int>();
        c.cell_alpha = jr.at("cell_alpha").get<double>();
        c.index = jr.at("index").get<int>();
        c.n = jr.at("n").get<int>();
        c.alpha_used = jr.at("alpha_used").get<double>();
        c.beta2 = jr.at("beta2").get<double>();
        c.gmg_convergent = jr.at("gmg_convergent").get<bool>();
        c.mean_exact_cp = jr.at("mean_exact_cp").get<double>();
        c.ba_rel_error = jr.at("ba_rel_error").get<double>();
        c.gmg_rel_error = double_or_nan(jr, "gmg_rel_error");
        r.cp_networks.push_back(c);
      }
      r.ba_error_mean = agg.at("ba_error_mean").get<double>();
      r.gmg_error_mean = double_or_nan(agg, "gmg_error_mean");
      r.gmg_win_fraction = double_or_nan(agg, "gmg_win_fraction");
      r.gmg_excluded_count = agg.at("gmg_excluded_count").get<int>();
      if (agg.contains("learned_alpha"))
        r.learned_alpha = agg.at("learned_alpha").get<double>();
      break;
    }
    case ExperimentFamily::strategy: {
      for (const auto& jr : j.at("networks")) {
        StrategyNetworkReport c;
        c.cell_m = jr.at("cell_m").get<int>();
        c.cell_alpha = jr.at("cell_alpha").get<double>();
        c.index = jr.at("index").get<int>();
        c.n = jr.at("n").get<int>();
        c.alpha_used = jr.at("alpha_used").get<double>();
        c.identical_sets = jr.at("identical_sets").get<bool>();
        c.mean_cp_ba_strategy = jr.at("mean_cp_ba_strategy").get<double>();
        c.mean_cp_gmg_strategy = jr.at("mean_cp_gmg_strategy").get<double>();
        r.strategy_networks.push_back(c);
      }
      r.mean_cp_ba = agg.at("mean_cp_ba").get<double>();
      r.mean_cp_gmg = agg.at("mean_cp_gmg").get<double>();
      r.strategy_win_fraction = agg.at("strategy_win_fraction").get<double>();
      if (agg.contains("learned_alpha"))
        r.learned_alpha = agg.at("learned_alpha").get<double>();
      break;
    }
  }
  return r;
}

std::string ExperimentReport::to_canonical_json() const {
  return to_json().dump(2) + "\n";
}

std::string ExperimentReport::to_csv() const {
  std::string out;
  switch (config.family) {
    case ExperimentFamily::pij:
      out = "model,m,alpha,n,realizations,aggregate_rel_error,"
            "per_pair_rel_error,clamped_fraction\n";
      for (const auto& c : pij_cells) {
        out += std::string(to_string(c.model)) + "," + std::to_string(c.m) +
               "," + fmt(c.alpha) + "," + std::to_string(c.n) + "," +
               std::to_string(c.realizations) + "," +
               fmt(c.aggregate_rel_error) + "," + fmt(c.per_pair_rel_error) +
               "," + fmt(c.clamped_fraction) + "\n";
      }
      break;
    case ExperimentFamily::cp:
      out = "cell_m,cell_alpha,index,n,alpha_used,beta2,gmg_convergent,"
            "mean_exact_cp,ba_rel_error,gmg_rel_error\n";
      for (const auto& r : cp_networks) {
        out += std::to_string(r.cell_m) + "," + fmt(r.cell_alpha) + "," +
               std::to_string(r.index) + "," + std::to_string(r.n) + "," +
               fmt(r.alpha_used) + "," + fmt(r.beta2) + "," +
               (r.gmg_convergent ? "1" : "0") + "," + fmt(r.mean_exact_cp) +
               "," + fmt(r.ba_rel_error) + "," + fmt(r.gmg_rel_error) + "\n";
      }
      break;
    case ExperimentFamily::strategy:
      out = "cell_m,cell_alpha,index,n,alpha_used,identical_sets,"
            "mean_cp_ba_strategy,mean_cp_gmg_strategy\n";
      for (const auto& r : strategy_networks) {
        out += std::to_string(r.cell_m) + "," + fmt(r.cell_alpha) + "," +
               std::to_string(r.index) + "," + std::to_string(r.n) + "," +
               fmt(r.alpha_used) + "," + (r.identical_sets ? "1" : "0") + "," +
               fmt(r.mean_cp_ba_strategy) + "," +
               fmt(r.mean_cp_gmg_strategy) + "\n";
      }
      break;
  }
  return out;
}

}  // namespace beliefflow

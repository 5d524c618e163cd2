#include "beliefflow/alpha_learning.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "beliefflow/control_opt.hpp"
#include "beliefflow/errors.hpp"
#include "beliefflow/estimators.hpp"
#include "beliefflow/dynamics.hpp"
#include "beliefflow/rng.hpp"
#include "beliefflow/synthesis.hpp"

namespace beliefflow {

namespace {

constexpr std::uint64_t kFullStream = 0x66756c6cULL;     // "full"
constexpr std::uint64_t kPartialStream = 0x70617274ULL;  // "part"

constexpr double kInf = std::numeric_limits<double>::infinity();

double relative_error(double estimate, double exact) {
  const double diff = std::abs(estimate - exact);
  return std::abs(exact) < 1e-9 ? diff : diff / std::abs(exact);
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

/// Shared coarse-to-fine driver over a deterministic candidate evaluator.
AlphaLearningResult grid_search(const AlphaSearchConfig& config,
                                const std::function<double(double)>& evaluate) {
  std::vector<double> grid = config.grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> candidates = grid;
  std::vector<double> errors;
  errors.reserve(grid.size());
  for (double a : grid) errors.push_back(evaluate(a));

  auto argmin = [&]() {
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
      if (errors[i] < errors[best]) best = i;
    return best;
  };

  std::size_t coarse = argmin();
  if (config.refine_step > 0.0 && grid.size() > 1) {
    // Refine between the coarse optimum's grid neighbors.
    auto pos = std::lower_bound(grid.begin(), grid.end(), candidates[coarse]) -
               grid.begin();
    const double lo = grid[pos > 0 ? pos - 1 : pos];
    const double hi =
        grid[pos + 1 < static_cast<long>(grid.size()) ? pos + 1 : pos];
    for (double a = lo; a <= hi + 1e-12; a += config.refine_step) {
      bool seen = false;
      for (double existing : candidates)
        if (std::abs(existing - a) < 1e-12) seen = true;
      if (seen) continue;
      candidates.push_back(a);
      errors.push_back(evaluate(a));
    }
  }

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) {
              return candidates[a] < candidates[b];
            });

  AlphaLearningResult result;
  for (std::size_t i : order) {
    result.candidates.push_back(candidates[i]);
    result.errors.push_back(errors[i]);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.candidates.size(); ++i)
    if (result.errors[i] < result.errors[best]) best = i;
  if (std::isinf(result.errors[best]))
    throw LearningError(
        "every alpha candidate left a non-convergent series on the training "
        "set");
  result.alpha = result.candidates[best];
  result.error = result.errors[best];
  return result;
}

}  // namespace

AlphaSearchConfig AlphaSearchConfig::defaults() {
  AlphaSearchConfig cfg;
  for (int k = -40; k <= 40; ++k) cfg.grid.push_back(k / 10.0);
  return cfg;
}

void AlphaSearchConfig::validate() const {
  if (grid.empty()) throw ConfigError("alpha grid is empty");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!(control_fraction > 0.0 && control_fraction <= 1.0))
    throw ConfigError("control_fraction must lie in (0, 1]");
}

GraphSummary GraphSummary::of(const Graph& g) {
  GraphSummary s;
  s.n = g.node_count();
  s.degrees_sorted.assign(g.degree_list().begin(), g.degree_list().end());
  s.clusterings_sorted = g.clustering_list();
  std::sort(s.degrees_sorted.begin(), s.degrees_sorted.end());
  std::sort(s.clusterings_sorted.begin(), s.clusterings_sorted.end());
  const long long m = std::llround(static_cast<double>(g.edge_count()) / s.n);
  s.m = static_cast<int>(std::clamp<long long>(m, 1, std::max(1, s.n - 1)));
  return s;
}

double evaluate_candidate_full(const std::vector<Graph>& training,
                               const AlphaSearchConfig& config, double alpha) {
  config.validate();
  if (training.empty()) throw ConfigError("training set is empty");

  double total = 0.0;
  for (std::size_t gi = 0; gi < training.size(); ++gi) {
    const Graph& g = training[gi];
    const int n = g.node_count();
    ControlStrategy strategy = ControlStrategy::pin_all(
        top_degree_control_set(g, config.control_fraction), 1.0);

    ModelParams params = ModelParams::gmg_params(g, alpha);
    if (!(std::abs(beta(params, strategy)) < 1.0)) {
      total += kInf;  // penalized on this graph, still averaged
      continue;
    }

    ExactSolver solver(g, strategy);
    double graph_error = 0.0;
    for (int t = 0; t < config.trials; ++t) {
      Rng rng(derive_seed(config.seed,
                          {kFullStream, gi, static_cast<std::uint64_t>(t)}));
      std::vector<double> w(n);
      for (double& x : w) x = rng.uniform(-1.0, 1.0);

      const double exact_cp = control_power_of(solver.solve(w), w);
      params.w_bar = w;  // the sampled list fills the estimator's w_bar slots
      const double model_cp = model_control_power(params, strategy).cp;
      graph_error += relative_error(model_cp, exact_cp);
    }
    total += graph_error / config.trials;
  }
  return total / training.size();
}

double evaluate_candidate_partial(const std::vector<GraphSummary>& training,
                                  const AlphaSearchConfig& config,
                                  double alpha) {
  config.validate();
  if (training.empty()) throw ConfigError("training set is empty");
  const int n = training.front().n;
  const int m = training.front().m;
  for (const auto& s : training) {
    if (s.n != n || s.m != m)
      throw ConfigError("training summaries must share n and m");
  }
  if (n < m + 1) throw ConfigError("summaries imply n < m+1");

  std::vector<double> deg_mean(n, 0.0), clus_mean(n, 0.0);
  for (int t = 0; t < config.trials; ++t) {
    SynthesisConfig sc;
    sc.n = n;
    sc.m = m;
    sc.alpha = alpha;
    sc.seed = derive_seed(config.seed,
                          {kPartialStream, std::bit_cast<std::uint64_t>(alpha),
                           static_cast<std::uint64_t>(t)});
    const Graph g = synthesize_gmg(sc);
    std::vector<double> d(g.degree_list().begin(), g.degree_list().end());
    std::vector<double> cl = g.clustering_list();
    std::sort(d.begin(), d.end());
    std::sort(cl.begin(), cl.end());
    for (int i = 0; i < n; ++i) {
      deg_mean[i] += d[i];
      clus_mean[i] += cl[i];
    }
  }
  for (int i = 0; i < n; ++i) {
    deg_mean[i] /= config.trials;
    clus_mean[i] /= config.trials;
  }

  // Training-side counterpart: sorted lists averaged over the training set,
  // so both sides of the comparison are concentrated ensemble means.
  std::vector<double> deg_train(n, 0.0), clus_train(n, 0.0);
  for (const auto& s : training) {
    for (int i = 0; i < n; ++i) {
      deg_train[i] += s.degrees_sorted[i];
      clus_train[i] += s.clusterings_sorted[i];
    }
  }
  for (int i = 0; i < n; ++i) {
    deg_train[i] /= training.size();
    clus_train[i] /= training.size();
  }

  // Each L1 distance is scaled by the training mass, which keeps the degree
  // and clustering terms comparable while preserving the overall clustering
  // level (the strongest signal the weight leaves in a graph).
  double deg_mass = 0.0, clus_mass = 0.0;
  for (double x : deg_train) deg_mass += x;
  for (double x : clus_train) clus_mass += x;
  double score = l1_distance(deg_mean, deg_train) / deg_mass;
  if (clus_mass > 0.0)
    score += l1_distance(clus_mean, clus_train) / clus_mass;
  return score;
}

AlphaLearningResult learn_alpha_full(const std::vector<Graph>& training,
                                     const AlphaSearchConfig& config) {
  config.validate();
  if (training.empty()) throw ConfigError("training set is empty");
  return grid_search(config, [&](double a) {
    return evaluate_candidate_full(training, config, a);
  });
}

AlphaLearningResult learn_alpha_partial(
    const std::vector<GraphSummary>& training,
    const AlphaSearchConfig& config) {
  config.validate();
  if (training.empty()) throw ConfigError("training set is empty");
  return grid_search(config, [&](double a) {
    return evaluate_candidate_partial(training, config, a);
  });
}

std::string model_card_json(const std::string& subcategory,
                            const std::string& method,
                            const AlphaLearningResult& result,
                            std::uint64_t seed) {
  nlohmann::ordered_json card;
  card["subcategory"] = subcategory;
  card["alpha"] = result.alpha;
  card["method"] = method;
  card["grid"] = result.candidates;
  card["error_curve"] = result.errors;
  card["seed"] = seed;
  return card.dump(2) + "\n";
}

}  // namespace beliefflow

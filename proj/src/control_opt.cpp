#include "beliefflow/control_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "beliefflow/errors.hpp"

namespace beliefflow {

namespace {

double safe_predicted_cp(const ModelParams& params, const ControlStrategy& c,
                         double* beta_out) {
  try {
    auto est = model_control_power(params, c);
    *beta_out = est.beta;
    return est.cp;
  } catch (const NonConvergenceError& e) {
    *beta_out = e.value();
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

OptimizationResult optimal_control_set(const ModelParams& params, int c) {
  params.validate();
  const int n = params.size();
  if (c < 0 || c > n)
    throw ConfigError("control budget must lie in [0, N]");

  const auto xi = params.node_weights();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (xi[a] != xi[b]) return xi[a] > xi[b];
    return a < b;
  });
  order.resize(c);

  OptimizationResult out;
  out.strategy = ControlStrategy::pin_all(std::move(order), 1.0);
  out.predicted_cp = safe_predicted_cp(params, out.strategy, &out.beta);
  if (params.model == ModelKind::gmg)
    out.condition_satisfied =
        check_gmg_condition(params, out.strategy).satisfied;
  return out;
}

ConditionCheck check_gmg_condition(const ModelParams& params,
                                   const ControlStrategy& c) {
  params.validate();
  c.validate(params.size());

  ConditionCheck out;
  out.beta2 = beta(params, c);
  if (out.beta2 == 0.0) {
    // No residual series at all: the strategy pins every influential node.
    out.trivial = true;
    out.satisfied = true;
    out.lhs = std::numeric_limits<double>::infinity();
    out.rhs = 1.0;
    return out;
  }

  const auto xi = params.node_weights();
  std::vector<char> mask(params.size(), 0);
  for (int v : c.control_set) mask[v] = 1;

  double controlled_weight = 0.0;
  for (int v : c.control_set) controlled_weight += xi[v];
  double residual = 0.0;  // sum over non-controlled of xi^2/(1+d)
  for (int i = 0; i < params.size(); ++i)
    if (!mask[i]) residual += xi[i] * xi[i] / (1.0 + params.degrees[i]);

  out.lhs = 1.0 / out.beta2;
  out.rhs = 1.0 + std::max(1.0, std::pow(2.0, params.alpha)) *
                      controlled_weight / residual;
  out.satisfied = out.lhs > out.rhs;
  return out;
}

OptimizationResult brute_force_control_set(const ModelParams& params, int c,
                                           Objective objective,
                                           const Graph* graph) {
  params.validate();
  const int n = params.size();
  if (c < 0 || c > n)
    throw ConfigError("control budget must lie in [0, N]");
  if (objective == Objective::exact_cp && graph == nullptr)
    throw ConfigError("exact objective requires a graph");
  if (objective == Objective::exact_cp && graph->node_count() != n)
    throw ConfigError("graph size does not match params");

  // Guard the subset count before enumerating.
  double count = 1.0;
  for (int i = 0; i < c; ++i) count *= static_cast<double>(n - i) / (i + 1);
  if (count > 1e6)
    throw ConfigError(
        "too many candidate subsets; use optimal_control_set instead");

  const auto w_bar_vec = [&] {
    std::vector<double> w(n, 0.0);
    for (int i = 0; i < n; ++i) w[i] = params.w_bar_at(i);
    return w;
  }();

  auto evaluate = [&](const ControlStrategy& strategy, double* beta_out)
      -> double {
    if (objective == Objective::model_cp)
      return safe_predicted_cp(params, strategy, beta_out);
    *beta_out = beta(params, strategy);
    return expected_control_power(*graph, strategy, w_bar_vec);
  };

  std::vector<int> subset(c);
  std::iota(subset.begin(), subset.end(), 0);

  bool have_best = false;
  OptimizationResult best;
  double best_value = -std::numeric_limits<double>::infinity();

  auto consider = [&](const std::vector<int>& nodes) {
    ControlStrategy strategy = ControlStrategy::pin_all(nodes, 1.0);
    double b = 0.0;
    double value = evaluate(strategy, &b);
    if (std::isnan(value)) return;  // divergent series: not a valid candidate
    // Strictly greater keeps the first (lexicographically smallest) max.
    if (!have_best || value > best_value) {
      have_best = true;
      best_value = value;
      best.strategy = std::move(strategy);
    }
  };

  if (c == 0) {
    consider({});
  } else {
    while (true) {
      consider(subset);
      // next lexicographic combination
      int i = c - 1;
      while (i >= 0 && subset[i] == n - c + i) --i;
      if (i < 0) break;
      ++subset[i];
      for (int j = i + 1; j < c; ++j) subset[j] = subset[j - 1] + 1;
    }
  }

  if (!have_best)
    throw NonConvergenceError(
        "every candidate subset leaves a divergent series", 1.0);
  best.predicted_cp = safe_predicted_cp(params, best.strategy, &best.beta);
  if (params.model == ModelKind::gmg)
    best.condition_satisfied =
        check_gmg_condition(params, best.strategy).satisfied;
  return best;
}

std::vector<int> top_degree_control_set(const Graph& g, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw ConfigError("control fraction must lie in [0, 1]");
  const int n = g.node_count();
  const int c = std::min(n, static_cast<int>(std::ceil(fraction * n)));
  const auto& deg = g.degree_list();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (deg[a] != deg[b]) return deg[a] > deg[b];
    return a < b;
  });
  order.resize(c);
  return order;
}

}  // namespace beliefflow

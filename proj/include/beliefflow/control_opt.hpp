#pragma once

#include <optional>
#include <vector>

#include "beliefflow/estimators.hpp"
#include "beliefflow/graph.hpp"
#include "beliefflow/dynamics.hpp"

namespace beliefflow {

/// Outcome of control-set construction. The strategy always broadcasts
/// B* = 1; predicted_cp is the literal model control power of that strategy
/// (NaN when the GMG series diverges under it).
struct OptimizationResult {
  ControlStrategy strategy;
  double predicted_cp = 0.0;
  bool condition_satisfied = true;  ///< GMG applicability; always true for BA
  double beta = 0.0;
};

/// Both sides of the GMG applicability inequality
/// 1/beta2 > 1 + max(1, 2^alpha) * sum_C xi / sum_notC xi^2/(1+d).
struct ConditionCheck {
  bool satisfied = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double beta2 = 0.0;
  bool trivial = false;  ///< beta2 == 0 (everything controlled)
};

/// Top-c nodes by degree (BA) or by xi = d (1+gamma)^alpha (GMG), ties broken
/// by smaller index, all pinned to belief 1.
OptimizationResult optimal_control_set(const ModelParams& params, int c);

ConditionCheck check_gmg_condition(const ModelParams& params,
                                   const ControlStrategy& c);

enum class Objective { model_cp, exact_cp };

/// Exhaustive search over all c-subsets (guarded at 1e6 candidates).
/// Objective model_cp maximizes the literal closed form; exact_cp maximizes
/// the expected exact control power on `graph` with w = w_bar. Ties resolve
/// to the lexicographically smallest subset.
OptimizationResult brute_force_control_set(const ModelParams& params, int c,
                                           Objective objective = Objective::model_cp,
                                           const Graph* graph = nullptr);

/// Top ceil(fraction*n) nodes by degree, ties to the smaller index: the
/// control set used throughout the experiment pipelines.
std::vector<int> top_degree_control_set(const Graph& g, double fraction);

}  // namespace beliefflow

#pragma once

#include <span>
#include <vector>

#include "beliefflow/graph.hpp"
#include "beliefflow/dynamics.hpp"

namespace beliefflow {

enum class ModelKind { ba, gmg };

const char* to_string(ModelKind m);
ModelKind model_kind_from_string(const std::string& s);

/// Inputs to the closed-form estimators: degree list, clustering list and
/// clustering weight (GMG only), and expected private beliefs. Degrees may be
/// fractional (ensemble-averaged lists are valid inputs).
struct ModelParams {
  ModelKind model = ModelKind::ba;
  std::vector<double> degrees;
  std::vector<double> clusterings;  ///< required for GMG
  double alpha = 0.0;               ///< GMG clustering weight
  std::vector<double> w_bar;        ///< empty means all-zero

  static ModelParams ba_params(const Graph& g, std::vector<double> w_bar = {});
  static ModelParams gmg_params(const Graph& g, double alpha,
                                std::vector<double> w_bar = {});
  static ModelParams from_lists(ModelKind model, std::vector<double> degrees,
                                std::vector<double> clusterings, double alpha,
                                std::vector<double> w_bar = {});

  int size() const { return static_cast<int>(degrees.size()); }
  double w_bar_at(int i) const { return w_bar.empty() ? 0.0 : w_bar[i]; }
  void validate() const;

  /// Node weights xi_i = d_i (1 + gamma_i)^alpha; plain degrees for BA.
  std::vector<double> node_weights() const;
};

/// Closed-form results: per-node expected converged beliefs, the series
/// ratio beta, and the model control power. `expected_beliefs` applies the
/// non-controlled-node formula to every node (the literal form);
/// `pinned_beliefs` substitutes B* at controlled nodes. `cp` and
/// `cp_corrected` are the means of (belief - w_bar) over those two vectors.
struct ModelEstimate {
  std::vector<double> expected_beliefs;
  std::vector<double> pinned_beliefs;
  double beta = 0.0;
  bool convergent = false;  ///< |beta| < 1
  double cp = 0.0;
  double cp_corrected = 0.0;
};

/// Edge probability of the BA model: d_i d_j / sum(d). Raw value, may exceed
/// 1 for hub pairs.
double edge_prob_ba(std::span<const double> degrees, int i, int j);

/// Edge probability of the GMG model: xi_i xi_j sum(d) / eta.
double edge_prob_gmg(const ModelParams& params, int i, int j);

/// Pair-weight normalizer eta = sum_{i != j} xi_i xi_j, computed in O(N) as
/// (sum xi)^2 - sum xi^2.
double eta(const ModelParams& params);

/// Series ratio: beta1 = sum_{k not in C} d_k^2/(1+d_k) / sum(d) for BA,
/// beta2 = sum(d)/eta * sum_{k not in C} xi_k^2/(1+d_k) for GMG.
double beta(const ModelParams& params, const ControlStrategy& c);

/// Expected converged beliefs; throws NonConvergenceError (carrying beta)
/// when |beta| >= 1.
ModelEstimate model_converged_beliefs(const ModelParams& params,
                                      const ControlStrategy& c);

/// Full estimate including the literal and corrected control powers.
ModelEstimate model_control_power(const ModelParams& params,
                                  const ControlStrategy& c);

}  // namespace beliefflow

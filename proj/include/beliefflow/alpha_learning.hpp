#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beliefflow/graph.hpp"

namespace beliefflow {

/// Grid-search settings for the clustering weight. The coarse grid is scanned
/// first; the search then refines at `refine_step` between the neighbors of
/// the coarse optimum (no refinement for a singleton grid).
struct AlphaSearchConfig {
  std::vector<double> grid;        ///< coarse candidates
  double refine_step = 0.01;       ///< <= 0 disables refinement
  int trials = 100;                ///< belief draws / syntheses per candidate
  double control_fraction = 0.05;  ///< top-degree share used as control set
  std::uint64_t seed = 0;

  /// Coarse grid [-4, 4] in steps of 0.1.
  static AlphaSearchConfig defaults();
  void validate() const;
};

struct AlphaLearningResult {
  double alpha = 0.0;
  double error = 0.0;
  std::vector<double> candidates;  ///< every evaluated value, ascending
  std::vector<double> errors;      ///< aligned with candidates
};

/// Partial-information view of a training graph: sorted degree and
/// clustering lists plus the synthesis parameters they imply.
struct GraphSummary {
  std::vector<double> degrees_sorted;
  std::vector<double> clusterings_sorted;
  int n = 0;
  int m = 1;

  static GraphSummary of(const Graph& g);
};

/// Mean (over trials, then graphs) relative error between the literal GMG
/// control power and the exact control power, with the top-degree control
/// set at B* = 1 and per-trial uniform private beliefs plugged into the
/// estimator's w_bar slots. +infinity when the series diverges on any graph.
double evaluate_candidate_full(const std::vector<Graph>& training,
                               const AlphaSearchConfig& config, double alpha);

/// Mean L1 distance between sum-normalized sorted degree/clustering lists of
/// a `trials`-graph synthesized ensemble and each training summary.
double evaluate_candidate_partial(const std::vector<GraphSummary>& training,
                                  const AlphaSearchConfig& config,
                                  double alpha);

/// Complete-information learning (uses exact solves on each training graph).
/// Throws LearningError if every candidate is non-convergent.
AlphaLearningResult learn_alpha_full(const std::vector<Graph>& training,
                                     const AlphaSearchConfig& config);

/// Partial-information learning (matches degree/clustering lists of
/// synthesized ensembles against the training summaries).
AlphaLearningResult learn_alpha_partial(const std::vector<GraphSummary>& training,
                                        const AlphaSearchConfig& config);

/// Model card: {"subcategory", "alpha", "method", "grid", "error_curve",
/// "seed"}.
std::string model_card_json(const std::string& subcategory,
                            const std::string& method,
                            const AlphaLearningResult& result,
                            std::uint64_t seed);

}  // namespace beliefflow

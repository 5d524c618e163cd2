#pragma once

#include <cstdint>

#include "beliefflow/graph.hpp"

namespace beliefflow {

/// Growth parameters for the BA / GMG generators: both start from a complete
/// graph on m+1 nodes and attach m edges per arriving node.
struct SynthesisConfig {
  int n = 0;          ///< total nodes, n >= m+1
  int m = 1;          ///< edges per arriving node, m >= 1
  double alpha = 0.0; ///< clustering weight (GMG only)
  std::uint64_t seed = 0;

  void validate() const;
};

/// Preferential attachment: targets drawn proportionally to degree, without
/// replacement per arriving node, degrees refreshed after each node completes.
/// Edge count is exactly C(m+1,2) + (n-m-1)*m.
Graph synthesize_ba(const SynthesisConfig& config);

/// Clustering-weighted attachment: targets drawn proportionally to
/// d_i (1+gamma_i)^alpha, with degrees and clustering coefficients updated
/// incrementally after every edge insertion.
Graph synthesize_gmg(const SynthesisConfig& config);

}  // namespace beliefflow

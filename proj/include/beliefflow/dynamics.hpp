#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "beliefflow/graph.hpp"
#include "beliefflow/rng.hpp"

namespace beliefflow {

/// Control set with per-node broadcast beliefs. An empty set is the trivial
/// strategy.
struct ControlStrategy {
  std::vector<int> control_set;
  std::vector<double> controlled_beliefs;

  static ControlStrategy none() { return {}; }
  static ControlStrategy pin_all(std::vector<int> nodes, double belief);

  int size() const { return static_cast<int>(control_set.size()); }
  void validate(int n) const;
};

/// Belief vector b, private beliefs w and step counter. Controlled entries of
/// b equal their broadcast belief at every step; all entries stay in [-1, 1].
struct BeliefState {
  std::vector<double> beliefs;
  std::vector<double> private_beliefs;
  int step_count = 0;

  /// b(0) = w, except controlled entries which are pinned.
  static BeliefState initial(std::vector<double> w, const ControlStrategy& c);
};

/// One synchronous update: b'_i = (w_i + sum of neighbor beliefs) / (1 + d_i)
/// for non-controlled i, pinned otherwise.
BeliefState step(const BeliefState& state, const Graph& g,
                 const ControlStrategy& c);

struct ConvergenceResult {
  std::vector<double> beliefs;
  int steps = 0;
  double residual = 0.0;  ///< last infinity-norm step difference
};

/// Iterates `step` until the infinity norm of the update falls below tol.
/// Throws NonConvergenceError (carrying the last residual) at t_max, which
/// is unreachable for simple graphs at the default tolerances.
ConvergenceResult converge_iterative(const Graph& g,
                                     const std::vector<double>& w,
                                     const ControlStrategy& c,
                                     double tol = 1e-10, int t_max = 100000);

/// Factorization of the converged-belief linear system for one (graph,
/// strategy) pair; solve() costs one back-substitution per private-belief
/// vector. Dense LU below the AdjustedAdjacency size threshold, sparse LU
/// above.
class ExactSolver {
 public:
  ExactSolver(const Graph& g, const ControlStrategy& c);
  ~ExactSolver();
  ExactSolver(ExactSolver&&) noexcept;
  ExactSolver& operator=(ExactSolver&&) noexcept;

  std::vector<double> solve(const std::vector<double>& w) const;
  int size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Converged beliefs by direct linear solve. The system matrix is always
/// nonsingular for simple graphs (strict column-sum bound).
std::vector<double> converge_exact(const Graph& g, const std::vector<double>& w,
                                   const ControlStrategy& c);

/// Generator of private-belief vectors with a declared per-node mean.
class PrivateBeliefDistribution {
 public:
  using Sampler = std::function<std::vector<double>(int, Rng&)>;

  /// Uniform on [-1, 1] per node, mean zero.
  static PrivateBeliefDistribution uniform();
  static PrivateBeliefDistribution constant(std::vector<double> w);
  static PrivateBeliefDistribution custom(Sampler sampler,
                                          std::vector<double> mean);

  std::vector<double> sample(int n, Rng& rng) const;
  std::vector<double> mean(int n) const;
  bool is_constant() const { return constant_; }

 private:
  PrivateBeliefDistribution() = default;
  Sampler sampler_;
  std::vector<double> mean_;   // empty = zero vector of any length
  bool constant_ = false;
};

struct ControlPowerEstimate {
  double mean = 0.0;       ///< signed mean shift, (1/N) sum (B_inf - w)
  double magnitude = 0.0;  ///< |mean|
  double std_error = 0.0;
  int samples = 0;
};

/// (1/N) sum_i (b_i - w_i) for one realization.
double control_power_of(const std::vector<double>& b_inf,
                        const std::vector<double>& w);

/// Monte Carlo estimate of the network control power over private-belief
/// draws. Controlled nodes contribute B*_k - w_k with the sampled w_k; a
/// constant distribution needs a single sample and is exact.
ControlPowerEstimate control_power_exact(const Graph& g,
                                         const PrivateBeliefDistribution& dist,
                                         const ControlStrategy& c,
                                         int n_samples, std::uint64_t seed);

/// Closed-form expectation: the converged belief is affine in w, so
/// E[cp] = (1/N) sum (B_inf(w_bar) - w_bar). Cross-checks the Monte Carlo
/// path.
double expected_control_power(const Graph& g, const ControlStrategy& c,
                              const std::vector<double>& w_bar);

/// JSON document with keys "w", "control_set", "controlled_beliefs", "b_inf".
std::string belief_document_json(const std::vector<double>& w,
                                 const ControlStrategy& c,
                                 const std::vector<double>& b_inf);

struct BeliefDocument {
  std::vector<double> w;
  ControlStrategy strategy;
  std::vector<double> b_inf;
};

BeliefDocument parse_belief_document(const std::string& json_text);

}  // namespace beliefflow

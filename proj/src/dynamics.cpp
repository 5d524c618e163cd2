#include "beliefflow/dynamics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <unordered_set>
#include <utility>

#include <nlohmann/json.hpp>

#include "beliefflow/errors.hpp"

namespace beliefflow {

namespace {

std::vector<char> control_mask(int n, const ControlStrategy& c) {
  std::vector<char> mask(n, 0);
  for (int v : c.control_set) mask[v] = 1;
  return mask;
}

void check_belief_range(const std::vector<double>& values, const char* what) {
  for (double x : values) {
    if (!(x >= -1.0 && x <= 1.0))
      throw ConfigError(std::string(what) + " entries must lie in [-1, 1]");
  }
}

}  // namespace

ControlStrategy ControlStrategy::pin_all(std::vector<int> nodes, double belief) {
  ControlStrategy c;
  c.controlled_beliefs.assign(nodes.size(), belief);
  c.control_set = std::move(nodes);
  return c;
}

void ControlStrategy::validate(int n) const {
  if (control_set.size() != controlled_beliefs.size())
    throw ConfigError("control set and controlled beliefs differ in length");
  std::unordered_set<int> seen;
  for (int v : control_set) {
    if (v < 0 || v >= n) throw ConfigError("control node index out of range");
    if (!seen.insert(v).second)
      throw ConfigError("duplicate control node " + std::to_string(v));
  }
  check_belief_range(controlled_beliefs, "controlled belief");
}

BeliefState BeliefState::initial(std::vector<double> w,
                                 const ControlStrategy& c) {
  c.validate(static_cast<int>(w.size()));
  check_belief_range(w, "private belief");
  BeliefState s;
  s.beliefs = w;
  s.private_beliefs = std::move(w);
  for (int k = 0; k < c.size(); ++k)
    s.beliefs[c.control_set[k]] = c.controlled_beliefs[k];
  return s;
}

BeliefState step(const BeliefState& state, const Graph& g,
                 const ControlStrategy& c) {
  const int n = g.node_count();
  if (static_cast<int>(state.beliefs.size()) != n ||
      static_cast<int>(state.private_beliefs.size()) != n)
    throw ConfigError("belief state dimension does not match graph");
  c.validate(n);

  BeliefState next;
  next.private_beliefs = state.private_beliefs;
  next.step_count = state.step_count + 1;
  next.beliefs.resize(n);

  const auto mask = control_mask(n, c);
  for (int i = 0; i < n; ++i) {
    if (mask[i]) continue;
    double acc = state.private_beliefs[i];
    for (int j : g.neighbors(i)) acc += state.beliefs[j];
    next.beliefs[i] = acc / (1.0 + g.degree_list()[i]);
    assert(std::abs(next.beliefs[i]) <= 1.0 + 1e-12);
  }
  for (int k = 0; k < c.size(); ++k)
    next.beliefs[c.control_set[k]] = c.controlled_beliefs[k];
  return next;
}

ConvergenceResult converge_iterative(const Graph& g,
                                     const std::vector<double>& w,
                                     const ControlStrategy& c, double tol,
                                     int t_max) {
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  BeliefState state = BeliefState::initial(w, c);
  double residual = 0.0;
  for (int t = 0; t < t_max; ++t) {
    BeliefState next = step(state, g, c);
    residual = 0.0;
    for (std::size_t i = 0; i < next.beliefs.size(); ++i)
      residual = std::max(residual,
                          std::abs(next.beliefs[i] - state.beliefs[i]));
    state = std::move(next);
    if (residual < tol)
      return {std::move(state.beliefs), state.step_count, residual};
  }
  throw NonConvergenceError(
      "belief iteration did not reach tolerance within t_max", residual);
}

// The row-vector system B (I - A* M) = w* M + V transposes to the per-node
// fixed-point equations
//   b_i - sum_{j in N(i)} b_j / (1 + d_i) = w_i / (1 + d_i)   (i not controlled)
//   b_i = B*_k                                                (i controlled)
struct ExactSolver::Impl {
  int n = 0;
  std::vector<char> mask;
  std::vector<double> pinned;  // B* by node index, 0 elsewhere
  std::vector<int> degrees;
  bool dense = false;
  Eigen::PartialPivLU<Eigen::MatrixXd> dense_lu;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> sparse_lu;
};

ExactSolver::ExactSolver(const Graph& g, const ControlStrategy& c)
    : impl_(std::make_unique<Impl>()) {
  const int n = g.node_count();
  c.validate(n);
  impl_->n = n;
  impl_->mask = control_mask(n, c);
  impl_->pinned.assign(n, 0.0);
  for (int k = 0; k < c.size(); ++k)
    impl_->pinned[c.control_set[k]] = c.controlled_beliefs[k];
  impl_->degrees = g.degree_list();

  const auto& deg = g.degree_list();
  impl_->dense = n < AdjustedAdjacency::kDenseNodeLimit;
  if (impl_->dense) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i) {
      if (impl_->mask[i]) continue;
      const double scale = 1.0 / (1.0 + deg[i]);
      for (int j : g.neighbors(i)) a(i, j) = -scale;
    }
    impl_->dense_lu.compute(a);
  } else {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n) + 2 * g.edges().size());
    for (int i = 0; i < n; ++i) {
      trips.emplace_back(i, i, 1.0);
      if (impl_->mask[i]) continue;
      const double scale = 1.0 / (1.0 + deg[i]);
      for (int j : g.neighbors(i)) trips.emplace_back(i, j, -scale);
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    impl_->sparse_lu.compute(a);
    if (impl_->sparse_lu.info() != Eigen::Success)
      throw NonConvergenceError("sparse factorization failed", 0.0);
  }
}

ExactSolver::~ExactSolver() = default;
ExactSolver::ExactSolver(ExactSolver&&) noexcept = default;
ExactSolver& ExactSolver::operator=(ExactSolver&&) noexcept = default;

int ExactSolver::size() const { return impl_->n; }

std::vector<double> ExactSolver::solve(const std::vector<double>& w) const {
  const int n = impl_->n;
  if (static_cast<int>(w.size()) != n)
    throw ConfigError("private belief vector dimension does not match graph");
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i)
    rhs(i) = impl_->mask[i] ? impl_->pinned[i]
                            : w[i] / (1.0 + impl_->degrees[i]);
  Eigen::VectorXd x;
  if (impl_->dense)
    x = impl_->dense_lu.solve(rhs);
  else
    x = impl_->sparse_lu.solve(rhs);
  return {x.data(), x.data() + n};
}

std::vector<double> converge_exact(const Graph& g, const std::vector<double>& w,
                                   const ControlStrategy& c) {
  return ExactSolver(g, c).solve(w);
}

PrivateBeliefDistribution PrivateBeliefDistribution::uniform() {
  PrivateBeliefDistribution d;
  d.sampler_ = [](int n, Rng& rng) {
    std::vector<double> w(n);
    for (double& x : w) x = rng.uniform(-1.0, 1.0);
    return w;
  };
  return d;
}

PrivateBeliefDistribution PrivateBeliefDistribution::constant(
    std::vector<double> w) {
  check_belief_range(w, "private belief");
  PrivateBeliefDistribution d;
  d.mean_ = w;
  d.constant_ = true;
  d.sampler_ = [w = std::move(w)](int n, Rng&) {
    if (static_cast<int>(w.size()) != n)
      throw ConfigError("constant belief vector dimension mismatch");
    return w;
  };
  return d;
}

PrivateBeliefDistribution PrivateBeliefDistribution::custom(
    Sampler sampler, std::vector<double> mean) {
  PrivateBeliefDistribution d;
  d.sampler_ = std::move(sampler);
  d.mean_ = std::move(mean);
  return d;
}

std::vector<double> PrivateBeliefDistribution::sample(int n, Rng& rng) const {
  auto w = sampler_(n, rng);
  check_belief_range(w, "sampled private belief");
  return w;
}

std::vector<double> PrivateBeliefDistribution::mean(int n) const {
  if (mean_.empty()) return std::vector<double>(n, 0.0);
  if (static_cast<int>(mean_.size()) != n)
    throw ConfigError("belief mean vector dimension mismatch");
  return mean_;
}

double control_power_of(const std::vector<double>& b_inf,
                        const std::vector<double>& w) {
  if (b_inf.size() != w.size() || b_inf.empty())
    throw ConfigError("control power needs matching non-empty vectors");
  double acc = 0.0;
  for (std::size_t i = 0; i < b_inf.size(); ++i) acc += b_inf[i] - w[i];
  return acc / static_cast<double>(b_inf.size());
}

ControlPowerEstimate control_power_exact(const Graph& g,
                                         const PrivateBeliefDistribution& dist,
                                         const ControlStrategy& c,
                                         int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
  if (dist.is_constant()) n_samples = 1;  // exact, nothing to average

  ExactSolver solver(g, c);
  Rng rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    auto w = dist.sample(g.node_count(), rng);
    double cp = control_power_of(solver.solve(w), w);
    sum += cp;
    sumsq += cp * cp;
  }
  ControlPowerEstimate est;
  est.samples = n_samples;
  est.mean = sum / n_samples;
  est.magnitude = std::abs(est.mean);
  if (n_samples > 1) {
    double var = (sumsq - sum * sum / n_samples) / (n_samples - 1);
    est.std_error = std::sqrt(std::max(0.0, var) / n_samples);
  }
  return est;
}

double expected_control_power(const Graph& g, const ControlStrategy& c,
                              const std::vector<double>& w_bar) {
  return control_power_of(converge_exact(g, w_bar, c), w_bar);
}

std::string belief_document_json(const std::vector<double>& w,
                                 const ControlStrategy& c,
                                 const std::vector<double>& b_inf) {
  nlohmann::ordered_json doc;
  doc["w"] = w;
  doc["control_set"] = c.control_set;
  doc["controlled_beliefs"] = c.controlled_beliefs;
  doc["b_inf"] = b_inf;
  return doc.dump(2) + "\n";
}

BeliefDocument parse_belief_document(const std::string& json_text) {
  auto doc = nlohmann::json::parse(json_text);
  BeliefDocument out;
  out.w = doc.at("w").get<std::vector<double>>();
  out.strategy.control_set = doc.at("control_set").get<std::vector<int>>();
  out.strategy.controlled_beliefs =
      doc.at("controlled_beliefs").get<std::vector<double>>();
  if (doc.contains("b_inf"))
    out.b_inf = doc.at("b_inf").get<std::vector<double>>();
  return out;
}

}  // namespace beliefflow

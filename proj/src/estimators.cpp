#include "beliefflow/estimators.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "beliefflow/errors.hpp"

namespace beliefflow {

const char* to_string(ModelKind m) {
  return m == ModelKind::ba ? "ba" : "gmg";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "ba") return ModelKind::ba;
  if (s == "gmg") return ModelKind::gmg;
  throw ConfigError("unknown model '" + s + "' (expected ba or gmg)");
}

ModelParams ModelParams::ba_params(const Graph& g, std::vector<double> w_bar) {
  ModelParams p;
  p.model = ModelKind::ba;
  p.degrees.assign(g.degree_list().begin(), g.degree_list().end());
  p.w_bar = std::move(w_bar);
  p.validate();
  return p;
}

ModelParams ModelParams::gmg_params(const Graph& g, double alpha,
                                    std::vector<double> w_bar) {
  ModelParams p;
  p.model = ModelKind::gmg;
  p.degrees.assign(g.degree_list().begin(), g.degree_list().end());
  p.clusterings = g.clustering_list();
  p.alpha = alpha;
  p.w_bar = std::move(w_bar);
  p.validate();
  return p;
}

ModelParams ModelParams::from_lists(ModelKind model,
                                    std::vector<double> degrees,
                                    std::vector<double> clusterings,
                                    double alpha, std::vector<double> w_bar) {
  ModelParams p;
  p.model = model;
  p.degrees = std::move(degrees);
  p.clusterings = std::move(clusterings);
  p.alpha = alpha;
  p.w_bar = std::move(w_bar);
  p.validate();
  return p;
}

void ModelParams::validate() const {
  if (degrees.empty()) throw ConfigError("degree list is empty");
  for (double d : degrees) {
    if (!(d >= 0.0) || !std::isfinite(d))
      throw ConfigError("degrees must be finite and non-negative");
  }
  if (model == ModelKind::gmg) {
    if (clusterings.size() != degrees.size())
      throw ConfigError("GMG params need a clustering list matching degrees");
    for (double c : clusterings) {
      if (!(c >= 0.0 && c <= 1.0))
        throw ConfigError("clustering coefficients must lie in [0, 1]");
    }
    if (!std::isfinite(alpha)) throw ConfigError("alpha must be finite");
  }
  if (!w_bar.empty()) {
    if (w_bar.size() != degrees.size())
      throw ConfigError("w_bar length must match the degree list");
    for (double w : w_bar) {
      if (!(w >= -1.0 && w <= 1.0))
        throw ConfigError("w_bar entries must lie in [-1, 1]");
    }
  }
}

std::vector<double> ModelParams::node_weights() const {
  std::vector<double> xi(degrees.begin(), degrees.end());
  if (model == ModelKind::gmg) {
    for (std::size_t i = 0; i < xi.size(); ++i)
      xi[i] *= std::pow(1.0 + clusterings[i], alpha);
  }
  return xi;
}

double edge_prob_ba(std::span<const double> degrees, int i, int j) {
  if (i == j) throw ConfigError("edge probability requires i != j");
  if (i < 0 || j < 0 || i >= static_cast<int>(degrees.size()) ||
      j >= static_cast<int>(degrees.size()))
    throw ConfigError("node index out of range");
  double total = 0.0;
  for (double d : degrees) total += d;
  if (!(total > 0.0)) throw ConfigError("total degree must be positive");
  return degrees[i] * degrees[j] / total;
}

double eta(const ModelParams& params) {
  if (params.size() < 2) throw ConfigError("eta requires at least two nodes");
  const auto xi = params.node_weights();
  double sum = 0.0, sum_sq = 0.0;
  for (double x : xi) {
    sum += x;
    sum_sq += x * x;
  }
  return sum * sum - sum_sq;
}

double edge_prob_gmg(const ModelParams& params, int i, int j) {
  if (i == j) throw ConfigError("edge probability requires i != j");
  if (i < 0 || j < 0 || i >= params.size() || j >= params.size())
    throw ConfigError("node index out of range");
  const double e = eta(params);
  if (!(e > 0.0)) throw ConfigError("eta must be positive");
  const auto xi = params.node_weights();
  double total_degree = 0.0;
  for (double d : params.degrees) total_degree += d;
  return xi[i] * xi[j] * total_degree / e;
}

namespace {

struct SeriesTerms {
  std::vector<double> xi;
  std::vector<char> mask;      // controlled nodes
  double total_degree = 0.0;
  double scale = 0.0;          // 1/sum(d) for BA, sum(d)/eta for GMG
  double beta = 0.0;
  double s = 0.0;              // sum_C B* xi + sum_notC w_bar xi/(1+d)
};

SeriesTerms series_terms(const ModelParams& params, const ControlStrategy& c) {
  params.validate();
  const int n = params.size();
  c.validate(n);

  SeriesTerms t;
  t.xi = params.node_weights();
  t.mask.assign(n, 0);
  for (int v : c.control_set) t.mask[v] = 1;

  for (double d : params.degrees) t.total_degree += d;
  if (!(t.total_degree > 0.0))
    throw ConfigError("total degree must be positive");

  if (params.model == ModelKind::ba) {
    t.scale = 1.0 / t.total_degree;
  } else {
    const double e = eta(params);
    if (!(e > 0.0)) throw ConfigError("eta must be positive");
    t.scale = t.total_degree / e;
  }

  double ratio_sum = 0.0;  // sum over non-controlled of xi^2/(1+d)
  for (int i = 0; i < n; ++i) {
    if (t.mask[i]) continue;
    ratio_sum += t.xi[i] * t.xi[i] / (1.0 + params.degrees[i]);
    t.s += params.w_bar_at(i) * t.xi[i] / (1.0 + params.degrees[i]);
  }
  for (int k = 0; k < c.size(); ++k)
    t.s += c.controlled_beliefs[k] * t.xi[c.control_set[k]];
  t.beta = t.scale * ratio_sum;
  return t;
}

ModelEstimate estimate(const ModelParams& params, const ControlStrategy& c) {
  const auto t = series_terms(params, c);
  ModelEstimate out;
  out.beta = t.beta;
  out.convergent = std::abs(t.beta) < 1.0;
  if (!out.convergent)
    throw NonConvergenceError(
        "model series does not converge (|beta| >= 1, beta = " +
            std::to_string(t.beta) + ")",
        t.beta);

  const int n = params.size();
  const double gain = t.scale * t.s / (1.0 - t.beta);
  out.expected_beliefs.resize(n);
  for (int i = 0; i < n; ++i)
    out.expected_beliefs[i] = gain * t.xi[i] / (1.0 + params.degrees[i]);

  out.pinned_beliefs = out.expected_beliefs;
  for (int k = 0; k < c.size(); ++k)
    out.pinned_beliefs[c.control_set[k]] = c.controlled_beliefs[k];

  double literal = 0.0, corrected = 0.0;
  for (int i = 0; i < n; ++i) {
    literal += out.expected_beliefs[i] - params.w_bar_at(i);
    corrected += out.pinned_beliefs[i] - params.w_bar_at(i);
  }
  out.cp = literal / n;
  out.cp_corrected = corrected / n;
  return out;
}

}  // namespace

double beta(const ModelParams& params, const ControlStrategy& c) {
  return series_terms(params, c).beta;
}

ModelEstimate model_converged_beliefs(const ModelParams& params,
                                      const ControlStrategy& c) {
  return estimate(params, c);
}

ModelEstimate model_control_power(const ModelParams& params,
                                  const ControlStrategy& c) {
  return estimate(params, c);
}

}  // namespace beliefflow

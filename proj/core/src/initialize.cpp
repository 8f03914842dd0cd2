#include "hmpsbm/initialize.hpp"

#include <algorithm>

#include "hmpsbm/assignment.hpp"
#include "hmpsbm/errors.hpp"
#include "hmpsbm/parallel.hpp"
#include "hmpsbm/spectral.hpp"

namespace hmpsbm {
namespace {

constexpr double kClamp = 1e-6;

double clamp_proportion(double p) { return std::clamp(p, kClamp, 1.0 - kClamp); }

void check_labels(const std::vector<int>& labels, int n, int k) {
  if (static_cast<int>(labels.size()) != n) throw ShapeError("label vector has the wrong length");
  for (int v : labels) {
    if (v < 0 || v >= k) throw ValidationError("label outside the truncation");
  }
}

}  // namespace

Eigen::MatrixXd soften_labels(const std::vector<int>& labels, int num_groups, double eps) {
  if (num_groups < 1) throw ValidationError("need at least one group");
  if (!(eps >= 0.0 && eps < 1.0)) throw ValidationError("smoothing must lie in [0, 1)");
  const int n = static_cast<int>(labels.size());
  check_labels(labels, n, num_groups);
  if (num_groups == 1) return Eigen::MatrixXd::Ones(n, 1);
  Eigen::MatrixXd out = Eigen::MatrixXd::Constant(n, num_groups, eps / (num_groups - 1));
  for (int i = 0; i < n; ++i) out(i, labels[i]) = 1.0 - eps;
  return out;
}

ClusterLabels cluster_adjacency(const Eigen::MatrixXd& adjacency, int num_groups, const InitOptions& options) {
  const int n = static_cast<int>(adjacency.rows());
  if (num_groups == 1) {
    ClusterLabels one;
    one.labels.assign(n, 0);
    one.num_clusters = 1;
    return one;
  }
  const Embedding emb = spectral_embed(adjacency, std::min(num_groups, n));
  const Eigen::MatrixXd points = options.scale_by_singular_values ? emb.scaled() : emb.coordinates;
  ClusterLabels clusters = density_cluster(points, num_groups, options.min_cluster_size_start, options.method);
  return assign_outliers(points, clusters);
}

LabelInit init_layer_groups(const MultiplexNetwork& network, int m_z, const InitOptions& options) {
  if (m_z < 1) throw ValidationError("m_z must be at least 1");
  const int layers = network.num_layers();
  std::vector<ClusterLabels> per_layer(layers);
  parallel_for(layers, options.threads, [&](std::size_t l) {
    per_layer[l] = cluster_adjacency(network.layer_matrix(static_cast<int>(l)), m_z, options);
  });
  LabelInit out;
  for (int l = 0; l < layers; ++l) {
    std::vector<int> labels = per_layer[l].labels;
    if (l > 0) labels = relabel(labels, align_labels(out.hard[0], labels, m_z));
    out.soft.push_back(soften_labels(labels, m_z, options.smoothing));
    out.hard.push_back(std::move(labels));
    if (!per_layer[l].warning.empty()) out.warnings.push_back("layer " + std::to_string(l) + ": " + per_layer[l].warning);
  }
  return out;
}

LabelInit init_global_groups(const MultiplexNetwork& network, int m_w, const InitOptions& options) {
  if (m_w < 1) throw ValidationError("m_w must be at least 1");
  const ClusterLabels clusters = cluster_adjacency(network.aggregated_matrix(), m_w, options);
  LabelInit out;
  out.soft.push_back(soften_labels(clusters.labels, m_w, options.smoothing));
  out.hard.push_back(clusters.labels);
  if (!clusters.warning.empty()) out.warnings.push_back("global: " + clusters.warning);
  return out;
}

BetaParams init_rho(const MultiplexNetwork& network, const std::vector<std::vector<int>>& layer_labels, int m_z,
                    const Hyperparameters& hyper) {
  const int n = network.num_nodes();
  if (static_cast<int>(layer_labels.size()) != network.num_layers()) throw ShapeError("one label row per layer");
  Eigen::MatrixXd edges = Eigen::MatrixXd::Zero(m_z, m_z);
  Eigen::MatrixXd pairs = Eigen::MatrixXd::Zero(m_z, m_z);
  for (int l = 0; l < network.num_layers(); ++l) {
    const auto& z = layer_labels[l];
    check_labels(z, n, m_z);
    for (int i = 0; i < n; ++i) {
      const auto row = network.row(l, i);
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        pairs(z[i], z[j]) += 1.0;
        edges(z[i], z[j]) += row[j];
      }
    }
  }
  BetaParams out{Eigen::MatrixXd::Constant(m_z, m_z, hyper.alpha0), Eigen::MatrixXd::Constant(m_z, m_z, hyper.beta0)};
  for (int k = 0; k < m_z; ++k) {
    for (int m = 0; m < m_z; ++m) {
      if (pairs(k, m) == 0.0) continue;
      const double p = clamp_proportion(edges(k, m) / pairs(k, m));
      out.a(k, m) = p / (1.0 - p);
      out.b(k, m) = 1.0;
    }
  }
  return out;
}

BetaParams init_gamma(const std::vector<int>& global_labels, const std::vector<std::vector<int>>& layer_labels,
                      int m_w, int m_z, const Hyperparameters& hyper) {
  const int n = static_cast<int>(global_labels.size());
  check_labels(global_labels, n, m_w);
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(m_w, m_z);
  for (const auto& z : layer_labels) {
    check_labels(z, n, m_z);
    for (int i = 0; i < n; ++i) counts(global_labels[i], z[i]) += 1.0;
  }
  BetaParams out{Eigen::MatrixXd::Ones(m_w, m_z), Eigen::MatrixXd::Constant(m_w, m_z, hyper.eta0)};
  for (int k = 0; k < m_w; ++k) {
    const double total = counts.row(k).sum();
    if (total == 0.0) continue;
    for (int s = 0; s < m_z; ++s) {
      const double q = clamp_proportion(counts(k, s) / total);
      out.a(k, s) = q / (1.0 - q);
      out.b(k, s) = 1.0;
    }
  }
  return out;
}

VariationalState initialize_state(const MultiplexNetwork& network, const CovariateMatrix& covariates,
                                  const Hyperparameters& hyper, const TruncationConfig& truncation,
                                  const InitOptions& options, std::vector<std::string>* warnings) {
  truncation.validate();
  covariates.validate(network.num_nodes());
  const int p = covariates.num_features();
  hyper.validate(p);
  VariationalState state = make_default_state(network.num_layers(), network.num_nodes(), p, truncation, hyper);

  LabelInit layers = init_layer_groups(network, truncation.m_z, options);
  const BetaParams rho = init_rho(network, layers.hard, truncation.m_z, hyper);
  state.rho_a = rho.a;
  state.rho_b = rho.b;
  state.phi_z = std::move(layers.soft);

  std::vector<std::string> notes = std::move(layers.warnings);
  if (options.informed_global) {
    LabelInit global = init_global_groups(network, truncation.m_w, options);
    const BetaParams gamma = init_gamma(global.hard[0], layers.hard, truncation.m_w, truncation.m_z, hyper);
    state.gamma_a = gamma.a;
    state.gamma_b = gamma.b;
    state.phi_w = std::move(global.soft[0]);
    notes.insert(notes.end(), global.warnings.begin(), global.warnings.end());
  }
  if (warnings) *warnings = std::move(notes);
  return state;
}

}  // namespace hmpsbm

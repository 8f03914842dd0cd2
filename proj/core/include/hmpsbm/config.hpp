#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "hmpsbm/evaluation.hpp"
#include "hmpsbm/fit.hpp"
#include "hmpsbm/initialize.hpp"
#include "hmpsbm/model.hpp"

namespace hmpsbm {

/// Everything a fit run needs besides the data.
struct RunConfig {
  Hyperparameters hyper;
  FitConfig fit;
  InitOptions init;
  NmiNormalization nmi = NmiNormalization::arithmetic;

  void validate() const;
};

/// Parses `key = value` lines; '#' starts a comment, blank lines are skipped.
/// Keys not present keep their defaults. Unknown keys and malformed values
/// raise ParseError with the line number.
///
///   alpha0 beta0 eta0 nu0 omega0 mu            (mu: comma-separated, empty = zeros)
///   m_w m_z max_iterations tolerance
///   adam_lr_theta adam_lr_sigma adam_beta1 adam_beta2 adam_epsilon
///   max_steps max_decreases inner_tolerance quadrature_nodes monte_carlo_samples seed
///   init_smoothing init_min_cluster_size init_method (hdbscan|kmeans)
///   init_scale_embedding (true|false) init_global (informed|uninformed)
///   nmi_normalization (arithmetic|geometric)
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig read_config(const std::string& path, RunConfig base = {});

/// Canonical text with every key spelled out; parse_config of this text gives `config` back.
std::string format_config(const RunConfig& config);

/// FNV-1a 64 of format_config, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace hmpsbm

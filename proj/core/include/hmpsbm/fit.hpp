#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hmpsbm/adam.hpp"
#include "hmpsbm/model.hpp"
#include "hmpsbm/network.hpp"
#include "hmpsbm/quadrature.hpp"
#include "hmpsbm/variational_state.hpp"

namespace hmpsbm {

struct FitConfig {
  TruncationConfig truncation;
  int max_iterations = 100;
  double tolerance = 1e-6;          // relative ELBO change between sweeps
  AdamSettings adam_theta;          // eta_1
  AdamSettings adam_sigma;          // eta_2
  int max_steps = 30;               // S, gradient steps per parameter per sweep
  int max_decreases = 5;            // T
  double inner_tolerance = 1e-10;   // stop a gradient loop once an accepted step gains less than this, relatively
  int quadrature_nodes = 32;
  int monte_carlo_samples = 1000000;  // used by the Monte Carlo cross-checks only
  std::uint64_t seed = 0;
  int threads = 1;
  bool record_substeps = false;     // full ELBO after every update (slow)

  void validate() const;
};

/// Per-k Adam buffers and step counters that persist across sweeps.
/// Buffers are restored to the moments of the last accepted step.
struct PhiOptimizerState {
  std::vector<AdamState> theta;  // P x 1 each
  std::vector<AdamState> sigma;  // P x P each

  static PhiOptimizerState zeros(int m_w, int num_features);
};

struct PhiStepStats {
  int theta_steps = 0;
  int sigma_steps = 0;
  int theta_accepted = 0;
  int sigma_accepted = 0;
  bool non_finite = false;
  double entry_value = 0.0;  // block objective on entry
  double exit_value = 0.0;   // block objective on exit, >= entry_value
};

/// Gradient ascent on (theta_k, B_k) following the best-value scheme of
/// Algorithm 1: theta first with Sigma fixed at its best value, then B with
/// theta fixed at its best value. Each loop stops after `max_steps` steps,
/// after more than `max_decreases` non-improving steps, or when an accepted
/// step improves the objective by less than inner_tolerance relative to its magnitude.
/// The state ends at the best point visited.
PhiStepStats optimize_phi_k(int k, VariationalState& state, const CovariateMatrix& covariates,
                            const FitConfig& config, const GaussHermiteRule& rule, PhiOptimizerState& optimizer);

struct SubstepRecord {
  int iteration = 0;
  std::string step;
  double elbo = 0.0;
};

struct FitReport {
  std::vector<double> elbo_trace;      // entry 0 is the initial state, then one per sweep
  std::vector<double> sweep_seconds;   // wall time per sweep
  std::vector<SubstepRecord> substeps; // when record_substeps
  std::vector<PhiStepStats> phi_steps; // one per (sweep, k)
  int iterations = 0;
  bool converged = false;
  int occupied_global = 0;
  std::vector<int> occupied_layer;
  bool non_finite_gradient = false;
};

struct FitResult {
  VariationalState state;
  FitReport report;
};

/// Algorithm 1 sweeps in the order rho, gamma, phi0, phi_k for each k,
/// sigma^2, z, w until the relative ELBO change drops below `tolerance` or
/// `max_iterations` sweeps have run. Throws ValidationError/ShapeError if
/// the initial state does not fit the data.
FitResult fit(const MultiplexNetwork& network, const CovariateMatrix& covariates, const Hyperparameters& hyper,
              const FitConfig& config, VariationalState initial);

}  // namespace hmpsbm

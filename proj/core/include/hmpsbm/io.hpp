#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hmpsbm/evaluation.hpp"
#include "hmpsbm/fit.hpp"
#include "hmpsbm/model.hpp"
#include "hmpsbm/network.hpp"
#include "hmpsbm/variational_state.hpp"

namespace hmpsbm {

/// Layered edge list. First non-comment line "L N", then one "layer source target"
/// line per edge, all 0-based. '#' starts a comment. Duplicate edges are allowed.
/// Malformed lines raise ParseError; out-of-range indices and self-loops raise
/// ValidationError, both carrying the line number in the message.
MultiplexNetwork parse_network(std::istream& in);
MultiplexNetwork read_network(const std::string& path);
void write_network(std::ostream& out, const MultiplexNetwork& network);
void write_network(const std::string& path, const MultiplexNetwork& network);

/// One dense N x N CSV per layer (no header). Any nonzero entry is an edge.
/// Nonzero diagonal entries are rejected unless `drop_diagonal` is set.
MultiplexNetwork read_dense_layers(const std::vector<std::string>& paths, bool drop_diagonal = false);

struct CovariateOptions {
  bool log_transform = false;  // natural log of every column (values must be positive)
  bool zscore = false;         // centre and scale each column, population sd
  bool intercept = true;       // prepend a column of ones after the transforms
};

struct CovariateTable {
  CovariateMatrix matrix;
  std::vector<std::string> names;        // column names, "intercept" first when added
  std::vector<std::string> transformed;  // columns the transforms touched
};

/// CSV with a header row. `expected_nodes` >= 0 checks the row count (ValidationError).
CovariateTable parse_covariates(std::istream& in, const CovariateOptions& options, int expected_nodes = -1);
CovariateTable read_covariates(const std::string& path, const CovariateOptions& options, int expected_nodes = -1);
void write_covariates(std::ostream& out, const Eigen::MatrixXd& values, const std::vector<std::string>& names);

/// Label table "node,global,layer_0,...,layer_{L-1}".
struct LabelTable {
  std::vector<int> global;
  std::vector<std::vector<int>> layers;
};
LabelTable parse_labels(std::istream& in);
LabelTable read_labels(const std::string& path);
void write_labels(std::ostream& out, const LabelTable& labels);
void write_labels(const std::string& path, const LabelTable& labels);

/// All variational parameters as JSON. Sigma_phi is written both as the
/// log-Cholesky factor and as the covariance.
std::string posterior_json(const VariationalState& state);

/// "iteration,elbo" rows, printed with 17 significant digits.
void write_elbo_trace(std::ostream& out, const FitReport& report);

/// Ground truth parameters (rho, gamma, phi) as JSON.
std::string truth_json(const GroundTruth& truth);

}  // namespace hmpsbm

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hmpsbm/config.hpp"
#include "hmpsbm/sampler.hpp"

namespace hmpsbm {

enum class StudyId { s41, s42, s43, s44 };

std::string to_string(StudyId id);
/// Throws ValidationError for anything but s41, s42, s43 or s44.
StudyId parse_study_id(const std::string& text);

/// One grid point. Points sharing `data_index` see identical simulated data.
struct StudyPoint {
  std::string key;
  int data_index = 0;
  int num_nodes = 250;
  int num_layers = 3;
  double alpha = 0.0;  // feature separation (s42) or layer similarity (s43, s44)
  TruncationConfig truncation;
  bool informed = true;
  int max_iterations = 10;
};

struct StudySpec {
  StudyId id = StudyId::s41;
  std::vector<StudyPoint> grid;
  int repetitions = 50;
  std::uint64_t base_seed = 20240501;
  int threads = 1;      // concurrent repetitions; each fit is single-threaded
  RunConfig run;        // hyperparameters and optimiser settings shared by all runs

  /// The published grid of the study.
  static StudySpec standard(StudyId id);
  void validate() const;
};

/// Simulated data for one (point, repetition).
struct StudyInstance {
  SampledNetwork sample;
  CovariateMatrix covariates;  // intercept first, then three features
};
StudyInstance make_instance(StudyId id, const StudyPoint& point, std::uint64_t seed);

/// Seed of a repetition: depends on the study, the point's data index and the repetition only.
std::uint64_t instance_seed(const StudySpec& spec, const StudyPoint& point, int repetition);

struct ResultRecord {
  std::string study;
  std::string point;
  int repetition = 0;
  std::uint64_t seed = 0;
  double global_nmi = 0.0;
  double layer_nmi = 0.0;  // mean over layers
  int occupied_global = 0;
  int occupied_layer = 0;
  double elbo = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  std::string error;       // empty on success
};

ResultRecord run_single(const StudySpec& spec, const StudyPoint& point, int repetition);

/// All grid points x repetitions. Records come back in (point, repetition)
/// order whatever the thread count. A run that throws is recorded with its
/// error message and the study continues. `progress` is called after each run.
std::vector<ResultRecord> run_study(const StudySpec& spec,
                                    const std::function<void(const ResultRecord&)>& progress = {});

struct Quantiles {
  double median = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1), 0 for a single value
  double q025 = 0.0;
  double q975 = 0.0;
  double mean = 0.0;
};

/// Linear interpolation between order statistics (position q (n - 1)).
double quantile(std::vector<double> values, double q);
Quantiles summarize_values(const std::vector<double>& values);

struct SummaryRow {
  std::string point;
  int runs = 0;
  int failures = 0;
  Quantiles global;
  Quantiles layer;
  int modal_occupied_global = 0;
  int modal_occupied_layer = 0;
};

/// One row per point, in order of first appearance. Failed runs are counted but excluded.
std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records);

/// Commas inside error messages are written as semicolons.
void write_records_csv(std::ostream& out, const std::vector<ResultRecord>& records);
std::vector<ResultRecord> parse_records_csv(std::istream& in);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
/// Tidy rows "study,point,repetition,level,nmi" with level global or layer.
void write_boxplot_csv(std::ostream& out, const std::vector<ResultRecord>& records);

}  // namespace hmpsbm

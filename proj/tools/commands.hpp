#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace hmpsbm::cli {

struct FitOptions {
  std::string network;
  std::string covariates;
  std::string config;
  std::string out = "fit_out";
  std::optional<std::uint64_t> seed;
  std::optional<int> m_w;
  std::optional<int> m_z;
  int threads = 1;
  bool log_covariates = false;
  bool zscore = false;
  bool intercept = false;
};

struct GenerateOptions {
  std::string study = "s41";
  std::optional<double> alpha;
  std::optional<int> nodes;
  std::optional<int> layers;
  std::uint64_t seed = 1;
  std::string out = "generated";
};

struct EvaluateOptions {
  std::string assignments;
  std::string truth;
  std::string out;
};

struct StudyOptions {
  std::string study = "s41";
  std::string config;
  std::string out = "study_out";
  std::string summarize;  // existing records CSV: only recompute the summary
  int repetitions = 50;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iterations;
  int threads = 1;
};

struct ConfigOptions {
  std::string config;
  std::string out;
};

int run_fit(const FitOptions& options);
int run_generate(const GenerateOptions& options);
int run_evaluate(const EvaluateOptions& options);
int run_study(const StudyOptions& options);
int run_config(const ConfigOptions& options);

}  // namespace hmpsbm::cli

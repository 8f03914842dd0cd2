// hmpsbm command-line tool: generate, fit, evaluate, study, config.
//
// Exit codes: 0 success, 1 invalid input or arguments, 2 runtime failure.

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "hmpsbm/errors.hpp"
#include "hmpsbm/parallel.hpp"

int main(int argc, char** argv) {
  using namespace hmpsbm::cli;
  CLI::App app{"Hierarchical multiplex stochastic blockmodel: simulate, fit and evaluate"};
  app.set_version_flag("--version", HMPSBM_VERSION);
  app.require_subcommand(1);
  const int default_threads = hmpsbm::default_thread_count();

  FitOptions fit;
  fit.threads = default_threads;
  auto* fit_cmd = app.add_subcommand("fit", "Initialise and fit a network");
  fit_cmd->add_option("--network", fit.network, "Layered edge list (\"L N\" header)")->required();
  fit_cmd->add_option("--covariates", fit.covariates, "Covariate CSV with a header row");
  fit_cmd->add_option("--config", fit.config, "key = value config file");
  fit_cmd->add_option("--seed", fit.seed, "Seed recorded in the manifest");
  fit_cmd->add_option("--mw", fit.m_w, "Global-group truncation");
  fit_cmd->add_option("--mz", fit.m_z, "Layer-group truncation");
  fit_cmd->add_option("--out", fit.out, "Output directory")->capture_default_str();
  fit_cmd->add_option("--threads", fit.threads, "Worker threads (HMPSBM_THREADS)")->capture_default_str();
  fit_cmd->add_flag("--log-covariates", fit.log_covariates, "Log-transform covariates");
  fit_cmd->add_flag("--zscore", fit.zscore, "Standardise covariate columns");
  fit_cmd->add_flag("--intercept", fit.intercept, "Prepend an intercept column");

  GenerateOptions gen;
  auto* gen_cmd = app.add_subcommand("generate", "Simulate a network from one of the study settings");
  gen_cmd->add_option("--study", gen.study, "s41, s42, s43 or s44")->capture_default_str();
  gen_cmd->add_option("--alpha", gen.alpha, "Separation/similarity parameter");
  gen_cmd->add_option("--nodes", gen.nodes, "Number of nodes");
  gen_cmd->add_option("--layers", gen.layers, "Number of layers");
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->capture_default_str();

  EvaluateOptions eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "NMI of fitted assignments against truth labels");
  eval_cmd->add_option("--assignments", eval.assignments)->required();
  eval_cmd->add_option("--truth", eval.truth)->required();
  eval_cmd->add_option("--out", eval.out, "Write the report as JSON");

  StudyOptions study;
  study.threads = default_threads;
  auto* study_cmd = app.add_subcommand("study", "Run a simulation study");
  study_cmd->add_option("--study", study.study, "s41, s42, s43 or s44")->capture_default_str();
  study_cmd->add_option("--reps", study.repetitions)->capture_default_str();
  study_cmd->add_option("--seed", study.seed, "Base seed");
  study_cmd->add_option("--config", study.config);
  study_cmd->add_option("--max-iterations", study.max_iterations, "Override the per-study sweep cap");
  study_cmd->add_option("--threads", study.threads, "Concurrent repetitions")->capture_default_str();
  study_cmd->add_option("--out", study.out)->capture_default_str();
  study_cmd->add_option("--summarize", study.summarize, "Recompute summary.csv from an existing records.csv");

  ConfigOptions conf;
  auto* conf_cmd = app.add_subcommand("config", "Print the resolved configuration with every default");
  conf_cmd->add_option("--config", conf.config);
  conf_cmd->add_option("--out", conf.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*fit_cmd) return run_fit(fit);
    if (*gen_cmd) return run_generate(gen);
    if (*eval_cmd) return run_evaluate(eval);
    if (*study_cmd) return run_study(study);
    if (*conf_cmd) return run_config(conf);
  } catch (const hmpsbm::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {  // ShapeError, ValidationError
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

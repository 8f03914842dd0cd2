#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "hmpsbm/config.hpp"
#include "hmpsbm/errors.hpp"
#include "hmpsbm/evaluation.hpp"
#include "hmpsbm/fit.hpp"
#include "hmpsbm/initialize.hpp"
#include "hmpsbm/io.hpp"
#include "hmpsbm/study.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hmpsbm::cli {
namespace {

std::ofstream create(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) { create(path) << text; }

RunConfig load_config(const std::string& path) { return path.empty() ? RunConfig{} : read_config(path); }

}  // namespace

int run_fit(const FitOptions& o) {
  RunConfig cfg = load_config(o.config);
  if (o.seed) cfg.fit.seed = *o.seed;
  if (o.m_w) cfg.fit.truncation.m_w = *o.m_w;
  if (o.m_z) cfg.fit.truncation.m_z = *o.m_z;
  cfg.fit.threads = o.threads;
  cfg.init.threads = o.threads;
  cfg.validate();

  const MultiplexNetwork network = read_network(o.network);
  CovariateTable covariates;
  if (!o.covariates.empty()) {
    covariates = read_covariates(o.covariates, {o.log_covariates, o.zscore, o.intercept}, network.num_nodes());
  } else if (o.intercept) {
    covariates.matrix = CovariateMatrix::intercept_only(network.num_nodes());
    covariates.names = {"intercept"};
  } else {
    throw ValidationError("no covariates: pass --covariates, or --intercept for an intercept-only fit");
  }

  std::vector<std::string> warnings;
  VariationalState init = initialize_state(network, covariates.matrix, cfg.hyper, cfg.fit.truncation, cfg.init,
                                           &warnings);
  const FitResult result = fit(network, covariates.matrix, cfg.hyper, cfg.fit, std::move(init));

  fs::create_directories(o.out);
  const fs::path dir(o.out);
  const ClusteringResult labels = extract_assignments(result.state);
  write_labels((dir / "assignments.csv").string(), LabelTable{labels.global_labels, labels.layer_labels});
  write_text(dir / "posterior.json", posterior_json(result.state));
  {
    auto out = create(dir / "elbo_trace.csv");
    write_elbo_trace(out, result.report);
  }
  {
    auto out = create(dir / "timing.csv");
    out << "iteration,seconds\n";
    for (std::size_t i = 0; i < result.report.sweep_seconds.size(); ++i) {
      out << i + 1 << ',' << result.report.sweep_seconds[i] << '\n';
    }
  }
  json manifest;
  manifest["tool"] = "hmpsbm";
  manifest["version"] = HMPSBM_VERSION;
  manifest["command"] = "fit";
  manifest["seed"] = cfg.fit.seed;
  manifest["config_hash"] = config_hash(cfg);
  manifest["config"] = format_config(cfg);
  manifest["inputs"] = {{"network", o.network},
                        {"covariates", o.covariates},
                        {"covariate_columns", covariates.names},
                        {"log_covariates", o.log_covariates},
                        {"zscore", o.zscore},
                        {"intercept", o.intercept}};
  manifest["threads"] = o.threads;
  manifest["iterations"] = result.report.iterations;
  manifest["converged"] = result.report.converged;
  manifest["occupied_global"] = result.report.occupied_global;
  manifest["occupied_layer"] = result.report.occupied_layer;
  manifest["warnings"] = warnings;
  manifest["outputs"] = {"assignments.csv", "posterior.json", "elbo_trace.csv", "timing.csv"};
  write_text(dir / "manifest.json", manifest.dump(2));

  std::cout << "iterations " << result.report.iterations << (result.report.converged ? " (converged)" : "")
            << ", final ELBO " << result.report.elbo_trace.back() << ", occupied groups "
            << result.report.occupied_global << " global\n";
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return 0;
}

int run_generate(const GenerateOptions& o) {
  const StudyId id = parse_study_id(o.study);
  StudyPoint point = StudySpec::standard(id).grid.front();
  if (o.alpha) point.alpha = *o.alpha;
  if (o.nodes) point.num_nodes = *o.nodes;
  if (o.layers) point.num_layers = *o.layers;
  const StudyInstance inst = make_instance(id, point, o.seed);

  fs::create_directories(o.out);
  const fs::path dir(o.out);
  write_network((dir / "network.txt").string(), inst.sample.network);
  write_labels((dir / "truth.csv").string(),
               LabelTable{inst.sample.truth.global_groups, inst.sample.truth.layer_groups});
  {
    auto out = create(dir / "covariates.csv");
    const Eigen::MatrixXd features = inst.covariates.values.rightCols(inst.covariates.num_features() - 1);
    std::vector<std::string> names;
    for (Eigen::Index j = 0; j < features.cols(); ++j) names.push_back("x" + std::to_string(j + 1));
    write_covariates(out, features, names);
  }
  write_text(dir / "truth.json", truth_json(inst.sample.truth));
  json manifest;
  manifest["tool"] = "hmpsbm";
  manifest["version"] = HMPSBM_VERSION;
  manifest["command"] = "generate";
  manifest["study"] = o.study;
  manifest["seed"] = o.seed;
  manifest["nodes"] = point.num_nodes;
  manifest["layers"] = point.num_layers;
  manifest["alpha"] = point.alpha;
  manifest["edges"] = inst.sample.network.edge_count();
  manifest["outputs"] = {"network.txt", "truth.csv", "covariates.csv", "truth.json"};
  write_text(dir / "manifest.json", manifest.dump(2));
  std::cout << "wrote " << inst.sample.network.edge_count() << " edges over " << point.num_layers << " layers to "
            << o.out << '\n';
  return 0;
}

int run_evaluate(const EvaluateOptions& o) {
  const LabelTable est = read_labels(o.assignments);
  const LabelTable truth = read_labels(o.truth);
  if (est.global.size() != truth.global.size() || est.layers.size() != truth.layers.size()) {
    throw ShapeError("assignments and truth differ in shape");
  }
  json report;
  report["global_nmi"] = nmi(truth.global, est.global);
  std::vector<double> layer;
  for (std::size_t l = 0; l < truth.layers.size(); ++l) layer.push_back(nmi(truth.layers[l], est.layers[l]));
  report["layer_nmi"] = layer;
  report["occupied_global"] = count_distinct(est.global);
  std::cout << report.dump(2) << '\n';
  if (!o.out.empty()) write_text(o.out, report.dump(2));
  return 0;
}

int run_study(const StudyOptions& o) {
  fs::create_directories(o.out);
  const fs::path dir(o.out);
  std::vector<ResultRecord> records;
  if (!o.summarize.empty()) {
    std::ifstream in(o.summarize);
    if (!in) throw std::runtime_error("cannot open " + o.summarize);
    records = parse_records_csv(in);
  } else {
    StudySpec spec = StudySpec::standard(parse_study_id(o.study));
    spec.run = load_config(o.config);
    spec.repetitions = o.repetitions;
    spec.threads = o.threads;
    if (o.seed) spec.base_seed = *o.seed;
    if (o.max_iterations) {
      for (auto& p : spec.grid) p.max_iterations = *o.max_iterations;
    }
    records = hmpsbm::run_study(spec, [](const ResultRecord& r) {
      std::cerr << r.study << ' ' << r.point << " rep " << r.repetition << ": global NMI " << r.global_nmi
                << ", layer NMI " << r.layer_nmi << (r.error.empty() ? "" : " ERROR " + r.error) << '\n';
    });
    auto out = create(dir / "records.csv");
    write_records_csv(out, records);
    auto box = create(dir / "boxplot.csv");
    write_boxplot_csv(box, records);
  }
  const auto rows = summarize(records);
  auto out = create(dir / "summary.csv");
  write_summary_csv(out, rows);
  write_summary_csv(std::cout, rows);
  return 0;
}

int run_config(const ConfigOptions& o) {
  const RunConfig cfg = load_config(o.config);
  cfg.validate();
  const std::string text = format_config(cfg);
  if (o.out.empty()) std::cout << text;
  else write_text(o.out, text);
  return 0;
}

}  // namespace hmpsbm::cli

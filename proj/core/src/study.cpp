#include "hmpsbm/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "hmpsbm/errors.hpp"
#include "hmpsbm/evaluation.hpp"
#include "hmpsbm/fit.hpp"
#include "hmpsbm/initialize.hpp"
#include "hmpsbm/parallel.hpp"
#include "hmpsbm/rng.hpp"

namespace hmpsbm {
namespace {

Eigen::MatrixXd shared_rho() {
  Eigen::MatrixXd rho(3, 3);
  rho << 0.8, 0.5, 0.2,
         0.4, 0.7, 0.05,
         0.2, 0.01, 0.6;
  return rho;
}

Eigen::MatrixXd similarity_gamma(double alpha) {
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Constant(3, 3, alpha);
  gamma.diagonal().setConstant(1.0 - 2.0 * alpha);
  return gamma;
}

Eigen::MatrixXd three_group_means(double a) {
  Eigen::MatrixXd means(3, 3);
  means.row(0).setConstant(a);
  means.row(1).setZero();
  means.row(2).setConstant(-a);
  return means;
}

std::uint64_t study_code(StudyId id) { return static_cast<std::uint64_t>(id) + 41; }

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

int mode_of(const std::vector<int>& values) {
  std::map<int, int> counts;
  for (int v : values) ++counts[v];
  int best = 0;
  int best_count = -1;
  for (const auto& [v, c] : counts) {
    if (c > best_count) {
      best = v;
      best_count = c;
    }
  }
  return best;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string to_string(StudyId id) {
  switch (id) {
    case StudyId::s41: return "s41";
    case StudyId::s42: return "s42";
    case StudyId::s43: return "s43";
    case StudyId::s44: return "s44";
  }
  return "unknown";
}

StudyId parse_study_id(const std::string& text) {
  if (text == "s41") return StudyId::s41;
  if (text == "s42") return StudyId::s42;
  if (text == "s43") return StudyId::s43;
  if (text == "s44") return StudyId::s44;
  throw ValidationError("unknown study '" + text + "' (expected s41, s42, s43 or s44)");
}

StudySpec StudySpec::standard(StudyId id) {
  StudySpec spec;
  spec.id = id;
  switch (id) {
    case StudyId::s41:
      for (const auto& [mw, mz] : {std::pair{2, 3}, std::pair{5, 5}}) {
        StudyPoint p;
        p.key = "mw=" + std::to_string(mw) + ",mz=" + std::to_string(mz);
        p.num_nodes = 250;
        p.num_layers = 3;
        p.truncation = {mw, mz};
        p.max_iterations = 10;
        spec.grid.push_back(p);
      }
      break;
    case StudyId::s42: {
      int index = 0;
      for (double alpha : {2.5, 2.0, 1.5, 1.0, 0.5, 0.0}) {
        StudyPoint p;
        p.key = "alpha=" + short_number(alpha);
        p.data_index = index++;
        p.num_nodes = 500;
        p.num_layers = 3;
        p.alpha = alpha;
        p.truncation = {3, 3};
        p.max_iterations = 10;
        spec.grid.push_back(p);
      }
      break;
    }
    case StudyId::s43: {
      int index = 0;
      for (double alpha : {0.05, 0.15, 0.25, 0.33}) {
        for (bool informed : {true, false}) {
          StudyPoint p;
          p.key = "alpha=" + short_number(alpha) + (informed ? ",informed" : ",uninformed");
          p.data_index = index;
          p.num_nodes = 500;
          p.num_layers = 3;
          p.alpha = alpha;
          p.truncation = {3, 3};
          p.informed = informed;
          p.max_iterations = 25;
          spec.grid.push_back(p);
        }
        ++index;
      }
      break;
    }
    case StudyId::s44: {
      int index = 0;
      for (int n : {100, 250}) {
        for (int layers : {2, 5, 10, 20}) {
          StudyPoint p;
          p.key = "n=" + std::to_string(n) + ",l=" + std::to_string(layers);
          p.data_index = index++;
          p.num_nodes = n;
          p.num_layers = layers;
          p.alpha = 0.15;
          p.truncation = {3, 3};
          p.max_iterations = 10;
          spec.grid.push_back(p);
        }
      }
      break;
    }
  }
  return spec;
}

void StudySpec::validate() const {
  if (repetitions < 1) throw ValidationError("repetitions must be at least 1");
  if (grid.empty()) throw ValidationError("study grid is empty");
  if (threads < 1) throw ValidationError("threads must be positive");
  for (const auto& p : grid) {
    p.truncation.validate();
    if (p.num_nodes < 2 || p.num_layers < 1 || p.max_iterations < 1) throw ValidationError("bad grid point " + p.key);
  }
}

StudyInstance make_instance(StudyId id, const StudyPoint& point, std::uint64_t seed) {
  Eigen::MatrixXd gamma;
  Eigen::MatrixXd means;
  std::vector<int> groups;
  switch (id) {
    case StudyId::s41:
      gamma.resize(2, 3);
      gamma << 0.8, 0.1, 0.1,
               0.0, 0.5, 0.5;
      means.resize(2, 3);
      means.row(0).setConstant(1.5);
      means.row(1).setConstant(-1.5);
      groups = split_by_ratio(point.num_nodes, {3, 2});
      break;
    case StudyId::s42:
      gamma = Eigen::MatrixXd::Identity(3, 3);
      means = three_group_means(point.alpha);
      groups = split_by_ratio(point.num_nodes, {2, 2, 1});
      break;
    case StudyId::s43:
    case StudyId::s44:
      gamma = similarity_gamma(point.alpha);
      means = three_group_means(5.0);
      groups = split_by_ratio(point.num_nodes, {2, 2, 1});
      break;
  }
  const Eigen::MatrixXd features = sample_group_features(groups, means, mix64(seed ^ 0x5eedf00dULL));
  StudyInstance inst{sample_network(point.num_nodes, point.num_layers, ExplicitGroups{groups, gamma, shared_rho()},
                                    seed),
                     {}};
  inst.covariates.values.resize(point.num_nodes, features.cols() + 1);
  inst.covariates.values.col(0).setOnes();
  inst.covariates.values.rightCols(features.cols()) = features;
  inst.covariates.includes_intercept = true;
  return inst;
}

std::uint64_t instance_seed(const StudySpec& spec, const StudyPoint& point, int repetition) {
  return stream_seed(spec.base_seed, {study_code(spec.id), static_cast<std::uint64_t>(point.data_index),
                                      static_cast<std::uint64_t>(repetition)});
}

ResultRecord run_single(const StudySpec& spec, const StudyPoint& point, int repetition) {
  ResultRecord rec;
  rec.study = to_string(spec.id);
  rec.point = point.key;
  rec.repetition = repetition;
  rec.seed = instance_seed(spec, point, repetition);
  const auto start = std::chrono::steady_clock::now();
  try {
    const StudyInstance inst = make_instance(spec.id, point, rec.seed);
    RunConfig run = spec.run;
    run.fit.truncation = point.truncation;
    run.fit.max_iterations = point.max_iterations;
    run.fit.threads = 1;
    run.init.threads = 1;
    run.init.informed_global = point.informed;
    VariationalState init =
        initialize_state(inst.sample.network, inst.covariates, run.hyper, run.fit.truncation, run.init);
    FitResult fitted = fit(inst.sample.network, inst.covariates, run.hyper, run.fit, std::move(init));
    const ClusteringResult labels = align_to_truth(extract_assignments(fitted.state), inst.sample.truth);
    rec.global_nmi = nmi(inst.sample.truth.global_groups, labels.global_labels, run.nmi);
    double layer_total = 0.0;
    for (std::size_t l = 0; l < labels.layer_labels.size(); ++l) {
      layer_total += nmi(inst.sample.truth.layer_groups[l], labels.layer_labels[l], run.nmi);
    }
    rec.layer_nmi = layer_total / static_cast<double>(labels.layer_labels.size());
    rec.occupied_global = labels.occupied_global;
    rec.occupied_layer = labels.occupied_layer;
    rec.elbo = fitted.report.elbo_trace.back();
    rec.iterations = fitted.report.iterations;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<ResultRecord> run_study(const StudySpec& spec, const std::function<void(const ResultRecord&)>& progress) {
  spec.validate();
  const std::size_t total = spec.grid.size() * static_cast<std::size_t>(spec.repetitions);
  std::vector<ResultRecord> records(total);
  std::mutex progress_mutex;
  parallel_for(total, spec.threads, [&](std::size_t index) {
    const auto& point = spec.grid[index / spec.repetitions];
    records[index] = run_single(spec, point, static_cast<int>(index % spec.repetitions));
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(records[index]);
    }
  });
  return records;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Quantiles summarize_values(const std::vector<double>& values) {
  Quantiles q;
  if (values.empty()) return q;
  q.median = quantile(values, 0.5);
  q.q025 = quantile(values, 0.025);
  q.q975 = quantile(values, 0.975);
  double sum = 0.0;
  for (double v : values) sum += v;
  q.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - q.mean) * (v - q.mean);
    q.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return q;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const ResultRecord*>> by_point;
  for (const auto& r : records) {
    if (!by_point.count(r.point)) order.push_back(r.point);
    by_point[r.point].push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (const auto& key : order) {
    SummaryRow row;
    row.point = key;
    std::vector<double> g, l;
    std::vector<int> og, ol;
    for (const ResultRecord* r : by_point[key]) {
      ++row.runs;
      if (!r->error.empty()) {
        ++row.failures;
        continue;
      }
      g.push_back(r->global_nmi);
      l.push_back(r->layer_nmi);
      og.push_back(r->occupied_global);
      ol.push_back(r->occupied_layer);
    }
    row.global = summarize_values(g);
    row.layer = summarize_values(l);
    row.modal_occupied_global = og.empty() ? 0 : mode_of(og);
    row.modal_occupied_layer = ol.empty() ? 0 : mode_of(ol);
    rows.push_back(row);
  }
  return rows;
}

void write_records_csv(std::ostream& out, const std::vector<ResultRecord>& records) {
  out << "study,point,repetition,seed,global_nmi,layer_nmi,occupied_global,occupied_layer,elbo,iterations,seconds,"
         "error\n";
  for (const auto& r : records) {
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    std::replace(error.begin(), error.end(), '"', '\'');
    out << r.study << ",\"" << r.point << "\"," << r.repetition << ',' << r.seed << ',' << number(r.global_nmi) << ','
        << number(r.layer_nmi) << ',' << r.occupied_global << ',' << r.occupied_layer << ',' << number(r.elbo) << ','
        << r.iterations << ',' << number(r.seconds) << ',' << error << '\n';
  }
}

std::vector<ResultRecord> parse_records_csv(std::istream& in) {
  std::string line;
  std::vector<ResultRecord> out;
  std::size_t number_of_line = 0;
  while (std::getline(in, line)) {
    ++number_of_line;
    if (number_of_line == 1 || line.empty()) continue;
    // The point key is quoted and may contain commas.
    const auto q1 = line.find('"');
    const auto q2 = line.find('"', q1 + 1);
    if (q1 == std::string::npos || q2 == std::string::npos) throw ParseError("missing quoted point key", number_of_line);
    ResultRecord r;
    r.study = line.substr(0, q1 - 1);
    r.point = line.substr(q1 + 1, q2 - q1 - 1);
    const auto cells = split(line.substr(q2 + 2));
    if (cells.size() != 10) throw ParseError("expected 12 columns", number_of_line);
    try {
      r.repetition = std::stoi(cells[0]);
      r.seed = std::stoull(cells[1]);
      r.global_nmi = std::stod(cells[2]);
      r.layer_nmi = std::stod(cells[3]);
      r.occupied_global = std::stoi(cells[4]);
      r.occupied_layer = std::stoi(cells[5]);
      r.elbo = std::stod(cells[6]);
      r.iterations = std::stoi(cells[7]);
      r.seconds = std::stod(cells[8]);
    } catch (const std::exception&) {
      throw ParseError("malformed record", number_of_line);
    }
    r.error = cells[9];
    out.push_back(std::move(r));
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "point,runs,failures,global_median,global_std,global_q025,global_q975,layer_median,layer_std,layer_q025,"
         "layer_q975,modal_occupied_global,modal_occupied_layer\n";
  for (const auto& r : rows) {
    out << '"' << r.point << "\"," << r.runs << ',' << r.failures << ',' << number(r.global.median) << ','
        << number(r.global.std) << ',' << number(r.global.q025) << ',' << number(r.global.q975) << ','
        << number(r.layer.median) << ',' << number(r.layer.std) << ',' << number(r.layer.q025) << ','
        << number(r.layer.q975) << ',' << r.modal_occupied_global << ',' << r.modal_occupied_layer << '\n';
  }
}

void write_boxplot_csv(std::ostream& out, const std::vector<ResultRecord>& records) {
  out << "study,point,repetition,level,nmi\n";
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    out << r.study << ",\"" << r.point << "\"," << r.repetition << ",global," << number(r.global_nmi) << '\n';
    out << r.study << ",\"" << r.point << "\"," << r.repetition << ",layer," << number(r.layer_nmi) << '\n';
  }
}

}  // namespace hmpsbm

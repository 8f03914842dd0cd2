#include "hmpsbm/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hmpsbm/errors.hpp"

namespace hmpsbm {
namespace {

using nlohmann::json;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

std::vector<long long> integers(const std::string& text, std::size_t line) {
  std::istringstream ss(text);
  std::vector<long long> out;
  std::string token;
  while (ss >> token) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw ParseError("expected an integer, got '" + token + "'", line);
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r\"");
    const auto e = cell.find_last_not_of(" \t\r\"");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double cell_number(const std::string& cell, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw ParseError("non-numeric cell '" + cell + "'", line);
  }
  return v;
}

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

MultiplexNetwork parse_network(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  bool have_header = false;
  MultiplexNetwork net;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = strip_comment(raw);
    if (blank(text)) continue;
    const auto v = integers(text, line);
    if (!have_header) {
      if (v.size() != 2) throw ParseError("header must be 'L N'", line);
      if (v[0] < 1 || v[1] < 1) throw ValidationError("line " + std::to_string(line) + ": L and N must be positive");
      net = MultiplexNetwork(static_cast<int>(v[0]), static_cast<int>(v[1]));
      have_header = true;
      continue;
    }
    if (v.size() != 3) throw ParseError("edge line must be 'layer source target'", line);
    if (v[0] < 0 || v[0] >= net.num_layers() || v[1] < 0 || v[1] >= net.num_nodes() || v[2] < 0 ||
        v[2] >= net.num_nodes()) {
      throw ValidationError("line " + std::to_string(line) + ": index out of range");
    }
    if (v[1] == v[2]) throw ValidationError("line " + std::to_string(line) + ": self-loop");
    net.set_edge(static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]));
  }
  if (!have_header) throw ParseError("missing 'L N' header", line);
  return net;
}

MultiplexNetwork read_network(const std::string& path) {
  auto in = open_input(path);
  return parse_network(in);
}

void write_network(std::ostream& out, const MultiplexNetwork& network) {
  out << network.num_layers() << ' ' << network.num_nodes() << '\n';
  for (int l = 0; l < network.num_layers(); ++l) {
    for (int i = 0; i < network.num_nodes(); ++i) {
      const auto row = network.row(l, i);
      for (int j = 0; j < network.num_nodes(); ++j) {
        if (row[j]) out << l << ' ' << i << ' ' << j << '\n';
      }
    }
  }
}

void write_network(const std::string& path, const MultiplexNetwork& network) {
  auto out = open_output(path);
  write_network(out, network);
}

MultiplexNetwork read_dense_layers(const std::vector<std::string>& paths, bool drop_diagonal) {
  if (paths.empty()) throw ValidationError("no layer files given");
  std::vector<std::vector<std::vector<double>>> layers;
  for (const auto& path : paths) {
    auto in = open_input(path);
    std::vector<std::vector<double>> rows;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
      ++line;
      if (blank(raw)) continue;
      std::vector<double> row;
      for (const auto& cell : split_csv(raw)) row.push_back(cell_number(cell, line));
      rows.push_back(std::move(row));
    }
    layers.push_back(std::move(rows));
  }
  const int n = static_cast<int>(layers[0].size());
  MultiplexNetwork net(static_cast<int>(layers.size()), n);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (static_cast<int>(layers[l].size()) != n) throw ShapeError(paths[l] + ": row count differs from first layer");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(layers[l][i].size()) != n) {
        throw ShapeError(paths[l] + ": row " + std::to_string(i + 1) + " does not have N entries");
      }
      for (int j = 0; j < n; ++j) {
        if (layers[l][i][j] == 0.0) continue;
        if (i == j) {
          if (drop_diagonal) continue;
          throw ValidationError(paths[l] + ": nonzero diagonal entry at row " + std::to_string(i + 1));
        }
        net.set_edge(static_cast<int>(l), i, j);
      }
    }
  }
  return net;
}

CovariateTable parse_covariates(std::istream& in, const CovariateOptions& options, int expected_nodes) {
  std::string raw;
  std::size_t line = 0;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, raw)) {
    ++line;
    if (blank(raw)) continue;
    if (header.empty()) {
      header = split_csv(raw);
      continue;
    }
    const auto cells = split_csv(raw);
    if (cells.size() != header.size()) throw ParseError("row has the wrong number of cells", line);
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(cell_number(c, line));
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw ParseError("missing header row", line);
  const int n = static_cast<int>(rows.size());
  const int p = static_cast<int>(header.size());
  if (expected_nodes >= 0 && n != expected_nodes) {
    throw ValidationError("covariates have " + std::to_string(n) + " rows, network has " +
                          std::to_string(expected_nodes) + " nodes");
  }
  Eigen::MatrixXd values(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) values(i, j) = rows[i][j];
  }
  CovariateTable table;
  if (options.log_transform) {
    if ((values.array() <= 0.0).any()) throw ValidationError("log transform needs positive covariates");
    values = values.array().log().matrix();
  }
  if (options.zscore) {
    for (int j = 0; j < p; ++j) {
      const double mean = values.col(j).mean();
      values.col(j).array() -= mean;
      const double sd = std::sqrt(values.col(j).squaredNorm() / n);
      if (sd > 0.0) values.col(j) /= sd;
    }
  }
  if (options.log_transform || options.zscore) table.transformed = header;
  if (options.intercept) {
    Eigen::MatrixXd with(n, p + 1);
    with.col(0).setOnes();
    with.rightCols(p) = values;
    values = std::move(with);
    table.names.push_back("intercept");
  }
  table.names.insert(table.names.end(), header.begin(), header.end());
  table.matrix = {std::move(values), options.intercept};
  table.matrix.validate(n);
  return table;
}

CovariateTable read_covariates(const std::string& path, const CovariateOptions& options, int expected_nodes) {
  auto in = open_input(path);
  return parse_covariates(in, options, expected_nodes);
}

void write_covariates(std::ostream& out, const Eigen::MatrixXd& values, const std::vector<std::string>& names) {
  if (static_cast<Eigen::Index>(names.size()) != values.cols()) throw ShapeError("one name per column");
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) out << (j ? "," : "") << number(values(i, j));
    out << '\n';
  }
}

LabelTable parse_labels(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  std::size_t columns = 0;
  LabelTable t;
  while (std::getline(in, raw)) {
    ++line;
    if (blank(raw)) continue;
    const auto cells = split_csv(raw);
    if (columns == 0) {
      if (cells.size() < 2 || cells[0] != "node" || cells[1] != "global") {
        throw ParseError("header must start with node,global", line);
      }
      columns = cells.size();
      t.layers.resize(columns - 2);
      continue;
    }
    if (cells.size() != columns) throw ParseError("row has the wrong number of cells", line);
    std::string joined;
    for (const auto& c : cells) {
      if (c.empty()) throw ParseError("empty cell", line);
      joined += c + ' ';
    }
    const auto v = integers(joined, line);
    if (v[0] != static_cast<long long>(t.global.size())) throw ParseError("nodes must be listed in order", line);
    t.global.push_back(static_cast<int>(v[1]));
    for (std::size_t l = 0; l + 2 < columns; ++l) t.layers[l].push_back(static_cast<int>(v[l + 2]));
  }
  if (columns == 0) throw ParseError("missing header row", line);
  return t;
}

LabelTable read_labels(const std::string& path) {
  auto in = open_input(path);
  return parse_labels(in);
}

void write_labels(std::ostream& out, const LabelTable& labels) {
  out << "node,global";
  for (std::size_t l = 0; l < labels.layers.size(); ++l) out << ",layer_" << l;
  out << '\n';
  for (std::size_t i = 0; i < labels.global.size(); ++i) {
    out << i << ',' << labels.global[i];
    for (const auto& layer : labels.layers) out << ',' << layer[i];
    out << '\n';
  }
}

void write_labels(const std::string& path, const LabelTable& labels) {
  auto out = open_output(path);
  write_labels(out, labels);
}

std::string posterior_json(const VariationalState& state) {
  json j;
  j["phi_w"] = matrix_json(state.phi_w);
  json z = json::array();
  for (const auto& layer : state.phi_z) z.push_back(matrix_json(layer));
  j["phi_z"] = std::move(z);
  j["rho_a"] = matrix_json(state.rho_a);
  j["rho_b"] = matrix_json(state.rho_b);
  j["gamma_a"] = matrix_json(state.gamma_a);
  j["gamma_b"] = matrix_json(state.gamma_b);
  j["theta_phi"] = matrix_json(state.theta_phi);
  json b = json::array(), sigma = json::array(), sigma0 = json::array();
  for (int k = 0; k < state.m_w(); ++k) {
    b.push_back(matrix_json(state.log_chol_phi[k]));
    sigma.push_back(matrix_json(state.sigma_phi(k)));
    sigma0.push_back(matrix_json(state.sigma_phi0[k]));
  }
  j["log_chol_phi"] = std::move(b);
  j["sigma_phi"] = std::move(sigma);
  j["theta_phi0"] = matrix_json(state.theta_phi0);
  j["sigma_phi0"] = std::move(sigma0);
  j["nu"] = vector_json(state.nu);
  j["omega"] = vector_json(state.omega);
  return j.dump(2);
}

void write_elbo_trace(std::ostream& out, const FitReport& report) {
  out << "iteration,elbo\n";
  for (std::size_t i = 0; i < report.elbo_trace.size(); ++i) out << i << ',' << number(report.elbo_trace[i]) << '\n';
}

std::string truth_json(const GroundTruth& truth) {
  json j;
  j["rho"] = matrix_json(truth.connection_probs);
  j["gamma"] = matrix_json(truth.gamma);
  j["phi"] = matrix_json(truth.probit_weights);
  return j.dump(2);
}

}  // namespace hmpsbm

#include "hmpsbm/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <vector>

#include "hmpsbm/errors.hpp"

namespace hmpsbm {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError("not a number: '" + text + "'", line);
  return v;
}

long long parse_integer(const std::string& text, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError("not an integer: '" + text + "'", line);
  return v;
}

std::uint64_t parse_unsigned(const std::string& text, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError("not a seed: '" + text + "'", line);
  return v;
}

bool parse_bool(const std::string& text, std::size_t line) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ParseError("expected true or false, got '" + text + "'", line);
}

Eigen::VectorXd parse_vector(const std::string& text, std::size_t line) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) values.push_back(parse_double(item, line));
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Setter = std::function<void(RunConfig&, const std::string&, std::size_t)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"alpha0", [](RunConfig& c, const std::string& v, std::size_t l) { c.hyper.alpha0 = parse_double(v, l); }},
      {"beta0", [](RunConfig& c, const std::string& v, std::size_t l) { c.hyper.beta0 = parse_double(v, l); }},
      {"eta0", [](RunConfig& c, const std::string& v, std::size_t l) { c.hyper.eta0 = parse_double(v, l); }},
      {"nu0", [](RunConfig& c, const std::string& v, std::size_t l) { c.hyper.nu0 = parse_double(v, l); }},
      {"omega0", [](RunConfig& c, const std::string& v, std::size_t l) { c.hyper.omega0 = parse_double(v, l); }},
      {"mu", [](RunConfig& c, const std::string& v, std::size_t l) { c.hyper.mu = parse_vector(v, l); }},
      {"m_w", [](RunConfig& c, const std::string& v, std::size_t l) { c.fit.truncation.m_w = parse_integer(v, l); }},
      {"m_z", [](RunConfig& c, const std::string& v, std::size_t l) { c.fit.truncation.m_z = parse_integer(v, l); }},
      {"max_iterations",
       [](RunConfig& c, const std::string& v, std::size_t l) { c.fit.max_iterations = parse_integer(v, l); }},
      {"tolerance", [](RunConfig& c, const std::string& v, std::size_t l) { c.fit.tolerance = parse_double(v, l); }},
      {"adam_lr_theta",
       [](RunConfig& c, const std::string& v, std::size_t l) { c.fit.adam_theta.learning_rate = parse_double(v, l); }},
      {"adam_lr_sigma",
       [](RunConfig& c, const std::string& v, std::size_t l) { c.fit.adam_sigma.learning_rate = parse_double(v, l); }},
      {"adam_beta1",
       [](RunConfig& c, const std::string& v, std::size_t l) {
         c.fit.adam_theta.beta1 = c.fit.adam_sigma.beta1 = parse_double(v, l);
       }},
      {"adam_beta2",
       [](RunConfig& c, const std::string& v, std::size_t l) {
         c.fit.adam_theta.beta2 = c.fit.adam_sigma.beta2 = parse_double(v, l);
       }},
      {"adam_epsilon",
       [](RunConfig& c, const std::string& v, std::size_t l) {
         c.fit.adam_theta.epsilon = c.fit.adam_sigma.epsilon = parse_double(v, l);
       }},
      {"max_steps", [](RunConfig& c, const std::string& v, std::size_t l) { c.fit.max_steps = parse_integer(v, l); }},
      {"max_decreases",
       [](RunConfig& c, const std::string& v, std::size_t l) { c.fit.max_decreases = parse_integer(v, l); }},
      {"inner_tolerance",
       [](RunConfig& c, const std::string& v, std::size_t l) { c.fit.inner_tolerance = parse_double(v, l); }},
      {"quadrature_nodes",
       [](RunConfig& c, const std::string& v, std::size_t l) { c.fit.quadrature_nodes = parse_integer(v, l); }},
      {"monte_carlo_samples",
       [](RunConfig& c, const std::string& v, std::size_t l) { c.fit.monte_carlo_samples = parse_integer(v, l); }},
      {"seed", [](RunConfig& c, const std::string& v, std::size_t l) { c.fit.seed = parse_unsigned(v, l); }},
      {"init_smoothing",
       [](RunConfig& c, const std::string& v, std::size_t l) { c.init.smoothing = parse_double(v, l); }},
      {"init_min_cluster_size",
       [](RunConfig& c, const std::string& v, std::size_t l) { c.init.min_cluster_size_start = parse_integer(v, l); }},
      {"init_method",
       [](RunConfig& c, const std::string& v, std::size_t l) {
         if (v == "hdbscan") c.init.method = ClusterMethod::hdbscan;
         else if (v == "kmeans") c.init.method = ClusterMethod::kmeans;
         else throw ParseError("init_method must be hdbscan or kmeans", l);
       }},
      {"init_scale_embedding",
       [](RunConfig& c, const std::string& v, std::size_t l) { c.init.scale_by_singular_values = parse_bool(v, l); }},
      {"init_global",
       [](RunConfig& c, const std::string& v, std::size_t l) {
         if (v == "informed") c.init.informed_global = true;
         else if (v == "uninformed") c.init.informed_global = false;
         else throw ParseError("init_global must be informed or uninformed", l);
       }},
      {"nmi_normalization",
       [](RunConfig& c, const std::string& v, std::size_t l) {
         if (v == "arithmetic") c.nmi = NmiNormalization::arithmetic;
         else if (v == "geometric") c.nmi = NmiNormalization::geometric;
         else throw ParseError("nmi_normalization must be arithmetic or geometric", l);
       }},
  };
  return table;
}

}  // namespace

void RunConfig::validate() const {
  fit.validate();
  if (hyper.mu.size() > 0) hyper.validate(static_cast<int>(hyper.mu.size()));
  else hyper.validate(1);
  if (!(init.smoothing >= 0.0 && init.smoothing < 1.0)) throw ValidationError("init_smoothing must lie in [0, 1)");
  if (init.min_cluster_size_start < 2) throw ValidationError("init_min_cluster_size must be at least 2");
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError("unknown key '" + key + "'", line);
    it->second(base, value, line);
  }
  return base;
}

RunConfig read_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  return parse_config(in, std::move(base));
}

std::string format_config(const RunConfig& c) {
  std::ostringstream out;
  out << "# hyperparameters\n";
  out << "alpha0 = " << number(c.hyper.alpha0) << "\n";
  out << "beta0 = " << number(c.hyper.beta0) << "\n";
  out << "eta0 = " << number(c.hyper.eta0) << "\n";
  out << "nu0 = " << number(c.hyper.nu0) << "\n";
  out << "omega0 = " << number(c.hyper.omega0) << "\n";
  out << "mu = ";
  for (Eigen::Index i = 0; i < c.hyper.mu.size(); ++i) out << (i ? "," : "") << number(c.hyper.mu(i));
  out << "\n# truncations and stopping\n";
  out << "m_w = " << c.fit.truncation.m_w << "\n";
  out << "m_z = " << c.fit.truncation.m_z << "\n";
  out << "max_iterations = " << c.fit.max_iterations << "\n";
  out << "tolerance = " << number(c.fit.tolerance) << "\n";
  out << "# gradient steps\n";
  out << "adam_lr_theta = " << number(c.fit.adam_theta.learning_rate) << "\n";
  out << "adam_lr_sigma = " << number(c.fit.adam_sigma.learning_rate) << "\n";
  out << "adam_beta1 = " << number(c.fit.adam_theta.beta1) << "\n";
  out << "adam_beta2 = " << number(c.fit.adam_theta.beta2) << "\n";
  out << "adam_epsilon = " << number(c.fit.adam_theta.epsilon) << "\n";
  out << "max_steps = " << c.fit.max_steps << "\n";
  out << "max_decreases = " << c.fit.max_decreases << "\n";
  out << "inner_tolerance = " << number(c.fit.inner_tolerance) << "\n";
  out << "quadrature_nodes = " << c.fit.quadrature_nodes << "\n";
  out << "monte_carlo_samples = " << c.fit.monte_carlo_samples << "\n";
  out << "seed = " << c.fit.seed << "\n";
  out << "# initialisation\n";
  out << "init_smoothing = " << number(c.init.smoothing) << "\n";
  out << "init_min_cluster_size = " << c.init.min_cluster_size_start << "\n";
  out << "init_method = " << (c.init.method == ClusterMethod::hdbscan ? "hdbscan" : "kmeans") << "\n";
  out << "init_scale_embedding = " << (c.init.scale_by_singular_values ? "true" : "false") << "\n";
  out << "init_global = " << (c.init.informed_global ? "informed" : "uninformed") << "\n";
  out << "# evaluation\n";
  out << "nmi_normalization = " << (c.nmi == NmiNormalization::arithmetic ? "arithmetic" : "geometric") << "\n";
  return out.str();
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : format_config(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hmpsbm

#include "shelab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shelab {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for " + key);
  }
  if (pos != v.size())
    throw std::invalid_argument("config: trailing junk in value for " + key);
  return out;
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  if (v.empty() || v[0] == '-')
    throw std::invalid_argument("config: " + key + " must be non-negative");
  std::size_t pos = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value for " + key);
  }
  if (pos != v.size())
    throw std::invalid_argument("config: trailing junk in value for " + key);
  return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config: bad boolean value for " + key);
}

}  // namespace

GridSpec RunConfig::grid() const {
  GridSpec g;
  g.half_width = half_width;
  g.dx = dx;
  g.dt = dt;
  g.t_max = t;
  return g;
}

void RunConfig::validate() const {
  if (!is_suite_name(suite))
    throw std::invalid_argument("config: unknown suite '" + suite + "'");
  if (!(t > 0.0)) throw std::invalid_argument("config: t must be > 0");
  if (!(beta >= 0.0)) throw std::invalid_argument("config: beta must be >= 0");
  if (n_samples < 2)
    throw std::invalid_argument("config: n-samples must be >= 2");
  if (out_dir.empty()) throw std::invalid_argument("config: out is empty");
  grid().validate();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "exact",      "volterra", "pam",   "green-m2", "kappa",
      "covariance", "boundary-layer", "shear", "all"};
  return names;
}

bool is_suite_name(const std::string& name) {
  const auto& names = suite_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

void apply_config_line(RunConfig& cfg, const std::string& raw, int line_no) {
  std::string line = raw;
  if (const std::size_t hash = line.find('#'); hash != std::string::npos)
    line.resize(hash);
  line = trim(line);
  if (line.empty()) return;
  const std::size_t eq = line.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                " is not key=value");
  const std::string key = trim(line.substr(0, eq));
  const std::string value = trim(line.substr(eq + 1));
  if (key == "suite")
    cfg.suite = value;
  else if (key == "t")
    cfg.t = parse_double(value, key);
  else if (key == "beta")
    cfg.beta = parse_double(value, key);
  else if (key == "dx")
    cfg.dx = parse_double(value, key);
  else if (key == "dt")
    cfg.dt = parse_double(value, key);
  else if (key == "L")
    cfg.half_width = parse_double(value, key);
  else if (key == "n-samples")
    cfg.n_samples = parse_u64(value, key);
  else if (key == "seed")
    cfg.seed = parse_u64(value, key);
  else if (key == "out")
    cfg.out_dir = value;
  else if (key == "emit-plots")
    cfg.emit_plots = parse_bool(value, key);
  else
    throw std::invalid_argument("config: unknown key '" + key + "' on line " +
                                std::to_string(line_no));
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) apply_config_line(base, line, ++line_no);
  return base;
}

std::string config_echo(const RunConfig& cfg) {
  std::ostringstream out;
  char buf[64];
  const auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << key << "=" << buf << "\n";
  };
  out << "suite=" << cfg.suite << "\n";
  put("t", cfg.t);
  put("beta", cfg.beta);
  put("dx", cfg.dx);
  put("dt", cfg.dt);
  put("L", cfg.half_width);
  out << "n-samples=" << cfg.n_samples << "\n";
  out << "seed=" << cfg.seed << "\n";
  out << "out=" << cfg.out_dir << "\n";
  out << "emit-plots=" << (cfg.emit_plots ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace shelab

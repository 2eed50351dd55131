#include "shelab/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "shelab/estimators.hpp"

namespace shelab {
namespace {

using nlohmann::json;

json grid_json(const GridSpec& g) {
  return {{"half_width", g.half_width},
          {"dx", g.dx},
          {"dt", g.dt},
          {"t_max", g.t_max}};
}

json config_json(const RunConfig& cfg) {
  return {{"suite", cfg.suite},
          {"t", cfg.t},
          {"beta", cfg.beta},
          {"dx", cfg.dx},
          {"dt", cfg.dt},
          {"L", cfg.half_width},
          {"n_samples", cfg.n_samples},
          {"seed", cfg.seed},
          {"out", cfg.out_dir},
          {"emit_plots", cfg.emit_plots}};
}

json estimate_json(const Estimate& e) {
  json params = json::object();
  for (const auto& [key, value] : e.params) params[key] = value;
  return {{"label", e.label},          {"params", params},
          {"estimate", e.estimate},    {"std_error", e.std_error},
          {"n_samples", e.n_samples},  {"seed", e.seed},
          {"grid", grid_json(e.grid)}, {"low_precision", e.low_precision}};
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += "\"";
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::string estimates_json(std::span<const Estimate> estimates) {
  json arr = json::array();
  for (const Estimate& e : estimates) arr.push_back(estimate_json(e));
  return arr.dump(2) + "\n";
}

std::string suite_report_json(const SuiteReport& rep) {
  json checks = json::array();
  for (const CheckRow& r : rep.rows)
    checks.push_back({{"id", r.id},
                      {"claim", r.claim},
                      {"observed", r.observed},
                      {"expected", r.expected},
                      {"tolerance", r.tolerance},
                      {"std_error", r.std_error},
                      {"passed", r.passed},
                      {"details", r.details}});
  const json doc = {{"suite", rep.suite},
                    {"config", config_json(rep.config)},
                    {"wall_seconds", rep.wall_seconds},
                    {"all_passed", rep.all_passed()},
                    {"checks", checks}};
  return doc.dump(2) + "\n";
}

std::string suite_report_csv(const SuiteReport& rep) {
  std::ostringstream out;
  out << "suite,id,claim,observed,expected,tolerance,std_error,passed,"
         "details,seed,n_samples,beta,t,dx,dt,L\n";
  char buf[512];
  const RunConfig& c = rep.config;
  for (const CheckRow& r : rep.rows) {
    out << rep.suite << ',' << r.id << ',' << csv_quote(r.claim) << ',';
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,", r.observed,
                  r.expected, r.tolerance, r.std_error);
    out << buf << (r.passed ? "true" : "false") << ','
        << csv_quote(r.details) << ',' << c.seed << ',' << c.n_samples << ',';
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", c.beta,
                  c.t, c.dx, c.dt, c.half_width);
    out << buf;
  }
  return out.str();
}

std::string plot_script(const SuiteReport& rep) {
  const auto has_table = [&rep](const std::string& name) {
    for (const auto& [file, text] : rep.tables)
      if (file == name) return true;
    return false;
  };
  std::ostringstream out;
  out << "# gnuplot script; run from the directory holding the CSVs\n"
         "set datafile separator ','\n"
         "set terminal pngcairo size 960,640\n"
         "set grid\n";
  if (has_table("covariance_table.csv")) {
    out << "\nset output 'covariance_profile.png'\n"
           "set xlabel 'x'\n"
           "set ylabel 'covariance'\n"
           "plot 'covariance_table.csv' skip 1 using 1:2:3 with yerrorlines "
           "title 'cov h', \\\n"
           "     '' skip 1 using 1:4 with lines title 'overlap integral'\n"
           "\nset output 'covariance_ratio.png'\n"
           "set ylabel 'cov / I'\n"
           "plot 'covariance_table.csv' skip 1 using 1:5 with linespoints "
           "title 'ratio', \\\n"
           "     '' skip 1 using 1:6 with lines title 'kappa reference'\n";
  }
  if (has_table("volterra_curves.csv")) {
    out << "\nset output 'moment_curves.png'\n"
           "set xlabel 'tau'\n"
           "set ylabel 'second moment'\n"
           "sources = 'volterra-bridge volterra-flat closed-bridge "
           "closed-flat'\n"
           "plot for [s in sources] 'volterra_curves.csv' skip 1 \\\n"
           "     using 1:(strcol(3) eq s ? $2 : NaN) with lines title s\n";
  }
  return out.str();
}

void write_suite_artifacts(const SuiteReport& rep) {
  namespace fs = std::filesystem;
  const fs::path dir(rep.config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir))
    throw std::runtime_error("cannot create output directory " +
                             dir.string());
  write_file(dir / "report.json", suite_report_json(rep));
  write_file(dir / "report.csv", suite_report_csv(rep));
  if (!rep.estimates.empty())
    write_file(dir / "estimates.json", estimates_json(rep.estimates));
  for (const auto& [file, text] : rep.tables) write_file(dir / file, text);
  if (rep.config.emit_plots) write_file(dir / "plots.gp", plot_script(rep));
}

}  // namespace shelab

// Command line front end: pick a suite, run its checks, write artifacts.
//
// Exit status: 0 every check passed, 1 at least one check failed,
// 2 the configuration was unusable.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "shelab/config.hpp"
#include "shelab/suites.hpp"

namespace {

std::string join_names() {
  std::string s;
  for (const auto& n : shelab::suite_names()) {
    if (!s.empty()) s += ", ";
    s += n;
  }
  return s;
}

void print_report(const shelab::SuiteReport& rep) {
  std::size_t passed = 0;
  for (const auto& row : rep.rows) {
    if (row.passed) ++passed;
    std::printf("[%s] %-26s observed=%-13.6g expected=%-13.6g tol=%-10.4g%s\n",
                row.passed ? "pass" : "FAIL", row.id.c_str(), row.observed,
                row.expected, row.tolerance,
                row.std_error > 0.0
                    ? ("  se=" + std::to_string(row.std_error)).c_str()
                    : "");
    if (!row.passed && !row.details.empty())
      std::printf("       %s\n", row.details.c_str());
  }
  std::printf("suite %s: %zu/%zu checks passed in %.1f s\n", rep.suite.c_str(),
              passed, rep.rows.size(), rep.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "shelab: verification suites for a stochastic heat equation "
      "laboratory"};
  app.footer(
      "Config file keys mirror the flag names (suite, t, beta, dx, dt, L,\n"
      "n-samples, seed, out, emit-plots); explicit flags win over the file.\n"
      "Worker count is taken from the SHELAB_WORKERS environment variable.");

  std::string suite;
  std::string config_path;
  std::optional<double> t, beta, dx, dt, half_width;
  std::optional<std::uint64_t> n_samples, seed;
  std::optional<std::string> out_dir;
  bool emit_plots = false;

  app.add_option("suite", suite, "one of: " + join_names());
  app.add_option("--config", config_path,
                 "key=value file applied before any flags");
  app.add_option("--t", t, "final time of every run");
  app.add_option("--beta", beta, "noise coupling strength");
  app.add_option("--dx", dx, "spatial cell width");
  app.add_option("--dt", dt, "time step");
  app.add_option("--L", half_width, "half width of the periodic domain");
  app.add_option("--n-samples", n_samples, "Monte Carlo sample count");
  app.add_option("--seed", seed, "base seed for the counter RNG");
  app.add_option("--out", out_dir, "directory for report artifacts");
  app.add_flag("--emit-plots", emit_plots,
               "also write a gnuplot script next to the tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  shelab::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = shelab::load_config_file(config_path);
    if (!suite.empty()) cfg.suite = suite;
    if (t) cfg.t = *t;
    if (beta) cfg.beta = *beta;
    if (dx) cfg.dx = *dx;
    if (dt) cfg.dt = *dt;
    if (half_width) cfg.half_width = *half_width;
    if (n_samples) cfg.n_samples = *n_samples;
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.out_dir = *out_dir;
    if (emit_plots) cfg.emit_plots = true;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }

  std::printf("%s", shelab::config_echo(cfg).c_str());
  std::fflush(stdout);

  try {
    const shelab::SuiteReport rep = shelab::run_suite(cfg);
    print_report(rep);
    std::printf("artifacts written to %s\n", cfg.out_dir.c_str());
    return rep.all_passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shelab/grid.hpp"

namespace shelab {

// One flat record drives every suite. Defaults reproduce the full
// verification configuration; lower n_samples for quick passes.
struct RunConfig {
  std::string suite = "all";
  double t = 1.0;
  double beta = 1.0;
  double dx = 0.05;
  double dt = 1e-3;
  double half_width = 8.0;  // key/flag name: L
  std::uint64_t n_samples = 100000;
  std::uint64_t seed = 20260818ull;
  std::string out_dir = ".";  // key/flag name: out
  bool emit_plots = false;

  GridSpec grid() const;     // t_max = t
  void validate() const;     // throws std::invalid_argument with a diagnostic
};

const std::vector<std::string>& suite_names();
bool is_suite_name(const std::string& name);

// Flat key=value text, '#' comments, blank lines ignored. Keys are exactly
// the CLI flag names: suite, t, beta, dx, dt, L, n-samples, seed, out,
// emit-plots. Unknown keys or unparseable values throw std::invalid_argument.
void apply_config_line(RunConfig& cfg, const std::string& line, int line_no);
RunConfig load_config_file(const std::string& path, RunConfig base = {});

std::string config_echo(const RunConfig& cfg);  // key=value lines, stable order

}  // namespace shelab

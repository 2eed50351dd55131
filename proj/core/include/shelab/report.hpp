#pragma once

#include <string>

#include "shelab/suites.hpp"

namespace shelab {

std::string suite_report_json(const SuiteReport& rep);
std::string suite_report_csv(const SuiteReport& rep);

// gnuplot script referencing whichever CSV tables the report carries
std::string plot_script(const SuiteReport& rep);

// Writes report.json, report.csv, estimates.json (when estimates exist),
// the suite's CSV tables, and plots.gp (when emit_plots) to
// rep.config.out_dir, creating it if needed. Throws std::runtime_error when
// a file cannot be written.
void write_suite_artifacts(const SuiteReport& rep);

}  // namespace shelab

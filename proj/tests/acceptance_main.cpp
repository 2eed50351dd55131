// Verification gate. Runs every suite at the pinned default configuration
// and prints one PASS/FAIL line per acceptance criterion. Exit 0 only if
// all criteria pass.
//
//   shelab_acceptance [--n-samples N] [--out DIR]
//
// --n-samples exists for quick development passes; the recorded result is
// the no-argument run. --out additionally writes the report artifacts.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "shelab/config.hpp"
#include "shelab/report.hpp"
#include "shelab/suites.hpp"

using namespace shelab;

namespace {

int usage(const char* argv0) {
  std::fprintf(stderr, "usage: %s [--n-samples N] [--out DIR]\n", argv0);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;  // the pinned verification configuration
  cfg.suite = "all";
  bool wants_artifacts = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--n-samples" && i + 1 < argc) {
      try {
        apply_config_line(cfg, std::string("n-samples=") + argv[++i], 0);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
      }
    } else if (arg == "--out" && i + 1 < argc) {
      cfg.out_dir = argv[++i];
      wants_artifacts = true;
    } else {
      return usage(argv[0]);
    }
  }

  std::printf("running all suites: n-samples=%llu seed=%llu beta=%.17g "
              "t=%.17g dx=%.17g dt=%.17g L=%.17g\n",
              static_cast<unsigned long long>(cfg.n_samples),
              static_cast<unsigned long long>(cfg.seed), cfg.beta, cfg.t,
              cfg.dx, cfg.dt, cfg.half_width);
  std::fflush(stdout);

  SuiteReport rep;
  try {
    SharedEnsembles shared(cfg);
    rep = run_checks(cfg, shared);
    if (wants_artifacts) write_suite_artifacts(rep);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  const auto& criteria = acceptance_criteria();
  std::size_t n_pass = 0;
  for (const CriterionSpec& crit : criteria) {
    std::vector<std::string> notes;
    for (const std::string& id : crit.row_ids) {
      const CheckRow* row = rep.find(id);
      if (row == nullptr)
        notes.push_back("row " + id + " missing from the report");
      else if (!row->passed)
        notes.push_back("row " + id + " failed: " + row->details);
    }
    const bool ok = notes.empty();
    if (ok) ++n_pass;
    std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", crit.number,
                crit.summary.c_str());
    for (const std::string& note : notes)
      std::printf("     %s\n", note.c_str());
  }
  std::printf("%zu/%zu criteria passed in %.1f s\n", n_pass, criteria.size(),
              rep.wall_seconds);
  return n_pass == criteria.size() ? 0 : 1;
}

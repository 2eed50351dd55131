#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shelab/config.hpp"
#include "shelab/estimators.hpp"

namespace shelab {

struct CheckRow {
  std::string id;        // stable slug, referenced by the acceptance list
  std::string claim;     // the mathematical statement being checked
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;  // acceptance half-width actually applied
  double std_error = 0.0;  // 0 for deterministic checks
  bool passed = false;
  std::string details;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckRow> rows;
  double wall_seconds = 0.0;
  RunConfig config;
  // MC estimates backing the rows, for estimates.json
  std::vector<Estimate> estimates;
  // named CSV artifacts produced by the suite (filename -> content)
  std::vector<std::pair<std::string, std::string>> tables;
  bool all_passed() const;
  const CheckRow* find(const std::string& id) const;
};

// Lazy caches shared across suites so that `all` pays for each heavy
// ensemble exactly once. Snapshot layout: column = time index * n_offsets
// + offset index, over snapshot_times() x offsets().
class SharedEnsembles {
 public:
  explicit SharedEnsembles(const RunConfig& cfg);
  ~SharedEnsembles();
  SharedEnsembles(const SharedEnsembles&) = delete;
  SharedEnsembles& operator=(const SharedEnsembles&) = delete;

  const RunConfig& config() const { return cfg_; }
  const std::vector<double>& snapshot_times() const { return times_; }
  const std::vector<double>& offsets() const { return offsets_; }
  const std::vector<double>& smalltime_ladder() const { return ladder_; }
  std::size_t column(double time, double offset) const;

  const SampleMatrix& flat();         // n_samples rows
  const Estimate& pam_refined();      // dx/2 grid, n_samples/4 rows
  const GreenM2Estimate& green();     // n_samples rows at tau = t
  const GreenM2Estimate& green_refined();  // dx/2 grid, n_samples/8 rows
  KappaEstimate kappa_at(double time);     // from the flat matrix, cached

 private:
  RunConfig cfg_;
  std::vector<double> times_;
  std::vector<double> offsets_;
  std::vector<double> ladder_;  // the three small-time snapshot points
  std::optional<SampleMatrix> flat_;
  std::optional<Estimate> pam_refined_;
  std::optional<GreenM2Estimate> green_;
  std::optional<GreenM2Estimate> green_refined_;
  std::vector<std::pair<double, KappaEstimate>> kappa_cache_;
};

// Row groups, pure computation (no file IO).
std::vector<CheckRow> exact_checks(const RunConfig& cfg);
std::vector<CheckRow> volterra_checks(const RunConfig& cfg,
                                      std::vector<std::pair<std::string, std::string>>* tables);
std::vector<CheckRow> pam_checks(SharedEnsembles& shared,
                                 std::vector<Estimate>* estimates);
std::vector<CheckRow> green_m2_checks(SharedEnsembles& shared,
                                      std::vector<Estimate>* estimates);
std::vector<CheckRow> kappa_checks(SharedEnsembles& shared,
                                   std::vector<Estimate>* estimates);
std::vector<CheckRow> covariance_checks(SharedEnsembles& shared,
                                        std::vector<Estimate>* estimates,
                                        std::vector<std::pair<std::string, std::string>>* tables);
std::vector<CheckRow> boundary_layer_checks(SharedEnsembles& shared,
                                            std::vector<Estimate>* estimates);
std::vector<CheckRow> shear_checks(const RunConfig& cfg);

// Runs the named suite (or all of them) against one shared cache and
// returns the report without touching the filesystem.
SuiteReport run_checks(const RunConfig& cfg, SharedEnsembles& shared);

// Top-level entry point: run_checks + artifact emission into cfg.out_dir
// (report.json, report.csv, estimates.json, suite tables, optional plot
// script). Throws std::invalid_argument for bad configs.
SuiteReport run_suite(const RunConfig& cfg);

// The covariance-profile table: x, cov, std_error, I_flat, ratio,
// kappa_reference.
std::string covariance_table_csv(SharedEnsembles& shared);

struct CriterionSpec {
  int number = 0;
  std::string summary;               // one line, printed by the gate
  std::vector<std::string> row_ids;  // every row must pass
};
const std::vector<CriterionSpec>& acceptance_criteria();

}  // namespace shelab

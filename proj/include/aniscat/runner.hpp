// Batch execution: single solves, parameter scans on a worker pool,
// convergence studies, presets, and their CSV renderings.
#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aniscat/amplitudes.hpp"
#include "aniscat/config.hpp"
#include "aniscat/csv.hpp"

namespace aniscat {

struct SingleResult {
  std::vector<AmplitudeSet> sets;  // one per incident direction
  CrossSectionSet cross_sections;
  cplx forward;   // f(q, 0, phi_q) of the first direction
  cplx backward;  // f(q, pi, phi_q) of the first direction
  std::optional<double> scattering_length;  // barrier runs
  std::optional<double> sigma_over_sc;      // dipolar runs
  double optical_defect = 0.0;  // largest over directions
  double stability = 0.0;       // largest over directions
  std::vector<std::string> warnings;
};

SingleResult run_single(const RunConfig& config, int workers = 1);

struct ScanRow {
  double given = 0.0;  // scan value in config-file units
  double value = 0.0;  // internal units
  std::optional<SingleResult> result;
  std::string error_category;  // empty on success
  std::string error;
};

struct ScanResult {
  std::vector<ScanRow> rows;  // in scan-grid order
  int failures = 0;
};

// Points run concurrently on `workers` threads; a failing point is recorded
// in its row and the scan continues.
ScanResult run_scan(const RunConfig& config, int workers);

struct ConvergenceRow {
  double axis_value = 0.0;
  cplx forward;
  cplx backward;
  // max component change of f(0) and f(pi) against the previous row.
  std::optional<double> difference;
  // log(d_prev / d) / log(axis ratio); N axis only.
  std::optional<double> order;
};

struct ConvergenceResult {
  ConvergenceAxis axis = ConvergenceAxis::kN;
  std::vector<ConvergenceRow> rows;
  std::optional<double> order;  // last estimate on the N axis
  std::vector<std::string> warnings;
};

// The rho_N axis keeps the radial step fixed, scaling N with rho_N.
ConvergenceResult run_convergence(const RunConfig& config, int workers);

// Runs fn(0..count-1) on up to `workers` threads. fn must not throw.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

// CSV renderings. Every table starts with a comment block holding the
// configuration hash, the canonical configuration and the warnings.
CsvTable single_table(const RunConfig& config, const SingleResult& result);
CsvTable channel_table(const RunConfig& config, const SingleResult& result);
CsvTable scan_table(const RunConfig& config, const ScanResult& result);
CsvTable convergence_table(const RunConfig& config,
                           const ConvergenceResult& result);

struct PresetInfo {
  std::string name;
  std::string description;
  bool production = false;
};

// Directory searched for NAME.ini: $ANISCAT_PRESET_DIR if set, otherwise
// the presets/ directory of the source tree.
std::string preset_directory();
std::vector<PresetInfo> list_presets();
RunConfig load_preset(const std::string& name,
                      const ConfigOverrides& overrides = {});

}  // namespace aniscat

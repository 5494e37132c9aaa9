#pragma once

// Run orchestration: declarative run configurations (JSON-serializable),
// embedded figure presets, the scan/trace drivers, and deterministic CSV
// output.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rotorkick/propagators.hpp"
#include "rotorkick/units.hpp"

namespace rotorkick {

inline bool operator==(const PhysicalParams& a, const PhysicalParams& b) {
  return a.b_wavenumber == b.b_wavenumber && a.delta_ps == b.delta_ps &&
         a.mu0_debye == b.mu0_debye && a.e0_v_per_cm == b.e0_v_per_cm &&
         a.temperature_k == b.temperature_k;
}

/// Uniform inclusive grid start..stop with count points.
struct GridSpec {
  std::string variable;  ///< "epsilon", "e0r" or "tau1"
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  double at(int i) const {
    return count < 2 ? start
                     : start + (stop - start) * i / (count - 1.0);
  }
  bool operator==(const GridSpec&) const = default;
};

/// Sampling window of an orientation trace.
struct WindowSpec {
  double start = 0.0;
  double stop = 10.0;
  int samples = 2000;
  bool operator==(const WindowSpec&) const = default;
};

/// Declarative description of one run.  Dimensionless parameters may be
/// given directly (epsilon, e0r, temperature_k) or derived from laboratory
/// parameters (physical); giving a quantity both ways is a ConfigError.
struct RunConfig {
  std::string command;  ///< "scan-error", "scan-tau1" or "trace"
  std::optional<std::string> preset;

  std::optional<double> epsilon;
  std::optional<double> e0r;
  double f = 2.0;
  std::optional<double> temperature_k;
  std::optional<PhysicalParams> physical;

  /// Propagator codes: "M", "S", "I", "SI" (and "ref" for traces).
  std::vector<std::string> propagators;

  double tau1 = 0.0;
  double tau2 = 0.0;
  double tau_h = 0.5;
  double dt = 1e-4;
  int jmax = 0;  ///< 0 = adaptive
  std::optional<GridSpec> scan;
  std::optional<WindowSpec> window;
  int jobs = 0;  ///< worker threads; 0 = hardware default; never serialized
  std::string out;
};

/// Compares everything except jobs, which affects scheduling only — results
/// and serialized form are identical across jobs settings.
bool operator==(const RunConfig& a, const RunConfig& b);

/// Embedded preset by name ("fig1".."fig6"); throws ConfigError for an
/// unknown name.
RunConfig preset_config(const std::string& name);

/// Validates field ranges and cross-field consistency; throws ConfigError.
void validate_config(const RunConfig& cfg);

/// Parses a config from JSON text.  Unknown keys are rejected.
RunConfig parse_config_json(const std::string& text);

/// Canonical JSON (sorted keys, full precision); parse_config_json of the
/// result reproduces the config exactly.
std::string config_to_json(const RunConfig& cfg);

/// One finished run: metadata lines, column names, numeric rows, and any
/// per-row failures.
struct ResultTable {
  std::vector<std::string> meta;  ///< emitted as "# ..." lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::size_t, std::string>> row_errors;

  bool ok() const { return row_errors.empty(); }
};

/// Renders the table as CSV: metadata block, header row, then data rows
/// formatted with 17 significant digits (byte-stable for identical runs).
std::string to_csv(const ResultTable& table);

/// Writes to_csv(table) to path.
void write_csv_file(const ResultTable& table, const std::string& path);

/// Validates, resolves and executes cfg.  Scan rows that fail to converge
/// are filled with NaN and recorded in row_errors; configuration problems
/// throw ConfigError, whole-run convergence problems ConvergenceError.
ResultTable run(const RunConfig& cfg);

/// Output path for cfg: "<out>.csv" with out defaulting to the preset name
/// or the command.
std::string output_path(const RunConfig& cfg);

}  // namespace rotorkick

// Command-line front end: error scans, tau1 scans and orientation traces
// driven by presets, JSON config files, or flags (flags win).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rotorkick/errors.hpp"
#include "rotorkick/run.hpp"
#include "rotorkick/version.hpp"

namespace {

struct CliOptions {
  std::string preset;
  std::string config_path;
  std::string propagators;
  std::string out;
  double epsilon = 0.0;
  double e0r = 0.0;
  double f = 0.0;
  double temperature_k = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double tau_h = 0.0;
  double dt = 0.0;
  int jmax = 0;
  int jobs = 0;
  std::string scan_var;
  double scan_start = 0.0;
  double scan_stop = 0.0;
  int scan_count = 0;
  double window_start = 0.0;
  double window_stop = 0.0;
  int samples = 0;
};

struct SubcommandOptions {
  CLI::App* sub = nullptr;
  CliOptions values;
  CLI::Option* epsilon = nullptr;
  CLI::Option* e0r = nullptr;
  CLI::Option* f = nullptr;
  CLI::Option* temperature_k = nullptr;
  CLI::Option* propagators = nullptr;
  CLI::Option* tau1 = nullptr;
  CLI::Option* tau2 = nullptr;
  CLI::Option* tau_h = nullptr;
  CLI::Option* dt = nullptr;
  CLI::Option* jmax = nullptr;
  CLI::Option* jobs = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* scan_var = nullptr;
  CLI::Option* scan_start = nullptr;
  CLI::Option* scan_stop = nullptr;
  CLI::Option* scan_count = nullptr;
  CLI::Option* window_start = nullptr;
  CLI::Option* window_stop = nullptr;
  CLI::Option* samples = nullptr;
};

void add_common_options(SubcommandOptions& o) {
  CLI::App* sub = o.sub;
  CliOptions& v = o.values;
  CLI::Option* preset =
      sub->add_option("--preset", v.preset, "embedded preset fig1 .. fig6");
  CLI::Option* config =
      sub->add_option("--config", v.config_path, "JSON config file");
  preset->excludes(config);
  o.epsilon = sub->add_option("--epsilon", v.epsilon,
                              "perturbation parameter B*delta");
  o.e0r = sub->add_option("--e0r", v.e0r, "rescaled peak field amplitude");
  o.f = sub->add_option("--f", v.f, "carrier cycles per pulse");
  o.temperature_k =
      sub->add_option("--T", v.temperature_k, "rotational temperature [K]");
  o.propagators = sub->add_option(
      "--propagators", v.propagators,
      "comma-separated propagator codes among M,S,I,SI,ref");
  o.tau1 = sub->add_option("--tau1", v.tau1, "expansion time of I in [0,1]");
  o.tau2 = sub->add_option("--tau2", v.tau2, "split time of S in [0,1]");
  o.tau_h = sub->add_option("--tau-h", v.tau_h, "kick time of SI in [0,1]");
  o.dt = sub->add_option("--dt", v.dt, "reference step size");
  o.jmax = sub->add_option("--jmax", v.jmax, "basis cutoff (0 = adaptive)");
  o.jobs = sub->add_option("--jobs", v.jobs,
                           "worker threads (0 = hardware default)");
  o.out = sub->add_option("--out", v.out, "output prefix (writes <out>.csv)");
}

std::vector<std::string> split_codes(const std::string& text) {
  std::vector<std::string> codes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) codes.push_back(item);
  return codes;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw rotorkick::ConfigError("cannot read config file '" + path + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

rotorkick::RunConfig build_config(const std::string& command,
                                  const SubcommandOptions& o) {
  const CliOptions& v = o.values;
  rotorkick::RunConfig cfg;
  if (!v.preset.empty()) {
    cfg = rotorkick::preset_config(v.preset);
  } else if (!v.config_path.empty()) {
    cfg = rotorkick::parse_config_json(read_file(v.config_path));
  }
  if (!cfg.command.empty() && cfg.command != command) {
    throw rotorkick::ConfigError("'" + cfg.command +
                                 "' config given to subcommand '" + command +
                                 "'");
  }
  cfg.command = command;

  if (o.epsilon->count() > 0) cfg.epsilon = v.epsilon;
  if (o.e0r->count() > 0) cfg.e0r = v.e0r;
  if (o.f->count() > 0) cfg.f = v.f;
  if (o.temperature_k->count() > 0) cfg.temperature_k = v.temperature_k;
  if (o.propagators->count() > 0)
    cfg.propagators = split_codes(v.propagators);
  if (o.tau1->count() > 0) cfg.tau1 = v.tau1;
  if (o.tau2->count() > 0) cfg.tau2 = v.tau2;
  if (o.tau_h->count() > 0) cfg.tau_h = v.tau_h;
  if (o.dt->count() > 0) cfg.dt = v.dt;
  if (o.jmax->count() > 0) cfg.jmax = v.jmax;
  if (o.jobs->count() > 0) cfg.jobs = v.jobs;
  if (o.out->count() > 0) cfg.out = v.out;

  if (command == "scan-error" || command == "scan-tau1") {
    rotorkick::GridSpec grid;
    if (cfg.scan) {
      grid = *cfg.scan;
    } else if (command == "scan-tau1") {
      grid = rotorkick::GridSpec{"tau1", 0.0, 1.0, 101};
    }
    if (o.scan_var != nullptr && o.scan_var->count() > 0)
      grid.variable = v.scan_var;
    if (o.scan_start->count() > 0) grid.start = v.scan_start;
    if (o.scan_stop->count() > 0) grid.stop = v.scan_stop;
    if (o.scan_count->count() > 0) grid.count = v.scan_count;
    if (command == "scan-tau1") grid.variable = "tau1";
    if (grid.variable.empty()) {
      throw rotorkick::ConfigError(
          "scan-error needs --scan-var epsilon|e0r (or a preset/config)");
    }
    cfg.scan = grid;
  } else {
    rotorkick::WindowSpec window;
    if (cfg.window) window = *cfg.window;
    if (o.window_start->count() > 0) window.start = v.window_start;
    if (o.window_stop->count() > 0) window.stop = v.window_stop;
    if (o.samples->count() > 0) window.samples = v.samples;
    cfg.window = window;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rotorkick: first-order propagators of a laser-kicked rigid rotor"};
  app.set_version_flag("--version", rotorkick::kVersion);
  app.require_subcommand(1);

  SubcommandOptions scan_error;
  scan_error.sub = app.add_subcommand(
      "scan-error", "log10 propagator error over an epsilon or e0r grid");
  add_common_options(scan_error);
  scan_error.scan_var = scan_error.sub->add_option(
      "--scan-var", scan_error.values.scan_var, "grid variable: epsilon|e0r");
  scan_error.scan_start = scan_error.sub->add_option(
      "--scan-start", scan_error.values.scan_start, "grid start");
  scan_error.scan_stop = scan_error.sub->add_option(
      "--scan-stop", scan_error.values.scan_stop, "grid stop");
  scan_error.scan_count = scan_error.sub->add_option(
      "--scan-count", scan_error.values.scan_count, "grid points");

  SubcommandOptions scan_tau1;
  scan_tau1.sub = app.add_subcommand(
      "scan-tau1", "log10 propagator error over an expansion-time grid");
  add_common_options(scan_tau1);
  scan_tau1.scan_start = scan_tau1.sub->add_option(
      "--scan-start", scan_tau1.values.scan_start, "grid start");
  scan_tau1.scan_stop = scan_tau1.sub->add_option(
      "--scan-stop", scan_tau1.values.scan_stop, "grid stop");
  scan_tau1.scan_count = scan_tau1.sub->add_option(
      "--scan-count", scan_tau1.values.scan_count, "grid points");

  SubcommandOptions trace;
  trace.sub = app.add_subcommand(
      "trace", "orientation <cos(theta)> over a time window");
  add_common_options(trace);
  trace.window_start = trace.sub->add_option(
      "--window-start", trace.values.window_start, "first sample time");
  trace.window_stop = trace.sub->add_option(
      "--window-stop", trace.values.window_stop, "last sample time");
  trace.samples = trace.sub->add_option("--samples", trace.values.samples,
                                        "number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const SubcommandOptions& chosen =
        scan_error.sub->parsed()
            ? scan_error
            : (scan_tau1.sub->parsed() ? scan_tau1 : trace);
    const std::string command = chosen.sub->get_name();
    const rotorkick::RunConfig cfg = build_config(command, chosen);
    const rotorkick::ResultTable table = rotorkick::run(cfg);
    const std::string path = rotorkick::output_path(cfg);
    rotorkick::write_csv_file(table, path);
    std::cout << "wrote " << path << " (" << table.rows.size() << " rows, "
              << table.columns.size() << " columns)\n";
    if (!table.ok()) {
      for (const auto& [row, msg] : table.row_errors) {
        std::cerr << "error: row " << row << ": " << msg << "\n";
      }
      return 3;
    }
    return 0;
  } catch (const rotorkick::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rotorkick::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

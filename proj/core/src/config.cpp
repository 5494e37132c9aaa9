#include "rotorkick/run.hpp"

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "rotorkick/errors.hpp"

namespace rotorkick {

namespace {

using nlohmann::json;

const std::set<std::string> kCommands = {"scan-error", "scan-tau1", "trace"};
const std::set<std::string> kCodes = {"M", "S", "I", "SI", "ref"};
const std::set<std::string> kScanVariables = {"epsilon", "e0r", "tau1"};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

double number_at(const json& j, const std::string& key) {
  require(j.at(key).is_number(), "'" + key + "' must be a number");
  return j.at(key).get<double>();
}

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& item : j.items())
    require(allowed.count(item.key()) != 0,
            "unknown key '" + item.key() + "' in " + where);
}

json physical_to_json(const PhysicalParams& p) {
  return json{{"b_wavenumber", p.b_wavenumber},
              {"delta_ps", p.delta_ps},
              {"mu0_debye", p.mu0_debye},
              {"e0_v_per_cm", p.e0_v_per_cm},
              {"temperature_k", p.temperature_k}};
}

PhysicalParams physical_from_json(const json& j) {
  require(j.is_object(), "'physical' must be an object");
  check_keys(j,
             {"b_wavenumber", "delta_ps", "mu0_debye", "e0_v_per_cm",
              "temperature_k"},
             "'physical'");
  PhysicalParams p;
  if (j.contains("b_wavenumber")) p.b_wavenumber = number_at(j, "b_wavenumber");
  if (j.contains("delta_ps")) p.delta_ps = number_at(j, "delta_ps");
  if (j.contains("mu0_debye")) p.mu0_debye = number_at(j, "mu0_debye");
  if (j.contains("e0_v_per_cm")) p.e0_v_per_cm = number_at(j, "e0_v_per_cm");
  if (j.contains("temperature_k"))
    p.temperature_k = number_at(j, "temperature_k");
  return p;
}

}  // namespace

void validate_config(const RunConfig& cfg) {
  require(kCommands.count(cfg.command) != 0,
          "command must be one of scan-error, scan-tau1, trace");
  std::set<std::string> seen;
  for (const auto& code : cfg.propagators) {
    require(kCodes.count(code) != 0, "unknown propagator code '" + code + "'");
    require(code != "ref" || cfg.command == "trace",
            "'ref' is the implicit baseline of error scans; it can only be "
            "requested for traces");
    require(seen.insert(code).second,
            "propagator code '" + code + "' given twice");
  }
  require(std::isfinite(cfg.f) && cfg.f > 0.0, "f must be positive");
  require(cfg.tau1 >= 0.0 && cfg.tau1 <= 1.0, "tau1 must lie in [0, 1]");
  require(cfg.tau2 >= 0.0 && cfg.tau2 <= 1.0, "tau2 must lie in [0, 1]");
  require(cfg.tau_h >= 0.0 && cfg.tau_h <= 1.0, "tau_h must lie in [0, 1]");
  require(cfg.dt > 0.0, "dt must be positive");
  require(cfg.jmax >= 0, "jmax must be non-negative (0 = adaptive)");
  require(cfg.jobs >= 0, "jobs must be non-negative (0 = hardware default)");
  if (cfg.epsilon) require(*cfg.epsilon > 0.0, "epsilon must be positive");
  if (cfg.e0r) require(*cfg.e0r >= 0.0, "e0r must be non-negative");
  if (cfg.temperature_k)
    require(*cfg.temperature_k >= 0.0, "temperature_k must be non-negative");
  if (cfg.physical) {
    require(!cfg.epsilon,
            "epsilon is fixed by 'physical'; give one or the other");
    require(!cfg.e0r, "e0r is fixed by 'physical'; give one or the other");
    require(!cfg.temperature_k,
            "temperature is fixed by 'physical'; give one or the other");
  }
  if (cfg.scan) {
    require(kScanVariables.count(cfg.scan->variable) != 0,
            "scan variable must be epsilon, e0r or tau1");
    require(cfg.scan->count >= 1, "scan count must be at least 1");
    require(std::isfinite(cfg.scan->start) && std::isfinite(cfg.scan->stop),
            "scan bounds must be finite");
    require(cfg.scan->stop >= cfg.scan->start,
            "scan stop must not precede start");
  }
  if (cfg.window) {
    require(cfg.window->samples >= 2, "window samples must be at least 2");
    require(cfg.window->stop > cfg.window->start,
            "window stop must exceed start");
    require(cfg.window->start >= 0.0, "window start must be non-negative");
  }

  if (cfg.command == "scan-error") {
    require(cfg.scan.has_value(), "scan-error needs a 'scan' grid");
    require(cfg.scan->variable != "tau1",
            "scan-error grids range over epsilon or e0r");
  } else if (cfg.command == "scan-tau1") {
    require(cfg.scan.has_value(), "scan-tau1 needs a 'scan' grid");
    require(cfg.scan->variable == "tau1", "scan-tau1 grids range over tau1");
    require(cfg.scan->start >= 0.0 && cfg.scan->stop <= 1.0,
            "tau1 grid must lie in [0, 1]");
  } else {
    require(cfg.window.has_value(), "trace needs a 'window'");
  }
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.command == b.command && a.preset == b.preset &&
         a.epsilon == b.epsilon && a.e0r == b.e0r && a.f == b.f &&
         a.temperature_k == b.temperature_k && a.physical == b.physical &&
         a.propagators == b.propagators && a.tau1 == b.tau1 &&
         a.tau2 == b.tau2 && a.tau_h == b.tau_h && a.dt == b.dt &&
         a.jmax == b.jmax && a.scan == b.scan && a.window == b.window &&
         a.out == b.out;
}

RunConfig preset_config(const std::string& name) {
  RunConfig cfg;
  cfg.preset = name;
  if (name == "fig1") {
    cfg.command = "scan-error";
    cfg.scan = GridSpec{"epsilon", 0.1, 1.0, 19};
    cfg.e0r = 1.0;
    cfg.f = 0.5;
    cfg.propagators = {"M", "S", "I", "SI"};
  } else if (name == "fig2") {
    cfg.command = "scan-error";
    cfg.scan = GridSpec{"epsilon", 0.1, 1.0, 19};
    cfg.e0r = 20.0;
    cfg.f = 2.0;
    cfg.propagators = {"M", "S", "I", "SI"};
  } else if (name == "fig3") {
    cfg.command = "scan-error";
    cfg.scan = GridSpec{"e0r", 5.0, 40.0, 8};
    cfg.epsilon = 1.0;
    cfg.f = 2.0;
    cfg.propagators = {"I"};
  } else if (name == "fig4") {
    cfg.command = "scan-tau1";
    cfg.scan = GridSpec{"tau1", 0.0, 1.0, 101};
    cfg.epsilon = 1.0;
    cfg.e0r = 10.0;
    cfg.f = 2.0;
    cfg.propagators = {"I"};
  } else if (name == "fig5") {
    cfg.command = "trace";
    cfg.epsilon = 0.5;
    cfg.e0r = 50.0;
    cfg.f = 2.0;
    cfg.window = WindowSpec{0.0, 10.0, 2000};
    cfg.propagators = {"ref", "I", "SI"};
  } else if (name == "fig6") {
    cfg.command = "trace";
    cfg.epsilon = 0.5;
    cfg.e0r = 70.0;
    cfg.f = 2.0;
    cfg.temperature_k = 5.0;
    cfg.window = WindowSpec{0.0, 10.0, 2000};
    cfg.propagators = {"ref", "I", "SI"};
  } else {
    throw ConfigError("unknown preset '" + name +
                      "' (expected fig1 .. fig6)");
  }
  cfg.out = name;
  validate_config(cfg);
  return cfg;
}

RunConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require(j.is_object(), "config must be a JSON object");
  check_keys(j,
             {"command", "preset", "epsilon", "e0r", "f", "temperature_k",
              "physical", "propagators", "tau1", "tau2", "tau_h", "dt", "jmax",
              "scan", "window", "jobs", "out"},
             "config");

  RunConfig cfg;
  require(j.contains("command") && j.at("command").is_string(),
          "config needs a string 'command'");
  cfg.command = j.at("command").get<std::string>();
  if (j.contains("preset")) {
    require(j.at("preset").is_string(), "'preset' must be a string");
    cfg.preset = j.at("preset").get<std::string>();
  }
  if (j.contains("epsilon")) cfg.epsilon = number_at(j, "epsilon");
  if (j.contains("e0r")) cfg.e0r = number_at(j, "e0r");
  if (j.contains("f")) cfg.f = number_at(j, "f");
  if (j.contains("temperature_k"))
    cfg.temperature_k = number_at(j, "temperature_k");
  if (j.contains("physical"))
    cfg.physical = physical_from_json(j.at("physical"));
  if (j.contains("propagators")) {
    require(j.at("propagators").is_array(),
            "'propagators' must be an array of codes");
    for (const auto& item : j.at("propagators")) {
      require(item.is_string(), "propagator codes must be strings");
      cfg.propagators.push_back(item.get<std::string>());
    }
  }
  if (j.contains("tau1")) cfg.tau1 = number_at(j, "tau1");
  if (j.contains("tau2")) cfg.tau2 = number_at(j, "tau2");
  if (j.contains("tau_h")) cfg.tau_h = number_at(j, "tau_h");
  if (j.contains("dt")) cfg.dt = number_at(j, "dt");
  if (j.contains("jmax")) {
    require(j.at("jmax").is_number_integer(), "'jmax' must be an integer");
    cfg.jmax = j.at("jmax").get<int>();
  }
  if (j.contains("scan")) {
    const json& s = j.at("scan");
    require(s.is_object(), "'scan' must be an object");
    check_keys(s, {"variable", "start", "stop", "count"}, "'scan'");
    GridSpec g;
    require(s.contains("variable") && s.at("variable").is_string(),
            "'scan' needs a string 'variable'");
    g.variable = s.at("variable").get<std::string>();
    g.start = number_at(s, "start");
    g.stop = number_at(s, "stop");
    require(s.contains("count") && s.at("count").is_number_integer(),
            "'scan' needs an integer 'count'");
    g.count = s.at("count").get<int>();
    cfg.scan = g;
  }
  if (j.contains("window")) {
    const json& w = j.at("window");
    require(w.is_object(), "'window' must be an object");
    check_keys(w, {"start", "stop", "samples"}, "'window'");
    WindowSpec win;
    if (w.contains("start")) win.start = number_at(w, "start");
    if (w.contains("stop")) win.stop = number_at(w, "stop");
    if (w.contains("samples")) {
      require(w.at("samples").is_number_integer(),
              "window 'samples' must be an integer");
      win.samples = w.at("samples").get<int>();
    }
    cfg.window = win;
  }
  if (j.contains("jobs")) {
    require(j.at("jobs").is_number_integer(), "'jobs' must be an integer");
    cfg.jobs = j.at("jobs").get<int>();
  }
  if (j.contains("out")) {
    require(j.at("out").is_string(), "'out' must be a string");
    cfg.out = j.at("out").get<std::string>();
  }
  validate_config(cfg);
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  // json orders object keys lexicographically, so the dump is canonical.
  json j;
  j["command"] = cfg.command;
  if (cfg.preset) j["preset"] = *cfg.preset;
  if (cfg.epsilon) j["epsilon"] = *cfg.epsilon;
  if (cfg.e0r) j["e0r"] = *cfg.e0r;
  j["f"] = cfg.f;
  if (cfg.temperature_k) j["temperature_k"] = *cfg.temperature_k;
  if (cfg.physical) j["physical"] = physical_to_json(*cfg.physical);
  if (!cfg.propagators.empty()) j["propagators"] = cfg.propagators;
  j["tau1"] = cfg.tau1;
  j["tau2"] = cfg.tau2;
  j["tau_h"] = cfg.tau_h;
  j["dt"] = cfg.dt;
  j["jmax"] = cfg.jmax;
  if (cfg.scan)
    j["scan"] = json{{"variable", cfg.scan->variable},
                     {"start", cfg.scan->start},
                     {"stop", cfg.scan->stop},
                     {"count", cfg.scan->count}};
  if (cfg.window)
    j["window"] = json{{"start", cfg.window->start},
                       {"stop", cfg.window->stop},
                       {"samples", cfg.window->samples}};
  if (!cfg.out.empty()) j["out"] = cfg.out;
  return j.dump();
}

std::string output_path(const RunConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out + ".csv";
  if (cfg.preset) return *cfg.preset + ".csv";
  return cfg.command + ".csv";
}

}  // namespace rotorkick

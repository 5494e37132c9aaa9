#include "rotorkick/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rotorkick/basis.hpp"
#include "rotorkick/errors.hpp"
#include "rotorkick/observables.hpp"
#include "rotorkick/propagators.hpp"
#include "rotorkick/pulse.hpp"
#include "rotorkick/units.hpp"
#include "rotorkick/version.hpp"

namespace rotorkick {
namespace {

constexpr double kTailTol = 1e-10;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Rotational constant of LiCl [1/cm]; the default thermal-weight scale when
// no laboratory parameters are given.
constexpr double kDefaultBWavenumber = 0.70652;

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Config resolved to the dimensionless quantities a run needs.
struct Resolved {
  double epsilon = 0.0;
  double e0r = 0.0;
  double f = 2.0;
  double temperature_k = 0.0;
  double beta_b = std::numeric_limits<double>::infinity();
  std::vector<std::string> codes;
  std::vector<PropagatorKind> kinds;
  PropagatorConfig prop;
  int jmax = 0;
  int jobs = 1;
};

PropagatorKind kind_from_code(const std::string& code) {
  if (code == "M") return PropagatorKind::kMagnus;
  if (code == "S") return PropagatorKind::kSecular;
  if (code == "I") return PropagatorKind::kImproved;
  if (code == "SI") return PropagatorKind::kSuddenImpact;
  if (code == "ref") return PropagatorKind::kReference;
  throw ConfigError("unknown propagator code '" + code + "'");
}

std::string trace_column(const std::string& code) {
  if (code == "ref") return "cos_reference";
  if (code == "M") return "cos_magnus";
  if (code == "S") return "cos_secular";
  if (code == "I") return "cos_improved";
  return "cos_sudden";
}

Resolved resolve(const RunConfig& cfg) {
  validate_config(cfg);
  Resolved r;
  r.f = cfg.f;
  const bool scans_epsilon = cfg.scan && cfg.scan->variable == "epsilon";
  const bool scans_e0r = cfg.scan && cfg.scan->variable == "e0r";

  std::optional<DimensionlessParams> lab;
  if (cfg.physical) lab = to_dimensionless(*cfg.physical);

  if (cfg.epsilon) {
    r.epsilon = *cfg.epsilon;
  } else if (lab) {
    r.epsilon = lab->epsilon;
  } else if (!scans_epsilon) {
    throw ConfigError("epsilon is required, directly or via 'physical'");
  }

  if (cfg.e0r) {
    r.e0r = *cfg.e0r;
  } else if (lab) {
    r.e0r = lab->e0r;
  } else if (!scans_e0r) {
    throw ConfigError("e0r is required, directly or via 'physical'");
  }

  r.temperature_k = cfg.temperature_k
                        ? *cfg.temperature_k
                        : (cfg.physical ? cfg.physical->temperature_k : 0.0);
  if (r.temperature_k > 0.0 && cfg.command != "trace") {
    throw ConfigError(
        "error scans start from the rotational ground state; temperature "
        "applies to traces only");
  }
  if (r.temperature_k > 0.0) {
    PhysicalParams p =
        cfg.physical ? *cfg.physical
                     : PhysicalParams{kDefaultBWavenumber, 1.0, 0.0, 0.0, 0.0};
    p.temperature_k = r.temperature_k;
    r.beta_b = to_dimensionless(p).beta_b;
  }

  r.codes = cfg.propagators;
  if (r.codes.empty()) {
    if (cfg.command == "scan-error") {
      r.codes = {"M", "S", "I", "SI"};
    } else if (cfg.command == "scan-tau1") {
      r.codes = {"I"};
    } else {
      r.codes = {"ref", "I", "SI"};
    }
  }
  for (const auto& code : r.codes) r.kinds.push_back(kind_from_code(code));

  r.prop = PropagatorConfig{cfg.tau1, cfg.tau2, cfg.tau_h, cfg.dt};
  r.jmax = cfg.jmax;
  r.jobs = cfg.jobs > 0
               ? cfg.jobs
               : static_cast<int>(
                     std::max(1u, std::thread::hardware_concurrency()));
  return r;
}

/// Runs fn(0..n-1) on up to jobs worker threads; rethrows the first worker
/// exception after all workers have stopped.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<std::string> base_meta(const RunConfig& cfg, const Resolved& r) {
  std::vector<std::string> meta;
  meta.push_back(std::string("rotorkick ") + kVersion);
  meta.push_back("config: " + config_to_json(cfg));
  meta.push_back(
      "conventions: tau = t/delta; epsilon = 2*pi*c*B*delta; "
      "e0r = mu0*E0*delta/hbar; beta_b = h*c*B/(kB*T); "
      "delta = ||psi - psi_ref||^2");
  std::ostringstream os;
  os << "resolved:";
  if (!(cfg.scan && cfg.scan->variable == "epsilon"))
    os << " epsilon=" << fmt17(r.epsilon);
  if (!(cfg.scan && cfg.scan->variable == "e0r"))
    os << " e0r=" << fmt17(r.e0r);
  os << " f=" << fmt17(r.f);
  if (r.temperature_k > 0.0) {
    os << " temperature_k=" << fmt17(r.temperature_k)
       << " beta_b=" << fmt17(r.beta_b);
  }
  if (!(cfg.scan && cfg.scan->variable == "tau1"))
    os << " tau1=" << fmt17(r.prop.tau1);
  os << " tau2=" << fmt17(r.prop.tau2) << " tau_h=" << fmt17(r.prop.tau_h)
     << " dt=" << fmt17(r.prop.dt);
  os << " jmax=" << (r.jmax > 0 ? std::to_string(r.jmax) : "adaptive");
  meta.push_back(os.str());
  return meta;
}

void sort_row_errors(ResultTable& t) {
  std::sort(t.row_errors.begin(), t.row_errors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

ResultTable run_error_scan(const RunConfig& cfg, const Resolved& r) {
  const GridSpec& grid = *cfg.scan;
  ResultTable t;
  t.meta = base_meta(cfg, r);
  t.columns.push_back(grid.variable);
  for (const auto& code : r.codes)
    t.columns.push_back("log10_delta_" + code);
  t.rows.assign(static_cast<std::size_t>(grid.count),
                std::vector<double>(t.columns.size(), kNan));

  std::mutex err_mutex;
  parallel_for(static_cast<std::size_t>(grid.count), r.jobs,
               [&](std::size_t i) {
    const double v = grid.at(static_cast<int>(i));
    std::vector<double>& row = t.rows[i];
    row[0] = v;
    const double eps = grid.variable == "epsilon" ? v : r.epsilon;
    const PulseSpec p{grid.variable == "e0r" ? v : r.e0r, r.f};
    try {
      const int jmax = r.jmax > 0 ? r.jmax : adaptive_jmax(p, eps, 0, 0);
      const RotorBasis b(0, jmax);
      const RotorOperators ops(b);
      const StateVector psi0 = b.unit_state(0);
      double tail = 0.0;
      const StateVector ref =
          reference_state(ops, p, eps, r.prop.dt, kTauF, psi0, &tail);
      if (tail > kTailTol) {
        throw ConvergenceError("truncation tail " + fmt17(tail) +
                               " above tolerance at jmax " +
                               std::to_string(jmax));
      }
      for (std::size_t k = 0; k < r.kinds.size(); ++k) {
        const ComplexMatrix u =
            build_propagator(ops, p, eps, kTauF, r.kinds[k], r.prop);
        row[1 + k] = std::log10(error_delta(u * psi0, ref));
      }
    } catch (const ConvergenceError& e) {
      const std::lock_guard<std::mutex> lock(err_mutex);
      t.row_errors.emplace_back(i, e.what());
      for (std::size_t k = 1; k < row.size(); ++k) row[k] = kNan;
    }
  });
  sort_row_errors(t);
  return t;
}

ResultTable run_tau1_scan(const RunConfig& cfg, const Resolved& r) {
  const GridSpec& grid = *cfg.scan;
  ResultTable t;
  t.meta = base_meta(cfg, r);
  t.columns.push_back("tau1");
  for (const auto& code : r.codes)
    t.columns.push_back("log10_delta_" + code);
  t.rows.assign(static_cast<std::size_t>(grid.count),
                std::vector<double>(t.columns.size(), kNan));

  const PulseSpec p{r.e0r, r.f};
  const int jmax = r.jmax > 0 ? r.jmax : adaptive_jmax(p, r.epsilon, 0, 0);
  const RotorBasis b(0, jmax);
  const RotorOperators ops(b);
  const StateVector psi0 = b.unit_state(0);
  double tail = 0.0;
  const StateVector ref =
      reference_state(ops, p, r.epsilon, r.prop.dt, kTauF, psi0, &tail);
  if (tail > kTailTol) {
    throw ConvergenceError("truncation tail " + fmt17(tail) +
                           " above tolerance at jmax " + std::to_string(jmax));
  }

  std::mutex err_mutex;
  parallel_for(static_cast<std::size_t>(grid.count), r.jobs,
               [&](std::size_t i) {
    const double v = grid.at(static_cast<int>(i));
    std::vector<double>& row = t.rows[i];
    row[0] = v;
    PropagatorConfig pc = r.prop;
    pc.tau1 = v;
    try {
      for (std::size_t k = 0; k < r.kinds.size(); ++k) {
        const ComplexMatrix u =
            build_propagator(ops, p, r.epsilon, kTauF, r.kinds[k], pc);
        row[1 + k] = std::log10(error_delta(u * psi0, ref));
      }
    } catch (const ConvergenceError& e) {
      const std::lock_guard<std::mutex> lock(err_mutex);
      t.row_errors.emplace_back(i, e.what());
      for (std::size_t k = 1; k < row.size(); ++k) row[k] = kNan;
    }
  });
  sort_row_errors(t);
  return t;
}

ResultTable run_trace(const RunConfig& cfg, const Resolved& r) {
  const WindowSpec& w = *cfg.window;
  std::vector<double> times(static_cast<std::size_t>(w.samples));
  for (std::size_t i = 0; i < times.size(); ++i) {
    times[i] = w.start + (w.stop - w.start) * static_cast<double>(i) /
                             (w.samples - 1.0);
  }

  const PulseSpec p{r.e0r, r.f};
  const ThermalEnsemble ens = ThermalEnsemble::build(r.beta_b);
  if (r.jmax > 0 && r.jmax < std::max(1, ens.jmax_thermal)) {
    throw ConfigError("jmax " + std::to_string(r.jmax) +
                      " is below the thermal cutoff " +
                      std::to_string(ens.jmax_thermal));
  }
  const int jmax =
      r.jmax > 0 ? r.jmax : adaptive_jmax(p, r.epsilon, 0, ens.jmax_thermal);

  // Sample indices inside/after the pulse window.
  std::vector<std::size_t> in_idx, post_idx;
  for (std::size_t i = 0; i < times.size(); ++i) {
    (times[i] <= kTauF ? in_idx : post_idx).push_back(i);
  }

  // Per requested method, per m-block, the traces of its (j, m) states.
  const std::size_t n_methods = r.codes.size();
  const std::size_t n_blocks = static_cast<std::size_t>(ens.jmax_thermal) + 1;
  std::vector<std::vector<std::vector<StateTrace>>> block_traces(
      n_methods, std::vector<std::vector<StateTrace>>(n_blocks));
  std::atomic<double> max_tail{0.0};

  parallel_for(n_blocks, r.jobs, [&](std::size_t mi) {
    const int m = static_cast<int>(mi);
    const RotorBasis b(m, jmax);
    const RotorOperators ops(b);
    const std::vector<double> empty(times.size(), 0.0);

    for (std::size_t k = 0; k < n_methods; ++k) {
      std::vector<StateTrace>& out = block_traces[k][mi];
      for (int j = m; j <= ens.jmax_thermal; ++j) {
        out.push_back(StateTrace{j, m, {times, empty, r.codes[k]}});
      }

      if (r.kinds[k] == PropagatorKind::kReference) {
        for (std::size_t sj = 0; sj < out.size(); ++sj) {
          const int j = out[sj].j;
          double tail = 0.0;
          const std::vector<StateVector> states = reference_states(
              ops, p, r.epsilon, r.prop.dt, times, b.unit_state(j), &tail);
          double seen = max_tail.load();
          while (tail > seen && !max_tail.compare_exchange_weak(seen, tail)) {
          }
          for (std::size_t i = 0; i < times.size(); ++i) {
            out[sj].trace.values[i] = cos_expect(states[i], b);
          }
        }
        continue;
      }

      // Analytic methods: full build at every in-pulse sample, then free
      // phases on the end-of-pulse state.  Each column of the propagator is
      // the evolved basis state, so one build serves the whole block.
      PropagatorConfig pc = r.prop;
      for (const std::size_t i : in_idx) {
        pc.tau2 = std::min(r.prop.tau2, times[i]);
        const ComplexMatrix u =
            build_propagator(ops, p, r.epsilon, times[i], r.kinds[k], pc);
        for (std::size_t sj = 0; sj < out.size(); ++sj) {
          out[sj].trace.values[i] =
              cos_expect(u.col(b.index_of(out[sj].j)), b);
        }
      }
      if (!post_idx.empty()) {
        const ComplexMatrix u1 =
            build_propagator(ops, p, r.epsilon, kTauF, r.kinds[k], r.prop);
        for (const std::size_t i : post_idx) {
          const Eigen::VectorXcd ph =
              ops.free_phases(r.epsilon, times[i] - kTauF);
          for (std::size_t sj = 0; sj < out.size(); ++sj) {
            const StateVector psi =
                ph.cwiseProduct(u1.col(b.index_of(out[sj].j)));
            out[sj].trace.values[i] = cos_expect(psi, b);
          }
        }
      }
    }
  });

  if (max_tail.load() > kTailTol) {
    throw ConvergenceError("truncation tail " + fmt17(max_tail.load()) +
                           " above tolerance at jmax " + std::to_string(jmax));
  }

  ResultTable t;
  t.meta = base_meta(cfg, r);
  {
    std::ostringstream os;
    os << "thermal: jmax_thermal=" << ens.jmax_thermal
       << " q=" << fmt17(ens.partition_q) << " jmax=" << jmax;
    t.meta.push_back(os.str());
  }
  t.columns.push_back("tau");
  for (const auto& code : r.codes) t.columns.push_back(trace_column(code));
  t.columns.push_back("cos_firstorder");

  t.rows.assign(times.size(), std::vector<double>(t.columns.size(), kNan));
  for (std::size_t i = 0; i < times.size(); ++i) t.rows[i][0] = times[i];

  for (std::size_t k = 0; k < n_methods; ++k) {
    // Mirror m > 0 blocks onto -m: the ladder coefficients depend on |m|
    // only, so the traces coincide.
    std::vector<StateTrace> all;
    for (std::size_t mi = 0; mi < n_blocks; ++mi) {
      for (const StateTrace& st : block_traces[k][mi]) {
        all.push_back(st);
        if (st.m > 0) {
          all.push_back(StateTrace{st.j, -st.m, st.trace});
        }
      }
    }
    const OrientationTrace avg = thermal_average(all, ens);
    for (std::size_t i = 0; i < times.size(); ++i) {
      t.rows[i][1 + k] = avg.values[i];
    }
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    t.rows[i][1 + n_methods] =
        thermal_firstorder(times[i], p, r.epsilon, ens);
  }
  return t;
}

}  // namespace

std::string to_csv(const ResultTable& table) {
  std::ostringstream os;
  for (const auto& line : table.meta) os << "# " << line << "\n";
  for (const auto& [row, msg] : table.row_errors)
    os << "# error: row " << row << ": " << msg << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    os << (c ? "," : "") << table.columns[c];
  }
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << (c ? "," : "") << fmt17(row[c]);
    }
    os << "\n";
  }
  return os.str();
}

void write_csv_file(const ResultTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << to_csv(table);
  out.flush();
  if (!out) throw std::runtime_error("failed to write '" + path + "'");
}

ResultTable run(const RunConfig& cfg) {
  const Resolved r = resolve(cfg);
  if (cfg.command == "scan-error") return run_error_scan(cfg, r);
  if (cfg.command == "scan-tau1") return run_tau1_scan(cfg, r);
  return run_trace(cfg, r);
}

}  // namespace rotorkick

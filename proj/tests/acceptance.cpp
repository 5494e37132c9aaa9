// Acceptance gate: the shipped claims of the library, measured end to end
// through the public API.  One [PASS]/[FAIL] line per criterion with the
// measured numbers; the exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rotorkick/basis.hpp"
#include "rotorkick/observables.hpp"
#include "rotorkick/propagators.hpp"
#include "rotorkick/pulse.hpp"
#include "rotorkick/run.hpp"

using namespace rotorkick;
using cplx = std::complex<double>;

namespace {

int g_failures = 0;

void report(int id, const std::string& what, bool ok,
            const std::string& detail) {
  std::printf("[%s] %d. %s -- %s\n", ok ? "PASS" : "FAIL", id, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void guard(int id, const std::string& what,
           const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, what, false, std::string("exception: ") + e.what());
  }
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(
    const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

/// Converged m=0 workbench: basis sized by the adaptive probe, reference
/// state at the end of the pulse.
struct Bench {
  PulseSpec p;
  double eps;
  RotorBasis b;
  RotorOperators ops;
  StateVector psi0;
  StateVector ref;
};

Bench make_bench(const PulseSpec& p, double eps, double dt = 1e-4) {
  RotorBasis b(0, adaptive_jmax(p, eps, 0, 0));
  RotorOperators ops(b);
  StateVector psi0 = b.unit_state(0);
  StateVector ref = reference_state(ops, p, eps, dt, kTauF, psi0);
  return Bench{p, eps, std::move(b), std::move(ops), std::move(psi0),
               std::move(ref)};
}

double bench_delta(const Bench& w, PropagatorKind kind,
                   const PropagatorConfig& pc = {}) {
  return error_delta(
      build_propagator(w.ops, w.p, w.eps, kTauF, kind, pc) * w.psi0, w.ref);
}

std::size_t col(const ResultTable& t, const std::string& name) {
  return std::find(t.columns.begin(), t.columns.end(), name) -
         t.columns.begin();
}

struct Extremum {
  double pos;
  double val;
};

/// Interior local minima of (xs, vs), strict on the left, flat-tolerant on
/// the right, sorted by value ascending.
std::vector<Extremum> local_minima(const std::vector<double>& xs,
                                   const std::vector<double>& vs) {
  std::vector<Extremum> out;
  for (std::size_t i = 1; i + 1 < vs.size(); ++i) {
    if (vs[i] < vs[i - 1] && vs[i] <= vs[i + 1]) {
      out.push_back({xs[i], vs[i]});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Extremum& a, const Extremum& b) { return a.val < b.val; });
  return out;
}

std::vector<Extremum> local_maxima(const std::vector<double>& xs,
                                   const std::vector<double>& vs) {
  std::vector<Extremum> out;
  for (std::size_t i = 1; i + 1 < vs.size(); ++i) {
    if (vs[i] > vs[i - 1] && vs[i] >= vs[i + 1]) {
      out.push_back({xs[i], vs[i]});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Extremum& a, const Extremum& b) { return a.val > b.val; });
  return out;
}

double simpson(const std::function<double(double)>& fn, double a, double b,
               int panels) {
  const double h = (b - a) / panels;
  double acc = fn(a) + fn(b);
  for (int i = 1; i < panels; ++i) {
    acc += (i % 2 ? 4.0 : 2.0) * fn(a + i * h);
  }
  return acc * h / 3.0;
}

// ---------------------------------------------------------------------------

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const Bench w = make_bench({20.0, 2.0}, 1.0);
  const double d = bench_delta(w, PropagatorKind::kImproved);
  const double secs = seconds_since(t0);
  const bool ok = d >= 1e-5 && d <= 1e-3 && secs < 10.0;
  report(1, "single-point error window for the improved factorization", ok,
         "delta=" + num(d) + " (want 1e-05..1e-03) in " + num(secs) + " s");
}

void criterion_2() {
  const std::vector<PulseSpec> regimes = {{1.0, 0.5}, {20.0, 2.0}};
  double worst = 0.0;
  std::string where = "-";
  for (const PulseSpec& p : regimes) {
    for (const double eps : {0.1, 0.2, 0.3, 0.4, 0.5}) {
      const Bench w = make_bench(p, eps);
      for (const auto kind :
           {PropagatorKind::kMagnus, PropagatorKind::kSecular,
            PropagatorKind::kImproved}) {
        const double d = bench_delta(w, kind);
        if (d > worst) {
          worst = d;
          const char* tag = kind == PropagatorKind::kMagnus     ? "M"
                            : kind == PropagatorKind::kSecular  ? "S"
                                                                : "I";
          where = std::string(tag) + " at f=" + num(p.f) +
                  ", e0r=" + num(p.e0r) + ", eps=" + num(eps);
        }
      }
    }
  }
  report(2, "small-eps accuracy cap across the error family", worst <= 1e-3,
         "max delta=" + num(worst) + " (" + where + "; cap 1e-03)");
}

void criterion_3() {
  const PulseSpec p{20.0, 2.0};
  double worst = 0.0;
  std::string detail;
  for (const double eps : {0.4, 0.6, 0.8, 1.0}) {
    const Bench w = make_bench(p, eps);
    const double ratio = bench_delta(w, PropagatorKind::kImproved) /
                         bench_delta(w, PropagatorKind::kMagnus);
    worst = std::max(worst, ratio);
    detail += (detail.empty() ? "" : ", ") + num(ratio);
  }
  report(3, "improved-vs-baseline error ratio at strong kicks",
         worst <= 1e-2,
         "ratios {" + detail + "} at eps {0.4, 0.6, 0.8, 1.0} (cap 1e-02)");
}

void criterion_4() {
  const ResultTable t = run(preset_config("fig4"));
  if (!t.ok()) {
    report(4, "best expansion times sit near 0.11 and 0.89", false,
           "scan reported row errors");
    return;
  }
  std::vector<double> xs, vs;
  const std::size_t c = col(t, "log10_delta_I");
  for (const auto& row : t.rows) {
    xs.push_back(row[0]);
    vs.push_back(row[c]);
  }
  const std::vector<Extremum> mins = local_minima(xs, vs);
  if (mins.size() < 2) {
    report(4, "best expansion times sit near 0.11 and 0.89", false,
           "found " + std::to_string(mins.size()) + " local minima");
    return;
  }
  double lo = mins[0].pos, hi = mins[1].pos;
  if (lo > hi) std::swap(lo, hi);
  const bool ok = std::abs(lo - 0.11) <= 0.03 && std::abs(hi - 0.89) <= 0.03;
  report(4, "best expansion times sit near 0.11 and 0.89", ok,
         "two lowest minima at tau1=" + num(lo) + " and " + num(hi) +
             " (want 0.11+-0.03, 0.89+-0.03)");
}

void criterion_5() {
  const ResultTable t = run(preset_config("fig5"));
  const std::size_t c_ref = col(t, "cos_reference");
  const std::size_t c_si = col(t, "cos_sudden");
  double peak = 0.0, si = 0.0;
  double span = 0.0, run_start = -1.0, prev_tau = 0.0;
  for (const auto& row : t.rows) {
    const double tau = row[0];
    if (tau <= kTauF) continue;  // post-pulse trace is the claim
    peak = std::max(peak, std::abs(row[c_ref]));
    si = std::max(si, std::abs(row[c_si]));
    if (std::abs(row[c_ref]) > 0.3) {
      if (run_start < 0.0) run_start = tau;
      span = std::max(span, tau - run_start);
    } else {
      run_start = -1.0;
    }
    prev_tau = tau;
  }
  (void)prev_tau;
  const bool ok =
      std::abs(peak - 0.5) <= 0.1 && span >= 1.0 && si <= 1e-12;
  report(5, "cold orientation trace: peak height, persistence, zero-area null",
         ok,
         "max|<cos>|=" + num(peak) + " (want 0.5+-0.1), longest |<cos>|>0.3 " +
             "span=" + num(span) + " (want >=1.0), kick-at-once trace <= " +
             num(si) + " (want <=1e-12)");
}

void criterion_6() {
  const ResultTable t = run(preset_config("fig6"));
  const std::size_t c_ref = col(t, "cos_reference");
  const std::size_t c_fo = col(t, "cos_firstorder");
  std::vector<double> xs, ref, fo;
  for (const auto& row : t.rows) {
    if (row[0] <= kTauF) continue;
    xs.push_back(row[0]);
    ref.push_back(row[c_ref]);
    fo.push_back(row[c_fo]);
  }

  // Orientation strength is sign-convention free: flipping the field flips
  // the whole trace, so peak and persistence are read off |<<cos>>|.
  double peak = 0.0;
  for (const double v : ref) peak = std::max(peak, std::abs(v));

  // Longest contiguous stretch above 0.3, threshold crossings interpolated.
  double span = 0.0;
  {
    double start = -1.0;
    const auto cross = [&](std::size_t i) {
      const double f0 = std::abs(ref[i - 1]), f1 = std::abs(ref[i]);
      return xs[i - 1] + (0.3 - f0) / (f1 - f0) * (xs[i] - xs[i - 1]);
    };
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const bool above = std::abs(ref[i]) > 0.3;
      if (above && start < 0.0) {
        start = i > 0 ? cross(i) : xs[i];
      } else if (!above && start >= 0.0) {
        span = std::max(span, cross(i) - start);
        start = -1.0;
      }
    }
    if (start >= 0.0) span = std::max(span, xs.back() - start);
  }

  // Every extremum that dominates the exact trace (at least half the global
  // peak) must be reproduced nearby, with the same orientation sign, by the
  // closed-form first-order signal.
  std::vector<Extremum> r_ext = local_maxima(xs, ref);
  {
    const std::vector<Extremum> mn = local_minima(xs, ref);
    r_ext.insert(r_ext.end(), mn.begin(), mn.end());
  }
  std::vector<Extremum> f_ext = local_maxima(xs, fo);
  {
    const std::vector<Extremum> mn = local_minima(xs, fo);
    f_ext.insert(f_ext.end(), mn.begin(), mn.end());
  }
  double pos_err = 0.0, val_err = 0.0;
  bool matched = false;
  for (const Extremum& e : r_ext) {
    if (std::abs(e.val) < 0.5 * peak) continue;
    const Extremum* best = nullptr;
    for (const Extremum& c : f_ext) {
      if (c.val * e.val <= 0.0 || std::abs(c.pos - e.pos) > 0.25) continue;
      if (!best || std::abs(c.pos - e.pos) < std::abs(best->pos - e.pos)) {
        best = &c;
      }
    }
    if (!best) {
      matched = false;
      break;
    }
    matched = true;
    pos_err = std::max(pos_err, std::abs(best->pos - e.pos));
    val_err = std::max(val_err,
                       std::abs(std::abs(best->val) - std::abs(e.val)) /
                           std::abs(e.val));
  }

  const bool ok = std::abs(peak - 0.5) <= 0.15 && span >= 0.3 && matched &&
                  pos_err <= 0.05 && val_err <= 0.20;
  const std::string match_part =
      matched ? "first-order peak offset=" + num(pos_err) +
                    " (want <=0.05), value error=" + num(val_err) +
                    " (want <=0.20)"
              : "first-order trace has no counterpart for a dominant extremum";
  report(6, "5 K orientation trace and its closed-form first-order preview",
         ok,
         "peak=" + num(peak) + " (want 0.5+-0.15), |<cos>|>0.3 span=" +
             num(span) + " (want >=0.3), " + match_part);
}

void criterion_7() {
  std::string detail;
  bool all_ok = true;
  const auto sub = [&](const char* name, bool ok, const std::string& m) {
    detail += (detail.empty() ? "" : "; ") + std::string(ok ? "" : "!") +
              name + " " + m;
    all_ok = all_ok && ok;
  };

  // (a) every factorization is unitary, and the reference conserves norm
  {
    double worst = 0.0;
    const PropagatorConfig variants[] = {{}, {0.3, 0.4, 0.5, 1e-4}};
    for (const auto& [p, eps] :
         {std::pair<PulseSpec, double>{{20.0, 2.0}, 1.0},
          std::pair<PulseSpec, double>{{1.0, 0.5}, 0.3}}) {
      const RotorBasis b(0, 24);
      const RotorOperators ops(b);
      for (const auto& pc : variants) {
        for (const auto kind :
             {PropagatorKind::kMagnus, PropagatorKind::kSecular,
              PropagatorKind::kImproved, PropagatorKind::kSuddenImpact}) {
          worst = std::max(worst, unitarity_defect(build_propagator(
                                      ops, p, eps, kTauF, kind, pc)));
        }
      }
      const StateVector ref =
          reference_state(ops, p, eps, 1e-3, kTauF, b.unit_state(0));
      worst = std::max(worst, std::abs(ref.squaredNorm() - 1.0));
    }
    sub("unitarity", worst <= 1e-10, num(worst));
  }

  // (b) ladder-operator identities away from the truncation edge
  {
    double worst = 0.0;
    for (const int m : {0, 1, 3}) {
      const RotorBasis b(m, 16);
      const int n = b.dimension();
      const ComplexMatrix j2 = j2_matrix(b).mat;
      const ComplexMatrix c = cos_matrix(b).mat;
      const ComplexMatrix s = sigma_matrix(b).mat;
      const ComplexMatrix lhs1 = j2 * c - c * j2 - 2.0 * (s + c);
      worst = std::max(worst, lhs1.cwiseAbs().maxCoeff());
      const ComplexMatrix lhs2 =
          s * c - c * s - (c * c - ComplexMatrix::Identity(n, n));
      worst = std::max(
          worst, lhs2.topLeftCorner(n - 1, n - 1).cwiseAbs().maxCoeff());
    }
    sub("commutators", worst <= 1e-10, num(worst));
  }

  // (c) sum over m of c_{jm}^2 telescopes to j/3
  {
    double worst = 0.0;
    for (int j = 1; j <= 20; ++j) {
      double sum = 0.0;
      for (int m = -j; m <= j; ++m) sum += c_coeff(j, m) * c_coeff(j, m);
      worst = std::max(worst, std::abs(sum - j / 3.0));
    }
    sub("sum-rule", worst <= 1e-10, num(worst));
  }

  // (d) the slow generator equals the kick-conjugated free one
  {
    const PulseSpec p{20.0, 2.0};
    const double tau = 0.37;
    const RotorBasis b(0, 24);
    const RotorOperators ops(b);
    const int n = b.dimension();
    const ComplexMatrix kick = kick_propagator(ops, area(p, tau));
    const ComplexMatrix oracle = kick.adjoint() *
                                 ops.j2().cast<cplx>().asDiagonal() *
                                 kick;
    const double dev = (h1(ops, p, tau).mat - oracle)
                           .topLeftCorner(n - 8, n - 8)
                           .cwiseAbs()
                           .maxCoeff();
    sub("slow-generator", dev <= 1e-9, num(dev));
  }

  // (e) second-order reference: halving dt divides the error by 4
  {
    const PulseSpec p{10.0, 2.0};
    const double eps = 0.5;
    const RotorBasis b(0, 20);
    const RotorOperators ops(b);
    const StateVector psi0 = b.unit_state(0);
    const StateVector fine =
        reference_state(ops, p, eps, 5e-5, kTauF, psi0);
    std::vector<double> err;
    for (const double dt : {4e-3, 2e-3, 1e-3}) {
      err.push_back(
          (reference_state(ops, p, eps, dt, kTauF, psi0) - fine).norm());
    }
    const double r1 = err[0] / err[1];
    const double r2 = err[1] / err[2];
    sub("dt-ratio",
        std::abs(r1 - 4.0) <= 0.5 && std::abs(r2 - 4.0) <= 0.5,
        num(r1) + "," + num(r2));
  }

  // (f) the first-order orientation misses the exact one at O(eps^2):
  // the fitted prefactor must be stable while eps spans a factor of 4
  {
    const PulseSpec p{5.0, 2.0};
    double cmin = 1e300, cmax = 0.0;
    for (const double eps : {0.05, 0.1, 0.2}) {
      const RotorBasis b(0, 16);
      const RotorOperators ops(b);
      const StateVector psi1 =
          improved_u(ops, p, eps, kTauF, 0.0) * b.unit_state(0);
      // The signal repeats every pi/eps, so the sup must be taken over at
      // least one full period or the slow cases read low.
      const double period = M_PI / eps;
      double worst = 0.0;
      for (int i = 0; i <= 600; ++i) {
        const double tau = 1.0 + period * i / 600.0;
        const StateVector psi =
            ops.free_phases(eps, tau - kTauF).cwiseProduct(psi1);
        worst = std::max(worst,
                         std::abs(cos_expect(psi, b) -
                                  cos_firstorder_state(0, 0, tau, p, eps)));
      }
      const double cfit = worst / (eps * eps);
      cmin = std::min(cmin, cfit);
      cmax = std::max(cmax, cfit);
    }
    sub("eps2-remainder", cmax / cmin <= 2.0,
        "prefactor spread x" + num(cmax / cmin));
  }

  // (g) the ground-state trace oscillates at angular frequency 2*eps
  {
    const double eps = 0.5;
    const Bench w = make_bench({50.0, 2.0}, eps);
    const int n_samp = 512;
    const double span = 8.0 * M_PI;
    std::vector<double> v(n_samp);
    double mean = 0.0;
    for (int i = 0; i < n_samp; ++i) {
      const double tau = kTauF + span * i / n_samp;
      v[i] = cos_expect(
          w.ops.free_phases(eps, tau - kTauF).cwiseProduct(w.ref), w.b);
      mean += v[i] / n_samp;
    }
    int best = 1;
    double best_mag = 0.0;
    for (int k = 1; k <= n_samp / 2; ++k) {
      cplx x = 0.0;
      for (int i = 0; i < n_samp; ++i) {
        x += (v[i] - mean) * std::exp(cplx(0.0, -2.0 * M_PI * k * i / n_samp));
      }
      if (std::abs(x) > best_mag) {
        best_mag = std::abs(x);
        best = k;
      }
    }
    const double freq = 2.0 * M_PI * best / span;
    const double bin = 2.0 * M_PI / span;
    sub("spectral-peak", std::abs(freq - 2.0 * eps) <= bin + 1e-12,
        num(freq) + " (want " + num(2.0 * eps) + "+-" + num(bin) + ")");
  }

  // (h) closed-form area moments against plain quadrature
  {
    const double closed[] = {3.0 / (16.0 * M_PI), -1.0 / (24.0 * M_PI),
                             -1.0 / (96.0 * M_PI)};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      const PulseSpec p{1.0, static_cast<double>(i + 1)};
      const double got = area_time_integral(p);
      const double quad =
          simpson([&](double u) { return area(p, u); }, 0.0, 1.0, 4096);
      worst = std::max({worst, std::abs(got - closed[i]),
                        std::abs(got - quad)});
    }
    sub("area-moments", worst <= 1e-10, num(worst));
  }

  report(7, "operator identities and convergence properties", all_ok, detail);
}

void criterion_8() {
  const PulseSpec p{50.0, 2.0};
  const double eps = 0.5;
  const int jmax = 10, pad = 4;

  // Direct quadrature on a padded block, so that every matrix element of
  // the restriction is free of truncation effects.
  const RotorBasis bp(0, jmax + pad);
  const RotorOperators op(bp);
  const int np = bp.dimension();
  const ComplexMatrix x = op.coupling().cast<cplx>();
  const ComplexMatrix y = op.anisotropy().cast<cplx>();
  const auto integrand = [&](double u) -> ComplexMatrix {
    const double a = area(p, u);
    Eigen::VectorXcd ph(np);
    for (int r = 0; r < np; ++r) {
      ph[r] = std::exp(cplx(0.0, eps * u * op.j2()[r]));
    }
    return ph.asDiagonal() * (cplx(0.0, 2.0 * a) * x + (a * a) * y) *
           ph.conjugate().asDiagonal();
  };
  const int panels = 8192;
  const double h = 1.0 / panels;
  ComplexMatrix acc = integrand(0.0) + integrand(1.0);
  for (int i = 1; i < panels; ++i) {
    acc += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
  }
  const ComplexMatrix oracle = cplx(0.0, 1.0) * (h / 3.0) * acc;

  const RotorBasis b(0, jmax);
  const RotorOperators ops(b);
  const int n = b.dimension();
  const double dev = (f_operator_matrix(ops, p, eps) -
                      oracle.topLeftCorner(n, n))
                         .cwiseAbs()
                         .maxCoeff();
  report(8, "transfer-operator coefficients against direct quadrature",
         dev <= 1e-9, "max element deviation " + num(dev) + " (cap 1e-09)");
}

}  // namespace

int main() {
  std::printf("rotorkick acceptance: 8 criteria\n");
  guard(1, "single-point error window for the improved factorization",
        criterion_1);
  guard(2, "small-eps accuracy cap across the error family", criterion_2);
  guard(3, "improved-vs-baseline error ratio at strong kicks", criterion_3);
  guard(4, "best expansion times sit near 0.11 and 0.89", criterion_4);
  guard(5, "cold orientation trace: peak height, persistence, zero-area null",
        criterion_5);
  guard(6, "5 K orientation trace and its closed-form first-order preview",
        criterion_6);
  guard(7, "operator identities and convergence properties", criterion_7);
  guard(8, "transfer-operator coefficients against direct quadrature",
        criterion_8);
  std::printf("%d of 8 criteria failed\n", g_failures);
  return g_failures;
}

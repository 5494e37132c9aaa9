#include "rotorkick/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <utility>

#include "rotorkick/errors.hpp"

namespace rotorkick {

namespace {

using std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};

// sinh(beta*j) * exp(-beta*j^2) without overflow/indeterminate forms at
// beta = +inf: equals (exp(-beta*j*(j-1)) - exp(-beta*j*(j+1))) / 2.
double sinh_weight(double beta, int j) {
  const double jd = j;
  // j = 1 must not evaluate beta * 0 (NaN at T = 0 where beta is +inf).
  const double lo = j == 1 ? 0.0 : beta * jd * (jd - 1.0);
  const double hi = beta * jd * (jd + 1.0);
  const double first = lo == 0.0 ? 1.0 : std::exp(-lo);
  const double second = std::isinf(hi) ? 0.0 : std::exp(-hi);
  return 0.5 * (first - second);
}

}  // namespace

double cos_expect(const StateVector& psi, const RotorBasis& b) {
  if (psi.size() != b.dimension()) {
    throw ConfigError("cos_expect: state dimension does not match basis");
  }
  double sum = 0.0;
  for (int k = 0; k + 1 < b.dimension(); ++k) {
    const double c = c_coeff(b.j_of(k + 1), b.m);
    sum += 2.0 * c * (std::conj(psi(k + 1)) * psi(k)).real();
  }
  return sum;
}

double cos_firstorder_state(int j, int m, double tau, const PulseSpec& p,
                            double eps) {
  const int mabs = m < 0 ? -m : m;
  if (j < mabs) {
    throw ConfigError("cos_firstorder_state needs |m| <= j");
  }
  const auto term = [&](int level) -> double {
    // Re[I1(2*eps*level) * exp(-2i*eps*level*tau)] at the beat frequency of
    // the (level-1, level) coherence.
    const double omega = 2.0 * eps * static_cast<double>(level);
    const std::complex<double> i1 = weighted_integrals(p, omega).i1;
    return (i1 * std::exp(-kI * omega * tau)).real();
  };
  double value = 0.0;
  const double cup = c_coeff(j + 1, m);
  value += 4.0 * eps * (j + 1.0) * cup * cup * term(j + 1);
  if (j >= 1) {
    const double cdn = c_coeff(j, m);
    value -= 4.0 * eps * static_cast<double>(j) * cdn * cdn * term(j);
  }
  return value;
}

double cos_firstorder_ground(double tau, const PulseSpec& p, double eps) {
  const std::complex<double> ahat = area_fourier(p, 2.0 * eps);
  return (4.0 * std::sqrt(2.0 * pi) / 3.0) * eps * std::abs(ahat) *
         std::cos(2.0 * eps * tau + std::arg(ahat));
}

ThermalEnsemble ThermalEnsemble::build(double beta_b, double tail_tol) {
  ThermalEnsemble ens;
  ens.beta_b = beta_b;
  if (std::isinf(beta_b) && beta_b > 0.0) {
    ens.jmax_thermal = 0;
    ens.weights = {1.0};
    ens.partition_q = 1.0;
    return ens;
  }
  if (!(beta_b > 0.0) || !std::isfinite(beta_b)) {
    throw ConfigError("thermal ensemble needs beta_b > 0 (or +inf at T=0)");
  }

  // Fully converged partition sum.
  double q = 0.0;
  constexpr int kLevelCap = 100000;
  int j = 0;
  for (; j <= kLevelCap; ++j) {
    const double term =
        (2.0 * j + 1.0) * std::exp(-beta_b * j * (j + 1.0));
    q += term;
    if (j > 0 && term < 1e-18 * q) {
      break;
    }
  }
  if (j > kLevelCap) {
    throw ConvergenceError("partition sum does not converge; beta_b=" +
                           std::to_string(beta_b) + " is too small");
  }
  ens.partition_q = q;

  int cutoff = 0;
  while ((2.0 * cutoff + 1.0) *
             std::exp(-beta_b * cutoff * (cutoff + 1.0)) / q >=
         tail_tol) {
    ++cutoff;
    if (cutoff > kLevelCap) {
      throw ConvergenceError("thermal cutoff does not converge");
    }
  }
  ens.jmax_thermal = cutoff;
  ens.weights.resize(cutoff + 1);
  for (int jj = 0; jj <= cutoff; ++jj) {
    ens.weights[jj] = std::exp(-beta_b * jj * (jj + 1.0));
  }
  return ens;
}

OrientationTrace thermal_average(const std::vector<StateTrace>& traces,
                                 const ThermalEnsemble& ens) {
  std::set<std::pair<int, int>> seen;
  for (const StateTrace& st : traces) {
    if (st.j < 0 || st.j > ens.jmax_thermal || std::abs(st.m) > st.j) {
      throw ConfigError("thermal_average: state (" + std::to_string(st.j) +
                        "," + std::to_string(st.m) +
                        ") outside the ensemble");
    }
    if (!seen.emplace(st.j, st.m).second) {
      throw ConfigError("thermal_average: duplicate state trace");
    }
  }
  std::size_t expected = 0;
  for (int j = 0; j <= ens.jmax_thermal; ++j) {
    expected += 2 * static_cast<std::size_t>(j) + 1;
  }
  if (seen.size() != expected) {
    throw ConfigError("thermal_average: ensemble is incomplete (" +
                      std::to_string(seen.size()) + " of " +
                      std::to_string(expected) + " states)");
  }

  const std::vector<double>& grid = traces.front().trace.times;
  OrientationTrace out;
  out.times = grid;
  out.values.assign(grid.size(), 0.0);
  out.method = "thermal:" + traces.front().trace.method;
  for (const StateTrace& st : traces) {
    if (st.trace.times != grid) {
      throw ConfigError("thermal_average: traces on different time grids");
    }
    const double w = ens.weights[st.j] / ens.partition_q;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out.values[i] += w * st.trace.values[i];
    }
  }
  return out;
}

double thermal_firstorder(double tau, const PulseSpec& p, double eps,
                          const ThermalEnsemble& ens, ThermalCoeffMode mode) {
  double sum = 0.0;
  constexpr int kLevelCap = 100000;
  for (int j = 1; j <= kLevelCap; ++j) {
    const double sw = sinh_weight(ens.beta_b, j);
    if (sw * j * j < 1e-18 && j > 1) {
      break;
    }
    double cj;
    if (mode == ThermalCoeffMode::kDerived) {
      cj = j / 3.0;
    } else {
      cj = 0.0;
      for (int m = -j; m <= j; ++m) {
        cj += c_coeff(j, m);
      }
    }
    const std::complex<double> ahat = area_fourier(p, 2.0 * eps * j);
    sum += static_cast<double>(j) * cj * sw * std::abs(ahat) *
           std::cos(2.0 * eps * j * tau + std::arg(ahat));
  }
  return 8.0 * std::sqrt(2.0 * pi) * eps / ens.partition_q * sum;
}

double rotational_mean_zero_check(const OrientationTrace& trace, double eps,
                                  int j_dominant) {
  if (!(eps > 0.0) || j_dominant < 1) {
    throw ConfigError("rotational_mean_zero_check needs eps > 0, j >= 1");
  }
  if (trace.times.size() < 2 ||
      trace.times.size() != trace.values.size()) {
    throw ConfigError("rotational_mean_zero_check needs a sampled trace");
  }
  const double period = pi / (eps * static_cast<double>(j_dominant));
  const double t0 = trace.times.front();
  const double t1 = t0 + period;
  if (t1 > trace.times.back() + 1e-9) {
    throw ConfigError("trace does not cover one rotational period");
  }

  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < trace.times.size(); ++i) {
    const double ta = trace.times[i];
    const double tb = trace.times[i + 1];
    if (tb <= ta) {
      throw ConfigError("trace times must be strictly ascending");
    }
    if (ta >= t1) {
      break;
    }
    const double va = trace.values[i];
    const double vb = trace.values[i + 1];
    if (tb <= t1) {
      integral += 0.5 * (va + vb) * (tb - ta);
    } else {
      // Final partial segment, linearly interpolated at t1.
      const double frac = (t1 - ta) / (tb - ta);
      const double v1 = va + frac * (vb - va);
      integral += 0.5 * (va + v1) * (t1 - ta);
      break;
    }
  }
  return integral / period;
}

}  // namespace rotorkick

#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "rotorkick/basis.hpp"
#include "rotorkick/errors.hpp"
#include "rotorkick/observables.hpp"
#include "rotorkick/propagators.hpp"
#include "rotorkick/pulse.hpp"

using namespace rotorkick;
using std::complex;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("orientation expectation closed forms") {
  const RotorBasis b(0, 5);
  // parity selection rule: a single |j,m> is unoriented
  for (int j = 0; j <= 5; ++j) {
    CHECK(cos_expect(b.unit_state(j), b) == 0.0);
  }
  // equal superposition of the lowest doublet
  StateVector psi = (b.unit_state(0) + b.unit_state(1)) / std::sqrt(2.0);
  CHECK(cos_expect(psi, b) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  // a pi/2 relative phase kills the interference term
  StateVector rot = b.unit_state(0);
  rot += complex<double>(0.0, 1.0) * b.unit_state(1);
  rot /= std::sqrt(2.0);
  CHECK(cos_expect(rot, b) == doctest::Approx(0.0).epsilon(1e-15));

  CHECK_THROWS_AS(cos_expect(StateVector::Ones(3), RotorBasis(0, 5)),
                  ConfigError);
}

TEST_CASE("first-order orientation of one level") {
  const PulseSpec p{20.0, 2.0};
  const double eps = 0.5;

  // the (j, m) formula written out by hand
  auto by_hand = [&](int j, int m, double tau) {
    const double cup = c_coeff(j + 1, m);
    const double cdn = j >= 1 ? c_coeff(j, m) : 0.0;
    const complex<double> up =
        weighted_integrals(p, 2.0 * eps * (j + 1)).i1 *
        std::exp(complex<double>(0.0, -2.0 * eps * (j + 1) * tau));
    const complex<double> dn =
        weighted_integrals(p, 2.0 * eps * j).i1 *
        std::exp(complex<double>(0.0, -2.0 * eps * j * tau));
    return 4.0 * eps * (j + 1) * cup * cup * up.real() -
           4.0 * eps * j * cdn * cdn * dn.real();
  };
  for (int j : {0, 1, 3}) {
    for (double tau : {1.0, 1.7, 4.2}) {
      CHECK(std::abs(cos_firstorder_state(j, 0, tau, p, eps) -
                     by_hand(j, 0, tau)) < 1e-12);
    }
  }
  CHECK(std::abs(cos_firstorder_state(2, 2, 1.5, p, eps) -
                 by_hand(2, 2, 1.5)) < 1e-12);
  CHECK_THROWS_AS(cos_firstorder_state(1, 2, 1.5, p, eps), ConfigError);

  // no pulse, no orientation
  CHECK(cos_firstorder_state(0, 0, 2.0, PulseSpec{0.0, 2.0}, eps) == 0.0);
}

TEST_CASE("ground-level formula in Fourier form") {
  const PulseSpec p{50.0, 2.0};
  const double eps = 0.5;
  for (double tau : {1.0, 2.3, 5.9}) {
    CHECK(std::abs(cos_firstorder_ground(tau, p, eps) -
                   cos_firstorder_state(0, 0, tau, p, eps)) < 1e-12);
  }
  // period pi/eps
  CHECK(std::abs(cos_firstorder_ground(1.2 + kPi / eps, p, eps) -
                 cos_firstorder_ground(1.2, p, eps)) < 1e-10);
}

TEST_CASE("Boltzmann ensemble construction") {
  // zero temperature: only the ground level
  const ThermalEnsemble cold =
      ThermalEnsemble::build(std::numeric_limits<double>::infinity());
  CHECK(cold.jmax_thermal == 0);
  CHECK(cold.partition_q == doctest::Approx(1.0));
  REQUIRE(cold.weights.size() == 1);
  CHECK(cold.weights[0] == doctest::Approx(1.0));

  const double beta = 0.2;
  const ThermalEnsemble ens = ThermalEnsemble::build(beta);
  // partition sum against a long direct sum
  double q = 0.0;
  for (int j = 0; j <= 80; ++j) q += (2 * j + 1) * std::exp(-beta * j * (j + 1));
  CHECK(ens.partition_q == doctest::Approx(q).epsilon(1e-12));
  for (int j = 0; j <= ens.jmax_thermal; ++j) {
    CHECK(ens.weights[j] ==
          doctest::Approx(std::exp(-beta * j * (j + 1))).epsilon(1e-14));
  }
  // cutoff is the smallest one satisfying the tail criterion
  auto tail = [&](int j) {
    return (2 * j + 1) * std::exp(-beta * j * (j + 1)) / q;
  };
  CHECK(tail(ens.jmax_thermal) < 1e-10);
  CHECK(tail(ens.jmax_thermal - 1) >= 1e-10);

  CHECK_THROWS_AS(ThermalEnsemble::build(0.0), ConfigError);
  CHECK_THROWS_AS(ThermalEnsemble::build(-1.0), ConfigError);
}

TEST_CASE("thermal averaging bookkeeping") {
  const double beta = 1.0;
  const ThermalEnsemble ens = ThermalEnsemble::build(beta);
  REQUIRE(ens.jmax_thermal >= 2);

  const std::vector<double> times = {0.0, 1.0};
  std::vector<StateTrace> traces;
  for (int j = 0; j <= ens.jmax_thermal; ++j) {
    for (int m = -j; m <= j; ++m) {
      // distinguishable constant value j + m/10
      OrientationTrace t;
      t.times = times;
      t.values = {j + 0.1 * m, j + 0.1 * m};
      t.method = "manual";
      traces.push_back({j, m, t});
    }
  }
  const OrientationTrace avg = thermal_average(traces, ens);
  // the m-dependence sums away; expected (1/Q) sum_j w_j (2j+1) j
  double expect = 0.0;
  for (int j = 0; j <= ens.jmax_thermal; ++j) {
    expect += ens.weights[j] * (2 * j + 1) * j;
  }
  expect /= ens.partition_q;
  REQUIRE(avg.values.size() == 2);
  CHECK(avg.values[0] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(avg.values[1] == doctest::Approx(expect).epsilon(1e-12));

  // every (j, m) must appear exactly once on one shared grid
  std::vector<StateTrace> missing(traces.begin(), traces.end() - 1);
  CHECK_THROWS_AS(thermal_average(missing, ens), ConfigError);
  std::vector<StateTrace> doubled = traces;
  doubled.push_back(traces.back());
  CHECK_THROWS_AS(thermal_average(doubled, ens), ConfigError);
  std::vector<StateTrace> skewed = traces;
  skewed.back().trace.times = {0.0, 2.0};
  CHECK_THROWS_AS(thermal_average(skewed, ens), ConfigError);
}

TEST_CASE("closed-form thermal signal") {
  const PulseSpec p{20.0, 2.0};
  const double eps = 0.5;

  // T -> 0 reduces to the ground-level formula and stays finite (the j=1
  // sinh weight must not evaluate 0 * inf)
  const ThermalEnsemble cold =
      ThermalEnsemble::build(std::numeric_limits<double>::infinity());
  for (double tau : {1.0, 2.2}) {
    const double v = thermal_firstorder(tau, p, eps, cold);
    CHECK(std::isfinite(v));
    CHECK(std::abs(v - cos_firstorder_ground(tau, p, eps)) < 1e-12);
  }

  // warm ensemble: the derived weights match the direct Boltzmann sum of
  // the per-level formula
  const ThermalEnsemble ens = ThermalEnsemble::build(0.2033);
  for (double tau : {1.0, 1.45, 3.8}) {
    double direct = 0.0;
    for (int j = 0; j <= ens.jmax_thermal; ++j) {
      for (int m = -j; m <= j; ++m) {
        direct += ens.weights[j] * cos_firstorder_state(j, m, tau, p, eps);
      }
    }
    direct /= ens.partition_q;
    CHECK(std::abs(thermal_firstorder(tau, p, eps, ens,
                                      ThermalCoeffMode::kDerived) -
                   direct) < 1e-10);
  }

  // the two published weight conventions genuinely differ at T > 0
  double max_gap = 0.0;
  for (double tau = 1.0; tau < 4.0; tau += 0.05) {
    max_gap = std::max(
        max_gap,
        std::abs(
            thermal_firstorder(tau, p, eps, ens, ThermalCoeffMode::kDerived) -
            thermal_firstorder(tau, p, eps, ens, ThermalCoeffMode::kLiteral)));
  }
  CHECK(max_gap > 1e-4);
}

TEST_CASE("mean over one rotational period vanishes") {
  const PulseSpec p{50.0, 2.0};
  const double eps = 0.5;
  const double period = kPi / eps;

  OrientationTrace t;
  t.method = "first-order";
  const int n = 4000;
  const double h = 1.25 * period / n;  // a quarter period of margin
  for (int i = 0; i <= n; ++i) {
    const double tau = 1.0 + i * h;
    t.times.push_back(tau);
    t.values.push_back(cos_firstorder_ground(tau, p, eps));
  }
  CHECK(std::abs(rotational_mean_zero_check(t, eps, 1)) < 1e-10);

  OrientationTrace too_short;
  too_short.times = {1.0, 1.1};
  too_short.values = {0.0, 0.1};
  CHECK_THROWS_AS(rotational_mean_zero_check(too_short, eps, 1),
                  ConfigError);
  CHECK_THROWS_AS(rotational_mean_zero_check(t, eps, 0), ConfigError);
}

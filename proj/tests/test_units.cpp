#include "doctest.h"

#include <cmath>

#include "rotorkick/errors.hpp"
#include "rotorkick/units.hpp"

using namespace rotorkick;

// LiCl driven by a 1 ps half-cycle-class pulse, the worked example every
// conversion is anchored to.
static PhysicalParams licl() {
  PhysicalParams p;
  p.b_wavenumber = 0.70652;
  p.delta_ps = 1.0;
  p.mu0_debye = 7.129;
  p.e0_v_per_cm = 1.5e6;
  p.temperature_k = 5.0;
  return p;
}

TEST_CASE("dimensionless parameters of the LiCl example") {
  const DimensionlessParams d = to_dimensionless(licl());
  // epsilon = 2*pi*c*B~*delta
  CHECK(d.epsilon == doctest::Approx(0.133084).epsilon(1e-4));
  // e0r = mu0*delta*E0/hbar
  CHECK(d.e0r == doctest::Approx(33.826).epsilon(1e-3));
  // beta_B = h*c*B~/(kB*T) at 5 K
  CHECK(d.beta_b == doctest::Approx(0.20331).epsilon(1e-4));
}

TEST_CASE("epsilon and e0r scale linearly in delta and E0") {
  PhysicalParams p = licl();
  const DimensionlessParams base = to_dimensionless(p);
  p.delta_ps = 2.0;
  p.e0_v_per_cm *= 3.0;
  const DimensionlessParams scaled = to_dimensionless(p);
  CHECK(scaled.epsilon == doctest::Approx(2.0 * base.epsilon));
  CHECK(scaled.e0r == doctest::Approx(6.0 * base.e0r));
  CHECK(scaled.beta_b == doctest::Approx(base.beta_b));  // T untouched
}

TEST_CASE("zero temperature maps to infinite beta_B") {
  PhysicalParams p = licl();
  p.temperature_k = 0.0;
  CHECK(std::isinf(to_dimensionless(p).beta_b));
}

TEST_CASE("invalid laboratory parameters are rejected") {
  PhysicalParams p = licl();
  p.b_wavenumber = 0.0;
  CHECK_THROWS_AS(to_dimensionless(p), ConfigError);
  p = licl();
  p.delta_ps = -1.0;
  CHECK_THROWS_AS(to_dimensionless(p), ConfigError);
  p = licl();
  p.temperature_k = -0.1;
  CHECK_THROWS_AS(to_dimensionless(p), ConfigError);
}

TEST_CASE("rotational period") {
  CHECK(rotational_period(0.1, 1) == doctest::Approx(5.0));
  CHECK(rotational_period(0.5, 2) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(rotational_period(0.0, 1), ConfigError);
  CHECK_THROWS_AS(rotational_period(0.1, 0), ConfigError);
}

#include "rotorkick/units.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rotorkick/constants.hpp"
#include "rotorkick/errors.hpp"

namespace rotorkick {

DimensionlessParams to_dimensionless(const PhysicalParams& p) {
  if (!(p.b_wavenumber > 0.0)) {
    throw ConfigError("rotational constant must be positive, got " +
                      std::to_string(p.b_wavenumber));
  }
  if (!(p.delta_ps > 0.0)) {
    throw ConfigError("pulse duration must be positive, got " +
                      std::to_string(p.delta_ps));
  }
  if (p.mu0_debye < 0.0 || p.e0_v_per_cm < 0.0 || p.temperature_k < 0.0) {
    throw ConfigError("dipole moment, field amplitude and temperature "
                      "must be non-negative");
  }

  const double delta_s = p.delta_ps * 1.0e-12;
  // B as an angular frequency [rad/s].
  const double b_angular =
      2.0 * std::numbers::pi * constants::speed_of_light_cm * p.b_wavenumber;

  DimensionlessParams d;
  d.epsilon = b_angular * delta_s;
  d.e0r = p.mu0_debye * constants::debye * delta_s *
          (p.e0_v_per_cm * 100.0) / constants::hbar;
  if (p.temperature_k > 0.0) {
    // h*c*B~ is the level-spacing energy scale hbar * (2*pi*c*B~).
    const double b_energy = constants::hbar * b_angular;
    d.beta_b = b_energy / (constants::boltzmann * p.temperature_k);
  } else {
    d.beta_b = std::numeric_limits<double>::infinity();
  }
  return d;
}

double rotational_period(double epsilon, int j) {
  if (!(epsilon > 0.0)) {
    throw ConfigError("epsilon must be positive, got " +
                      std::to_string(epsilon));
  }
  if (j < 1) {
    throw ConfigError("rotational period needs j >= 1, got " +
                      std::to_string(j));
  }
  return 1.0 / (epsilon * static_cast<double>(j) * (j + 1.0));
}

}  // namespace rotorkick

#pragma once

// Physical constants (SI defining constants, CODATA).  All unit conversions
// in the library go through these values; nothing else hard-codes them.

namespace rotorkick {
namespace constants {

/// Speed of light in vacuum [m/s] (exact).
inline constexpr double speed_of_light = 299792458.0;

/// Speed of light in vacuum [cm/s] (exact).
inline constexpr double speed_of_light_cm = speed_of_light * 100.0;

/// Planck constant [J s] (exact).
inline constexpr double planck = 6.62607015e-34;

/// Reduced Planck constant [J s].
inline constexpr double hbar = 1.054571817e-34;

/// Boltzmann constant [J/K] (exact).
inline constexpr double boltzmann = 1.380649e-23;

/// One debye in [C m]: 1 D = 1e-21 / c.
inline constexpr double debye = 1.0e-21 / speed_of_light;

}  // namespace constants
}  // namespace rotorkick

#pragma once

// Conversion between laboratory parameters of a polar linear molecule driven
// by a short laser pulse and the dimensionless parameters used by the rest of
// the library.
//
// Conventions (documented in every CSV output):
//   epsilon = 2*pi*c*B~*delta      rotational constant B~ in 1/cm, pulse
//                                  duration delta in s; i.e. B is used as an
//                                  angular frequency 2*pi*c*B~.
//   e0r     = mu0*delta*E0/hbar    peak field E0 in V/m, dipole mu0 in C m.
//   beta_B  = h*c*B~/(kB*T)        B as an energy h*c*B~; thermal weight of
//                                  level j is exp(-beta_B*j*(j+1)).
// Rescaled time tau = t/delta; the pulse is on for 0 <= tau <= 1.

namespace rotorkick {

/// Laboratory-frame inputs.
struct PhysicalParams {
  double b_wavenumber = 0.0;   ///< rotational constant B~ [1/cm]
  double delta_ps = 0.0;       ///< pulse duration delta [ps]
  double mu0_debye = 0.0;      ///< permanent dipole moment mu0 [D]
  double e0_v_per_cm = 0.0;    ///< peak field amplitude E0 [V/cm]
  double temperature_k = 0.0;  ///< initial rotational temperature T [K]
};

/// Dimensionless parameters of the rescaled problem.
struct DimensionlessParams {
  double epsilon = 0.0;  ///< perturbation parameter B*delta
  double e0r = 0.0;      ///< rescaled peak field amplitude
  double beta_b = 0.0;   ///< B/(kB*T); +inf at T = 0
};

/// Converts laboratory parameters to dimensionless ones.
/// Requires b_wavenumber > 0, delta_ps > 0, mu0_debye >= 0,
/// e0_v_per_cm >= 0, temperature_k >= 0; throws ConfigError otherwise.
DimensionlessParams to_dimensionless(const PhysicalParams& p);

/// Classical rotation period of level j in rescaled time units:
/// 1/(epsilon*j*(j+1)).  Requires epsilon > 0 and j >= 1.
double rotational_period(double epsilon, int j);

}  // namespace rotorkick

#pragma once

// The rescaled laser pulse and the pulse integrals every propagator is
// assembled from.
//
// In rescaled time tau = t/delta the pulse occupies 0 <= tau <= 1:
//
//   field(tau) = e0r * sin^2(pi*tau) * sin(2*pi*f*tau)
//
// with e0r the rescaled peak amplitude and f the number of carrier cycles
// under the envelope.  area(tau) is the running integral of the field; for
// integer f the total area vanishes, which is what makes the pulse a "kick"
// with no net momentum transfer.

#include <complex>

namespace rotorkick {

struct PulseSpec {
  double e0r = 0.0;  ///< rescaled peak field amplitude, >= 0
  double f = 1.0;    ///< carrier cycles under the envelope, > 0
};

/// Start and end of the pulse in rescaled time.
inline constexpr double kTauI = 0.0;
inline constexpr double kTauF = 1.0;

/// Rescaled field at tau (0 outside the pulse window).
double field(const PulseSpec& p, double tau);

/// Running pulse area A(tau) = integral of the field from 0 to tau,
/// evaluated in closed form.  Constant for tau >= 1.
double area(const PulseSpec& p, double tau);

/// integral_0^tau_upper A(u) du in closed form.
double area_integral(const PulseSpec& p, double tau_upper = kTauF);

/// integral_0^tau_upper A(u)^2 du by Gauss-Legendre quadrature.
double area_squared_integral(const PulseSpec& p, double tau_upper = kTauF);

/// Full-window integral of A: closed forms
///   e0r * 3/(16*pi)            for f = 1
///   -e0r / (4*pi*f*(f^2-1))    for integer f >= 2
/// and quadrature for non-integer f.
double area_time_integral(const PulseSpec& p);

/// Fourier transform of the area,
/// Ahat(k) = (1/sqrt(2*pi)) * integral_0^1 A(u) exp(-i*u*k) du.
std::complex<double> area_fourier(const PulseSpec& p, double k);

/// Frequency-weighted pulse integrals over [0, tau_upper]:
///   i1 = integral A(u)   exp(i*omega*u) du
///   i2 = integral A(u)^2 exp(i*omega*u) du
struct WeightedIntegrals {
  std::complex<double> i1;
  std::complex<double> i2;
};

/// Both weighted integrals by Gauss-Legendre quadrature with
/// max(16, 4*ceil(|omega| + 2*pi*f)) nodes.
WeightedIntegrals weighted_integrals(const PulseSpec& p, double omega,
                                     double tau_upper = kTauF);

}  // namespace rotorkick

#pragma once

// Orientation observables <cos(theta)> of the kicked rotor: exact
// expectations from propagated states, closed-form first-order dynamics, and
// thermal averaging over an initial Boltzmann ensemble.

#include <string>
#include <vector>

#include "rotorkick/basis.hpp"
#include "rotorkick/pulse.hpp"

namespace rotorkick {

/// A sampled orientation signal.
struct OrientationTrace {
  std::vector<double> times;
  std::vector<double> values;
  std::string method;  ///< builder tag, e.g. "reference", "improved"
};

/// <psi| cos(theta) |psi> on the m-block of b.  Exactly real; evaluated in
/// O(dimension) from the tridiagonal matrix elements.
double cos_expect(const StateVector& psi, const RotorBasis& b);

/// First-order post-pulse orientation of the initial state |j,m>:
///   4*eps*(j+1)*c_{j+1,m}^2 * Re[I1(2*eps*(j+1)) e^{-2i*eps*(j+1)*tau}]
/// - 4*eps* j   *c_{j,m}^2   * Re[I1(2*eps*j)     e^{-2i*eps*j*tau}].
/// Accurate to O(eps^2) once the pulse is over (tau >= 1).
double cos_firstorder_state(int j, int m, double tau, const PulseSpec& p,
                            double eps);

/// Fourier form of the j=0 case:
///   (4*sqrt(2*pi)/3) * eps * |Ahat(2*eps)| * cos(2*eps*tau + arg Ahat(2*eps)).
double cos_firstorder_ground(double tau, const PulseSpec& p, double eps);

/// Boltzmann weights of the initial rotational ensemble.  Level j carries
/// weight exp(-beta_b*j*(j+1)) (degeneracy handled by summing over m), and
/// Q is the fully converged partition sum.
struct ThermalEnsemble {
  double beta_b = 0.0;  ///< B/(kB*T); +inf at T = 0
  int jmax_thermal = 0;
  std::vector<double> weights;  ///< w_j for j = 0..jmax_thermal
  double partition_q = 1.0;

  /// Smallest cutoff with (2*jmax+1)*w_jmax/Q below tail_tol.  beta_b may
  /// be +inf (T = 0); it must be positive otherwise.
  static ThermalEnsemble build(double beta_b, double tail_tol = 1e-10);
};

/// One per-state orientation trace of the ensemble member |j,m>.
struct StateTrace {
  int j = 0;
  int m = 0;
  OrientationTrace trace;
};

/// (1/Q) sum_j w_j sum_m <cos>^(j,m).  Requires every (j,m) with
/// |m| <= j <= jmax_thermal exactly once, on a shared time grid.
OrientationTrace thermal_average(const std::vector<StateTrace>& traces,
                                 const ThermalEnsemble& ens);

/// Weight convention of the closed-form thermal first-order signal: the
/// derived mode uses sum_m c_{j,m}^2 = j/3 (consistent with summing
/// cos_firstorder_state over the ensemble); the literal mode uses the
/// unsquared sum of ladder coefficients instead.
enum class ThermalCoeffMode { kDerived, kLiteral };

/// Closed-form first-order thermally averaged orientation
///   (8*sqrt(2*pi)*eps/Q) * sum_{j>=1} j*c_j*sinh(beta_b*j)*e^{-beta_b*j^2}
///                          * |Ahat(2*eps*j)| * cos(2*eps*j*tau + arg Ahat)
/// with c_j per the selected mode.  Reduces to cos_firstorder_ground as T -> 0.
double thermal_firstorder(double tau, const PulseSpec& p, double eps,
                          const ThermalEnsemble& ens,
                          ThermalCoeffMode mode = ThermalCoeffMode::kDerived);

/// Mean of the trace over one period of its dominant spectral component
/// (frequency 2*eps*j_dominant, period pi/(eps*j_dominant)), by trapezoid
/// from the first sample.  A diagnostic: first-order signals average to
/// zero over a full period.  Throws ConfigError if the trace is shorter
/// than one period.
double rotational_mean_zero_check(const OrientationTrace& trace, double eps,
                                  int j_dominant);

}  // namespace rotorkick

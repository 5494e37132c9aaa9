#pragma once

// Propagators for a rigid rotor kicked by a short resonant pulse, all on one
// m-block: a numerically converged split-operator reference and a family of
// first-order analytic approximations built from exponentials of Hermitian
// pulse-integral operators.
//
// The rescaled Schroedinger equation is
//
//   i d/dtau psi = [ epsilon*J^2 - field(tau)*cos(theta) ] psi,
//
// with epsilon = B*delta << 1 the perturbation parameter.  Transforming away
// the kick exp(i*A(tau)*cos) leaves the slow generator
//
//   h1(tau) = J^2 + 2i*A(tau)*(sigma+cos) + A(tau)^2*(1-cos^2)
//           = exp(-i*A*cos) J^2 exp(i*A*cos),
//
// and each analytic propagator truncates a different exact factorization of
// the remaining evolution at first order in epsilon:
//
//   magnus_u         exp(i*A*cos) * exp(-i*eps*Int h1)
//   secular_u        pulls the secular part tau*J^2 into its own factor,
//                    split at tau2
//   improved_u       expands around h1(tau1) and keeps the oscillatory
//                    integrals exp(+/-i*eps*ω*u) inside the exponent
//   sudden_impact_u  free rotation with the whole kick applied at tau_h
//
// All builders return operators that are unitary to machine precision.

#include <complex>
#include <vector>

#include "rotorkick/basis.hpp"
#include "rotorkick/pulse.hpp"

namespace rotorkick {

enum class PropagatorKind {
  kReference,
  kMagnus,
  kSecular,
  kImproved,
  kSuddenImpact,
};

/// Free parameters of the propagator family.
struct PropagatorConfig {
  double tau1 = kTauI;  ///< expansion time of improved_u, in [0, 1]
  double tau2 = kTauI;  ///< split time of secular_u, in [0, 1]
  double tau_h = 0.5;   ///< kick time of sudden_impact_u, in [0, 1]
  double dt = 1e-4;     ///< reference step size, > 0
};

/// Operator blocks of one m-block, built once and shared by every
/// propagator: the J^2 diagonal, the antisymmetric coupling sigma+cos, the
/// symmetric anisotropy 1-cos^2, and the eigendecomposition of cos used to
/// exponentiate kicks.
class RotorOperators {
 public:
  explicit RotorOperators(const RotorBasis& b);

  const RotorBasis& basis() const { return basis_; }
  int dimension() const { return basis_.dimension(); }

  /// Diagonal entries j(j+1).
  const Eigen::VectorXd& j2() const { return j2_; }
  /// sigma + cos; real antisymmetric tridiagonal.
  const RealMatrix& coupling() const { return coupling_; }
  /// 1 - cos^2 as 1 - C*C on the truncated block; real symmetric.
  const RealMatrix& anisotropy() const { return anisotropy_; }
  /// Eigendecomposition of cos(theta).
  const HermitianEigensystem& cos_eigen() const { return cos_eigen_; }

  /// h1 at pulse area a: J^2 + 2i*a*coupling + a^2*anisotropy (Hermitian).
  ComplexMatrix h1_at_area(double a) const;

  /// Diagonal phases exp(-i*eps*j(j+1)*dtau) of free rotation.
  Eigen::VectorXcd free_phases(double eps, double dtau) const;

 private:
  RotorBasis basis_;
  Eigen::VectorXd j2_;
  RealMatrix coupling_;
  RealMatrix anisotropy_;
  HermitianEigensystem cos_eigen_;
};

/// exp(i*area_value*cos).
ComplexMatrix kick_propagator(const RotorOperators& ops, double area_value);

/// h1 at time tau (Hermitian; equals J^2 at tau <= 0).
OperatorMatrix h1(const RotorOperators& ops, const PulseSpec& p, double tau);

/// Exact reference: Strang splitting through the pulse window with the
/// exact pulse-area increment per step, exact free rotation afterwards.
/// Returns the state at each requested time (ascending, >= 0).  If max_tail
/// is non-null it receives the largest population of the top two j levels
/// seen at any step, the truncation-quality indicator.  Throws
/// ConvergenceError if the norm drifts by more than 1e-8.
std::vector<StateVector> reference_states(const RotorOperators& ops,
                                          const PulseSpec& p, double eps,
                                          double dt,
                                          const std::vector<double>& times,
                                          const StateVector& psi0,
                                          double* max_tail = nullptr);

/// Single-time convenience wrapper around reference_states.
StateVector reference_state(const RotorOperators& ops, const PulseSpec& p,
                            double eps, double dt, double tau,
                            const StateVector& psi0,
                            double* max_tail = nullptr);

/// First-order exponential-of-integral propagator at tau in [0, 1]:
/// exp(i*A(tau)*cos) * exp(-i*eps*[tau*J^2 + 2i*(Int A)*coupling
///                                 + (Int A^2)*anisotropy]).
ComplexMatrix magnus_u(const RotorOperators& ops, const PulseSpec& p,
                       double eps, double tau);

/// Secular-split variant: the tau*J^2 part exponentiates alone and the
/// remainder is split at tau2 in [0, tau].
ComplexMatrix secular_u(const RotorOperators& ops, const PulseSpec& p,
                        double eps, double tau, double tau2);

/// Improved propagator expanded around h1(tau1), tau1 in [0, 1]:
/// exp(i*A(tau)*cos) * exp(-i*eps*tau*h1(tau1)) * exp(-i*eps*W(tau)) with
/// W the frequency-weighted remainder integral in the h1(tau1) eigenbasis.
ComplexMatrix improved_u(const RotorOperators& ops, const PulseSpec& p,
                         double eps, double tau, double tau1);

/// Sudden-impact picture: free rotation with the accumulated kick applied
/// at tau_h.  Defined for tau >= 1 (the pre-pulse extension freezes the
/// rotation still to come at the kick time, for trace plotting).
ComplexMatrix sudden_impact_u(const RotorOperators& ops, const PulseSpec& p,
                              double eps, double tau, double tau_h);

/// Ladder coefficients of the first-order transfer operator
/// F = i * Int_0^1 exp(i*eps*u*J^2) [h1(u) - J^2] exp(-i*eps*u*J^2) du,
/// whose action is
///   F|j,m> = a|j-1,m> + b|j+1,m> + alpha|j-2,m> + beta|j+2,m> + gamma|j,m>.
struct FOperatorCoeffs {
  std::complex<double> a;
  std::complex<double> b;
  std::complex<double> alpha;
  std::complex<double> beta;
  std::complex<double> gamma;
};

/// Coefficients for the level (j, m); entries whose target level does not
/// exist are zero.  Requires |m| <= j.
FOperatorCoeffs f_operator_coeffs(int j, int m, const PulseSpec& p,
                                  double eps);

/// F assembled from f_operator_coeffs on the block of ops.  Elements are the
/// exact (untruncated) ones; the last diagonal entry therefore differs from
/// a truncated-product construction by the tail weight c_{jmax+1}^2.
ComplexMatrix f_operator_matrix(const RotorOperators& ops, const PulseSpec& p,
                                double eps);

/// Squared distance ||psi - ref||^2, the global-phase-sensitive error
/// measure (2 for orthogonal states, 4 for psi = -ref).
double error_delta(const StateVector& psi, const StateVector& ref);

/// Builds the propagator selected by kind at time tau (reference excluded).
ComplexMatrix build_propagator(const RotorOperators& ops, const PulseSpec& p,
                               double eps, double tau, PropagatorKind kind,
                               const PropagatorConfig& cfg);

/// Smallest jmax (doubling upward from jmax_floor) for which a reference
/// probe run from |j_init, m> keeps the top two j populations below 1e-10
/// at every step.  Throws ConvergenceError if 1024 is not enough.
int adaptive_jmax(const PulseSpec& p, double eps, int m, int j_init,
                  int jmax_floor = 16);

}  // namespace rotorkick

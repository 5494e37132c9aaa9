#pragma once

// Truncated |j,m> ladder at fixed magnetic quantum number m and the operator
// matrices acting on it.
//
// Cylindrical symmetry keeps m conserved, so the library works in one
// m-block at a time: basis states are |j,m> with |m| <= j <= jmax, stored in
// increasing j.  The ladder coefficient
//
//   c_{j,m} = sqrt((j-m)(j+m) / ((2j-1)(2j+1)))
//
// generates all matrix elements used here:
//   J^2    |j,m> = j(j+1) |j,m>
//   cos    |j,m> = c_{j+1,m} |j+1,m> + c_{j,m} |j-1,m>
//   sigma  |j,m> = j c_{j+1,m} |j+1,m> - (j+1) c_{j,m} |j-1,m>
// where sigma = sin(theta) d/dtheta.

#include <complex>

#include <Eigen/Dense>

namespace rotorkick {

using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using StateVector = Eigen::VectorXcd;

/// One m-block of the rotor Hilbert space.
struct RotorBasis {
  int m = 0;
  int jmax = 0;

  RotorBasis() = default;
  /// Throws ConfigError unless jmax >= |m| and jmax >= 1.
  RotorBasis(int m_in, int jmax_in);

  /// Lowest j in the block (= |m|).
  int jmin() const { return m < 0 ? -m : m; }
  /// Number of basis states, jmax - |m| + 1.
  int dimension() const { return jmax - jmin() + 1; }
  /// j value of the basis index k.
  int j_of(int k) const { return jmin() + k; }
  /// Basis index of the level j.
  int index_of(int j) const { return j - jmin(); }

  /// Unit vector on the level j.  Throws ConfigError if j is outside
  /// [jmin, jmax].
  StateVector unit_state(int j) const;
};

/// Matrix representation of an operator on one m-block, tagged with whether
/// it is Hermitian by construction.
struct OperatorMatrix {
  ComplexMatrix mat;
  bool hermitian = false;
};

/// Ladder coefficient c_{j,m}.  Requires j >= 1 and |m| <= j.
double c_coeff(int j, int m);

/// Diagonal matrix of j(j+1).
OperatorMatrix j2_matrix(const RotorBasis& b);

/// Symmetric tridiagonal matrix of cos(theta).
OperatorMatrix cos_matrix(const RotorBasis& b);

/// Matrix of sigma = sin(theta) d/dtheta (not Hermitian).
OperatorMatrix sigma_matrix(const RotorBasis& b);

/// Largest |M - M^dagger| entry.
double hermiticity_defect(const ComplexMatrix& m);

/// Largest |U U^dagger - 1| entry.
double unitarity_defect(const ComplexMatrix& u);

/// exp(i*s*M) for Hermitian M via eigendecomposition.  Throws
/// std::invalid_argument if op is not tagged Hermitian or its defect
/// exceeds 1e-12 * max|entry|.
OperatorMatrix herm_expm(const OperatorMatrix& op, double s);

/// Cached eigendecomposition of a real symmetric operator, for building
/// exp(i*s*M) repeatedly at many values of s (one diagonalization, then a
/// matrix product per call).
class HermitianEigensystem {
 public:
  explicit HermitianEigensystem(const RealMatrix& m);

  /// exp(i*s*M).
  ComplexMatrix unitary(double s) const;
  /// exp(i*s*M) applied to a vector.
  StateVector apply(double s, const StateVector& psi) const;

  const Eigen::VectorXd& eigenvalues() const { return eval_; }

 private:
  Eigen::MatrixXd evec_;
  Eigen::VectorXd eval_;
};

}  // namespace rotorkick

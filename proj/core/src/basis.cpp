#include "rotorkick/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rotorkick/errors.hpp"

namespace rotorkick {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

RotorBasis::RotorBasis(int m_in, int jmax_in) : m(m_in), jmax(jmax_in) {
  if (jmax < jmin() || jmax < 1) {
    throw ConfigError("basis needs jmax >= max(1, |m|); got m=" +
                      std::to_string(m) + " jmax=" + std::to_string(jmax));
  }
}

StateVector RotorBasis::unit_state(int j) const {
  if (j < jmin() || j > jmax) {
    throw ConfigError("level j=" + std::to_string(j) +
                      " outside basis block [" + std::to_string(jmin()) +
                      ", " + std::to_string(jmax) + "]");
  }
  StateVector psi = StateVector::Zero(dimension());
  psi(index_of(j)) = 1.0;
  return psi;
}

double c_coeff(int j, int m) {
  if (j < 1) {
    throw ConfigError("c_coeff needs j >= 1, got j=" + std::to_string(j));
  }
  if (m < -j || m > j) {
    throw ConfigError("c_coeff needs |m| <= j, got j=" + std::to_string(j) +
                      " m=" + std::to_string(m));
  }
  const double jd = j;
  const double md = m;
  return std::sqrt((jd - md) * (jd + md) /
                   ((2.0 * jd - 1.0) * (2.0 * jd + 1.0)));
}

OperatorMatrix j2_matrix(const RotorBasis& b) {
  const int n = b.dimension();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double j = b.j_of(k);
    m(k, k) = j * (j + 1.0);
  }
  return {std::move(m), true};
}

OperatorMatrix cos_matrix(const RotorBasis& b) {
  const int n = b.dimension();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    const double c = c_coeff(b.j_of(k + 1), b.m);
    m(k + 1, k) = c;
    m(k, k + 1) = c;
  }
  return {std::move(m), true};
}

OperatorMatrix sigma_matrix(const RotorBasis& b) {
  const int n = b.dimension();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    const int j = b.j_of(k);
    const double c = c_coeff(j + 1, b.m);
    m(k + 1, k) = static_cast<double>(j) * c;       // raise from |j>
    m(k, k + 1) = -(static_cast<double>(j) + 2.0) * c;  // lower from |j+1>
  }
  return {std::move(m), false};
}

double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& u) {
  const ComplexMatrix id = ComplexMatrix::Identity(u.rows(), u.cols());
  return (u * u.adjoint() - id).cwiseAbs().maxCoeff();
}

OperatorMatrix herm_expm(const OperatorMatrix& op, double s) {
  if (!op.hermitian) {
    throw std::invalid_argument("herm_expm needs a Hermitian-tagged operator");
  }
  const double scale = op.mat.cwiseAbs().maxCoeff();
  if (scale > 0.0 && hermiticity_defect(op.mat) > 1e-12 * scale) {
    throw std::invalid_argument(
        "herm_expm: matrix violates its Hermitian tag");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(op.mat);
  const Eigen::VectorXd& lam = solver.eigenvalues();
  const ComplexMatrix& v = solver.eigenvectors();
  Eigen::VectorXcd phase(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    phase(k) = std::exp(kI * s * lam(k));
  }
  return {v * phase.asDiagonal() * v.adjoint(), false};
}

HermitianEigensystem::HermitianEigensystem(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m);
  evec_ = solver.eigenvectors();
  eval_ = solver.eigenvalues();
}

ComplexMatrix HermitianEigensystem::unitary(double s) const {
  Eigen::VectorXcd phase(eval_.size());
  for (Eigen::Index k = 0; k < eval_.size(); ++k) {
    phase(k) = std::exp(kI * s * eval_(k));
  }
  return evec_ * phase.asDiagonal() * evec_.transpose();
}

StateVector HermitianEigensystem::apply(double s, const StateVector& psi) const {
  Eigen::VectorXcd y = evec_.transpose() * psi;
  for (Eigen::Index k = 0; k < eval_.size(); ++k) {
    y(k) *= std::exp(kI * s * eval_(k));
  }
  return evec_ * y;
}

}  // namespace rotorkick

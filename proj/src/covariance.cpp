#include "eoent/covariance.hpp"

#include <cmath>

#include <Eigen/LU>

#include "eoent/error.hpp"

namespace eoent {

CovarianceMatrix4::CovarianceMatrix4(const Matrix& m) : m_(m) {
  if (!m.allFinite()) throw NumericError("covariance matrix has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw NumericError("covariance matrix is not symmetric");
  m_ = 0.5 * (m + m.transpose());
}

Eigen::Vector2d CovarianceMatrix4::symplectic_eigenvalues() const {
  const double delta = optical_block().determinant() + microwave_block().determinant() +
                       2.0 * correlation_block().determinant();
  const double det = m_.fullPivLu().determinant();
  const double disc = std::max(0.0, delta * delta - 4.0 * det);
  const double root = std::sqrt(disc);
  return {std::sqrt(std::max(0.0, (delta - root) / 2.0)), std::sqrt((delta + root) / 2.0)};
}

bool CovarianceMatrix4::is_physical(double tol) const {
  return symplectic_eigenvalues().minCoeff() >= 0.5 - tol;
}

}  // namespace eoent

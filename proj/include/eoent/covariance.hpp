#pragma once

#include <Eigen/Core>

namespace eoent {

/// 4x4 quadrature covariance matrix over (q_o, p_o, q_mw, p_mw), vacuum
/// variance 1/2. Construction checks symmetry only; physicality is a
/// separate query since intermediate (partially transposed) matrices are
/// legitimately unphysical.
class CovarianceMatrix4 {
 public:
  using Matrix = Eigen::Matrix4d;

  CovarianceMatrix4() : m_(0.5 * Matrix::Identity()) {}
  explicit CovarianceMatrix4(const Matrix& m);

  static CovarianceMatrix4 vacuum() { return CovarianceMatrix4(); }

  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  Eigen::Matrix2d optical_block() const { return m_.topLeftCorner<2, 2>(); }
  Eigen::Matrix2d microwave_block() const { return m_.bottomRightCorner<2, 2>(); }
  Eigen::Matrix2d correlation_block() const { return m_.topRightCorner<2, 2>(); }

  /// Both symplectic eigenvalues of the (un-transposed) matrix.
  Eigen::Vector2d symplectic_eigenvalues() const;
  bool is_physical(double tol = 1e-10) const;

 private:
  Matrix m_;
};

}  // namespace eoent

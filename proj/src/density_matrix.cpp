#include "maser/density_matrix.hpp"

#include <cmath>

namespace maser {

Matrix3c sigma(Level i, Level j) {
  Matrix3c m = Matrix3c::Zero();
  m(i, j) = 1.0;
  return m;
}

DensityMatrix3 DensityMatrix3::pure(Level level) {
  return DensityMatrix3(sigma(level, level));
}

DensityMatrix3 DensityMatrix3::pure(const Eigen::Vector3cd& psi) {
  const Eigen::Vector3cd v = psi.normalized();
  return DensityMatrix3(v * v.adjoint());
}

DensityMatrix3 DensityMatrix3::maximally_mixed() {
  return DensityMatrix3(Matrix3c::Identity() / 3.0);
}

Eigen::Vector3d DensityMatrix3::eigenvalues() const {
  const Matrix3c h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double max_abs(const Matrix3c& m) { return m.cwiseAbs().maxCoeff(); }

PhysicalityReport assert_physical(const DensityMatrix3& rho,
                                  const PhysicalityTolerances& tol) {
  PhysicalityReport r;
  const Matrix3c& m = rho.matrix();
  r.hermiticity_residual = max_abs(m - m.adjoint());
  r.trace_residual = std::abs(m.trace() - cplx(1.0, 0.0));
  r.min_eigenvalue = rho.eigenvalues().minCoeff();
  r.hermitian = r.hermiticity_residual <= tol.hermiticity;
  r.unit_trace = r.trace_residual <= tol.trace;
  r.positive = r.min_eigenvalue >= -tol.eigenvalue;
  return r;
}

}  // namespace maser

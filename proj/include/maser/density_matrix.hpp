#pragma once

// Density matrices of the three-level system.
//
// Basis ordering is fixed everywhere as (g, u, l): index 0 is the ground
// level, 1 the upper maser level, 2 the lower maser level. All states are
// expressed in the rotating frame of the drive.

#include <Eigen/Dense>

#include <complex>

namespace maser {

using cplx = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;

enum Level : int { g = 0, u = 1, l = 2 };

// |i><j| in the (g, u, l) basis.
Matrix3c sigma(Level i, Level j);

struct PhysicalityTolerances {
  double hermiticity = 1e-12;
  double trace = 1e-10;
  double eigenvalue = 1e-10;
};

class DensityMatrix3 {
 public:
  DensityMatrix3() : m_(Matrix3c::Zero()) {}
  explicit DensityMatrix3(const Matrix3c& m) : m_(m) {}

  static DensityMatrix3 pure(Level level);
  static DensityMatrix3 pure(const Eigen::Vector3cd& psi);
  static DensityMatrix3 maximally_mixed();

  cplx operator()(Level i, Level j) const { return m_(i, j); }
  cplx& operator()(Level i, Level j) { return m_(i, j); }
  const Matrix3c& matrix() const { return m_; }

  double population(Level i) const { return m_(i, i).real(); }
  cplx trace() const { return m_.trace(); }

  // Eigenvalues of the Hermitian part, ascending.
  Eigen::Vector3d eigenvalues() const;

 private:
  Matrix3c m_;
};

struct PhysicalityReport {
  bool hermitian = false;
  bool unit_trace = false;
  bool positive = false;
  double hermiticity_residual = 0.0;  // max |rho_ij - conj(rho_ji)|
  double trace_residual = 0.0;        // |tr rho - 1|
  double min_eigenvalue = 0.0;

  bool ok() const { return hermitian && unit_trace && positive; }
};

PhysicalityReport assert_physical(const DensityMatrix3& rho,
                                  const PhysicalityTolerances& tol = {});

double max_abs(const Matrix3c& m);

}  // namespace maser

#pragma once

// Rotating-frame Lindblad dynamics of the driven three-level maser.
//
// In the frame generated by X = omega_l |l><l| + (omega_l + omega_d) |u><u|
// the Hamiltonian is time independent,
//
//   H = -Delta |u><u| + epsilon (|u><l| + |l><u|),
//
// while the bath dissipators keep their lab-frame form. The lab-frame H(t) is
// never integrated.

#include "maser/density_matrix.hpp"
#include "maser/params.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <vector>

namespace maser {

using Matrix9c = Eigen::Matrix<cplx, 9, 9>;
using Vector9c = Eigen::Matrix<cplx, 9, 1>;

Matrix3c rotating_hamiltonian(const EngineParams& params);

// gamma n D[sigma_{alpha g}] rho + gamma (n + 1) D[sigma_{g alpha}] rho.
Matrix3c dissipator(const Matrix3c& rho, Bath bath, const EngineParams& params);

// -i[H, rho] + L_u[rho] + L_l[rho]. Accepts any 3x3 matrix; the map is linear.
Matrix3c master_rhs(const Matrix3c& rho, const EngineParams& params);

// Column stacking: vec(rho)[i + 3 j] = rho(i, j).
Vector9c vectorize(const Matrix3c& rho);
Matrix3c unvectorize(const Vector9c& v);

struct Liouvillian {
  Matrix9c matrix;

  Matrix3c apply(const Matrix3c& rho) const {
    return unvectorize(matrix * vectorize(rho));
  }
  // Row indices of the diagonal entries rho_ii in the stacked vector.
  static constexpr int diagonal_index(Level i) { return i + 3 * i; }
};

// Assembled from Kronecker products, independently of master_rhs:
// vec(A rho B) = (B^T kron A) vec(rho).
Liouvillian build_liouvillian(const EngineParams& params);

// Adaptive Dormand-Prince 5(4) with PI step-size control.
struct StepControl {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double initial_step = 1e-3;
  double min_step = 1e-13;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 20'000'000;
  // Accepted states must stay physical within this slack; otherwise the
  // integrator is considered to have failed.
  double physicality_tol = 1e-8;
  // Early stop once max |rhs| < steady_tol on three consecutive accepted steps.
  bool stop_at_steady_state = false;
  double steady_tol = 1e-12;
};

struct TrajectoryPoint {
  double t;
  DensityMatrix3 rho;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;  // t = 0 first, every accepted step
  bool stopped_early = false;
  std::size_t rejected_steps = 0;

  const TrajectoryPoint& back() const { return points.back(); }
  std::size_t size() const { return points.size(); }
};

Trajectory evolve(const DensityMatrix3& rho0, const EngineParams& params,
                  double t_final, const StepControl& control = {});

// Slowest nonzero relaxation rate, min |Re lambda| over the Liouvillian
// spectrum excluding the stationary eigenvalue. Used to size t_final.
double spectral_gap(const EngineParams& params);

}  // namespace maser

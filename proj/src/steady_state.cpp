#include "maser/steady_state.hpp"

#include <cmath>
#include <sstream>

namespace maser {

double coherence_factor(const EngineParams& p) {
  const double G = total_decay(p);
  const double d = detuning(p);
  return p.epsilon * p.epsilon * G / (0.25 * G * G + d * d);
}

namespace {

// gamma_u gamma_l (3 n_u n_l + 2 n_u + 2 n_l + 1) + C [gamma_u(3n_u+1) +
// gamma_l(3n_l+1)], i.e. the expanded determinant of the 2x2 population
// system. Every term is nonnegative.
double population_denominator(const EngineParams& p, double C) {
  const double k = 3.0 * p.n_u * p.n_l + 2.0 * p.n_u + 2.0 * p.n_l + 1.0;
  return p.gamma_u * p.gamma_l * k +
         C * (p.gamma_u * (3.0 * p.n_u + 1.0) + p.gamma_l * (3.0 * p.n_l + 1.0));
}

}  // namespace

double population_difference(const EngineParams& p) {
  const double C = coherence_factor(p);
  return p.gamma_u * p.gamma_l * (p.n_u - p.n_l) / population_denominator(p, C);
}

SteadyState analytic_steady_state(const EngineParams& params) {
  const EngineParams& p = validate(params);
  const double C = coherence_factor(p);
  const double den = population_denominator(p, C);
  if (!(den > 0.0))
    throw Error(ErrorCode::invalid_params,
                "steady-state denominator is not positive");

  const double shared = C * (p.gamma_u * p.n_u + p.gamma_l * p.n_l);
  const double uu = (p.gamma_u * p.gamma_l * p.n_u * (p.n_l + 1.0) + shared) / den;
  const double ll = (p.gamma_u * p.gamma_l * p.n_l * (p.n_u + 1.0) + shared) / den;
  const double gg = 1.0 - uu - ll;
  const cplx ul = -p.epsilon * population_difference(p) /
                  cplx(detuning(p), 0.5 * total_decay(p));

  Matrix3c m = Matrix3c::Zero();
  m(g, g) = gg;
  m(u, u) = uu;
  m(l, l) = ll;
  m(u, l) = ul;
  m(l, u) = std::conj(ul);
  return {DensityMatrix3(m), SteadyStateSource::analytic, 0.0};
}

AFCoefficients af_coefficients(const EngineParams& params) {
  const EngineParams& p = validate(params);
  const double G = total_decay(p);
  const double d = detuning(p);
  const double eps2 = p.epsilon * p.epsilon;
  const double gg4 = 0.25 * p.gamma_l * p.gamma_u;
  const double k = 3.0 * p.n_u * p.n_l + 2.0 * p.n_u + 2.0 * p.n_l + 1.0;
  const double m = p.gamma_u * (3.0 * p.n_u + 1.0) + p.gamma_l * (3.0 * p.n_l + 1.0);
  const double A = gg4 * G * eps2;
  const double F = 0.5 * G * 0.5 * m * eps2 + gg4 * k * (0.25 * G * G + d * d);
  return {A, F};
}

double rate_u_to_l(const EngineParams& params) {
  const EngineParams& p = validate(params);
  return coherence_factor(p) * population_difference(p);
}

SteadyState nullspace_steady_state(const EngineParams& params, double rank_tol) {
  const EngineParams& p = validate(params);
  const Liouvillian L = build_liouvillian(p);
  Eigen::JacobiSVD<Matrix9c> svd(L.matrix, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(7) <= rank_tol * s(0) || !(s(8) <= 1e-9 * s(0))) {
    std::ostringstream os;
    os.precision(6);
    os << "Liouvillian null space is not one-dimensional: smallest singular "
          "values "
       << s(8) << " and " << s(7) << " (largest " << s(0) << ")";
    throw Error(ErrorCode::degenerate_null_space, os.str());
  }
  Matrix3c m = unvectorize(svd.matrixV().col(8));
  m /= m.trace();
  const double residual = 0.5 * max_abs(m - m.adjoint());
  m = 0.5 * (m + m.adjoint());
  m /= m.trace().real();
  return {DensityMatrix3(m), SteadyStateSource::nullspace, residual};
}

SteadyState evolved_steady_state(const EngineParams& params,
                                 double relaxation_times, StepControl control) {
  const EngineParams& p = validate(params);
  const double t_final = relaxation_times / spectral_gap(p);
  control.stop_at_steady_state = true;
  const Trajectory traj = evolve(DensityMatrix3::pure(g), p, t_final, control);
  return {traj.back().rho, SteadyStateSource::evolved, 0.0};
}

}  // namespace maser

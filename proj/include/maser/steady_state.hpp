#pragma once

#include "maser/density_matrix.hpp"
#include "maser/lindblad.hpp"
#include "maser/params.hpp"

namespace maser {

enum class SteadyStateSource { analytic, nullspace, evolved };

struct SteadyState {
  DensityMatrix3 rho;
  SteadyStateSource source = SteadyStateSource::analytic;
  // max |rho - rho^+| / 2 removed by hermitization (numeric sources only).
  double hermitization_residual = 0.0;

  double gg() const { return rho.population(g); }
  double uu() const { return rho.population(u); }
  double ll() const { return rho.population(l); }
  cplx ul() const { return rho(u, l); }
};

// C = eps^2 G / (G^2/4 + Delta^2) with G = gamma_u(n_u+1) + gamma_l(n_l+1).
// R_{u->l} = C (rho_uu - rho_ll).
double coherence_factor(const EngineParams& params);

// rho_uu - rho_ll in steady state, written with an explicit (n_u - n_l)
// factor so its sign is exact in floating point.
double population_difference(const EngineParams& params);

// Closed-form steady state of the rotating-frame master equation.
SteadyState analytic_steady_state(const EngineParams& params);

struct AFCoefficients {
  double A;
  double F;
};
AFCoefficients af_coefficients(const EngineParams& params);

// Net rate of u -> l transitions driven by the field.
double rate_u_to_l(const EngineParams& params);

// Null vector of the Liouvillian (right singular vector of the smallest
// singular value), phase fixed by its trace, hermitized and normalized.
// Throws Error(degenerate_null_space) when the two smallest singular values
// are both below rank_tol times the largest.
SteadyState nullspace_steady_state(const EngineParams& params,
                                   double rank_tol = 1e-12);

// Step control for steady-state runs. The integrator defaults (rel 1e-8)
// leave the late-time state accurate only to about 1e-8.
inline StepControl steady_state_control() {
  StepControl c;
  c.abs_tol = 1e-12;
  c.rel_tol = 1e-10;
  return c;
}

// Integrates from |g><g| for `relaxation_times` times 1/spectral_gap.
SteadyState evolved_steady_state(const EngineParams& params,
                                 double relaxation_times = 40.0,
                                 StepControl control = steady_state_control());

}  // namespace maser

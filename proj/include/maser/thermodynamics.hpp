#pragma once

// Power, heat flows, bath temperatures and Spohn entropy production.
//
// Sign convention: positive P and Qdot mean energy flowing into the system.
// All steady-state quantities take dS/dt = 0.
//
// Two ways of splitting energy into heat and work are provided:
//   bare  - from the bare Hamiltonian H0: P0 = -R (omega_u - omega_l),
//           Q0u = R omega_u, Q0l = -R omega_l
//   full  - from the full driven Hamiltonian: P = -R omega_d,
//           Qu = R omega~_u, Ql = -R omega~_l
// where omega~ are the detuning-corrected effective energies. Bath
// temperatures come either from the bare level energies (naive) or from the
// effective energies (corrected).
//
// The von Neumann entropy is S = -Tr rho ln rho (the usual sign; only dS/dt
// enters the entropy production so the sign choice does not affect the
// steady-state results).

#include "maser/density_matrix.hpp"
#include "maser/lindblad.hpp"
#include "maser/params.hpp"

#include <optional>
#include <vector>

namespace maser {

enum class FlowConvention { bare, full };

struct FlowReport {
  FlowConvention convention = FlowConvention::bare;
  double power = 0.0;
  double heat_u = 0.0;
  double heat_l = 0.0;

  double sum() const { return power + heat_u + heat_l; }
  // |P + Qu + Ql| / max(|P|, |Qu|, |Ql|); zero when all flows vanish.
  double conservation_residual() const;
};

FlowReport bare_flows(const EngineParams& params);
FlowReport full_flows(const EngineParams& params);

struct EffectiveEnergies {
  double omega_u;
  double omega_l;
  double weight_denominator;  // gamma_u(n_u+1) + gamma_l(n_l+1)

  // A nonpositive effective energy leaves the corrected temperature undefined.
  bool temperatures_defined() const { return omega_u > 0.0 && omega_l > 0.0; }
};

EffectiveEnergies effective_energies(const EngineParams& params);

enum class TemperatureConvention { naive, corrected };

// omega / ln(1 + 1/n). n = 0 gives 0; very large n gives +infinity.
double bath_temperature(const EngineParams& params, Bath bath,
                        TemperatureConvention convention);

// ln(1 + 1/n) = omega / T, the inverse temperature per unit energy.
double log_occupation_ratio(double n);

enum class EntropyConvention { bare, full_corrected, full_naive };

struct EntropyReport {
  EntropyConvention convention;
  double sigma;
  double temperature_u;
  double temperature_l;
  double heat_u;
  double heat_l;
  double entropy_rate = 0.0;  // dS/dt, zero in steady state
};

EntropyReport entropy_production(const EngineParams& params,
                                 EntropyConvention convention);

double von_neumann_entropy(const DensityMatrix3& rho);

// Instantaneous bare heat flows omega_alpha <alpha| L_alpha[rho] |alpha>.
struct BareHeat {
  double heat_u;
  double heat_l;
};
BareHeat bare_heat_rates(const EngineParams& params, const DensityMatrix3& rho);

struct TransientEntropySample {
  double t;
  double entropy;
  double entropy_rate;
  double sigma_bare;
};

// dS/dt from second-order finite differences on the actual (nonuniform)
// sample times, one-sided three-point stencils at the ends. Only the bare
// convention is offered away from steady state.
std::vector<TransientEntropySample> transient_entropy_rate(
    const Trajectory& trajectory, const EngineParams& params);

struct Efficiency {
  double eta;
  double carnot_bound;  // 1 - T~_l / T~_u
  bool satisfied;       // eta < carnot_bound
};

// Requires the engine regime R > 0.
Efficiency efficiency(const EngineParams& params);

}  // namespace maser

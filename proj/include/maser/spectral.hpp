#pragma once

// Broadened-level picture of the u -> l transition.
//
// Each maser level carries a normalized Lorentzian spectral function of full
// width gamma_alpha (1 + n_alpha). The drive moves weight from energy omega on
// level u to omega - omega_d on level l, so rates and mean energies are
// overlap integrals of A_u(omega) A_l(omega - omega_d).
//
// The closed forms work in half-width notation: a LorentzianPair holds half
// widths g_u, g_l and the separation Delta of the two centres. The physical
// mapping is g_alpha = gamma_alpha (1 + n_alpha) / 2 (see pair_from_params);
// keep all factor-of-two conversions inside that adapter.

#include "maser/params.hpp"

namespace maser {

struct LorentzianPair {
  double g_u;
  double g_l;
  double delta;
};

LorentzianPair pair_from_params(const EngineParams& params);

// A_alpha(omega), unit integral, peak at omega_alpha.
double spectral_function(Bath bath, double omega, const EngineParams& params);

// P(w, Delta) = (1/2pi) [2 g_u / (w^2 + g_u^2)] [2 g_l / ((w - Delta)^2 + g_l^2)]
double lorentzian_product(const LorentzianPair& pair, double omega);

// Residue-theorem results:
//   int P dw   = 2 (g_u + g_l) / (Delta^2 + (g_u + g_l)^2)
//   int w P dw = 2 g_u Delta  / (Delta^2 + (g_u + g_l)^2)
double lorentzian_overlap_closed(const LorentzianPair& pair);
double lorentzian_first_moment_closed(const LorentzianPair& pair);

struct QuadratureOptions {
  double rel_tol = 1e-12;
  // Integration window is +-window_widths * max(FWHM) around the centres;
  // the algebraic tails beyond it are added analytically.
  double window_widths = 1e4;
  unsigned max_depth = 15;
  // Give up when the summed error estimate exceeds accept_tol times the L1
  // norm of the integrand over the window.
  double accept_tol = 1e-10;
};

struct QuadratureResult {
  double value;
  double error_estimate;
};

// Adaptive Gauss-Kronrod over a window with breakpoints clustered at both
// peaks, plus the leading-order analytic tail. Throws
// Error(quadrature_failure) when the error estimate exceeds the tolerance.
QuadratureResult lorentzian_overlap_quadrature(const LorentzianPair& pair,
                                               const QuadratureOptions& opt = {});
QuadratureResult lorentzian_first_moment_quadrature(
    const LorentzianPair& pair, const QuadratureOptions& opt = {});

struct SpectralCheck {
  double closed_form;
  double quadrature;
  double relative_deviation;
};

SpectralCheck check_overlap(const LorentzianPair& pair,
                            const QuadratureOptions& opt = {});
SpectralCheck check_first_moment(const LorentzianPair& pair,
                                 const QuadratureOptions& opt = {});

// int A_u(w) A_l(w - omega_d) dw by quadrature.
double spectral_overlap(const EngineParams& params,
                        const QuadratureOptions& opt = {});

// R = 2 pi eps^2 (rho_uu - rho_ll) int A_u(w) A_l(w - omega_d) dw, with the
// occupation difference taken energy independent.
double greens_rate(const EngineParams& params, double population_difference,
                   const QuadratureOptions& opt = {});

// <w>_u = int w A_u A_l dw / int A_u A_l dw by quadrature.
double mean_transition_energy_u(const EngineParams& params,
                                const QuadratureOptions& opt = {});

inline double mean_transition_energy_l(const EngineParams& params,
                                       const QuadratureOptions& opt = {}) {
  return mean_transition_energy_u(params, opt) - params.omega_d;
}

}  // namespace maser

#include "maser/thermodynamics.hpp"

#include "maser/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace maser {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTemperatureOverflow = 1e300;

// -Qdot / T written as -Qdot * ln(1 + 1/n) / omega so that n = 0 (T = 0)
// yields +-infinity instead of a division by zero, and no flow gives zero.
double entropy_flux(double heat, double log_ratio, double energy) {
  if (heat == 0.0) return 0.0;
  return -heat * (log_ratio / energy);
}

// -Qu/Tu - Ql/Tl for the full flows Qu = R w~_u, Ql = -R w~_l and
// temperatures T = energy / ln(1 + 1/n), evaluated in extended precision.
// The two terms cancel to the order of (n_u - n_l), so a double evaluation
// loses digits in proportion to that cancellation.
double full_spohn_sum(const EngineParams& p, double R, bool corrected) {
  if (R == 0.0) return 0.0;
  using ld = long double;
  const ld G = ld(p.gamma_u) * (ld(p.n_u) + 1) + ld(p.gamma_l) * (ld(p.n_l) + 1);
  const ld d = ld(p.omega_d) - (ld(p.omega_u) - ld(p.omega_l));
  const ld wu = ld(p.omega_u) + d * ld(p.gamma_u) * (ld(p.n_u) + 1) / G;
  const ld wl = ld(p.omega_l) - d * ld(p.gamma_l) * (ld(p.n_l) + 1) / G;
  const ld Lu = p.n_u == 0.0 ? HUGE_VALL : std::log1p(1 / ld(p.n_u));
  const ld Ll = p.n_l == 0.0 ? HUGE_VALL : std::log1p(1 / ld(p.n_l));
  const ld tu = corrected ? wu : ld(p.omega_u);
  const ld tl = corrected ? wl : ld(p.omega_l);
  const ld heat_u = ld(R) * wu;
  const ld heat_l = -ld(R) * wl;
  return static_cast<double>(-heat_u * (Lu / tu) - heat_l * (Ll / tl));
}

}  // namespace

double FlowReport::conservation_residual() const {
  const double scale =
      std::max({std::abs(power), std::abs(heat_u), std::abs(heat_l)});
  return scale == 0.0 ? 0.0 : std::abs(sum()) / scale;
}

FlowReport bare_flows(const EngineParams& params) {
  const EngineParams& p = validate(params);
  const double R = rate_u_to_l(p);
  return {FlowConvention::bare, -R * (p.omega_u - p.omega_l), R * p.omega_u,
          -R * p.omega_l};
}

EffectiveEnergies effective_energies(const EngineParams& params) {
  const EngineParams& p = validate(params);
  const double G = total_decay(p);
  const double d = detuning(p);
  return {p.omega_u + d * p.gamma_u * (p.n_u + 1.0) / G,
          p.omega_l - d * p.gamma_l * (p.n_l + 1.0) / G, G};
}

FlowReport full_flows(const EngineParams& params) {
  const EngineParams& p = validate(params);
  const double R = rate_u_to_l(p);
  const EffectiveEnergies e = effective_energies(p);
  return {FlowConvention::full, -R * p.omega_d, R * e.omega_u, -R * e.omega_l};
}

double log_occupation_ratio(double n) {
  if (n == 0.0) return kInf;
  return std::log1p(1.0 / n);
}

double bath_temperature(const EngineParams& params, Bath bath,
                        TemperatureConvention convention) {
  const EngineParams& p = validate(params);
  double energy = level_energy(p, bath);
  if (convention == TemperatureConvention::corrected) {
    const EffectiveEnergies e = effective_energies(p);
    energy = bath == Bath::u ? e.omega_u : e.omega_l;
    if (!(energy > 0.0))
      throw Error(ErrorCode::undefined_temperature,
                  "effective energy nonpositive; temperature convention "
                  "undefined");
  }
  const double n = occupation(p, bath);
  if (n == 0.0) return 0.0;
  const double ratio = log_occupation_ratio(n);
  if (ratio == 0.0) return kInf;
  const double T = energy / ratio;
  return T > kTemperatureOverflow ? kInf : T;
}

EntropyReport entropy_production(const EngineParams& params,
                                 EntropyConvention convention) {
  const EngineParams& p = validate(params);

  switch (convention) {
    case EntropyConvention::bare: {
      const FlowReport f = bare_flows(p);
      const double R = rate_u_to_l(p);
      // ln(1+1/n_l) - ln(1+1/n_u) = ln(1 + (n_u - n_l) / (n_l (n_u + 1)));
      // carries the exact sign of n_u - n_l.
      double sigma = 0.0;
      if (R != 0.0 && p.n_u != p.n_l) {
        const double log_diff =
            p.n_l == 0.0 ? kInf
                         : std::log1p((p.n_u - p.n_l) / (p.n_l * (p.n_u + 1.0)));
        sigma = R * log_diff;
      }
      return {convention,
              sigma,
              bath_temperature(p, Bath::u, TemperatureConvention::naive),
              bath_temperature(p, Bath::l, TemperatureConvention::naive),
              f.heat_u,
              f.heat_l};
    }
    case EntropyConvention::full_corrected: {
      const FlowReport f = full_flows(p);
      const double Tu = bath_temperature(p, Bath::u, TemperatureConvention::corrected);
      const double Tl = bath_temperature(p, Bath::l, TemperatureConvention::corrected);
      const double sigma = full_spohn_sum(p, rate_u_to_l(p), true);
      return {convention, sigma, Tu, Tl, f.heat_u, f.heat_l};
    }
    case EntropyConvention::full_naive: {
      const FlowReport f = full_flows(p);
      const double sigma = full_spohn_sum(p, rate_u_to_l(p), false);
      return {convention,
              sigma,
              bath_temperature(p, Bath::u, TemperatureConvention::naive),
              bath_temperature(p, Bath::l, TemperatureConvention::naive),
              f.heat_u,
              f.heat_l};
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown entropy convention");
}

double von_neumann_entropy(const DensityMatrix3& rho) {
  double s = 0.0;
  for (double lambda : rho.eigenvalues())
    if (lambda > 0.0) s -= lambda * std::log(lambda);
  return s;
}

BareHeat bare_heat_rates(const EngineParams& p, const DensityMatrix3& rho) {
  const double gg = rho.population(g);
  return {p.omega_u * (p.gamma_u * p.n_u * gg -
                       p.gamma_u * (p.n_u + 1.0) * rho.population(u)),
          p.omega_l * (p.gamma_l * p.n_l * gg -
                       p.gamma_l * (p.n_l + 1.0) * rho.population(l))};
}

std::vector<TransientEntropySample> transient_entropy_rate(
    const Trajectory& trajectory, const EngineParams& params) {
  const EngineParams& p = validate(params);
  const auto& pts = trajectory.points;
  const std::size_t n = pts.size();
  if (n < 3)
    throw Error(ErrorCode::invalid_argument,
                "transient entropy rate needs at least 3 trajectory samples");

  std::vector<double> t(n), S(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = pts[i].t;
    S[i] = von_neumann_entropy(pts[i].rho);
  }

  // Three-point Lagrange derivative at x0 through (x0,y0),(x1,y1),(x2,y2).
  auto derivative = [](double x0, double x1, double x2, double y0, double y1,
                       double y2, double at) {
    const double d0 = ((at - x1) + (at - x2)) / ((x0 - x1) * (x0 - x2));
    const double d1 = ((at - x0) + (at - x2)) / ((x1 - x0) * (x1 - x2));
    const double d2 = ((at - x0) + (at - x1)) / ((x2 - x0) * (x2 - x1));
    return d0 * y0 + d1 * y1 + d2 * y2;
  };

  const double Lu = log_occupation_ratio(p.n_u);
  const double Ll = log_occupation_ratio(p.n_l);

  std::vector<TransientEntropySample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = std::clamp<std::size_t>(i, 1, n - 2);
    const double dS = derivative(t[c - 1], t[c], t[c + 1], S[c - 1], S[c],
                                 S[c + 1], t[i]);
    const BareHeat q = bare_heat_rates(p, pts[i].rho);
    const double sigma = dS + entropy_flux(q.heat_u, Lu, p.omega_u) +
                         entropy_flux(q.heat_l, Ll, p.omega_l);
    out[i] = {t[i], S[i], dS, sigma};
  }
  return out;
}

Efficiency efficiency(const EngineParams& params) {
  const EngineParams& p = validate(params);
  if (!(rate_u_to_l(p) > 0.0))
    throw Error(ErrorCode::not_engine_regime, "not in engine regime (R <= 0)");
  const EffectiveEnergies e = effective_energies(p);
  const double Tu = bath_temperature(p, Bath::u, TemperatureConvention::corrected);
  const double Tl = bath_temperature(p, Bath::l, TemperatureConvention::corrected);
  const double eta = p.omega_d / e.omega_u;
  const double bound = 1.0 - Tl / Tu;
  return {eta, bound, eta < bound};
}

}  // namespace maser

#include "maser/thermodynamics.hpp"

#include "maser/spectral.hpp"
#include "maser/steady_state.hpp"

#include "frozen.hpp"
#include "random_params.hpp"

#include <doctest.h>

#include <cmath>

using namespace maser;
using maser::testing::random_param_sets;
namespace fz = maser::frozen;

namespace {

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

const EngineParams kViolation{10, 5, 6, 0.5, 1, 1, 1.1, 1.0};

}  // namespace

TEST_CASE("bare flows at the benchmark") {
  const auto f = bare_flows(benchmark_params());
  CHECK(close(f.power, fz::P0, 1e-14));
  CHECK(close(f.heat_u, fz::Q0u, 1e-14));
  CHECK(close(f.heat_l, fz::Q0l, 1e-14));
  CHECK(f.conservation_residual() < 1e-15);
}

TEST_CASE("bare heat from the trace formula on the null-space state") {
  const EngineParams p = benchmark_params();
  const auto q = bare_heat_rates(p, nullspace_steady_state(p).rho);
  CHECK(close(q.heat_u, fz::Q0u, 1e-10));
  CHECK(close(q.heat_l, fz::Q0l, 1e-10));
}

TEST_CASE("full flows at the benchmark") {
  const EngineParams p = benchmark_params();
  const auto f = full_flows(p);
  CHECK(close(f.power, fz::P, 1e-14));
  CHECK(close(f.heat_u, fz::Qu, 1e-14));
  CHECK(close(f.heat_l, fz::Ql, 1e-14));

  // Coherence route: Qu = Q0u - (gamma_u (n_u+1) / 2) (Re rho_ul / Im rho_ul) R.
  const auto ns = nullspace_steady_state(p);
  const double R = rate_u_to_l(p);
  const double ratio = ns.ul().real() / ns.ul().imag();
  const double qu = fz::Q0u - 0.5 * p.gamma_u * (p.n_u + 1) * ratio * R;
  const double ql = fz::Q0l - 0.5 * p.gamma_l * (p.n_l + 1) * ratio * R;
  CHECK(close(qu, f.heat_u, 1e-10));
  CHECK(close(ql, f.heat_l, 1e-10));
}

TEST_CASE("flows vanish at equal occupations") {
  EngineParams p = benchmark_params();
  p.n_u = p.n_l;
  for (const auto& f : {bare_flows(p), full_flows(p)}) {
    CHECK(f.power == 0.0);
    CHECK(f.heat_u == 0.0);
    CHECK(f.heat_l == 0.0);
  }
}

TEST_CASE("bath relabeling maps bare flows") {
  // Exchanging u and l changes which level is higher; compare the rate
  // instead of requiring a valid relabeled parameter set: R(u <-> l) enters
  // with opposite sign through n_u - n_l.
  EngineParams p = benchmark_params();
  p.gamma_u = 0.7;
  p.gamma_l = 1.3;
  EngineParams q = p;
  std::swap(q.gamma_u, q.gamma_l);
  std::swap(q.n_u, q.n_l);
  // Delta -> -Delta keeps the Lorentzian weights; R flips sign.
  q.omega_d = (q.omega_u - q.omega_l) - detuning(p);
  CHECK(close(rate_u_to_l(q), -rate_u_to_l(p), 1e-13));
  const auto a = bare_flows(p), b = bare_flows(q);
  CHECK(close(b.heat_u, -a.heat_u, 1e-13));
  CHECK(close(b.heat_l, -a.heat_l, 1e-13));
  CHECK(close(b.power, -a.power, 1e-13));
}

TEST_CASE("resonance makes both conventions agree") {
  EngineParams p = benchmark_params();
  p.omega_d = p.omega_u - p.omega_l;
  const auto a = bare_flows(p), b = full_flows(p);
  CHECK(a.power == b.power);
  CHECK(a.heat_u == b.heat_u);
  CHECK(a.heat_l == b.heat_l);
  const auto e = effective_energies(p);
  CHECK(e.omega_u == p.omega_u);
  CHECK(e.omega_l == p.omega_l);
  CHECK(efficiency(p).eta == doctest::Approx(1 - p.omega_l / p.omega_u).epsilon(1e-15));
}

TEST_CASE("effective energies") {
  const EngineParams p = benchmark_params();
  const auto e = effective_energies(p);
  CHECK(e.omega_u == doctest::Approx(fz::omega_tilde_u).epsilon(1e-15));
  CHECK(e.omega_l == doctest::Approx(fz::omega_tilde_l).epsilon(1e-15));
  CHECK(e.weight_denominator == 5.0);
  CHECK(e.temperatures_defined());
  CHECK(std::abs(mean_transition_energy_u(p) - e.omega_u) < 1e-8 * e.omega_u);

  EngineParams narrow = p;
  narrow.gamma_l = 1e-12;
  const auto en = effective_energies(narrow);
  CHECK(en.omega_u == doctest::Approx(p.omega_u + detuning(p)).epsilon(1e-10));
  CHECK(en.omega_l == doctest::Approx(p.omega_l).epsilon(1e-10));

  EngineParams far = p;
  far.omega_d = 40.0;
  CHECK_FALSE(effective_energies(far).temperatures_defined());
}

TEST_CASE("temperatures") {
  const EngineParams p = benchmark_params();
  using TC = TemperatureConvention;
  CHECK(close(bath_temperature(p, Bath::u, TC::naive), fz::T_u, 1e-15));
  CHECK(close(bath_temperature(p, Bath::l, TC::naive), fz::T_l, 1e-15));
  CHECK(close(bath_temperature(p, Bath::u, TC::corrected), fz::Tt_u, 1e-15));
  CHECK(close(bath_temperature(p, Bath::l, TC::corrected), fz::Tt_l, 1e-15));

  EngineParams cold = p;
  cold.n_l = 0.0;
  CHECK(bath_temperature(cold, Bath::l, TC::naive) == 0.0);
  EngineParams hot = p;
  hot.n_u = 1e305;
  CHECK(std::isinf(bath_temperature(hot, Bath::u, TC::naive)));

  EngineParams far = p;
  far.omega_d = 40.0;
  try {
    bath_temperature(far, Bath::l, TC::corrected);
    FAIL("expected undefined_temperature");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::undefined_temperature);
  }
  CHECK_NOTHROW(bath_temperature(far, Bath::l, TC::naive));
}

TEST_CASE("entropy production at the benchmark") {
  const EngineParams p = benchmark_params();
  const auto b = entropy_production(p, EntropyConvention::bare);
  const auto c = entropy_production(p, EntropyConvention::full_corrected);
  const auto n = entropy_production(p, EntropyConvention::full_naive);
  CHECK(close(b.sigma, fz::sigma_bare, 1e-14));
  CHECK(close(c.sigma, fz::sigma_bare, 1e-14));
  CHECK(close(n.sigma, fz::sigma_naive, 1e-14));
  CHECK(b.entropy_rate == 0.0);
  CHECK(close(c.temperature_u, fz::Tt_u, 1e-15));
  CHECK(close(n.temperature_u, fz::T_u, 1e-15));
  CHECK(close(c.heat_u, fz::Qu, 1e-14));
  CHECK(close(b.heat_u, fz::Q0u, 1e-14));
}

TEST_CASE("documented violation point") {
  const EngineParams& p = kViolation;
  const double R = rate_u_to_l(p);
  CHECK(close(R, fz::violation::R, 1e-13));
  const double naive = entropy_production(p, EntropyConvention::full_naive).sigma;
  CHECK(close(naive, fz::violation::sigma_naive, 1e-12));
  CHECK(close(naive / R, fz::violation::naive_over_R, 1e-12));
  CHECK(naive < 0.0);
  CHECK(close(entropy_production(p, EntropyConvention::bare).sigma,
              fz::violation::sigma_bare, 1e-13));
  CHECK(close(entropy_production(p, EntropyConvention::full_corrected).sigma,
              fz::violation::sigma_bare, 1e-12));
  const auto e = effective_energies(p);
  CHECK(close(e.omega_u, fz::violation::omega_tilde_u, 1e-15));
  CHECK(close(e.omega_l, fz::violation::omega_tilde_l, 1e-15));
  const auto eff = efficiency(p);
  CHECK(close(eff.eta, fz::violation::eta, 1e-15));
  CHECK(close(eff.carnot_bound, fz::violation::carnot, 1e-14));
  CHECK(eff.satisfied);
}

TEST_CASE("equilibrium gives zero entropy production") {
  EngineParams p = benchmark_params();
  p.n_u = p.n_l = 1.5;
  for (auto c : {EntropyConvention::bare, EntropyConvention::full_corrected,
                 EntropyConvention::full_naive})
    CHECK(entropy_production(p, c).sigma == 0.0);
  p = benchmark_params();
  p.epsilon = 0.0;
  CHECK(entropy_production(p, EntropyConvention::bare).sigma == 0.0);
}

TEST_CASE("efficiency") {
  const auto e = efficiency(benchmark_params());
  CHECK(close(e.eta, fz::eta, 1e-15));
  CHECK(close(e.carnot_bound, fz::carnot, 1e-14));
  CHECK(e.satisfied);

  EngineParams fridge = benchmark_params();
  std::swap(fridge.n_u, fridge.n_l);
  try {
    efficiency(fridge);
    FAIL("expected not_engine_regime");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::not_engine_regime);
  }
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(DensityMatrix3::pure(u)) == 0.0);
  CHECK(von_neumann_entropy(DensityMatrix3::maximally_mixed()) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-14));
  Matrix3c m = Matrix3c::Zero();
  m(0, 0) = m(1, 1) = 0.5;
  CHECK(von_neumann_entropy(DensityMatrix3(m)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  SeededUniform rng(3);
  for (int i = 0; i < 20; ++i) {
    const double s = von_neumann_entropy(DensityMatrix3(maser::testing::random_density(rng)));
    CHECK(s >= 0.0);
    CHECK(s <= std::log(3.0) + 1e-12);
  }
}

TEST_CASE("transient entropy rate") {
  const EngineParams p = benchmark_params();
  const double sigma0 = entropy_production(p, EntropyConvention::bare).sigma;

  const auto from_g = transient_entropy_rate(
      evolve(DensityMatrix3::pure(g), p, 200.0, steady_state_control()), p);
  for (const auto& s : from_g) CHECK(s.sigma_bare >= -1e-8);
  CHECK(std::abs(from_g.back().sigma_bare - sigma0) < 1e-6);

  const auto ss = analytic_steady_state(p);
  const auto stationary =
      transient_entropy_rate(evolve(ss.rho, p, 20.0, steady_state_control()), p);
  for (const auto& s : stationary) {
    CHECK(std::abs(s.entropy_rate) < 1e-8);
    CHECK(std::abs(s.sigma_bare - sigma0) < 1e-8);
  }

  EngineParams eq = p;
  eq.epsilon = 0;
  eq.n_u = eq.n_l = 1.0;
  const auto flat = transient_entropy_rate(
      evolve(analytic_steady_state(eq).rho, eq, 20.0), eq);
  for (const auto& s : flat) CHECK(std::abs(s.sigma_bare) < 1e-9);

  Trajectory two;
  two.points = {{0.0, ss.rho}, {1.0, ss.rho}};
  CHECK_THROWS_AS(transient_entropy_rate(two, p), Error);
}

TEST_CASE("thermodynamic properties on random sets") {
  for (const auto& p : random_param_sets(2000, 61)) {
    const double s0 = entropy_production(p, EntropyConvention::bare).sigma;
    CHECK(s0 >= 0.0);
    if (p.n_u != p.n_l) CHECK(s0 > 0.0);
    for (const auto& f : {bare_flows(p), full_flows(p)})
      CHECK(f.conservation_residual() < 1e-10);
    const auto e = effective_energies(p);
    const double scale = std::max({std::abs(e.omega_u), std::abs(e.omega_l), p.omega_d});
    CHECK(std::abs(e.omega_u - e.omega_l - p.omega_d) <= 8 * 2.3e-16 * scale);
    const double R = rate_u_to_l(p);
    if (R != 0.0) CHECK(close(full_flows(p).power / -R, p.omega_d, 1e-15));
    if (!e.temperatures_defined()) continue;
    const double sc = entropy_production(p, EntropyConvention::full_corrected).sigma;
    CHECK(close(sc, s0, 1e-12));
    if (R > 0) CHECK(efficiency(p).satisfied);
  }
}

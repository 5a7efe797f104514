#include "maser/sweep.hpp"

#include "maser/lindblad.hpp"
#include "maser/steady_state.hpp"
#include "maser/thermodynamics.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#ifndef MASER_VERSION
#define MASER_VERSION "unknown"
#endif

namespace maser {

namespace {

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorCode::config_error, msg);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    config_error("invalid number '" + std::string(s) + "' in " + std::string(what));
  return v;
}

double relative_difference(double a, double b) {
  if (a == b) return 0.0;
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) / scale;
}

// Entrywise max deviation between two density matrices.
double max_deviation(const DensityMatrix3& a, const DensityMatrix3& b) {
  return max_abs(a.matrix() - b.matrix());
}

}  // namespace

void set_tolerance(Tolerances& t, std::string_view name, double v) {
  if (name == "physicality") t.physicality = v;
  else if (name == "steady_state_agreement") t.steady_state_agreement = v;
  else if (name == "rhs_residual") t.rhs_residual = v;
  else if (name == "evolve_convergence") t.evolve_convergence = v;
  else if (name == "conservation") t.conservation = v;
  else if (name == "sigma_identity") t.sigma_identity = v;
  else if (name == "omega_identity_ulps") t.omega_identity_ulps = v;
  else if (name == "greens_rate") t.greens_rate = v;
  else if (name == "mean_energy") t.mean_energy = v;
  else if (name == "violation_threshold") t.violation_threshold = v;
  else if (name == "rank_tol") t.rank_tol = v;
  else if (name == "relaxation_times") t.relaxation_times = v;
  else if (name == "quadrature_rel_tol") t.quadrature_rel_tol = v;
  else if (name == "quadrature_accept_tol") t.quadrature_accept_tol = v;
  else config_error("unknown tolerance '" + std::string(name) + "'");
}

bool is_parameter_name(std::string_view n) {
  return n == "omega_u" || n == "omega_l" || n == "omega_d" || n == "epsilon" ||
         n == "gamma_u" || n == "gamma_l" || n == "n_u" || n == "n_l" ||
         n == "delta";
}

void set_parameter(EngineParams& p, std::string_view n, double v) {
  if (n == "omega_u") p.omega_u = v;
  else if (n == "omega_l") p.omega_l = v;
  else if (n == "omega_d") p.omega_d = v;
  else if (n == "epsilon") p.epsilon = v;
  else if (n == "gamma_u") p.gamma_u = v;
  else if (n == "gamma_l") p.gamma_l = v;
  else if (n == "n_u") p.n_u = v;
  else if (n == "n_l") p.n_l = v;
  else if (n == "delta") p.omega_d = p.omega_u - p.omega_l + v;
  else config_error("unknown parameter '" + std::string(n) + "'");
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = min;
    return v;
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(count - 1);
    v[i] = log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
               : min + f * (max - min);
  }
  v.front() = min;
  v.back() = max;
  return v;
}

SweepAxis parse_axis(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 4 && parts.size() != 5)
    config_error("sweep axis must be name:min:max:count[:log], got '" +
                 std::string(spec) + "'");
  SweepAxis a;
  a.name = std::string(parts[0]);
  if (!is_parameter_name(a.name))
    config_error("unknown sweep parameter '" + a.name + "'");
  a.min = to_double(parts[1], spec);
  a.max = to_double(parts[2], spec);
  const double count = to_double(parts[3], spec);
  if (!(count >= 1.0) || count != std::floor(count))
    config_error("sweep count must be a positive integer in '" + std::string(spec) + "'");
  a.count = static_cast<std::size_t>(count);
  if (parts.size() == 5) {
    if (parts[4] != "log" && parts[4] != "lin")
      config_error("sweep spacing must be 'log' or 'lin' in '" + std::string(spec) + "'");
    a.log = parts[4] == "log";
  }
  if (a.log && !(a.min > 0.0 && a.max > 0.0))
    config_error("log-spaced sweep needs positive bounds in '" + std::string(spec) + "'");
  return a;
}

SearchRange parse_search_range(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() == 1) {
    const double v = to_double(parts[0], spec);
    return {v, v, false};
  }
  if (parts.size() != 2 && parts.size() != 3)
    config_error("search range must be min:max[:log], got '" + std::string(spec) + "'");
  SearchRange r{to_double(parts[0], spec), to_double(parts[1], spec), false};
  if (parts.size() == 3) {
    if (parts[2] != "log" && parts[2] != "lin")
      config_error("search spacing must be 'log' or 'lin' in '" + std::string(spec) + "'");
    r.log = parts[2] == "log";
  }
  if (r.min > r.max) config_error("search range min exceeds max in '" + std::string(spec) + "'");
  if (r.log && !(r.min > 0.0)) config_error("log search range needs positive bounds");
  return r;
}

// ---------------------------------------------------------------------------
// Point evaluation

bool PointRecord::all_ok() const {
  for (const auto& f : {ok_physical, ok_conservation_bare, ok_conservation_full,
                        ok_omega_identity, ok_sigma_bare_nonneg, ok_sigma_identity,
                        ok_carnot, ok_nullspace, ok_greens_rate, ok_mean_energy})
    if (f.has_value() && !*f) return false;
  return true;
}

PointRecord eval_point(const EngineParams& params, bool verify,
                       const Tolerances& tol) {
  PointRecord r;
  const EngineParams& p = validate(params);
  r.params = p;
  r.delta = detuning(p);
  r.C = coherence_factor(p);
  const AFCoefficients af = af_coefficients(p);
  r.A = af.A;
  r.F = af.F;
  r.R = rate_u_to_l(p);

  const SteadyState ss = analytic_steady_state(p);
  r.rho_gg = ss.gg();
  r.rho_uu = ss.uu();
  r.rho_ll = ss.ll();
  r.rho_ul_re = ss.ul().real();
  r.rho_ul_im = ss.ul().imag();

  const FlowReport bare = bare_flows(p);
  const FlowReport full = full_flows(p);
  r.P0 = bare.power;
  r.Q0u = bare.heat_u;
  r.Q0l = bare.heat_l;
  r.P = full.power;
  r.Qu = full.heat_u;
  r.Ql = full.heat_l;

  const EffectiveEnergies ee = effective_energies(p);
  r.omega_tilde_u = ee.omega_u;
  r.omega_tilde_l = ee.omega_l;
  r.T_u = bath_temperature(p, Bath::u, TemperatureConvention::naive);
  r.T_l = bath_temperature(p, Bath::l, TemperatureConvention::naive);

  r.sigma_bare = entropy_production(p, EntropyConvention::bare).sigma;
  r.sigma_full_naive = entropy_production(p, EntropyConvention::full_naive).sigma;
  if (ee.temperatures_defined()) {
    const EntropyReport corr = entropy_production(p, EntropyConvention::full_corrected);
    r.Tt_u = corr.temperature_u;
    r.Tt_l = corr.temperature_l;
    r.sigma_full_corrected = corr.sigma;
    r.ok_sigma_identity =
        relative_difference(corr.sigma, r.sigma_bare) <= tol.sigma_identity;
    if (r.R > 0.0) {
      const Efficiency eff = efficiency(p);
      r.eta = eff.eta;
      r.carnot_bound = eff.carnot_bound;
      r.ok_carnot = eff.satisfied;
    }
  }

  const PhysicalityTolerances phys{tol.physicality, tol.physicality,
                                   tol.physicality};
  r.ok_physical = assert_physical(ss.rho, phys).ok() &&
                  max_abs(master_rhs(ss.rho.matrix(), p)) <= tol.rhs_residual;
  r.ok_conservation_bare = bare.conservation_residual() <= tol.conservation;
  r.ok_conservation_full = full.conservation_residual() <= tol.conservation;
  {
    const double scale = std::max({p.omega_u, p.omega_l, p.omega_d, std::abs(r.delta)});
    const double miss = std::abs(ee.omega_u - ee.omega_l - p.omega_d);
    r.ok_omega_identity =
        miss <= tol.omega_identity_ulps * std::numeric_limits<double>::epsilon() * scale;
  }
  r.ok_sigma_bare_nonneg =
      r.sigma_bare >= 0.0 && (r.sigma_bare > 0.0 || p.n_u == p.n_l || r.R == 0.0);
  r.naive_violation = r.sigma_full_naive < -tol.violation_threshold;

  if (verify) {
    try {
      const SteadyState ns = nullspace_steady_state(p, tol.rank_tol);
      r.ok_nullspace = max_deviation(ns.rho, ss.rho) <= tol.steady_state_agreement;
    } catch (const Error&) {
      r.ok_nullspace = false;
    }
    try {
      const QuadratureOptions q = tol.quadrature();
      const double g = greens_rate(p, population_difference(p), q);
      r.ok_greens_rate = relative_difference(g, r.R) <= tol.greens_rate;
      const double m = mean_transition_energy_u(p, q);
      r.ok_mean_energy = std::abs(m - ee.omega_u) <=
                         tol.mean_energy * std::max(std::abs(ee.omega_u), p.omega_u);
    } catch (const Error&) {
      r.ok_greens_rate = false;
      r.ok_mean_energy = false;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "omega_u", "omega_l", "omega_d", "epsilon", "gamma_u", "gamma_l", "n_u",
      "n_l", "delta", "R", "A", "F", "C", "rho_gg", "rho_uu", "rho_ll",
      "rho_ul_re", "rho_ul_im", "P0", "Q0u", "Q0l", "P", "Qu", "Ql",
      "omega_tilde_u", "omega_tilde_l", "T_u", "T_l", "Tt_u", "Tt_l",
      "sigma_bare", "sigma_full_corrected", "sigma_full_naive", "eta",
      "carnot_bound", "ok_physical", "ok_conservation_bare",
      "ok_conservation_full", "ok_omega_identity", "ok_sigma_bare_nonneg",
      "ok_sigma_identity", "ok_carnot", "ok_nullspace", "ok_greens_rate",
      "ok_mean_energy", "naive_violation"};
  return cols;
}

std::string csv_header() {
  std::string s;
  for (const auto& c : csv_columns()) {
    if (!s.empty()) s += ',';
    s += c;
  }
  return s;
}

std::string csv_row(const PointRecord& r) {
  std::vector<std::string> f;
  f.reserve(csv_columns().size());
  auto num = [&](double v) { f.push_back(format_double(v)); };
  auto opt = [&](const std::optional<double>& v) {
    f.push_back(v ? format_double(*v) : std::string());
  };
  auto flag = [&](const std::optional<bool>& v) {
    f.push_back(v ? (*v ? "1" : "0") : "");
  };
  const EngineParams& p = r.params;
  for (double v : {p.omega_u, p.omega_l, p.omega_d, p.epsilon, p.gamma_u,
                   p.gamma_l, p.n_u, p.n_l, r.delta, r.R, r.A, r.F, r.C,
                   r.rho_gg, r.rho_uu, r.rho_ll, r.rho_ul_re, r.rho_ul_im, r.P0,
                   r.Q0u, r.Q0l, r.P, r.Qu, r.Ql, r.omega_tilde_u,
                   r.omega_tilde_l, r.T_u, r.T_l})
    num(v);
  opt(r.Tt_u);
  opt(r.Tt_l);
  num(r.sigma_bare);
  opt(r.sigma_full_corrected);
  num(r.sigma_full_naive);
  opt(r.eta);
  opt(r.carnot_bound);
  for (const auto& fl : {r.ok_physical, r.ok_conservation_bare,
                         r.ok_conservation_full, r.ok_omega_identity,
                         r.ok_sigma_bare_nonneg, r.ok_sigma_identity, r.ok_carnot,
                         r.ok_nullspace, r.ok_greens_rate, r.ok_mean_energy})
    flag(fl);
  f.push_back(r.naive_violation ? "1" : "0");

  std::string s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) s += ',';
    s += f[i];
  }
  return s;
}

void write_header(const RunConfig& config, std::string_view command,
                  std::ostream& out) {
  out << "# maser-cli " << MASER_VERSION << ' ' << command << '\n';
  out << "# seed = " << config.seed << '\n';
  for (const auto& [k, v] : config.echo) out << "# config: " << k << " = " << v << '\n';
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<PointRecord> sweep_records(const RunConfig& config) {
  if (config.axes.size() > 2)
    config_error("at most two sweep axes are supported");

  std::vector<EngineParams> grid;
  const std::vector<double> outer =
      config.axes.empty() ? std::vector<double>{0.0} : config.axes[0].values();
  const std::vector<double> inner =
      config.axes.size() < 2 ? std::vector<double>{0.0} : config.axes[1].values();
  for (double a : outer) {
    for (double b : inner) {
      EngineParams p = config.base;
      if (!config.axes.empty()) set_parameter(p, config.axes[0].name, a);
      if (config.axes.size() > 1) set_parameter(p, config.axes[1].name, b);
      if (auto msg = first_violation(p); !msg.empty())
        throw Error(ErrorCode::invalid_params,
                    "invalid grid point: " + msg + " (" + to_string(p) + ")");
      grid.push_back(p);
    }
  }

  std::vector<PointRecord> records(grid.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        records[i] = eval_point(grid[i], config.verify, config.tol);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::clamp<unsigned>(
      std::thread::hardware_concurrency(), 1u,
      static_cast<unsigned>(std::max<std::size_t>(grid.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

SweepSummary run_sweep(const RunConfig& config, std::ostream& out) {
  const std::vector<PointRecord> records = sweep_records(config);
  write_header(config, "sweep", out);
  out << csv_header() << '\n';
  SweepSummary s;
  for (const auto& r : records) {
    out << csv_row(r) << '\n';
    ++s.rows;
    if (!r.all_ok()) ++s.invariant_failures;
    if (r.naive_violation) ++s.naive_violations;
  }
  return s;
}

SweepSummary run_sweep(const RunConfig& config) {
  if (config.out.empty()) config_error("sweep needs an output path");
  // Evaluate before touching the file so an invalid grid leaves no output.
  std::ostringstream buf;
  const SweepSummary s = run_sweep(config, buf);
  std::ofstream f(config.out, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::io_error, "cannot write '" + config.out + "'");
  f << buf.str();
  if (!f) throw Error(ErrorCode::io_error, "write failed for '" + config.out + "'");
  return s;
}

// ---------------------------------------------------------------------------
// Violation search

SeededUniform::SeededUniform(std::uint64_t seed) : engine_(seed) {}

double SeededUniform::operator()() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededUniform::log_between(double lo, double hi) {
  return std::exp(between(std::log(lo), std::log(hi)));
}

ViolationSearchResult find_violation(const EngineParams& base,
                                     const SearchConfig& search,
                                     std::uint64_t seed, const Tolerances& tol) {
  validate(base);
  SeededUniform rng(seed);
  auto draw = [&](const SearchRange& r) {
    if (r.fixed()) return r.min;
    return r.log ? rng.log_between(r.min, r.max) : rng.between(r.min, r.max);
  };

  ViolationSearchResult result;
  for (std::uint64_t i = 0; i < search.budget; ++i) {
    ++result.samples_tried;
    EngineParams p = base;
    const double delta = draw(search.delta);
    p.n_u = draw(search.n_u);
    p.n_l = search.tie_occupations ? p.n_u : draw(search.n_l);
    p.gamma_u = draw(search.gamma_u);
    p.gamma_l = draw(search.gamma_l);
    p.epsilon = draw(search.epsilon);
    p.omega_d = p.omega_u - p.omega_l + delta;
    if (!first_violation(p).empty()) continue;
    if (!(rate_u_to_l(p) > 0.0)) continue;
    if (!effective_energies(p).temperatures_defined()) continue;
    const double naive = entropy_production(p, EntropyConvention::full_naive).sigma;
    if (!(naive < -tol.violation_threshold)) continue;

    PointRecord rec = eval_point(p, true, tol);
    result.reverified = rec.sigma_bare > 0.0 && rec.sigma_full_corrected &&
                        *rec.sigma_full_corrected > 0.0;
    result.record = std::move(rec);
    return result;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Verification report

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return !c.applicable || c.passed; });
}

std::string VerificationReport::to_string() const {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific;
  for (const auto& c : checks) {
    os << (!c.applicable ? "SKIP" : c.passed ? "PASS" : "FAIL") << "  " << c.name;
    if (c.applicable) os << "  residual=" << c.residual << " tol=" << c.tolerance;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << '\n';
  }
  os << (all_passed() ? "all checks passed" : "verification FAILED") << '\n';
  return os.str();
}

VerificationReport verify_all(const EngineParams& params, const Tolerances& tol,
                              const VerifyOptions& options) {
  VerificationReport rep;
  rep.params = params;
  auto add = [&](std::string name, double residual, double tolerance,
                 std::string detail = {}) {
    rep.checks.push_back({std::move(name), residual <= tolerance, true, residual,
                          tolerance, std::move(detail)});
  };
  auto fail = [&](std::string name, std::string detail) {
    rep.checks.push_back({std::move(name), false, true,
                          std::numeric_limits<double>::infinity(), 0.0,
                          std::move(detail)});
  };
  auto skip = [&](std::string name, std::string detail) {
    rep.checks.push_back({std::move(name), true, false, 0.0, 0.0, std::move(detail)});
  };

  if (auto msg = first_violation(params); !msg.empty()) {
    fail("params_valid", msg);
    return rep;
  }
  add("params_valid", 0.0, 0.0);
  const EngineParams& p = params;

  const SteadyState an = analytic_steady_state(p);
  try {
    const SteadyState ns = nullspace_steady_state(p, tol.rank_tol);
    add("analytic_vs_nullspace", max_deviation(an.rho, ns.rho),
        tol.steady_state_agreement);
  } catch (const Error& e) {
    fail("analytic_vs_nullspace", e.what());
  }

  const auto phys = assert_physical(
      an.rho, {tol.physicality, tol.physicality, tol.physicality});
  add("steady_state_physical",
      std::max({phys.hermiticity_residual, phys.trace_residual,
                std::max(0.0, -phys.min_eigenvalue)}),
      tol.physicality);
  add("steady_state_rhs", max_abs(master_rhs(an.rho.matrix(), p)), tol.rhs_residual);

  if (options.run_evolution) {
    try {
      const SteadyState ev = evolved_steady_state(p, tol.relaxation_times);
      add("evolve_convergence", max_deviation(ev.rho, an.rho), tol.evolve_convergence);
    } catch (const Error& e) {
      fail("evolve_convergence", e.what());
    }
  } else {
    skip("evolve_convergence", "disabled");
  }

  FlowReport bare = bare_flows(p);
  FlowReport full = full_flows(p);
  if (options.fault == FaultInjection::flip_heat_sign) {
    bare.heat_l = -bare.heat_l;
    full.heat_l = -full.heat_l;
  }
  add("energy_conservation_bare", bare.conservation_residual(), tol.conservation);
  add("energy_conservation_full", full.conservation_residual(), tol.conservation);

  const EffectiveEnergies ee = effective_energies(p);
  {
    // Full heat from the steady-state coherence:
    // Qu = Q0u - gamma_u (n_u + 1)/2 * Re(rho_ul)/Im(rho_ul) * R
    const double R = rate_u_to_l(p);
    const cplx ul = an.ul();
    if (R != 0.0 && ul.imag() != 0.0) {
      const double ratio = ul.real() / ul.imag();
      const double qu = bare.heat_u - 0.5 * p.gamma_u * (p.n_u + 1.0) * ratio * R;
      const double ql = bare.heat_l - 0.5 * p.gamma_l * (p.n_l + 1.0) * ratio * R;
      add("full_flows_coherence_route",
          std::max(relative_difference(qu, full.heat_u),
                   relative_difference(ql, full.heat_l)),
          tol.conservation);
    } else {
      skip("full_flows_coherence_route", "no net transition rate");
    }
  }

  {
    const double scale = std::max({p.omega_u, p.omega_l, p.omega_d, std::abs(detuning(p))});
    add("effective_energy_identity",
        std::abs(ee.omega_u - ee.omega_l - p.omega_d) / scale,
        tol.omega_identity_ulps * std::numeric_limits<double>::epsilon());
  }

  const double sigma_bare = entropy_production(p, EntropyConvention::bare).sigma;
  {
    const bool ok = sigma_bare >= 0.0 &&
                    (sigma_bare > 0.0 || p.n_u == p.n_l || p.epsilon == 0.0);
    rep.checks.push_back({"sigma_bare_nonnegative", ok, true,
                          std::max(0.0, -sigma_bare), 0.0,
                          "sigma_bare=" + format_double(sigma_bare)});
  }

  if (ee.temperatures_defined()) {
    const double corr = entropy_production(p, EntropyConvention::full_corrected).sigma;
    add("sigma_identity", relative_difference(corr, sigma_bare), tol.sigma_identity);
  } else {
    skip("sigma_identity", "effective energy nonpositive");
  }

  try {
    const QuadratureOptions q = tol.quadrature();
    const double R = rate_u_to_l(p);
    const double g = greens_rate(p, population_difference(p), q);
    add("greens_rate_identity", relative_difference(g, R), tol.greens_rate);
    const double m = mean_transition_energy_u(p, q);
    add("mean_energy_identity",
        std::abs(m - ee.omega_u) / std::max(std::abs(ee.omega_u), p.omega_u),
        tol.mean_energy);
  } catch (const Error& e) {
    fail("greens_rate_identity", e.what());
    fail("mean_energy_identity", e.what());
  }

  if (rate_u_to_l(p) > 0.0 && ee.temperatures_defined()) {
    const Efficiency eff = efficiency(p);
    rep.checks.push_back({"carnot_bound", eff.satisfied, true,
                          eff.eta - eff.carnot_bound, 0.0,
                          "eta=" + format_double(eff.eta) +
                              " bound=" + format_double(eff.carnot_bound)});
  } else {
    skip("carnot_bound", "not in engine regime");
  }
  return rep;
}

}  // namespace maser

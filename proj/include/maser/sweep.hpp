#pragma once

// Point evaluation, grid sweeps to CSV, the naive-temperature violation
// finder, and the aggregated verification report.

#include "maser/params.hpp"
#include "maser/spectral.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace maser {

struct Tolerances {
  double physicality = 1e-10;
  double steady_state_agreement = 1e-8;   // analytic vs null space, entrywise
  double rhs_residual = 1e-9;             // max |master_rhs(rho_ss)|
  double evolve_convergence = 1e-8;       // evolved vs analytic, entrywise
  double conservation = 1e-10;            // relative to the largest flow
  double sigma_identity = 1e-12;          // bare vs corrected, relative
  double omega_identity_ulps = 8;         // |w~u - w~l - wd| in ulps of scale
  double greens_rate = 1e-8;              // relative
  double mean_energy = 1e-8;              // relative
  double violation_threshold = 1e-12;     // sigma_naive < -threshold
  double rank_tol = 1e-12;                // null-space degeneracy
  double relaxation_times = 40.0;         // evolve horizon in units of 1/gap
  double quadrature_rel_tol = 1e-12;
  double quadrature_accept_tol = 1e-10;

  QuadratureOptions quadrature() const {
    QuadratureOptions q;
    q.rel_tol = quadrature_rel_tol;
    q.accept_tol = quadrature_accept_tol;
    return q;
  }
};

// Sets a tolerance by field name; throws Error(config_error) on unknown names.
void set_tolerance(Tolerances& tol, std::string_view name, double value);

// Sweepable parameter names: the EngineParams fields plus "delta", which
// moves omega_d so that omega_d - (omega_u - omega_l) takes the given value.
void set_parameter(EngineParams& params, std::string_view name, double value);
bool is_parameter_name(std::string_view name);

struct SweepAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;
  bool log = false;

  std::vector<double> values() const;
};

// name:min:max:count[:log]
SweepAxis parse_axis(std::string_view spec);

struct SearchRange {
  double min;
  double max;
  bool log = false;

  bool fixed() const { return min == max; }
};

// min:max[:log] or a single value
SearchRange parse_search_range(std::string_view spec);

struct SearchConfig {
  SearchRange delta{-2.0, 2.0};
  SearchRange n_u{0.0, 5.0};
  SearchRange n_l{0.0, 5.0};
  SearchRange gamma_u{0.1, 10.0, true};
  SearchRange gamma_l{0.1, 10.0, true};
  SearchRange epsilon{1e-2, 2.0, true};
  bool tie_occupations = false;  // force n_l = n_u
  std::uint64_t budget = 100'000;
};

struct RunConfig {
  EngineParams base = benchmark_params();
  std::vector<SweepAxis> axes;  // at most two, row-major with axes[0] outer
  std::string out;
  std::uint64_t seed = 42;
  bool verify = false;
  Tolerances tol;
  SearchConfig search;
  // key = value pairs echoed into output headers
  std::vector<std::pair<std::string, std::string>> echo;
};

struct PointRecord {
  EngineParams params;
  double delta = 0.0;
  double R = 0.0, A = 0.0, F = 0.0, C = 0.0;
  double rho_gg = 0.0, rho_uu = 0.0, rho_ll = 0.0;
  double rho_ul_re = 0.0, rho_ul_im = 0.0;
  double P0 = 0.0, Q0u = 0.0, Q0l = 0.0;
  double P = 0.0, Qu = 0.0, Ql = 0.0;
  double omega_tilde_u = 0.0, omega_tilde_l = 0.0;
  double T_u = 0.0, T_l = 0.0;
  std::optional<double> Tt_u, Tt_l;
  double sigma_bare = 0.0;
  std::optional<double> sigma_full_corrected;
  double sigma_full_naive = 0.0;
  std::optional<double> eta, carnot_bound;

  // Invariant flags; empty when not applicable or not evaluated.
  std::optional<bool> ok_physical;
  std::optional<bool> ok_conservation_bare;
  std::optional<bool> ok_conservation_full;
  std::optional<bool> ok_omega_identity;
  std::optional<bool> ok_sigma_bare_nonneg;
  std::optional<bool> ok_sigma_identity;
  std::optional<bool> ok_carnot;
  std::optional<bool> ok_nullspace;
  std::optional<bool> ok_greens_rate;
  std::optional<bool> ok_mean_energy;
  bool naive_violation = false;  // sigma_full_naive < -violation_threshold

  // True when no evaluated invariant flag is false.
  bool all_ok() const;
};

PointRecord eval_point(const EngineParams& params, bool verify = false,
                       const Tolerances& tol = {});

// Fixed, documented CSV columns.
const std::vector<std::string>& csv_columns();
std::string csv_header();
std::string csv_row(const PointRecord& record);

// Shortest-roundtrip-safe formatting: 17 significant digits, '.' decimal,
// independent of the process locale.
std::string format_double(double value);

struct SweepSummary {
  std::size_t rows = 0;
  std::size_t invariant_failures = 0;
  std::size_t naive_violations = 0;
};

// Validates the whole grid before evaluating. Rows come out in row-major
// grid order regardless of how evaluation is scheduled.
std::vector<PointRecord> sweep_records(const RunConfig& config);
SweepSummary run_sweep(const RunConfig& config, std::ostream& out);
SweepSummary run_sweep(const RunConfig& config);  // writes config.out

void write_header(const RunConfig& config, std::string_view command,
                  std::ostream& out);

struct ViolationSearchResult {
  std::optional<PointRecord> record;
  std::uint64_t samples_tried = 0;
  bool reverified = false;  // sigma_bare > 0 and sigma_full_corrected > 0
};

ViolationSearchResult find_violation(const EngineParams& base,
                                     const SearchConfig& search,
                                     std::uint64_t seed,
                                     const Tolerances& tol = {});

// Uniform doubles in [0, 1) from the 53 high bits of mt19937_64, whose output
// sequence is fixed by the standard; identical on every platform.
class SeededUniform {
 public:
  explicit SeededUniform(std::uint64_t seed);
  double operator()();
  double between(double lo, double hi) { return lo + (hi - lo) * (*this)(); }
  double log_between(double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  bool applicable = true;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerificationReport {
  EngineParams params;
  std::vector<CheckResult> checks;

  bool all_passed() const;
  std::string to_string() const;
};

enum class FaultInjection { none, flip_heat_sign };

struct VerifyOptions {
  // Test fixture hook: corrupts the flows before the conservation checks.
  FaultInjection fault = FaultInjection::none;
  bool run_evolution = true;
};

VerificationReport verify_all(const EngineParams& params,
                              const Tolerances& tol = {},
                              const VerifyOptions& options = {});

}  // namespace maser

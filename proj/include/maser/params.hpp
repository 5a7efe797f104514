#pragma once

// Physical inputs of the three-level maser and the library-wide error type.
//
// Units: hbar = k_B = 1. The ground level |g> sits at energy zero, the upper
// maser level |u> at omega_u and the lower maser level |l> at omega_l. Bath u
// couples g <-> u, bath l couples g <-> l, and the classical drive couples
// u <-> l at angular frequency omega_d.

#include <stdexcept>
#include <string>

namespace maser {

enum class ErrorCode {
  invalid_params = 1,
  invalid_argument,
  degenerate_null_space,
  step_underflow,
  non_physical_state,
  quadrature_failure,
  undefined_temperature,
  not_engine_regime,
  io_error,
  config_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class Bath { u, l };

struct EngineParams {
  double omega_u = 0.0;
  double omega_l = 0.0;
  double omega_d = 0.0;
  double epsilon = 0.0;
  double gamma_u = 0.0;
  double gamma_l = 0.0;
  double n_u = 0.0;
  double n_l = 0.0;

  bool operator==(const EngineParams&) const = default;
};

// Returns params unchanged if every field constraint holds, otherwise throws
// Error(invalid_params) naming the first violated constraint.
const EngineParams& validate(const EngineParams& params);

// Same checks without throwing; empty string when valid.
std::string first_violation(const EngineParams& params);

// omega_d - (omega_u - omega_l). Never stored.
inline double detuning(const EngineParams& p) {
  return p.omega_d - (p.omega_u - p.omega_l);
}

inline double coupling(const EngineParams& p, Bath b) {
  return b == Bath::u ? p.gamma_u : p.gamma_l;
}
inline double occupation(const EngineParams& p, Bath b) {
  return b == Bath::u ? p.n_u : p.n_l;
}
inline double level_energy(const EngineParams& p, Bath b) {
  return b == Bath::u ? p.omega_u : p.omega_l;
}

// gamma_u (n_u + 1) + gamma_l (n_l + 1): total decay rate of the u-l coherence
// times two, and the common denominator of the effective-energy weights.
inline double total_decay(const EngineParams& p) {
  return p.gamma_u * (p.n_u + 1.0) + p.gamma_l * (p.n_l + 1.0);
}

// Benchmark operating point used across the tests and docs. It is a
// constructed example, not a value taken from any experiment.
inline EngineParams benchmark_params() {
  return {10.0, 5.0, 5.5, 0.5, 1.0, 1.0, 2.0, 1.0};
}

std::string to_string(const EngineParams& p);

}  // namespace maser

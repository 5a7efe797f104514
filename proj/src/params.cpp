#include "maser/params.hpp"

#include <cmath>
#include <sstream>

namespace maser {

std::string first_violation(const EngineParams& p) {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(p.omega_u) || !finite(p.omega_l) || !finite(p.omega_d) ||
      !finite(p.epsilon) || !finite(p.gamma_u) || !finite(p.gamma_l) ||
      !finite(p.n_u) || !finite(p.n_l))
    return "all parameters must be finite";
  if (!(p.omega_l > 0.0)) return "omega_l must be positive";
  if (!(p.omega_u > p.omega_l)) return "omega_u must exceed omega_l";
  if (!(p.omega_d > 0.0)) return "omega_d must be positive";
  if (!(p.epsilon >= 0.0)) return "epsilon must be nonnegative";
  if (!(p.gamma_u > 0.0)) return "gamma_u must be positive";
  if (!(p.gamma_l > 0.0)) return "gamma_l must be positive";
  if (!(p.n_u >= 0.0)) return "n_u must be nonnegative";
  if (!(p.n_l >= 0.0)) return "n_l must be nonnegative";
  return {};
}

const EngineParams& validate(const EngineParams& params) {
  if (auto msg = first_violation(params); !msg.empty())
    throw Error(ErrorCode::invalid_params, msg + " (" + to_string(params) + ")");
  return params;
}

std::string to_string(const EngineParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "omega_u=" << p.omega_u << " omega_l=" << p.omega_l
     << " omega_d=" << p.omega_d << " epsilon=" << p.epsilon
     << " gamma_u=" << p.gamma_u << " gamma_l=" << p.gamma_l
     << " n_u=" << p.n_u << " n_l=" << p.n_l;
  return os.str();
}

}  // namespace maser

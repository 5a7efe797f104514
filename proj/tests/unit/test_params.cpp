#include "maser/params.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace maser;

TEST_CASE("benchmark parameters are valid") {
  const EngineParams p = benchmark_params();
  CHECK_NOTHROW(validate(p));
  CHECK(detuning(p) == doctest::Approx(0.5));
  CHECK(total_decay(p) == doctest::Approx(5.0));
}

TEST_CASE("validation reports the first violated constraint") {
  EngineParams p = benchmark_params();
  p.omega_u = p.omega_l;
  try {
    validate(p);
    FAIL("expected invalid_params");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_params);
    CHECK(std::string(e.what()).find("omega_u must exceed omega_l") != std::string::npos);
  }
}

TEST_CASE("each field is checked") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto rejects = [](EngineParams p) {
    try {
      validate(p);
    } catch (const Error& e) {
      return e.code() == ErrorCode::invalid_params;
    }
    return false;
  };
  EngineParams p = benchmark_params();
  p.omega_l = 0; CHECK(rejects(p)); p = benchmark_params();
  p.omega_d = 0; CHECK(rejects(p)); p = benchmark_params();
  p.epsilon = -1e-9; CHECK(rejects(p)); p = benchmark_params();
  p.gamma_u = 0; CHECK(rejects(p)); p = benchmark_params();
  p.gamma_l = -1; CHECK(rejects(p)); p = benchmark_params();
  p.n_u = -0.1; CHECK(rejects(p)); p = benchmark_params();
  p.n_l = nan; CHECK(rejects(p)); p = benchmark_params();
  p.epsilon = std::numeric_limits<double>::infinity(); CHECK(rejects(p));
  p = benchmark_params();
  p.epsilon = 0; p.n_u = 0; p.n_l = 0;
  CHECK_FALSE(rejects(p));
}

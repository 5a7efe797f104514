#include "maser/maser.h"

#include "maser/config.hpp"
#include "maser/steady_state.hpp"
#include "maser/sweep.hpp"
#include "maser/thermodynamics.hpp"

#include <charconv>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

struct maser_model {
  maser::EngineParams params;
};

struct maser_config {
  maser::KeyValueConfig kv;
};

struct maser_record {
  maser::PointRecord record;
};

struct maser_report {
  maser::VerificationReport report;
};

namespace {

thread_local std::string last_error;

maser_status to_status(maser::ErrorCode code) {
  using maser::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_params: return MASER_ERR_INVALID_PARAMS;
    case ErrorCode::invalid_argument: return MASER_ERR_INVALID_ARGUMENT;
    case ErrorCode::degenerate_null_space: return MASER_ERR_DEGENERATE_NULL_SPACE;
    case ErrorCode::step_underflow: return MASER_ERR_STEP_UNDERFLOW;
    case ErrorCode::non_physical_state: return MASER_ERR_NON_PHYSICAL_STATE;
    case ErrorCode::quadrature_failure: return MASER_ERR_QUADRATURE;
    case ErrorCode::undefined_temperature: return MASER_ERR_UNDEFINED_TEMPERATURE;
    case ErrorCode::not_engine_regime: return MASER_ERR_NOT_ENGINE_REGIME;
    case ErrorCode::io_error: return MASER_ERR_IO;
    case ErrorCode::config_error: return MASER_ERR_CONFIG;
  }
  return MASER_ERR_INTERNAL;
}

maser_status fail(maser_status status, std::string msg) {
  last_error = std::move(msg);
  return status;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
maser_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const maser::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MASER_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MASER_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MASER_ERR_INTERNAL, "unknown error");
  }
}

maser_status null_argument(const char* what) {
  return fail(MASER_ERR_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

maser::EngineParams from_c(const maser_params& p) {
  return {p.omega_u, p.omega_l, p.omega_d, p.epsilon,
          p.gamma_u, p.gamma_l, p.n_u,     p.n_l};
}

maser_params to_c(const maser::EngineParams& p) {
  return {p.omega_u, p.omega_l, p.omega_d, p.epsilon,
          p.gamma_u, p.gamma_l, p.n_u,     p.n_l};
}

maser::Bath to_bath(maser_bath b) {
  if (b == MASER_BATH_U) return maser::Bath::u;
  if (b == MASER_BATH_L) return maser::Bath::l;
  throw maser::Error(maser::ErrorCode::invalid_argument, "invalid bath label");
}

maser_status copy_out(const std::string& text, char* buffer, size_t capacity,
                      size_t* needed) {
  if (needed) *needed = text.size();
  if (buffer && capacity > 0) {
    const size_t n = std::min(capacity - 1, text.size());
    std::memcpy(buffer, text.data(), n);
    buffer[n] = '\0';
  }
  if (!buffer || capacity <= text.size())
    return fail(MASER_ERR_BUFFER_TOO_SMALL, "output buffer too small");
  return MASER_OK;
}

}  // namespace

extern "C" {

const char* maser_version(void) { return MASER_VERSION; }

const char* maser_last_error(void) { return last_error.c_str(); }

maser_status maser_model_create(const maser_params* params, maser_model** out) {
  if (!params) return null_argument("params");
  if (!out) return null_argument("out");
  return guarded([&] {
    const maser::EngineParams p = maser::validate(from_c(*params));
    *out = new maser_model{p};
    return MASER_OK;
  });
}

void maser_model_destroy(maser_model* model) { delete model; }

maser_status maser_model_params(const maser_model* m, maser_params* out) {
  if (!m || !out) return null_argument("model/out");
  *out = to_c(m->params);
  return MASER_OK;
}

maser_status maser_model_detuning(const maser_model* m, double* out) {
  if (!m || !out) return null_argument("model/out");
  *out = maser::detuning(m->params);
  return MASER_OK;
}

maser_status maser_model_steady_state(const maser_model* m,
                                      maser_state_source source, double re[9],
                                      double im[9]) {
  if (!m || !re || !im) return null_argument("model/re/im");
  return guarded([&] {
    maser::SteadyState ss;
    switch (source) {
      case MASER_STATE_ANALYTIC: ss = maser::analytic_steady_state(m->params); break;
      case MASER_STATE_NULLSPACE: ss = maser::nullspace_steady_state(m->params); break;
      case MASER_STATE_EVOLVED: ss = maser::evolved_steady_state(m->params); break;
      default: return fail(MASER_ERR_INVALID_ARGUMENT, "invalid steady-state source");
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const auto z = ss.rho.matrix()(i, j);
        re[3 * i + j] = z.real();
        im[3 * i + j] = z.imag();
      }
    return MASER_OK;
  });
}

maser_status maser_model_rate(const maser_model* m, double* out) {
  if (!m || !out) return null_argument("model/out");
  return guarded([&] {
    *out = maser::rate_u_to_l(m->params);
    return MASER_OK;
  });
}

maser_status maser_model_af(const maser_model* m, double* a, double* f) {
  if (!m || !a || !f) return null_argument("model/a/f");
  return guarded([&] {
    const auto af = maser::af_coefficients(m->params);
    *a = af.A;
    *f = af.F;
    return MASER_OK;
  });
}

maser_status maser_model_flows(const maser_model* m,
                               maser_flow_convention convention,
                               maser_flows* out) {
  if (!m || !out) return null_argument("model/out");
  return guarded([&] {
    maser::FlowReport f;
    if (convention == MASER_FLOWS_BARE) f = maser::bare_flows(m->params);
    else if (convention == MASER_FLOWS_FULL) f = maser::full_flows(m->params);
    else return fail(MASER_ERR_INVALID_ARGUMENT, "invalid flow convention");
    *out = {f.power, f.heat_u, f.heat_l};
    return MASER_OK;
  });
}

maser_status maser_model_effective_energies(const maser_model* m,
                                            double* omega_tilde_u,
                                            double* omega_tilde_l) {
  if (!m || !omega_tilde_u || !omega_tilde_l) return null_argument("model/out");
  return guarded([&] {
    const auto e = maser::effective_energies(m->params);
    *omega_tilde_u = e.omega_u;
    *omega_tilde_l = e.omega_l;
    return MASER_OK;
  });
}

maser_status maser_model_temperature(const maser_model* m, maser_bath bath,
                                     maser_temperature_convention convention,
                                     double* out) {
  if (!m || !out) return null_argument("model/out");
  return guarded([&] {
    maser::TemperatureConvention c;
    if (convention == MASER_TEMPERATURE_NAIVE) c = maser::TemperatureConvention::naive;
    else if (convention == MASER_TEMPERATURE_CORRECTED)
      c = maser::TemperatureConvention::corrected;
    else return fail(MASER_ERR_INVALID_ARGUMENT, "invalid temperature convention");
    *out = maser::bath_temperature(m->params, to_bath(bath), c);
    return MASER_OK;
  });
}

maser_status maser_model_entropy_production(const maser_model* m,
                                            maser_entropy_convention convention,
                                            double* out) {
  if (!m || !out) return null_argument("model/out");
  return guarded([&] {
    maser::EntropyConvention c;
    switch (convention) {
      case MASER_ENTROPY_BARE: c = maser::EntropyConvention::bare; break;
      case MASER_ENTROPY_FULL_CORRECTED: c = maser::EntropyConvention::full_corrected; break;
      case MASER_ENTROPY_FULL_NAIVE: c = maser::EntropyConvention::full_naive; break;
      default: return fail(MASER_ERR_INVALID_ARGUMENT, "invalid entropy convention");
    }
    *out = maser::entropy_production(m->params, c).sigma;
    return MASER_OK;
  });
}

maser_status maser_model_efficiency(const maser_model* m, maser_efficiency* out) {
  if (!m || !out) return null_argument("model/out");
  return guarded([&] {
    const auto e = maser::efficiency(m->params);
    *out = {e.eta, e.carnot_bound, e.satisfied ? 1 : 0};
    return MASER_OK;
  });
}

maser_status maser_model_greens_rate(const maser_model* m,
                                     double population_difference, double* out) {
  if (!m || !out) return null_argument("model/out");
  return guarded([&] {
    *out = maser::greens_rate(m->params, population_difference);
    return MASER_OK;
  });
}

maser_status maser_model_mean_transition_energy(const maser_model* m,
                                                double* omega_u_mean) {
  if (!m || !omega_u_mean) return null_argument("model/out");
  return guarded([&] {
    *omega_u_mean = maser::mean_transition_energy_u(m->params);
    return MASER_OK;
  });
}

maser_status maser_config_create(maser_config** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new maser_config{};
    return MASER_OK;
  });
}

void maser_config_destroy(maser_config* config) { delete config; }

maser_status maser_config_load_file(maser_config* c, const char* path) {
  if (!c || !path) return null_argument("config/path");
  return guarded([&] {
    c->kv.load_file(path);
    return MASER_OK;
  });
}

maser_status maser_config_set(maser_config* c, const char* key, const char* value) {
  if (!c || !key || !value) return null_argument("config/key/value");
  return guarded([&] {
    c->kv.set(key, value);
    return MASER_OK;
  });
}

maser_status maser_config_append(maser_config* c, const char* key,
                                 const char* value) {
  if (!c || !key || !value) return null_argument("config/key/value");
  return guarded([&] {
    c->kv.append(key, value);
    return MASER_OK;
  });
}

maser_status maser_config_erase(maser_config* c, const char* key) {
  if (!c || !key) return null_argument("config/key");
  return guarded([&] {
    c->kv.erase(key);
    return MASER_OK;
  });
}

maser_status maser_config_validate(const maser_config* c) {
  if (!c) return null_argument("config");
  return guarded([&] {
    const maser::RunConfig rc = c->kv.build();
    maser::validate(rc.base);
    return MASER_OK;
  });
}

maser_status maser_config_base_params(const maser_config* c, maser_params* out) {
  if (!c || !out) return null_argument("config/out");
  return guarded([&] {
    *out = to_c(c->kv.build().base);
    return MASER_OK;
  });
}

maser_status maser_point(const maser_config* c, maser_record** out) {
  if (!c || !out) return null_argument("config/out");
  return guarded([&] {
    const maser::RunConfig rc = c->kv.build();
    *out = new maser_record{maser::eval_point(rc.base, rc.verify, rc.tol)};
    return MASER_OK;
  });
}

void maser_record_destroy(maser_record* record) { delete record; }

int maser_record_all_ok(const maser_record* r) {
  return r && r->record.all_ok() ? 1 : 0;
}

maser_status maser_record_get(const maser_record* r, const char* column,
                              double* out) {
  if (!r || !column || !out) return null_argument("record/column/out");
  return guarded([&] {
    const auto& cols = maser::csv_columns();
    const std::string row = maser::csv_row(r->record);
    std::size_t start = 0;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::size_t end = std::min(row.find(',', start), row.size());
      if (cols[i] == column) {
        const std::string text = row.substr(start, end - start);
        if (text.empty())
          return fail(MASER_ERR_NOT_FOUND, std::string("no value for ") + column);
        double v = 0.0;
        std::from_chars(text.data(), text.data() + text.size(), v);
        *out = v;
        return MASER_OK;
      }
      start = end + 1;
    }
    return fail(MASER_ERR_INVALID_ARGUMENT, std::string("unknown column ") + column);
  });
}

maser_status maser_record_format_csv(const maser_record* r, int with_header,
                                     char* buffer, size_t capacity,
                                     size_t* needed) {
  if (!r) return null_argument("record");
  return guarded([&] {
    std::string s;
    if (with_header) s = maser::csv_header() + '\n';
    s += maser::csv_row(r->record) + '\n';
    return copy_out(s, buffer, capacity, needed);
  });
}

maser_status maser_sweep(const maser_config* c, maser_sweep_summary* summary) {
  if (!c) return null_argument("config");
  return guarded([&] {
    const maser::RunConfig rc = c->kv.build();
    const maser::SweepSummary s = maser::run_sweep(rc);
    if (summary) *summary = {s.rows, s.invariant_failures, s.naive_violations};
    return MASER_OK;
  });
}

maser_status maser_find_violation(const maser_config* c, maser_record** out,
                                  uint64_t* samples_tried, int* reverified) {
  if (!c || !out) return null_argument("config/out");
  *out = nullptr;
  return guarded([&] {
    const maser::RunConfig rc = c->kv.build();
    auto res = maser::find_violation(rc.base, rc.search, rc.seed, rc.tol);
    if (samples_tried) *samples_tried = res.samples_tried;
    if (reverified) *reverified = res.reverified ? 1 : 0;
    if (!res.record) {
      std::ostringstream os;
      os << "no violation found after " << res.samples_tried << " samples";
      return fail(MASER_ERR_NOT_FOUND, os.str());
    }
    *out = new maser_record{std::move(*res.record)};
    return MASER_OK;
  });
}

maser_status maser_verify(const maser_config* c, maser_report** out) {
  if (!c || !out) return null_argument("config/out");
  return guarded([&] {
    const maser::RunConfig rc = c->kv.build();
    *out = new maser_report{maser::verify_all(rc.base, rc.tol)};
    return MASER_OK;
  });
}

void maser_report_destroy(maser_report* report) { delete report; }

int maser_report_all_passed(const maser_report* r) {
  return r && r->report.all_passed() ? 1 : 0;
}

size_t maser_report_size(const maser_report* r) {
  return r ? r->report.checks.size() : 0;
}

maser_status maser_report_check(const maser_report* r, size_t index,
                                const char** name, int* passed, int* applicable,
                                double* residual, double* tolerance) {
  if (!r) return null_argument("report");
  if (index >= r->report.checks.size())
    return fail(MASER_ERR_INVALID_ARGUMENT, "check index out of range");
  const auto& c = r->report.checks[index];
  if (name) *name = c.name.c_str();
  if (passed) *passed = c.passed ? 1 : 0;
  if (applicable) *applicable = c.applicable ? 1 : 0;
  if (residual) *residual = c.residual;
  if (tolerance) *tolerance = c.tolerance;
  return MASER_OK;
}

maser_status maser_report_format(const maser_report* r, char* buffer,
                                 size_t capacity, size_t* needed) {
  if (!r) return null_argument("report");
  return guarded([&] { return copy_out(r->report.to_string(), buffer, capacity, needed); });
}

maser_status maser_format_header(const maser_config* c, const char* command,
                                 char* buffer, size_t capacity, size_t* needed) {
  if (!c || !command) return null_argument("config/command");
  return guarded([&] {
    std::ostringstream os;
    maser::write_header(c->kv.build(), command, os);
    return copy_out(os.str(), buffer, capacity, needed);
  });
}

}  // extern "C"

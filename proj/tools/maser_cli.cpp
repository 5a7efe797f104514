// maser-cli: command-line front end over the maser C API.
//
//   maser-cli point          [--config f] [param flags] [--verify] [--out f]
//   maser-cli sweep          --sweep name:min:max:count[:log] ... --out f
//   maser-cli find-violation [--seed s] [--budget n] [--search dim=min:max[:log]]
//   maser-cli verify         [param flags] [--tol name=value]
//
// Exit status: 0 all checks pass, 1 physics invariant failure (or no
// violation found), 2 usage or configuration error.

#include "maser/maser.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitPhysics = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  std::string config_path;
  std::optional<std::string> omega_u, omega_l, omega_d, epsilon, gamma_u,
      gamma_l, n_u, n_l, seed, out, budget;
  std::vector<std::string> sweeps;
  std::vector<std::string> searches;
  std::vector<std::string> tolerances;
  bool verify = false;
  bool tie_occupations = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  // A repeated scalar flag takes its last value.
  cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--config", o.config_path, "key = value configuration file");
  cmd->add_option("--omega-u", o.omega_u, "upper maser level energy");
  cmd->add_option("--omega-l", o.omega_l, "lower maser level energy");
  cmd->add_option("--omega-d", o.omega_d, "drive frequency");
  cmd->add_option("--epsilon", o.epsilon, "drive coupling");
  cmd->add_option("--gamma-u", o.gamma_u, "bath u coupling rate");
  cmd->add_option("--gamma-l", o.gamma_l, "bath l coupling rate");
  cmd->add_option("--n-u", o.n_u, "bath u mean occupation");
  cmd->add_option("--n-l", o.n_l, "bath l mean occupation");
  cmd->add_option("--seed", o.seed, "64-bit random seed");
  cmd->add_option("--out", o.out, "output path");
  cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::Throw);
  cmd->add_option("--sweep", o.sweeps, "sweep axis name:min:max:count[:log]");
  cmd->add_option("--budget", o.budget, "violation search sample budget");
  cmd->add_option("--search", o.searches,
                  "search range dim=min:max[:log] or dim=value");
  cmd->add_flag("--tie-occupations", o.tie_occupations,
                "search with n_l = n_u");
  cmd->add_option("--tol", o.tolerances, "tolerance override name=value");
  cmd->add_flag("--verify", o.verify, "cross-check against numeric oracles");
}

struct ConfigHandle {
  maser_config* ptr = nullptr;
  ~ConfigHandle() { maser_config_destroy(ptr); }
};

struct RecordHandle {
  maser_record* ptr = nullptr;
  ~RecordHandle() { maser_record_destroy(ptr); }
};

struct ReportHandle {
  maser_report* ptr = nullptr;
  ~ReportHandle() { maser_report_destroy(ptr); }
};

class LibraryError {
 public:
  explicit LibraryError(maser_status s) : status(s), message(maser_last_error()) {}
  maser_status status;
  std::string message;
};

void check(maser_status s) {
  if (s != MASER_OK) throw LibraryError(s);
}

int exit_code_for(maser_status s) {
  switch (s) {
    case MASER_ERR_CONFIG:
    case MASER_ERR_INVALID_PARAMS:
    case MASER_ERR_INVALID_ARGUMENT:
    case MASER_ERR_IO:
      return kExitUsage;
    default:
      return kExitPhysics;
  }
}

// Splits "name=value".
std::pair<std::string, std::string> split_assignment(const std::string& s,
                                                     const char* flag) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0)
    throw CLI::ValidationError(flag, "expected name=value, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

void build_config(const CommonOptions& o, maser_config* cfg) {
  if (!o.config_path.empty()) check(maser_config_load_file(cfg, o.config_path.c_str()));
  auto set = [&](const char* key, const std::optional<std::string>& v) {
    if (v) check(maser_config_set(cfg, key, v->c_str()));
  };
  set("omega_u", o.omega_u);
  set("omega_l", o.omega_l);
  set("omega_d", o.omega_d);
  set("epsilon", o.epsilon);
  set("gamma_u", o.gamma_u);
  set("gamma_l", o.gamma_l);
  set("n_u", o.n_u);
  set("n_l", o.n_l);
  set("seed", o.seed);
  set("out", o.out);
  set("budget", o.budget);
  if (o.verify) check(maser_config_set(cfg, "verify", "true"));
  if (o.tie_occupations) check(maser_config_set(cfg, "search.tie_occupations", "true"));
  if (!o.sweeps.empty()) {
    check(maser_config_erase(cfg, "sweep"));
    for (const auto& s : o.sweeps) check(maser_config_append(cfg, "sweep", s.c_str()));
  }
  for (const auto& s : o.searches) {
    const auto [dim, range] = split_assignment(s, "--search");
    check(maser_config_set(cfg, ("search." + dim).c_str(), range.c_str()));
  }
  for (const auto& s : o.tolerances) {
    const auto [name, value] = split_assignment(s, "--tol");
    check(maser_config_set(cfg, ("tol." + name).c_str(), value.c_str()));
  }
  check(maser_config_validate(cfg));
}

template <class Fn>
std::string read_buffer(Fn&& fn) {
  size_t needed = 0;
  fn(nullptr, 0, &needed);
  std::string s(needed + 1, '\0');
  check(fn(s.data(), s.size(), &needed));
  s.resize(needed);
  return s;
}

std::string header(const maser_config* cfg, const char* command) {
  return read_buffer([&](char* b, size_t n, size_t* need) {
    return maser_format_header(cfg, command, b, n, need);
  });
}

std::string record_csv(const maser_record* rec) {
  return read_buffer([&](char* b, size_t n, size_t* need) {
    return maser_record_format_csv(rec, 1, b, n, need);
  });
}

// Writes to --out when given, stdout otherwise.
void emit(const std::optional<std::string>& out, const std::string& text) {
  if (!out) {
    std::cout << text;
    return;
  }
  std::ofstream f(*out, std::ios::binary | std::ios::trunc);
  if (!f || !(f << text)) {
    std::cerr << "error: cannot write '" << *out << "'\n";
    throw LibraryError(MASER_ERR_IO);
  }
}

int run_point(const CommonOptions& o) {
  ConfigHandle cfg;
  check(maser_config_create(&cfg.ptr));
  build_config(o, cfg.ptr);
  RecordHandle rec;
  check(maser_point(cfg.ptr, &rec.ptr));
  emit(o.out, header(cfg.ptr, "point") + record_csv(rec.ptr));
  if (!maser_record_all_ok(rec.ptr)) {
    std::cerr << "invariant check failed at this point\n";
    return kExitPhysics;
  }
  return kExitPass;
}

int run_sweep(const CommonOptions& o) {
  ConfigHandle cfg;
  check(maser_config_create(&cfg.ptr));
  build_config(o, cfg.ptr);
  maser_sweep_summary s{};
  check(maser_sweep(cfg.ptr, &s));
  std::cout << "rows=" << s.rows << " invariant_failures=" << s.invariant_failures
            << " naive_violations=" << s.naive_violations << '\n';
  return s.invariant_failures == 0 ? kExitPass : kExitPhysics;
}

int run_find_violation(const CommonOptions& o) {
  ConfigHandle cfg;
  check(maser_config_create(&cfg.ptr));
  build_config(o, cfg.ptr);
  RecordHandle rec;
  uint64_t tried = 0;
  int reverified = 0;
  const maser_status st = maser_find_violation(cfg.ptr, &rec.ptr, &tried, &reverified);
  if (st == MASER_ERR_NOT_FOUND) {
    std::cout << header(cfg.ptr, "find-violation") << "# not found after "
              << tried << " samples\n";
    return kExitPhysics;
  }
  check(st);
  emit(o.out, header(cfg.ptr, "find-violation") + record_csv(rec.ptr) +
                  "# samples_tried = " + std::to_string(tried) +
                  "\n# reverified = " + (reverified ? "true" : "false") + "\n");
  return reverified ? kExitPass : kExitPhysics;
}

int run_verify(const CommonOptions& o) {
  ConfigHandle cfg;
  check(maser_config_create(&cfg.ptr));
  build_config(o, cfg.ptr);
  ReportHandle rep;
  check(maser_verify(cfg.ptr, &rep.ptr));
  const std::string text = read_buffer([&](char* b, size_t n, size_t* need) {
    return maser_report_format(rep.ptr, b, n, need);
  });
  emit(o.out, header(cfg.ptr, "verify") + text);
  return maser_report_all_passed(rep.ptr) ? kExitPass : kExitPhysics;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-level maser thermodynamics: steady state, flows and "
               "entropy production"};
  app.set_version_flag("--version", std::string(maser_version()));
  app.require_subcommand(1);

  CommonOptions point_opts, sweep_opts, find_opts, verify_opts;
  auto* point = app.add_subcommand("point", "evaluate one operating point");
  auto* sweep = app.add_subcommand("sweep", "grid sweep to CSV");
  auto* find = app.add_subcommand("find-violation",
                                  "search for negative naive entropy production");
  auto* verify = app.add_subcommand("verify", "run every cross-check at one point");
  add_common(point, point_opts);
  add_common(sweep, sweep_opts);
  add_common(find, find_opts);
  add_common(verify, verify_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*point) return run_point(point_opts);
    if (*sweep) return run_sweep(sweep_opts);
    if (*find) return run_find_violation(find_opts);
    if (*verify) return run_verify(verify_opts);
  } catch (const LibraryError& e) {
    std::cerr << "error: " << e.message << '\n';
    return exit_code_for(e.status);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

#pragma once

// Flat key-value configuration.
//
// Grammar, one entry per line:
//   key = value      # trailing comments allowed
//   # full-line comment
// Blank lines are ignored. Keys:
//   omega_u omega_l omega_d epsilon gamma_u gamma_l n_u n_l
//   sweep = name:min:max:count[:log]     (may appear twice)
//   out = <path>   seed = <uint64>   verify = true|false
//   budget = <samples>
//   search.<delta|n_u|n_l|gamma_u|gamma_l|epsilon> = min:max[:log] | value
//   search.tie_occupations = true|false
//   tol.<name> = <value>   (see Tolerances)
// Later entries for a scalar key replace earlier ones, so command-line flags
// applied after the file override it.

#include "maser/sweep.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace maser {

class KeyValueConfig {
 public:
  void load_file(const std::string& path);
  void parse(std::istream& in, std::string_view origin = "<input>");

  // Replaces every existing entry for key.
  void set(std::string key, std::string value);
  // Appends without removing earlier entries (used for repeated sweep axes).
  void append(std::string key, std::string value);
  void erase(std::string_view key);

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  // Throws Error(config_error) on unknown keys or malformed values.
  RunConfig build() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

double parse_double(std::string_view text, std::string_view what);
std::uint64_t parse_uint(std::string_view text, std::string_view what);
bool parse_bool(std::string_view text, std::string_view what);

}  // namespace maser

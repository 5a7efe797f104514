#include "maser/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace maser {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorCode::config_error, msg);
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    config_error("invalid number for " + std::string(what) + ": '" +
                 std::string(text) + "'");
  return v;
}

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    config_error("invalid unsigned integer for " + std::string(what) + ": '" +
                 std::string(text) + "'");
  return v;
}

bool parse_bool(std::string_view text, std::string_view what) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  config_error("invalid boolean for " + std::string(what) + ": '" +
               std::string(text) + "'");
}

void KeyValueConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path + "'");
  parse(in, path);
}

void KeyValueConfig::parse(std::istream& in, std::string_view origin) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos)
      s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      std::ostringstream os;
      os << origin << ":" << lineno << ": expected 'key = value'";
      config_error(os.str());
    }
    std::string key(trim(s.substr(0, eq)));
    std::string value(trim(s.substr(eq + 1)));
    if (key.empty()) {
      std::ostringstream os;
      os << origin << ":" << lineno << ": empty key";
      config_error(os.str());
    }
    if (key == "sweep")
      append(std::move(key), std::move(value));
    else
      set(std::move(key), std::move(value));
  }
}

void KeyValueConfig::set(std::string key, std::string value) {
  erase(key);
  entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValueConfig::append(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValueConfig::erase(std::string_view key) {
  std::erase_if(entries_, [&](const auto& kv) { return kv.first == key; });
}

RunConfig KeyValueConfig::build() const {
  RunConfig cfg;
  cfg.echo = entries_;
  for (const auto& [key, value] : entries_) {
    if (key == "sweep") {
      cfg.axes.push_back(parse_axis(value));
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "seed") {
      cfg.seed = parse_uint(value, key);
    } else if (key == "verify") {
      cfg.verify = parse_bool(value, key);
    } else if (key == "budget") {
      cfg.search.budget = parse_uint(value, key);
    } else if (key == "search.tie_occupations") {
      cfg.search.tie_occupations = parse_bool(value, key);
    } else if (key.starts_with("search.")) {
      const std::string_view dim = std::string_view(key).substr(7);
      SearchRange r = parse_search_range(value);
      if (dim == "delta") cfg.search.delta = r;
      else if (dim == "n_u") cfg.search.n_u = r;
      else if (dim == "n_l") cfg.search.n_l = r;
      else if (dim == "gamma_u") cfg.search.gamma_u = r;
      else if (dim == "gamma_l") cfg.search.gamma_l = r;
      else if (dim == "epsilon") cfg.search.epsilon = r;
      else config_error("unknown search dimension '" + std::string(dim) + "'");
    } else if (key.starts_with("tol.")) {
      set_tolerance(cfg.tol, std::string_view(key).substr(4),
                    parse_double(value, key));
    } else if (is_parameter_name(key) && key != "delta") {
      set_parameter(cfg.base, key, parse_double(value, key));
    } else {
      config_error("unknown configuration key '" + key + "'");
    }
  }
  if (cfg.axes.size() > 2) config_error("at most two sweep axes are supported");
  return cfg;
}

}  // namespace maser

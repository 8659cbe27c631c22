#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "hampack/error.hpp"
#include "hampack/pipeline.hpp"

namespace hampack {

PackingConfig default_config() {
  PackingConfig cfg;
  cfg.eta = (cfg.alpha / 16.0) * std::exp(-16.0 / cfg.alpha - 1.0);
  return cfg;
}

namespace {

void in_open_unit(const char* name, double v) {
  if (!(v > 0.0 && v < 1.0)) throw ConfigError(std::string(name) + " must lie in (0,1)");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  return out;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config key '" + key + "': not an unsigned integer: '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': not a boolean: '" + v + "'");
}

}  // namespace

void validate_config(const PackingConfig& cfg) {
  in_open_unit("alpha", cfg.alpha);
  in_open_unit("beta", cfg.beta);
  in_open_unit("lambda", cfg.lambda);
  in_open_unit("c", cfg.c);
  if (!(cfg.eta >= 0.0 && cfg.eta < 1.0)) throw ConfigError("eta must lie in [0,1)");
  if (cfg.m_override && *cfg.m_override < 1) throw ConfigError("m_override must be at least 1");
  if (!(cfg.expander_c > 0.0)) throw ConfigError("expander_c must be positive");
  if (cfg.retry_budget < 0) throw ConfigError("retry_budget must be non-negative");
  if (cfg.max_fixed_ends < 1) throw ConfigError("max_fixed_ends must be at least 1");
}

PackingConfig parse_config(std::string_view text) {
  PackingConfig cfg = parse_config_unchecked(text);
  validate_config(cfg);
  return cfg;
}

PackingConfig parse_config_unchecked(std::string_view text) {
  PackingConfig cfg = default_config();
  bool eta_set = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string val = trim(std::string_view(body).substr(eq + 1));
    if (key == "alpha") {
      cfg.alpha = to_double(key, val);
    } else if (key == "beta") {
      cfg.beta = to_double(key, val);
    } else if (key == "lambda") {
      cfg.lambda = to_double(key, val);
    } else if (key == "c") {
      cfg.c = to_double(key, val);
    } else if (key == "eta") {
      cfg.eta = to_double(key, val);
      eta_set = true;
    } else if (key == "epsilon") {
      cfg.epsilon = val;
    } else if (key == "m_override") {
      if (val == "none" || val.empty())
        cfg.m_override.reset();
      else
        cfg.m_override = to_int(key, val);
    } else if (key == "expander_c") {
      cfg.expander_c = to_double(key, val);
    } else if (key == "retry_budget") {
      cfg.retry_budget = to_int(key, val);
    } else if (key == "max_fixed_ends") {
      cfg.max_fixed_ends = to_int(key, val);
    } else if (key == "k_clamping") {
      cfg.k_clamping = to_bool(key, val);
    } else if (key == "single_round_fallback") {
      cfg.single_round_fallback = to_bool(key, val);
    } else if (key == "record_timing") {
      cfg.record_timing = to_bool(key, val);
    } else if (key == "seed") {
      cfg.seed = to_uint(key, val);
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!eta_set) cfg.eta = (cfg.alpha / 16.0) * std::exp(-16.0 / cfg.alpha - 1.0);
  return cfg;
}

std::string config_to_text(const PackingConfig& cfg) {
  auto num = [](double v) {
    char buf[32];
    return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
  };
  std::ostringstream out;
  out << "alpha = " << num(cfg.alpha) << '\n'
      << "beta = " << num(cfg.beta) << '\n'
      << "lambda = " << num(cfg.lambda) << '\n'
      << "c = " << num(cfg.c) << '\n'
      << "eta = " << num(cfg.eta) << '\n'
      << "epsilon = " << cfg.epsilon << '\n'
      << "m_override = " << (cfg.m_override ? std::to_string(*cfg.m_override) : "none") << '\n'
      << "expander_c = " << num(cfg.expander_c) << '\n'
      << "retry_budget = " << cfg.retry_budget << '\n'
      << "max_fixed_ends = " << cfg.max_fixed_ends << '\n'
      << "k_clamping = " << (cfg.k_clamping ? "true" : "false") << '\n'
      << "single_round_fallback = " << (cfg.single_round_fallback ? "true" : "false") << '\n'
      << "record_timing = " << (cfg.record_timing ? "true" : "false") << '\n'
      << "seed = " << cfg.seed << '\n';
  return out.str();
}

}  // namespace hampack

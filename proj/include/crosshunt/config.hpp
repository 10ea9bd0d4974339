#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "crosshunt/correlator.hpp"
#include "crosshunt/detail/strings.hpp"
#include "crosshunt/edge_rules.hpp"

namespace crosshunt {

inline constexpr const char* kConfigEnv = "CROSSHUNT_CONFIG";

struct Config {
  std::filesystem::path corpus_dir = "corpus";
  BucketParams buckets;
  Weights weights;
  double alert_threshold = 0.5;
  std::filesystem::path rule_file;  // empty: built-in table
  std::vector<std::string> shared_object_suffixes = RuleOptions{}.shared_object_suffixes;
  bool row5_disjunctive = false;
  bool initial_compromise_exception = false;
  std::size_t workers = 0;

  void validate() const {
    buckets.validate();
    weights.validate();
    if (!(alert_threshold >= 0.0 && alert_threshold <= 1.0)) {
      throw Error(Errc::invalid_argument, "alert_threshold must lie in [0, 1]");
    }
    if (shared_object_suffixes.empty()) throw Error(Errc::invalid_argument, "shared_object_suffixes is empty");
  }

  RuleSet rules() const {
    if (!rule_file.empty()) return RuleSet::load(rule_file, row5_disjunctive);
    RuleOptions o;
    o.shared_object_suffixes = shared_object_suffixes;
    o.row5_disjunctive = row5_disjunctive;
    o.initial_compromise_exception = initial_compromise_exception;
    return RuleSet::defaults(o);
  }

  HuntConfig hunt_config(std::vector<std::string> seeds = {}) const {
    HuntConfig h;
    h.seed_ids = std::move(seeds);
    h.alert_threshold = alert_threshold;
    h.weights = weights;
    h.buckets = buckets;
    h.workers = workers;
    return h;
  }
};

namespace detail {

inline bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(Errc::invalid_argument, "expected a boolean, got '" + std::string(v) + "'");
}

inline double require_double(std::string_view key, std::string_view v) {
  auto d = parse_double(v);
  if (!d) throw Error(Errc::invalid_argument, std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  return *d;
}

inline std::uint64_t require_u64(std::string_view key, std::string_view v) {
  auto n = parse_u64(v);
  if (!n) throw Error(Errc::invalid_argument, std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  return *n;
}

}  // namespace detail

/// Applies `key = value` lines to `base`. Blank lines and '#' comments are
/// ignored; unknown keys are errors.
inline Config parse_config(std::string_view text, Config base = {}) {
  Config c = std::move(base);
  std::size_t line_no = 0;
  for (std::string_view line : detail::split(text, '\n')) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::malformed_document, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key == "corpus_dir") {
      c.corpus_dir = std::string(value);
    } else if (key == "jaccard_threshold" || key == "J_T") {
      c.buckets.jaccard_threshold = detail::require_double(key, value);
    } else if (key == "signature_length" || key == "D") {
      c.buckets.signature_length = detail::require_u64(key, value);
    } else if (key == "minhash_seed" || key == "seed") {
      c.buckets.seed = detail::require_u64(key, value);
    } else if (key == "bands") {
      c.buckets.bands = detail::require_u64(key, value);
    } else if (key == "exact_jaccard") {
      c.buckets.exact_jaccard = detail::parse_bool(value);
    } else if (key == "w1" || key == "W1") {
      c.weights.w1 = detail::require_double(key, value);
    } else if (key == "w2" || key == "W2") {
      c.weights.w2 = detail::require_double(key, value);
    } else if (key == "w3" || key == "W3") {
      c.weights.w3 = detail::require_double(key, value);
    } else if (key == "alert_threshold") {
      c.alert_threshold = detail::require_double(key, value);
    } else if (key == "rule_file") {
      c.rule_file = std::string(value);
    } else if (key == "shared_object_suffixes") {
      c.shared_object_suffixes.clear();
      for (auto s : detail::split(value, ',')) {
        if (!detail::trim(s).empty()) c.shared_object_suffixes.emplace_back(detail::trim(s));
      }
    } else if (key == "row5_disjunctive") {
      c.row5_disjunctive = detail::parse_bool(value);
    } else if (key == "initial_compromise_exception") {
      c.initial_compromise_exception = detail::parse_bool(value);
    } else if (key == "workers") {
      c.workers = detail::require_u64(key, value);
    } else {
      throw Error(Errc::invalid_argument, "config line " + std::to_string(line_no) + ": unknown key '" +
                                              std::string(key) + "'");
    }
  }
  c.validate();
  return c;
}

inline Config load_config(const std::filesystem::path& path, Config base = {}) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_failure, "cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

/// Defaults, overlaid with the file named by CROSSHUNT_CONFIG when set.
inline Config config_from_env() {
  const char* path = std::getenv(kConfigEnv);
  if (!path || !*path) return Config{};
  return load_config(path);
}

}  // namespace crosshunt

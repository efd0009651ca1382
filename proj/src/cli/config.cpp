#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "wittdeform/suite.hpp"

namespace wd {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& msg) { throw Error(Errc::MalformedSpec, "config: " + msg); }

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) malformed(where + ": unknown key '" + k + "'");
}

template <class T>
T get(const json& j, const char* key, const std::string& where, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    malformed(where + ": '" + key + "' has the wrong type");
  }
}

std::vector<std::string> strings(const json& j, const char* key, const std::string& where) {
  return get<std::vector<std::string>>(j, key, where, {});
}

ScenarioSpec parse_scenario(const json& j, std::size_t index, std::uint64_t seed) {
  std::string where = "scenarios[" + std::to_string(index) + "]";
  if (!j.is_object()) malformed(where + " is not an object");
  allow_keys(j, where, {"id", "ring", "p", "l", "m", "D", "lambda", "nu", "a", "test_algebras", "checks", "seed"});
  ScenarioSpec s;
  s.id = get<std::string>(j, "id", where, "");
  if (s.id.empty()) malformed(where + ": 'id' is required");
  where = "scenario '" + s.id + "'";
  s.ring = get<std::string>(j, "ring", where, "");
  if (s.ring.empty()) malformed(where + ": 'ring' is required");
  s.p = get<unsigned>(j, "p", where, 2);
  s.l = get<unsigned>(j, "l", where, 1);
  s.m = get<unsigned>(j, "m", where, 2);
  s.D = get<unsigned>(j, "D", where, 8);
  s.lambda = get<std::string>(j, "lambda", where, "");
  s.nu = strings(j, "nu", where);
  s.a = strings(j, "a", where);
  s.test_algebras = strings(j, "test_algebras", where);
  s.checks = strings(j, "checks", where);
  if (s.checks.empty()) malformed(where + ": 'checks' is empty");
  const auto& ids = check_ids();
  for (const auto& c : s.checks)
    if (std::find(ids.begin(), ids.end(), c) == ids.end()) malformed(where + ": unknown check '" + c + "'");
  s.seed = get<std::uint64_t>(j, "seed", where, seed);
  return s;
}

std::string message_of(const Error& e) {
  std::string w = e.what(), prefix = std::string(errc_name(e.code())) + ": ";
  return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
}

}  // namespace

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = {"psi",      "L4_1",       "L4_2",     "L4_3",        "cocycle_identity",
                                               "L4_5_roundtrip", "L4_7", "exact_seq", "nl_algebra", "pairing",
                                               "diagrams", "theorem_1_4", "cyclotomic"};
  return ids;
}

SuiteConfig parse_config(const json& j) {
  if (!j.is_object()) malformed("top level is not an object");
  allow_keys(j, "config", {"format_version", "seed", "cache_dir", "budgets", "max_witt_length", "output", "scenarios"});
  SuiteConfig c;
  int version = get<int>(j, "format_version", "config", kConfigVersion);
  if (version != kConfigVersion) malformed("format_version " + std::to_string(version) + " is not supported");
  c.seed = get<std::uint64_t>(j, "seed", "config", 0);
  c.cache_dir = get<std::string>(j, "cache_dir", "config", "");
  c.output = get<std::string>(j, "output", "config", "json");
  if (c.output != "json" && c.output != "md") malformed("output must be json or md");
  if (j.contains("budgets")) {
    const json& b = j.at("budgets");
    if (!b.is_object()) malformed("budgets is not an object");
    allow_keys(b, "budgets", {"enumeration", "branch", "samples", "cocycle_cap", "time_seconds"});
    c.budgets.enumeration = get<std::size_t>(b, "enumeration", "budgets", c.budgets.enumeration);
    c.budgets.branch = get<std::size_t>(b, "branch", "budgets", c.budgets.branch);
    c.budgets.samples = get<unsigned>(b, "samples", "budgets", c.budgets.samples);
    c.budgets.cocycle_cap = get<unsigned>(b, "cocycle_cap", "budgets", c.budgets.cocycle_cap);
    c.time_seconds = get<double>(b, "time_seconds", "budgets", 0);
  }
  if (j.contains("max_witt_length")) {
    const json& m = j.at("max_witt_length");
    if (!m.is_object()) malformed("max_witt_length is not an object");
    for (const auto& [k, v] : m.items()) {
      unsigned p = 0;
      try {
        p = unsigned(std::stoul(k));
      } catch (const std::exception&) {
        malformed("max_witt_length key '" + k + "' is not a prime");
      }
      if (!is_prime(p) || !v.is_number_unsigned()) malformed("max_witt_length entry '" + k + "' is invalid");
      c.max_witt_length[p] = v.get<unsigned>();
    }
  }
  if (!j.contains("scenarios") || !j.at("scenarios").is_array() || j.at("scenarios").empty())
    malformed("'scenarios' must be a non-empty array");
  std::set<std::string> seen;
  std::size_t i = 0;
  for (const auto& s : j.at("scenarios")) {
    c.scenarios.push_back(parse_scenario(s, i++, c.seed));
    if (!seen.insert(c.scenarios.back().id).second) malformed("duplicate scenario id '" + c.scenarios.back().id + "'");
  }
  c.echo = j;
  return c;
}

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
  return parse_config(j);
}

void apply_settings(const SuiteConfig& cfg) {
  for (const auto& [p, m] : cfg.max_witt_length) set_max_length(p, m);
  if (!cfg.cache_dir.empty() && !std::getenv("WITTDEFORM_CACHE_DIR"))
    ::setenv("WITTDEFORM_CACHE_DIR", cfg.cache_dir.c_str(), 0);
}

Scenario build_scenario(const ScenarioSpec& s) {
  if (s.ring != "cyclotomic") return make_scenario(s);
  if (!s.lambda.empty() || !s.nu.empty() || !s.a.empty())
    throw Error(Errc::ScenarioInvalid, s.id + ": the cyclotomic scenario fixes lambda, nu and a");
  Scenario out = cyclotomic_scenario(s.p, s.l, s.m, s.D).scenario;
  ScenarioSpec keep = out.spec;
  out.spec = s;
  out.spec.ring = keep.ring;
  out.spec.lambda = keep.lambda;
  out.spec.nu = keep.nu;
  return out;
}

std::vector<Scenario> validate(const SuiteConfig& cfg) {
  std::vector<Scenario> out;
  for (const auto& s : cfg.scenarios) {
    try {
      out.push_back(build_scenario(s));
    } catch (const Error& e) {
      throw Error(e.code(), "scenario '" + s.id + "': " + message_of(e));
    }
  }
  return out;
}

}  // namespace wd

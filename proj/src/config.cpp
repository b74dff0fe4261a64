#include "rarc/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <set>
#include <sstream>

#include "rarc/error.hpp"

namespace rarc {

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigError(what + ": cannot parse '" + text + "' as a number");
  }
  return v;
}

long long parse_int(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigError(what + ": cannot parse '" + text + "' as an integer");
  }
  return v;
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::set<std::string> seen;
  std::stringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
    kv.entries.emplace_back(std::move(key), std::move(value));
    kv.lines.push_back(number);
  }
  return kv;
}

const std::vector<std::string>& solver_field_names() {
  static const std::vector<std::string> names{
      "method", "gamma1",    "c",         "theta",     "alpha_max",       "p",
      "kappa_T", "kappa_S",  "reg_mode",  "ensemble",  "hashing_s",       "l",
      "l0",     "sketch_fraction", "C",   "D",         "rank_tol",        "gtol",
      "eps_H",  "max_iter",  "seed"};
  return names;
}

void apply_solver_field(SolverConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "method") {
    cfg.method = parse_method(v);
  } else if (key == "gamma1") {
    cfg.gamma1 = parse_double(v, key);
  } else if (key == "c") {
    cfg.c = static_cast<int>(parse_int(v, key));
  } else if (key == "theta") {
    cfg.theta = parse_double(v, key);
  } else if (key == "alpha_max") {
    cfg.alpha_max = parse_double(v, key);
  } else if (key == "p") {
    cfg.p = static_cast<int>(parse_int(v, key));
  } else if (key == "kappa_T") {
    cfg.kappa_T = parse_double(v, key);
  } else if (key == "kappa_S") {
    cfg.kappa_S = parse_double(v, key);
  } else if (key == "reg_mode") {
    if (v == "reduced") {
      cfg.reg_mode = RegularizerNorm::Reduced;
    } else if (v == "subspace") {
      cfg.reg_mode = RegularizerNorm::Subspace;
    } else {
      throw ConfigError("reg_mode must be reduced or subspace, got '" + v + "'");
    }
  } else if (key == "ensemble") {
    cfg.ensemble = parse_ensemble(v, cfg.ensemble.hashing_s);
  } else if (key == "hashing_s") {
    cfg.ensemble.hashing_s = static_cast<int>(parse_int(v, key));
  } else if (key == "l" || key == "l0") {
    cfg.sketch_dim = static_cast<Index>(parse_int(v, key));
  } else if (key == "sketch_fraction") {
    cfg.sketch_fraction = parse_double(v, key);
  } else if (key == "C") {
    cfg.C = parse_double(v, key);
  } else if (key == "D") {
    cfg.D = parse_double(v, key);
  } else if (key == "rank_tol") {
    cfg.rank_tol = parse_double(v, key);
  } else if (key == "gtol") {
    cfg.gtol = parse_double(v, key);
  } else if (key == "eps_H") {
    if (v == "none" || v.empty()) {
      cfg.eps_H.reset();
    } else {
      cfg.eps_H = parse_double(v, key);
    }
  } else if (key == "max_iter") {
    cfg.max_iter = static_cast<int>(parse_int(v, key));
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_int(v, key));
  } else {
    throw ConfigError("unknown solver key '" + key + "'");
  }
}

}  // namespace rarc

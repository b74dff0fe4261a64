#pragma once

#include <map>
#include <string>
#include <vector>

#include "rarc/driver.hpp"

namespace rarc {

/// Ordered key/value pairs read from `key = value` text. '#' starts a comment.
struct KeyValues {
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<int> lines;  // source line of each entry
};

/// Throws ConfigError on lines without '=', empty keys and duplicate keys.
KeyValues parse_key_values(const std::string& text);

/// Sets one SolverConfig field from text. Recognized keys:
///   method, gamma1, c, theta, alpha_max, p, kappa_T, kappa_S, reg_mode,
///   ensemble, hashing_s, l (alias l0), sketch_fraction, C, D, rank_tol,
///   gtol, eps_H, max_iter, seed
/// Throws ConfigError for unknown keys or unparsable values.
void apply_solver_field(SolverConfig& cfg, const std::string& key, const std::string& value);

/// Names accepted by apply_solver_field.
const std::vector<std::string>& solver_field_names();

double parse_double(const std::string& text, const std::string& what);
long long parse_int(const std::string& text, const std::string& what);
std::vector<std::string> split_list(const std::string& text, char sep = ',');
std::string trim(const std::string& text);

}  // namespace rarc

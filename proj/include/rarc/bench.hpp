#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rarc/config.hpp"
#include "rarc/driver.hpp"
#include "rarc/problems.hpp"

namespace rarc {

inline constexpr double kInfiniteBudget = std::numeric_limits<double>::infinity();

/// Relative Hessians seen, sum of (l_j/d)^2, before the first iterate with
/// f <= f_star + tau (f0 - f_star). Returns kInfiniteBudget if no row meets
/// the tolerance. Throws ParameterError if f0 <= f_star or tau is not in (0, 1).
double n_p(const RunRecord& record, double tau, double f0, double f_star);

struct ProfilePoint {
  double alpha = 0.0;
  double fraction = 0.0;
};

/// Fraction of budgets <= alpha for every alpha; infinite budgets never count.
/// Throws ParameterError on an empty budget list.
std::vector<ProfilePoint> data_profile(const std::vector<double>& budgets,
                                       const std::vector<double>& alphas);

/// `points` uniformly spaced values on [0, upper]; default 201 on [0, 100].
std::vector<double> alpha_grid(int points = 201, double upper = 100.0);

struct SuiteProblem {
  std::string id;
  std::string name;
  Index dim = 0;
  std::optional<Index> lowrank;  // base dimension r of a wrapped problem
  Rotation rotation = Rotation::HaarRotated;
};

struct SuiteSolver {
  std::string id;
  SolverConfig config;
};

struct SuiteConfig {
  std::vector<SuiteProblem> problems;
  std::vector<SuiteSolver> solvers;
  std::vector<double> taus{1e-3};
  std::uint64_t master_seed = 0;
  int repetitions = 1;
  std::vector<double> alphas = alpha_grid();
  int threads = 1;
};

/// Reads a suite from key/value text. Recognized keys:
///
///   seed, repetitions, tau (comma list), profile_points, profile_max, threads
///   problem.<id>.{name, dim, lowrank, rotation}
///   solver.<id>.<field>   for every field of apply_solver_field
///
/// Unknown keys and incomplete entries are ConfigErrors.
SuiteConfig parse_suite_config(const std::string& text);

/// Problem instance for a suite entry. Wrapped problems draw their embedding
/// from `seed`.
ProblemPtr build_problem(const SuiteProblem& spec, std::uint64_t seed);

struct NpRow {
  std::string problem;
  std::string solver;
  double tau = 0.0;
  int rep = 0;
  double n_p = 0.0;
  std::string status;
};

struct SuiteRun {
  std::size_t problem_index = 0;
  std::size_t solver_index = 0;
  int rep = 0;
  RunRecord record;
};

struct SuiteResult {
  std::vector<SuiteRun> runs;       // ordered by (problem, solver, rep)
  std::vector<NpRow> np_rows;       // ordered by (problem, solver, rep, tau)
  std::vector<std::filesystem::path> files;
};

/// Executes every (problem, solver, repetition) run and writes into out_dir:
///   trace_<problem>_<solver>_<rep>.csv  for every run
///   np_table.csv
///   profile_<solver>_tau<tau>.csv        for every solver and tolerance
/// Run r (in (problem, solver, rep) order) uses the random stream
/// derive_seed(master stream, r). Failed runs are recorded, never fatal.
SuiteResult run_suite(const SuiteConfig& cfg, const std::filesystem::path& out_dir);

inline constexpr const char* kTraceHeader =
    "k,f,sketched_grad_norm,true_grad_norm,l,alpha,success,step_norm,cum_rel_hess,wall_ns";
inline constexpr const char* kNpHeader = "problem,solver,tau,rep,n_p,status";
inline constexpr const char* kProfileHeader = "alpha,fraction";

/// Shortest decimal text that round-trips (%.17g); infinity is "inf".
std::string format_double(double v);

void write_trace_csv(std::ostream& out, const RunRecord& record);
void write_np_table_csv(std::ostream& out, const std::vector<NpRow>& rows);
void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& profile);

/// Parses a file produced by write_np_table_csv. Throws ConfigError on a bad
/// header or malformed rows.
std::vector<NpRow> read_np_table_csv(std::istream& in);

}  // namespace rarc

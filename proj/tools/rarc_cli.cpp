// Command-line front end: single runs, benchmark suites and data profiles.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rarc/bench.hpp"
#include "rarc/config.hpp"
#include "rarc/driver.hpp"
#include "rarc/error.hpp"
#include "rarc/problems.hpp"
#include "rarc/random.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rarc::ConfigError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct RunOptions {
  std::string problem;
  long long dim = 0;
  long long lowrank = 0;
  std::string rotation = "haar";
  std::string solver = "rarc";
  std::string ensemble = "gaussian";
  int hashing_s = 1;
  long long l = 0;
  long long l0 = 0;
  double sketch_fraction = 0.0;
  unsigned long long seed = 0;
  double eps_h = 0.0;
  std::vector<std::string> overrides;
  std::string out;
};

int do_run(const RunOptions& o) {
  rarc::SolverConfig cfg;
  cfg.method = rarc::parse_method(o.solver);
  cfg.ensemble = rarc::parse_ensemble(o.ensemble, o.hashing_s);
  cfg.sketch_dim = static_cast<rarc::Index>(o.l0 > 0 ? o.l0 : o.l);
  cfg.sketch_fraction = o.sketch_fraction;
  cfg.seed = o.seed;
  if (o.eps_h > 0.0) cfg.eps_H = o.eps_h;
  for (const auto& item : o.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw rarc::ConfigError("--set expects key=value, got '" + item + "'");
    rarc::apply_solver_field(cfg, rarc::trim(item.substr(0, eq)), item.substr(eq + 1));
  }
  if (cfg.method == rarc::Method::RArc && o.l0 > 0) throw rarc::ConfigError("--l0 is for rarcd; use --l");
  if (cfg.method == rarc::Method::RArcD && o.l > 0) throw rarc::ConfigError("--l is for rarc; use --l0");
  try {
    cfg.validate();
  } catch (const rarc::ParameterError& e) {
    throw rarc::ConfigError(e.what());
  }

  rarc::SuiteProblem spec;
  spec.id = o.problem;
  spec.name = o.problem;
  spec.dim = static_cast<rarc::Index>(o.dim);
  if (o.lowrank > 0) spec.lowrank = static_cast<rarc::Index>(o.lowrank);
  spec.rotation = rarc::parse_rotation(o.rotation);
  rarc::ProblemPtr problem;
  try {
    problem = rarc::build_problem(spec, rarc::derive_seed(o.seed, 0));
  } catch (const rarc::DimensionError& e) {
    throw rarc::ConfigError(e.what());
  }

  const rarc::RunRecord record = rarc::run(*problem, cfg);
  if (!o.out.empty()) {
    std::ofstream out(o.out, std::ios::binary);
    if (!out) throw rarc::ConfigError("cannot write " + o.out);
    rarc::write_trace_csv(out, record);
  }
  const auto& last = record.rows.back();
  std::cout << "problem " << problem->name() << " d=" << problem->dim() << " solver " << o.solver
            << "\nstatus " << rarc::to_string(record.status) << " after " << last.k << " iterations"
            << "\nf " << rarc::format_double(last.f) << "  |S grad f| "
            << rarc::format_double(last.sketched_grad_norm) << "  |grad f| "
            << rarc::format_double(last.true_grad_norm) << "  l " << last.l
            << "  relative Hessians " << rarc::format_double(last.cum_rel_hess) << '\n';
  if (cfg.eps_H) {
    std::cout << "lambda_min(S H S^T) " << rarc::format_double(record.final_sketched_min_eig) << '\n';
  }
  if (!record.message.empty()) std::cerr << "error: " << record.message << '\n';
  return record.status == rarc::RunStatus::SolverFailure ? kExitNumeric : 0;
}

int do_bench(const std::string& config_path, const std::string& out_dir) {
  const rarc::SuiteConfig cfg = rarc::parse_suite_config(read_file(config_path));
  const rarc::SuiteResult result = rarc::run_suite(cfg, out_dir);
  std::size_t failures = 0;
  for (const auto& r : result.runs)
    if (r.record.status == rarc::RunStatus::SolverFailure) ++failures;
  std::cout << result.runs.size() << " runs, " << failures << " failed, " << result.files.size()
            << " files written to " << out_dir << '\n';
  return 0;
}

int do_profile(const std::string& table_path, double tau, const std::string& solver,
               const std::string& out_path, int points, double upper) {
  std::ifstream in(table_path, std::ios::binary);
  if (!in) throw rarc::ConfigError("cannot open " + table_path);
  const auto rows = rarc::read_np_table_csv(in);
  std::vector<double> budgets;
  std::string chosen = solver;
  for (const auto& r : rows) {
    if (std::abs(r.tau - tau) > 1e-12 * std::abs(tau)) continue;
    if (chosen.empty()) chosen = r.solver;
    if (r.solver != chosen) {
      if (solver.empty()) throw rarc::ConfigError("table holds several solvers; pick one with --solver");
      continue;
    }
    budgets.push_back(r.n_p);
  }
  if (budgets.empty()) throw rarc::ConfigError("no rows match the requested tau/solver");
  const auto profile = rarc::data_profile(budgets, rarc::alpha_grid(points, upper));
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw rarc::ConfigError("cannot write " + out_path);
  rarc::write_profile_csv(out, profile);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random subspace cubic regularization: runs, benchmark suites and data profiles"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Solve one problem and optionally write its trace");
  run_cmd->add_option("--problem", run_opts.problem, "Built-in problem name")->required();
  run_cmd->add_option("--dim", run_opts.dim, "Problem dimension d")->required();
  run_cmd->add_option("--lowrank", run_opts.lowrank, "Wrap a rank-R copy of the problem into dimension d");
  run_cmd->add_option("--rotation", run_opts.rotation, "Embedding of the wrapped problem: axis or haar");
  run_cmd->add_option("--solver", run_opts.solver, "arc, rarc or rarcd");
  run_cmd->add_option("--ensemble", run_opts.ensemble, "gaussian, sampling, haar, hashing or identity");
  run_cmd->add_option("--hashing-s", run_opts.hashing_s, "Nonzeros per column for hashing sketches");
  auto* l_opt = run_cmd->add_option("--l", run_opts.l, "Sketch dimension (rarc)");
  auto* l0_opt = run_cmd->add_option("--l0", run_opts.l0, "Initial sketch dimension (rarcd)");
  l_opt->excludes(l0_opt);
  run_cmd->add_option("--sketch-fraction", run_opts.sketch_fraction, "Sketch dimension as a fraction of d");
  run_cmd->add_option("--seed", run_opts.seed, "Random seed");
  run_cmd->add_option("--second-order", run_opts.eps_h, "Enable second-order stopping with this eps_H");
  run_cmd->add_option("--set", run_opts.overrides, "Override a solver field, key=value (repeatable)");
  run_cmd->add_option("--out", run_opts.out, "Trace CSV path");

  std::string config_path;
  std::string out_dir;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite described by a config file");
  bench_cmd->add_option("--config", config_path, "Suite config file")->required();
  bench_cmd->add_option("--out-dir", out_dir, "Output directory")->required();

  std::string table_path;
  std::string profile_out;
  std::string profile_solver;
  double tau = 0.0;
  int points = 201;
  double upper = 100.0;
  auto* profile_cmd = app.add_subcommand("profile", "Data profile of one solver from an N_p table");
  profile_cmd->add_option("--np-table", table_path, "np_table.csv from a bench run")->required();
  profile_cmd->add_option("--tau", tau, "Tolerance")->required();
  profile_cmd->add_option("--out", profile_out, "Output CSV")->required();
  profile_cmd->add_option("--solver", profile_solver, "Solver id (required if the table has several)");
  profile_cmd->add_option("--points", points, "Number of alpha grid points");
  profile_cmd->add_option("--max", upper, "Largest alpha");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return do_run(run_opts);
    if (*bench_cmd) return do_bench(config_path, out_dir);
    if (*profile_cmd) return do_profile(table_path, tau, profile_solver, profile_out, points, upper);
  } catch (const rarc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rarc::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rarc::DimensionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rarc::Error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}

#include "rarc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "rarc/error.hpp"
#include "rarc/random.hpp"

namespace rarc {

namespace {

constexpr std::uint64_t kProblemStream = 0x70726f626c656d73ULL;
constexpr std::uint64_t kRunStream = 0x72756e73747265ULL;

}  // namespace

double n_p(const RunRecord& record, double tau, double f0, double f_star) {
  if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("tau must lie in (0, 1)");
  if (!(f0 > f_star)) throw ParameterError("degenerate problem: f0 <= f_star");
  const double target = f_star + tau * (f0 - f_star);
  for (const auto& row : record.rows) {
    if (row.f <= target) return row.cum_rel_hess;
  }
  return kInfiniteBudget;
}

std::vector<ProfilePoint> data_profile(const std::vector<double>& budgets,
                                       const std::vector<double>& alphas) {
  if (budgets.empty()) throw ParameterError("data profile needs at least one problem");
  std::vector<double> sorted = budgets;
  std::sort(sorted.begin(), sorted.end());
  const auto total = static_cast<double>(sorted.size());
  std::vector<ProfilePoint> out;
  out.reserve(alphas.size());
  for (double a : alphas) {
    const auto solved = std::upper_bound(sorted.begin(), sorted.end(), a) - sorted.begin();
    // Infinite budgets sort last and can never be <= a finite alpha.
    out.push_back({a, static_cast<double>(solved) / total});
  }
  return out;
}

std::vector<double> alpha_grid(int points, double upper) {
  if (points < 2) throw ParameterError("alpha grid needs at least two points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = upper * i / (points - 1);
  return grid;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const RunRecord& record) {
  out << kTraceHeader << '\n';
  for (const auto& r : record.rows) {
    out << r.k << ',' << format_double(r.f) << ',' << format_double(r.sketched_grad_norm) << ','
        << format_double(r.true_grad_norm) << ',' << r.l << ',' << format_double(r.alpha) << ','
        << (r.success ? 1 : 0) << ',' << format_double(r.step_norm) << ','
        << format_double(r.cum_rel_hess) << ',' << r.wall_ns << '\n';
  }
}

void write_np_table_csv(std::ostream& out, const std::vector<NpRow>& rows) {
  out << kNpHeader << '\n';
  for (const auto& r : rows) {
    out << r.problem << ',' << r.solver << ',' << format_double(r.tau) << ',' << r.rep << ','
        << format_double(r.n_p) << ',' << r.status << '\n';
  }
}

void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& profile) {
  out << kProfileHeader << '\n';
  for (const auto& p : profile) out << format_double(p.alpha) << ',' << format_double(p.fraction) << '\n';
}

std::vector<NpRow> read_np_table_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kNpHeader) {
    throw ConfigError("np table must start with header '" + std::string(kNpHeader) + "'");
  }
  std::vector<NpRow> rows;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (cells.size() != 6) {
      throw ConfigError("np table line " + std::to_string(number) + ": expected 6 fields");
    }
    NpRow r;
    r.problem = cells[0];
    r.solver = cells[1];
    r.tau = parse_double(cells[2], "tau");
    r.rep = static_cast<int>(parse_int(cells[3], "rep"));
    r.n_p = cells[4] == "inf" ? kInfiniteBudget : parse_double(cells[4], "n_p");
    r.status = cells[5];
    rows.push_back(std::move(r));
  }
  return rows;
}

SuiteConfig parse_suite_config(const std::string& text) {
  const KeyValues kv = parse_key_values(text);
  SuiteConfig cfg;
  std::map<std::string, SuiteProblem> problems;
  std::vector<std::string> problem_order;
  std::map<std::string, SuiteSolver> solvers;
  std::vector<std::string> solver_order;
  std::map<std::string, bool> has_name;
  int points = 201;
  double upper = 100.0;

  for (std::size_t i = 0; i < kv.entries.size(); ++i) {
    const auto& [key, value] = kv.entries[i];
    const std::string where = "line " + std::to_string(kv.lines[i]) + ": ";
    try {
      if (key == "seed") {
        cfg.master_seed = static_cast<std::uint64_t>(parse_int(value, key));
      } else if (key == "repetitions") {
        cfg.repetitions = static_cast<int>(parse_int(value, key));
      } else if (key == "tau") {
        cfg.taus.clear();
        for (const auto& t : split_list(value)) cfg.taus.push_back(parse_double(t, key));
      } else if (key == "profile_points") {
        points = static_cast<int>(parse_int(value, key));
      } else if (key == "profile_max") {
        upper = parse_double(value, key);
      } else if (key == "threads") {
        cfg.threads = static_cast<int>(parse_int(value, key));
      } else if (key.rfind("problem.", 0) == 0 || key.rfind("solver.", 0) == 0) {
        const auto first = key.find('.');
        const auto last = key.rfind('.');
        if (last == first) throw ConfigError("expected <section>.<id>.<field>");
        const std::string section = key.substr(0, first);
        const std::string id = key.substr(first + 1, last - first - 1);
        const std::string field = key.substr(last + 1);
        if (id.empty() || id.find_first_of(",/ ") != std::string::npos) {
          throw ConfigError("invalid id '" + id + "'");
        }
        if (section == "problem") {
          if (!problems.contains(id)) {
            problems[id].id = id;
            problem_order.push_back(id);
          }
          SuiteProblem& p = problems[id];
          if (field == "name") {
            p.name = value;
            has_name[id] = true;
          } else if (field == "dim") {
            p.dim = static_cast<Index>(parse_int(value, key));
          } else if (field == "lowrank") {
            p.lowrank = static_cast<Index>(parse_int(value, key));
          } else if (field == "rotation") {
            p.rotation = parse_rotation(value);
          } else {
            throw ConfigError("unknown problem field '" + field + "'");
          }
        } else {
          if (!solvers.contains(id)) {
            solvers[id].id = id;
            solver_order.push_back(id);
          }
          apply_solver_field(solvers[id].config, field, value);
        }
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }

  for (const auto& id : problem_order) {
    const SuiteProblem& p = problems[id];
    if (!has_name[id]) throw ConfigError("problem '" + id + "' has no name");
    if (p.dim < 2) throw ConfigError("problem '" + id + "' needs dim >= 2");
    if (p.lowrank && (*p.lowrank < 2 || *p.lowrank > p.dim)) {
      throw ConfigError("problem '" + id + "' needs 2 <= lowrank <= dim");
    }
    cfg.problems.push_back(p);
  }
  for (const auto& id : solver_order) {
    try {
      solvers[id].config.validate();
    } catch (const ParameterError& e) {
      throw ConfigError("solver '" + id + "': " + e.what());
    }
    cfg.solvers.push_back(solvers[id]);
  }
  if (cfg.problems.empty()) throw ConfigError("suite defines no problems");
  if (cfg.solvers.empty()) throw ConfigError("suite defines no solvers");
  if (cfg.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (cfg.taus.empty()) throw ConfigError("tau list is empty");
  for (double t : cfg.taus) {
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("every tau must lie in (0, 1)");
  }
  try {
    cfg.alphas = alpha_grid(points, upper);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ProblemPtr build_problem(const SuiteProblem& spec, std::uint64_t seed) {
  if (!spec.lowrank) return builtin_problem(spec.name, spec.dim);
  return make_low_rank(builtin_problem(spec.name, *spec.lowrank), spec.dim, spec.rotation, seed);
}

namespace {

std::string tau_label(double tau) {
  std::ostringstream s;
  s << tau;
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << contents;
}

}  // namespace

SuiteResult run_suite(const SuiteConfig& cfg, const std::filesystem::path& out_dir) {
  if (cfg.problems.empty() || cfg.solvers.empty()) throw ConfigError("suite has no problems or solvers");
  for (const auto& s : cfg.solvers) s.config.validate();

  const std::uint64_t problem_stream = derive_seed(cfg.master_seed, kProblemStream);
  const std::uint64_t run_stream = derive_seed(cfg.master_seed, kRunStream);

  std::vector<ProblemPtr> problems;
  for (std::size_t i = 0; i < cfg.problems.size(); ++i) {
    problems.push_back(build_problem(cfg.problems[i], derive_seed(problem_stream, i)));
  }

  SuiteResult result;
  for (std::size_t p = 0; p < problems.size(); ++p)
    for (std::size_t s = 0; s < cfg.solvers.size(); ++s)
      for (int rep = 0; rep < cfg.repetitions; ++rep) result.runs.push_back({p, s, rep, {}});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < result.runs.size(); i = next++) {
      SuiteRun& job = result.runs[i];
      SolverConfig solver = cfg.solvers[job.solver_index].config;
      solver.seed = derive_seed(derive_seed(run_stream, i), solver.seed);
      try {
        job.record = run(*problems[job.problem_index], solver);
      } catch (const Error& e) {
        job.record.problem = problems[job.problem_index]->name();
        job.record.status = RunStatus::SolverFailure;
        job.record.message = e.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(result.runs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Reference values: f(x0) and the known optimum, or the best value seen.
  std::vector<double> f0(problems.size());
  std::vector<double> f_star(problems.size());
  for (std::size_t p = 0; p < problems.size(); ++p) {
    f0[p] = problems[p]->value(problems[p]->initial_point());
    f_star[p] = problems[p]->optimal_value().value_or(kInfiniteBudget);
    if (!problems[p]->optimal_value()) {
      for (const auto& run : result.runs) {
        if (run.problem_index != p) continue;
        for (const auto& row : run.record.rows) f_star[p] = std::min(f_star[p], row.f);
      }
    }
  }

  std::filesystem::create_directories(out_dir);
  for (const auto& run : result.runs) {
    std::ostringstream trace;
    write_trace_csv(trace, run.record);
    const auto path = out_dir / ("trace_" + cfg.problems[run.problem_index].id + "_" +
                                 cfg.solvers[run.solver_index].id + "_" + std::to_string(run.rep) + ".csv");
    write_file(path, trace.str());
    result.files.push_back(path);

    for (double tau : cfg.taus) {
      NpRow row;
      row.problem = cfg.problems[run.problem_index].id;
      row.solver = cfg.solvers[run.solver_index].id;
      row.tau = tau;
      row.rep = run.rep;
      row.status = to_string(run.record.status);
      if (f0[run.problem_index] > f_star[run.problem_index]) {
        row.n_p = n_p(run.record, tau, f0[run.problem_index], f_star[run.problem_index]);
      } else {
        row.n_p = kInfiniteBudget;
        row.status = "Degenerate";
      }
      result.np_rows.push_back(std::move(row));
    }
  }

  std::ostringstream table;
  write_np_table_csv(table, result.np_rows);
  write_file(out_dir / "np_table.csv", table.str());
  result.files.push_back(out_dir / "np_table.csv");

  for (const auto& solver : cfg.solvers) {
    for (double tau : cfg.taus) {
      std::vector<double> budgets;
      for (const auto& row : result.np_rows)
        if (row.solver == solver.id && row.tau == tau) budgets.push_back(row.n_p);
      std::ostringstream profile;
      write_profile_csv(profile, data_profile(budgets, cfg.alphas));
      const auto path = out_dir / ("profile_" + solver.id + "_tau" + tau_label(tau) + ".csv");
      write_file(path, profile.str());
      result.files.push_back(path);
    }
  }
  return result;
}

}  // namespace rarc

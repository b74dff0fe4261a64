#include "rarc/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "rarc/error.hpp"
#include "rarc/subproblem.hpp"

namespace rarc {

std::string to_string(Method method) {
  switch (method) {
    case Method::Arc: return "arc";
    case Method::RArc: return "rarc";
    case Method::RArcD: return "rarcd";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "arc") return Method::Arc;
  if (name == "rarc") return Method::RArc;
  if (name == "rarcd") return Method::RArcD;
  throw ConfigError("unknown solver '" + name + "' (expected arc, rarc or rarcd)");
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::GradToleranceMet: return "GradToleranceMet";
    case RunStatus::SecondOrderMet: return "SecondOrderMet";
    case RunStatus::MaxIter: return "MaxIter";
    case RunStatus::SolverFailure: return "SolverFailure";
  }
  return "unknown";
}

double SolverConfig::gamma2() const { return 1.0 / std::pow(gamma1, c); }

double SolverConfig::alpha0() const { return alpha_max * std::pow(gamma1, p); }

Index SolverConfig::initial_sketch_dim(Index d) const {
  if (method == Method::Arc) return d;
  if (sketch_dim > 0) return sketch_dim;
  const auto l = static_cast<Index>(std::ceil(sketch_fraction * static_cast<double>(d)));
  return std::clamp<Index>(l, 1, d);
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) { throw ParameterError("invalid solver config: " + what); };
  if (!(gamma1 > 0.0 && gamma1 < 1.0)) fail("gamma1 must lie in (0, 1)");
  if (c < 1) fail("c must be a positive integer");
  if (!(theta > 0.0 && theta < 1.0)) fail("theta must lie in (0, 1)");
  if (!(alpha_max > 0.0)) fail("alpha_max must be positive");
  if (p < 1) fail("p must be a positive integer");
  if (!(kappa_T >= 0.0) || !(kappa_S >= 0.0)) fail("kappa_T and kappa_S must be nonnegative");
  if (adaptive() && !(C >= 1.0 && D >= 1.0)) fail("C and D must be >= 1");
  if (!(rank_tol > 0.0)) fail("rank_tol must be positive");
  if (!(gtol > 0.0)) fail("gtol must be positive");
  if (eps_H && !(*eps_H > 0.0)) fail("eps_H must be positive");
  if (max_iter < 1) fail("max_iter must be positive");
  if (sketch_dim < 0) fail("sketch dimension must be positive");
  if (method != Method::Arc && sketch_dim == 0 && !(sketch_fraction > 0.0 && sketch_fraction <= 1.0)) {
    fail("set a sketch dimension or a sketch fraction in (0, 1]");
  }
  if (ensemble.kind == EnsembleKind::SHashing && ensemble.hashing_s < 1) fail("hashing s must be >= 1");
}

MatrixXd assemble_hessian(const Problem& problem, const VectorXd& x) {
  const Index d = problem.dim();
  MatrixXd h(d, d);
  VectorXd e = VectorXd::Zero(d);
  for (Index j = 0; j < d; ++j) {
    e(j) = 1.0;
    h.col(j) = problem.hvp(x, e);
    e(j) = 0.0;
  }
  MatrixXd sym = 0.5 * (h + h.transpose());
  return sym;
}

IterateState initial_state(const Problem& problem, const SolverConfig& cfg) {
  cfg.validate();
  IterateState s;
  s.x = problem.initial_point();
  if (s.x.size() != problem.dim()) throw DimensionError("initial point has wrong dimension");
  s.f = problem.value(s.x);
  s.alpha = cfg.alpha0();
  s.l = cfg.initial_sketch_dim(problem.dim());
  if (s.l > problem.dim()) {
    throw DimensionError("sketch dimension " + std::to_string(s.l) + " exceeds d=" + std::to_string(problem.dim()));
  }
  if (cfg.method != Method::Arc && cfg.ensemble.kind == EnsembleKind::Identity && s.l != problem.dim()) {
    throw DimensionError("identity sketch requires l == d");
  }
  if (cfg.method != Method::Arc && cfg.ensemble.kind == EnsembleKind::SHashing && cfg.ensemble.hashing_s > s.l) {
    throw ParameterError("s-hashing requires s <= l");
  }
  s.rng = Rng(cfg.seed);
  return s;
}

void prepare_model(IterateState& state, const Problem& problem, const SolverConfig& cfg) {
  if (state.have_model) return;
  const VectorXd grad = problem.gradient(state.x);
  state.true_grad_norm = grad.norm();
  if (cfg.method == Method::Arc) {
    state.sketch.reset();
    state.g_hat = grad;
    state.B_hat = assemble_hessian(problem, state.x);
  } else {
    if (state.last_success || !state.sketch || state.sketch->rows() != state.l) {
      state.sketch = std::make_shared<const SketchMatrix>(
          draw_sketch(cfg.ensemble, state.l, problem.dim(), state.rng.next_u64()));
    }
    const VectorXd& x = state.x;
    state.g_hat = sketch_vector(*state.sketch, grad);
    state.B_hat = sketch_hessian(*state.sketch, [&](const VectorXd& v) { return problem.hvp(x, v); });
    if (cfg.adaptive()) {
      state.rank_max = std::max(state.rank_max, numeric_rank(state.B_hat, cfg.rank_tol));
    }
  }
  state.have_model = true;
}

Index update_sketch_dim(Index rank_k, Index rank_prev, Index l_k, int k, double C, double D, Index d) {
  if (k != 0 && rank_k <= rank_prev) return l_k;
  const auto grown = static_cast<Index>(std::ceil(C * static_cast<double>(rank_k) + D));
  return std::min(d, std::max(grown, l_k));
}

std::optional<double> rho(double f_k, double f_trial, double qhat0, double qhat_s) {
  const double predicted = qhat0 - qhat_s;
  if (!(predicted > kDecreaseFloor)) return std::nullopt;
  return (f_k - f_trial) / predicted;
}

bool sufficient_decrease(double f_k, double f_trial, double predicted_decrease, double theta) {
  if (!std::isfinite(f_trial)) return false;
  const double actual = f_k - f_trial;
  if (!(predicted_decrease > kDecreaseFloor)) return actual >= kDecreaseFloor;
  return actual >= theta * predicted_decrease;
}

IterationOutcome rarc_iteration(IterateState state, const Problem& problem, const SolverConfig& cfg) {
  prepare_model(state, problem, cfg);
  const Index d = problem.dim();

  const ReducedModel model =
      make_model(state.f, state.g_hat, state.B_hat, state.alpha, cfg.reg_mode, state.sketch);
  SubproblemSolution sol;
  try {
    sol = solve_cubic(model, cfg.kappa_T, cfg.kappa_S, cfg.eps_H.has_value());
  } catch (const Error& e) {
    throw SolverFailure("iteration " + std::to_string(state.k) + ": " + e.what());
  }

  const VectorXd step = state.sketch ? lift_vector(*state.sketch, sol.s_hat) : sol.s_hat;
  const VectorXd x_trial = state.x + step;
  const double f_trial = problem.value(x_trial);
  const double predicted = -(state.g_hat.dot(sol.s_hat) + 0.5 * sol.s_hat.dot(state.B_hat * sol.s_hat));
  const bool success = sufficient_decrease(state.f, f_trial, predicted, cfg.theta);

  IterationRow row;
  row.k = state.k;
  row.f = state.f;
  row.sketched_grad_norm = state.g_hat.norm();
  row.true_grad_norm = state.true_grad_norm;
  row.l = state.l;
  row.alpha = state.alpha;
  row.success = success;
  row.step_norm = step.norm();
  row.cum_rel_hess = state.cum_rel_hessians;

  const double ratio = static_cast<double>(state.l) / static_cast<double>(d);
  state.cum_rel_hessians += ratio * ratio;

  if (success) {
    state.x = x_trial;
    state.f = f_trial;
    state.alpha = std::min(cfg.alpha_max, cfg.gamma2() * state.alpha);
    state.have_model = false;
    if (cfg.adaptive()) {
      const bool first = state.rank_at_update < 0;
      state.l = update_sketch_dim(state.rank_max, state.rank_at_update, state.l, first ? 0 : state.k,
                                  cfg.C, cfg.D, d);
      state.rank_at_update = state.rank_max;
    }
  } else {
    state.alpha = cfg.gamma1 * state.alpha;
  }
  state.last_success = success;
  ++state.k;
  return {std::move(state), row};
}

namespace {

double min_eigenvalue(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

}  // namespace

RunRecord run(const Problem& problem, const SolverConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
  };

  IterateState state = initial_state(problem, cfg);
  RunRecord record;
  record.problem = problem.name();
  record.final_sketched_min_eig = std::numeric_limits<double>::quiet_NaN();

  auto terminal_row = [&](const IterateState& s) {
    IterationRow row;
    row.k = s.k;
    row.f = s.f;
    row.sketched_grad_norm = s.have_model ? s.g_hat.norm() : std::numeric_limits<double>::quiet_NaN();
    row.true_grad_norm = s.have_model ? s.true_grad_norm : std::numeric_limits<double>::quiet_NaN();
    row.l = s.l;
    row.alpha = s.alpha;
    row.cum_rel_hess = s.cum_rel_hessians;
    return row;
  };

  for (;;) {
    try {
      prepare_model(state, problem, cfg);
    } catch (const Error& e) {
      record.status = RunStatus::SolverFailure;
      record.message = e.what();
      break;
    }
    if (state.g_hat.norm() < cfg.gtol) {
      if (!cfg.eps_H) {
        record.status = RunStatus::GradToleranceMet;
        break;
      }
      const double lam = min_eigenvalue(state.B_hat);
      if (lam >= -*cfg.eps_H) {
        record.status = RunStatus::SecondOrderMet;
        break;
      }
    }
    if (state.k >= cfg.max_iter) {
      record.status = RunStatus::MaxIter;
      break;
    }
    IterationRow fallback = terminal_row(state);
    VectorXd x_before = state.x;
    try {
      auto outcome = rarc_iteration(std::move(state), problem, cfg);
      state = std::move(outcome.state);
      outcome.row.wall_ns = elapsed();
      record.rows.push_back(outcome.row);
    } catch (const Error& e) {
      record.status = RunStatus::SolverFailure;
      record.message = e.what();
      fallback.wall_ns = elapsed();
      record.rows.push_back(fallback);
      record.x_final = std::move(x_before);
      record.final_sketch_dim = fallback.l;
      record.wall_ns = elapsed();
      return record;
    }
  }

  IterationRow last = terminal_row(state);
  last.wall_ns = elapsed();
  record.rows.push_back(last);
  record.x_final = state.x;
  record.final_sketch_dim = state.l;
  if (cfg.eps_H && state.have_model) record.final_sketched_min_eig = min_eigenvalue(state.B_hat);
  record.wall_ns = elapsed();
  return record;
}

}  // namespace rarc

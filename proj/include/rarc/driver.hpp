#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rarc/model.hpp"
#include "rarc/problems.hpp"
#include "rarc/random.hpp"
#include "rarc/sketch.hpp"

namespace rarc {

enum class Method {
  Arc,    // full-space cubic regularization
  RArc,   // random subspace, fixed sketch dimension
  RArcD,  // random subspace, sketch dimension grown from the sketched Hessian rank
};

std::string to_string(Method method);
Method parse_method(const std::string& name);

/// Algorithm constants. The defaults are the benchmark settings.
struct SolverConfig {
  Method method = Method::RArc;
  double gamma1 = 0.5;       // alpha shrink factor on unsuccessful steps
  int c = 2;                 // gamma2 = gamma1^{-c}
  double theta = 0.01;       // sufficient decrease fraction
  double alpha_max = 1e6;
  int p = 1;                 // alpha0 = alpha_max * gamma1^p
  double kappa_T = 1.0;
  double kappa_S = 1.0;
  RegularizerNorm reg_mode = RegularizerNorm::Reduced;
  Ensemble ensemble = Ensemble::gaussian();
  Index sketch_dim = 0;          // l (RArc) or l0 (RArcD); 0 means use sketch_fraction
  double sketch_fraction = 0.0;  // l = ceil(fraction * d) when sketch_dim == 0
  double C = 1.0;                // dimension rule l' = max(ceil(C R + D), l)
  double D = 1.0;
  double rank_tol = kDefaultRankTol;
  double gtol = 1e-5;
  std::optional<double> eps_H;   // enables second-order stopping
  int max_iter = 2000;
  std::uint64_t seed = 0;

  double gamma2() const;
  double alpha0() const;
  bool adaptive() const { return method == Method::RArcD; }
  /// Sketch dimension of the first iteration for a problem of dimension d.
  /// A fractional dimension is clamped to [1, d]; an explicit one is not.
  Index initial_sketch_dim(Index d) const;
  /// Throws ParameterError on any constraint violation.
  void validate() const;
};

enum class RunStatus { GradToleranceMet, SecondOrderMet, MaxIter, SolverFailure };

std::string to_string(RunStatus status);

/// One trace row. Row k describes the iterate x_k and the iteration taken
/// from it; `cum_rel_hess` is the budget spent before x_k, i.e. the sum of
/// (l_j / d)^2 over j < k. The final row of a run is the terminal iterate,
/// for which success is false and step_norm is 0.
struct IterationRow {
  int k = 0;
  double f = 0.0;
  double sketched_grad_norm = 0.0;
  double true_grad_norm = 0.0;
  Index l = 0;
  double alpha = 0.0;
  bool success = false;
  double step_norm = 0.0;
  double cum_rel_hess = 0.0;
  std::int64_t wall_ns = 0;
};

struct RunRecord {
  std::string problem;
  std::vector<IterationRow> rows;
  RunStatus status = RunStatus::MaxIter;
  std::string message;
  VectorXd x_final;
  Index final_sketch_dim = 0;
  /// lambda_min(S hess f S^T) at the terminal iterate; NaN unless second-order
  /// stopping is enabled.
  double final_sketched_min_eig = 0.0;
  std::int64_t wall_ns = 0;
};

/// Mutable iteration state of Algorithms R-ARC / R-ARC-D.
struct IterateState {
  VectorXd x;
  double f = 0.0;
  int k = 0;
  double alpha = 0.0;
  Index l = 0;
  std::shared_ptr<const SketchMatrix> sketch;  // null in full-space mode
  Index rank_max = -1;         // running maximum of rank(S hess f S^T)
  Index rank_at_update = -1;   // rank_max when the dimension rule last fired; -1 before the first time
  bool last_success = true;
  double cum_rel_hessians = 0.0;
  Rng rng{0};

  // Derivatives at (x, sketch). Kept across unsuccessful iterations, where
  // both x and the sketch are unchanged.
  bool have_model = false;
  VectorXd g_hat;
  MatrixXd B_hat;
  double true_grad_norm = 0.0;
};

IterateState initial_state(const Problem& problem, const SolverConfig& cfg);

/// Ensures state holds g_hat and B_hat for the current iterate. A fresh sketch
/// is drawn from the state's random stream only after a successful iteration
/// (or at k = 0); otherwise the previous sketch is reused.
void prepare_model(IterateState& state, const Problem& problem, const SolverConfig& cfg);

struct IterationOutcome {
  IterateState state;
  IterationRow row;
};

/// One iteration: reduced model, exact subproblem solve, trial step
/// s = S^T s_hat, sufficient decrease test and alpha update. For RArcD the
/// sketch dimension rule is applied after successful iterations.
IterationOutcome rarc_iteration(IterateState state, const Problem& problem, const SolverConfig& cfg);

/// l_{k+1} = max(ceil(C R + D), l_k) if R > R_prev or k = 0, else l_k;
/// capped at d.
Index update_sketch_dim(Index rank_k, Index rank_prev, Index l_k, int k, double C, double D, Index d);

/// Ratio (f_k - f_trial) / (qhat0 - qhat_s); nullopt when the predicted
/// decrease is at most kDecreaseFloor.
std::optional<double> rho(double f_k, double f_trial, double qhat0, double qhat_s);

inline constexpr double kDecreaseFloor = 1e-14;

/// The sufficient decrease test f_k - f_trial >= theta (qhat(0) - qhat(s_hat)).
/// When the predicted decrease is at most kDecreaseFloor the step is accepted
/// only if f decreased by at least kDecreaseFloor.
bool sufficient_decrease(double f_k, double f_trial, double predicted_decrease, double theta);

/// Runs until |S grad f| < gtol (and, with eps_H set, lambda_min(S hess f S^T)
/// >= -eps_H) or max_iter iterations. Solver errors end the run with status
/// SolverFailure; configuration errors throw.
RunRecord run(const Problem& problem, const SolverConfig& cfg);

/// Dense Hessian from dim() Hessian-vector products, symmetrized.
MatrixXd assemble_hessian(const Problem& problem, const VectorXd& x);

}  // namespace rarc

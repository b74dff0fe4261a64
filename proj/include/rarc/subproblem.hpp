#pragma once

#include <array>

#include "rarc/model.hpp"

namespace rarc {

/// Global minimizer of g^T s + 1/2 s^T B s + (sigma/3)|s|^3 over R^l.
struct CubicMinimizer {
  VectorXd s;
  double lambda = 0.0;  // multiplier sigma * |s|
  int iterations = 0;   // secular-equation iterations
  bool hard_case = false;
};

inline constexpr int kMaxSecularIterations = 200;

/// Eigendecomposes B and solves the secular equation |(B + lambda I)^{-1} g|
/// = lambda / sigma for lambda >= max(0, -lambda_min(B)) by Newton's method
/// safeguarded with bisection. In the hard case (g orthogonal to the leftmost
/// eigenspace, |g^T u| <= 1e-12 |g|, and no interior root) an eigenvector
/// component is added so that |s| = lambda / sigma; its sign is chosen so the
/// first nonzero component of s is positive.
///
/// Throws NumericError on non-finite input or sigma <= 0 and SolverFailure if
/// the secular iteration does not converge within kMaxSecularIterations.
CubicMinimizer minimize_cubic(const VectorXd& g, const MatrixXd& B, double sigma);

struct SubproblemSolution {
  VectorXd s_hat;
  double model_decrease = 0.0;  // m(0) - m(s_hat)
  double grad_norm = 0.0;       // |grad m(s_hat)|
  double min_curvature = 0.0;   // lambda_min(hess m(s_hat)), or of B_hat at s_hat = 0
  double step_norm = 0.0;       // regularizer norm of s_hat
  std::array<bool, 3> conds{};  // model decrease, first-order, second-order termination tests
  int iterations = 0;
  bool hard_case = false;
};

/// Minimizes the reduced model exactly and certifies the three subproblem
/// termination tests:
///
///   m(s) <= m(0),  |grad m(s)| <= kappa_T |.|^2,  hess m(s) >= -kappa_S |.|
///
/// where |.| is the model's regularizer norm. The first two tests carry the
/// floating-point slack documented on kCertSlack; failing either one throws
/// SolverFailure. The curvature test only throws when check_second_order is
/// set, but it is always evaluated and reported.
///
/// In Subspace mode the problem is mapped to Euclidean form through
/// y = Lambda^{1/2} V^T s_hat on the range of S S^T = V Lambda V^T. The
/// model is constant along the null space of S S^T, so that component is 0.
SubproblemSolution solve_cubic(const ReducedModel& m, double kappa_T, double kappa_S,
                               bool check_second_order);

/// Relative slack applied to the certificates. Gradient residuals may reach
/// kCertSlack * (1 + |g_hat| + |B_hat| |s| + |.| |w| / alpha), with w = s or
/// S S^T s, and curvature may dip to -kCertSlack * (1 + |B_hat| + 2 |.| |S S^T| / alpha).
/// For moderate steps this is kCertSlack * (1 + |g_hat|) up to a small factor;
/// for very long steps it tracks the rounding error of the terms themselves.
inline constexpr double kCertSlack = 1e-8;

}  // namespace rarc

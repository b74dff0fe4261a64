#include "rarc/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rarc/error.hpp"

namespace rarc {

namespace {

constexpr double kHardCaseTol = 1e-12;

// Flips v so that its first clearly nonzero entry is positive.
void orient(VectorXd& v) {
  const double cutoff = 1e-14 * v.cwiseAbs().maxCoeff();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > cutoff) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

bool first_nonzero_positive(const VectorXd& v) {
  const double cutoff = 1e-14 * v.cwiseAbs().maxCoeff();
  for (Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > cutoff) return v(i) > 0.0;
  return true;
}

}  // namespace

CubicMinimizer minimize_cubic(const VectorXd& g, const MatrixXd& B, double sigma) {
  const Index l = g.size();
  if (B.rows() != l || B.cols() != l) throw DimensionError("minimize_cubic: B must be l x l");
  if (!g.allFinite() || !B.allFinite() || !std::isfinite(sigma)) {
    throw NumericError("cubic subproblem has non-finite data");
  }
  if (!(sigma > 0.0)) throw NumericError("cubic subproblem needs sigma > 0");

  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (B + B.transpose()));
  if (eig.info() != Eigen::Success) throw SolverFailure("eigendecomposition of B_hat failed");
  const VectorXd& evals = eig.eigenvalues();  // ascending
  const MatrixXd& evecs = eig.eigenvectors();
  VectorXd gq = evecs.transpose() * g;
  const double gnorm = g.norm();
  const double lam_min = evals(0);
  const double lo = std::max(0.0, -lam_min);

  CubicMinimizer out;

  // Leftmost eigenspace: eigenvalues indistinguishable from lambda_min.
  const double cluster_tol = 1e-12 * std::max(1.0, evals.cwiseAbs().maxCoeff());
  Index cluster = 0;
  while (cluster < l && evals(cluster) <= lam_min + cluster_tol) ++cluster;

  bool orthogonal = true;
  for (Index i = 0; i < cluster; ++i)
    if (std::abs(gq(i)) > kHardCaseTol * gnorm) orthogonal = false;

  // Work with mu = lambda - lo and the shifted eigenvalues evals + lo >= 0,
  // so that evals(i) + lambda = shifted(i) + mu keeps full relative accuracy
  // when lambda approaches -lambda_min.
  const VectorXd shifted = evals.array() + lo;

  auto step_at = [&](double mu, Index first) {
    VectorXd coeff = VectorXd::Zero(l);
    for (Index i = first; i < l; ++i) coeff(i) = -gq(i) / (shifted(i) + mu);
    return coeff;
  };

  if (gnorm == 0.0 && lam_min >= 0.0) {
    out.s = VectorXd::Zero(l);
    return out;
  }

  Index first = 0;
  if (orthogonal && lo > 0.0) {
    const VectorXd coeff = step_at(0.0, cluster);
    const double base_norm = coeff.norm();
    const double target = lo / sigma;
    if (base_norm <= target) {
      const double tau = std::sqrt(std::max(0.0, target * target - base_norm * base_norm));
      VectorXd base = evecs * coeff;
      VectorXd u = evecs.col(0);
      orient(u);
      VectorXd s = base + tau * u;
      if (!first_nonzero_positive(s)) {
        const VectorXd alt = base - tau * u;
        if (first_nonzero_positive(alt)) s = alt;
      }
      out.s = std::move(s);
      out.lambda = lo;
      out.hard_case = true;
      return out;
    }
    // Near-orthogonal components are dropped; the root lies to the right of lo.
    first = cluster;
  }

  // phi(mu) = |s(mu)| - (lo + mu) / sigma is decreasing on (0, inf).
  auto norm_and_slope = [&](double mu) {
    double sq = 0.0;
    double cube = 0.0;
    for (Index i = first; i < l; ++i) {
      const double den = shifted(i) + mu;
      const double c = gq(i) / den;
      sq += c * c;
      cube += c * c / den;
    }
    const double norm = std::sqrt(sq);
    // d|s|/dmu = -sum gq^2 / (ev + lambda)^3 / |s|
    const double slope = norm > 0.0 ? -cube / norm : 0.0;
    return std::pair{norm, slope};
  };

  // At mu = sqrt(sigma |g|), |s| <= |g| / mu <= (lo + mu) / sigma.
  double a = 0.0;
  double b = std::sqrt(sigma * gnorm);
  double mu = b;
  bool converged = false;
  int it = 0;
  for (; it < kMaxSecularIterations; ++it) {
    const auto [norm, slope] = norm_and_slope(mu);
    const double radius = (lo + mu) / sigma;
    const double phi = norm - radius;
    if (std::abs(phi) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(norm, radius)) {
      converged = true;
      break;
    }
    if (phi > 0.0) a = mu; else b = mu;
    if (b - a <= 2.0 * std::numeric_limits<double>::epsilon() * b) {
      converged = true;
      break;
    }
    const double dphi = slope - 1.0 / sigma;
    double next = mu - phi / dphi;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    mu = next;
  }
  if (!converged) {
    throw SolverFailure("secular equation did not converge in " +
                        std::to_string(kMaxSecularIterations) + " iterations");
  }
  out.s = evecs * step_at(mu, first);
  out.lambda = lo + mu;
  out.iterations = it;
  return out;
}

SubproblemSolution solve_cubic(const ReducedModel& m, double kappa_T, double kappa_S,
                               bool check_second_order) {
  if (!std::isfinite(m.f0) || !m.g_hat.allFinite() || !m.B_hat.allFinite()) {
    throw NumericError("reduced model has non-finite entries");
  }
  const double sigma = 1.0 / m.alpha;
  const Index l = m.dim();

  SubproblemSolution sol;
  if (m.reg_mode == RegularizerNorm::Reduced) {
    CubicMinimizer cm = minimize_cubic(m.g_hat, m.B_hat, sigma);
    sol.s_hat = std::move(cm.s);
    sol.iterations = cm.iterations;
    sol.hard_case = cm.hard_case;
  } else {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m.gram);
    const VectorXd& lam = eig.eigenvalues();
    const double cutoff = 1e-12 * std::max(lam.maxCoeff(), 0.0);
    Index lead = 0;
    while (lead < l && lam(lead) <= cutoff) ++lead;
    const Index rank = l - lead;
    if (rank == 0) {
      sol.s_hat = VectorXd::Zero(l);
    } else {
      MatrixXd t = eig.eigenvectors().rightCols(rank);
      for (Index j = 0; j < rank; ++j) t.col(j) /= std::sqrt(lam(lead + j));
      const VectorXd g_y = t.transpose() * m.g_hat;
      const MatrixXd b_y = t.transpose() * m.B_hat * t;
      CubicMinimizer cm = minimize_cubic(g_y, 0.5 * (b_y + b_y.transpose()), sigma);
      sol.s_hat = t * cm.s;
      sol.iterations = cm.iterations;
      sol.hard_case = cm.hard_case;
    }
  }

  const VectorXd& s = sol.s_hat;
  const double r = regularizer_norm(m, s);
  sol.step_norm = r;
  sol.model_decrease = -(m.g_hat.dot(s) + 0.5 * s.dot(m.B_hat * s) + r * r * r / (3.0 * m.alpha));
  sol.grad_norm = model_gradient(m, s).norm();
  const MatrixXd curvature = r > 0.0 ? model_hessian(m, s) : m.B_hat;
  Eigen::SelfAdjointEigenSolver<MatrixXd> ceig(curvature, Eigen::EigenvaluesOnly);
  sol.min_curvature = ceig.eigenvalues()(0);

  // Slack scales with the size of the terms summed in grad m and hess m, so
  // that very long steps are judged against their own rounding floor.
  const VectorXd w = m.reg_mode == RegularizerNorm::Subspace ? VectorXd(m.gram * s) : s;
  const double g_scale = 1.0 + m.g_hat.norm() + m.B_hat.norm() * s.norm() + r * w.norm() / m.alpha;
  const double gram_norm = m.reg_mode == RegularizerNorm::Subspace ? m.gram.norm() : 1.0;
  const double b_scale = 1.0 + m.B_hat.norm() + 2.0 * r * gram_norm / m.alpha;
  sol.conds[0] = sol.model_decrease >= -1e-12;
  sol.conds[1] = sol.grad_norm <= std::max(kappa_T * r * r, kCertSlack * g_scale);
  sol.conds[2] = sol.min_curvature >= -kappa_S * r - kCertSlack * b_scale;

  if (!sol.conds[0]) throw SolverFailure("subproblem step increases the model");
  if (!sol.conds[1]) {
    throw SolverFailure("subproblem gradient residual " + std::to_string(sol.grad_norm) +
                        " exceeds tolerance");
  }
  if (check_second_order && !sol.conds[2]) {
    throw SolverFailure("subproblem minimizer fails the curvature test");
  }
  return sol;
}

}  // namespace rarc

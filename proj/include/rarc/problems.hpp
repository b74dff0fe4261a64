#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rarc/sketch.hpp"

namespace rarc {

/// Smooth unconstrained objective. Second-order information is only
/// available through Hessian-vector products. Implementations are immutable
/// and their methods reentrant.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::string name() const = 0;
  virtual Index dim() const = 0;
  virtual double value(const VectorXd& x) const = 0;
  virtual VectorXd gradient(const VectorXd& x) const = 0;
  virtual VectorXd hvp(const VectorXd& x, const VectorXd& v) const = 0;
  virtual VectorXd initial_point() const = 0;
  /// Global minimum value when it is known in closed form.
  virtual std::optional<double> optimal_value() const { return std::nullopt; }
};

using ProblemPtr = std::shared_ptr<const Problem>;

/// Builds the closed-form problem registered under `name` in dimension d.
///
///   ARWHEAD             sum_{i<n} (-4 x_i + 3) + (x_i^2 + x_n^2)^2, x0 = 1, f* = 0
///   ENGVAL1             sum_{i<n} (x_i^2 + x_{i+1}^2)^2 - 4 x_i + 3, x0 = 2
///   POWER               (sum_i i x_i^2)^2, x0 = 1, f* = 0
///   COSINE              sum_{i<n} cos(x_i^2 - x_{i+1} / 2), x0 = 1, f* = -(n - 1)
///   NONDQUAR            (x_1 - x_2)^2 + sum_{i<=n-2} (x_i + x_{i+1} + x_n)^4
///                       + (x_{n-1} + x_n)^2, x0 = (1, -1, 1, ...), f* = 0
///   ROSENBROCK_CHAINED  sum_{i<n} 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2,
///                       x0 = (-1.2, 1, -1.2, ...), f* = 0
///   QUADRATIC_SPD       1/2 sum_i c_i x_i^2 with c_i = 1 + 9 (i-1)/(n-1), x0 = 1, f* = 0
///
/// Throws ConfigError for unknown names and DimensionError for d < 2.
ProblemPtr builtin_problem(std::string_view name, Index d);

/// Names accepted by builtin_problem.
const std::vector<std::string>& builtin_names();

/// f(y) = 1/2 (y1^2 - y2^2) + 1/4 y2^4 on R^2, started at (1, 0). Strict
/// saddle at the origin, minima f* = -1/4 at (0, +-1).
ProblemPtr saddle_problem();

enum class Rotation { AxisAligned, HaarRotated };

std::string to_string(Rotation rotation);
Rotation parse_rotation(const std::string& name);

/// f(x) = base(A x) for A in R^{r x d} with orthonormal rows. AxisAligned
/// uses A = [I_r | 0]; HaarRotated draws A from the Haar measure with the
/// given seed. Gradients are A^T grad(Ax) and Hessian products
/// A^T hess(Ax) (A v). The start point A^T x0_base satisfies A x = x0_base.
class LowRankProblem final : public Problem {
 public:
  LowRankProblem(ProblemPtr base, Index d, Rotation rotation, std::uint64_t seed);

  std::string name() const override;
  Index dim() const override { return dim_; }
  double value(const VectorXd& x) const override;
  VectorXd gradient(const VectorXd& x) const override;
  VectorXd hvp(const VectorXd& x, const VectorXd& v) const override;
  VectorXd initial_point() const override;
  std::optional<double> optimal_value() const override { return base_->optimal_value(); }

  const MatrixXd& embedding() const { return a_; }
  Rotation rotation() const { return rotation_; }
  const Problem& base() const { return *base_; }

 private:
  VectorXd reduce(const VectorXd& x) const;
  VectorXd expand(const VectorXd& y) const;

  ProblemPtr base_;
  Index dim_;
  Rotation rotation_;
  MatrixXd a_;
};

/// Throws DimensionError when d < base->dim().
ProblemPtr make_low_rank(ProblemPtr base, Index d, Rotation rotation, std::uint64_t seed);

}  // namespace rarc

#pragma once

#include <memory>

#include "rarc/sketch.hpp"

namespace rarc {

/// Which norm the cubic term of the reduced model penalizes.
enum class RegularizerNorm {
  Subspace,  // |S^T s_hat|^3, the full-space length of the step
  Reduced,   // |s_hat|^3
};

/// The cubic model of f around x_k restricted to the row span of S:
///
///   m(s) = f0 + <g_hat, s> + 1/2 <s, B_hat s> + 1/(3 alpha) |.|^3
///
/// with g_hat = S grad f(x_k) and B_hat = S hess f(x_k) S^T.
struct ReducedModel {
  double f0 = 0.0;
  VectorXd g_hat;
  MatrixXd B_hat;
  double alpha = 1.0;
  RegularizerNorm reg_mode = RegularizerNorm::Reduced;
  /// Sketch the model was built from. May be null, which stands for S = I.
  std::shared_ptr<const SketchMatrix> sketch;
  /// S S^T; only populated in Subspace mode.
  MatrixXd gram;

  Index dim() const { return g_hat.size(); }
};

/// Validates shapes and alpha > 0, and caches S S^T when needed.
ReducedModel make_model(double f0, VectorXd g_hat, MatrixXd B_hat, double alpha,
                        RegularizerNorm reg_mode, std::shared_ptr<const SketchMatrix> sketch = nullptr);

/// |S^T s_hat| or |s_hat| depending on the mode.
double regularizer_norm(const ReducedModel& m, const VectorXd& s_hat);

double quadratic_part(const ReducedModel& m, const VectorXd& s_hat);
double model_value(const ReducedModel& m, const VectorXd& s_hat);
VectorXd model_gradient(const ReducedModel& m, const VectorXd& s_hat);

/// Throws NumericError at s_hat with zero regularizer norm, where the cubic
/// term is not twice differentiable; callers use B_hat there.
MatrixXd model_hessian(const ReducedModel& m, const VectorXd& s_hat);

}  // namespace rarc

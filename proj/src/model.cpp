#include "rarc/model.hpp"

#include <cmath>

#include "rarc/error.hpp"

namespace rarc {

ReducedModel make_model(double f0, VectorXd g_hat, MatrixXd B_hat, double alpha,
                        RegularizerNorm reg_mode, std::shared_ptr<const SketchMatrix> sketch) {
  const Index l = g_hat.size();
  if (l < 1) throw DimensionError("reduced model needs l >= 1");
  if (B_hat.rows() != l || B_hat.cols() != l) throw DimensionError("B_hat must be l x l");
  if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
  if (sketch && sketch->rows() != l) throw DimensionError("sketch rows differ from l");

  ReducedModel m;
  m.f0 = f0;
  m.g_hat = std::move(g_hat);
  m.B_hat = std::move(B_hat);
  m.alpha = alpha;
  m.reg_mode = reg_mode;
  m.sketch = std::move(sketch);
  if (reg_mode == RegularizerNorm::Subspace) {
    m.gram = m.sketch ? MatrixXd(m.sketch->entries() * m.sketch->entries().transpose())
                      : MatrixXd::Identity(l, l);
  }
  return m;
}

namespace {

// (S S^T) s_hat, or s_hat itself in Reduced mode.
VectorXd metric_apply(const ReducedModel& m, const VectorXd& s_hat) {
  if (m.reg_mode == RegularizerNorm::Reduced) return s_hat;
  return m.gram * s_hat;
}

void check_dim(const ReducedModel& m, const VectorXd& s_hat) {
  if (s_hat.size() != m.dim()) throw DimensionError("step length differs from model dimension");
}

}  // namespace

double regularizer_norm(const ReducedModel& m, const VectorXd& s_hat) {
  check_dim(m, s_hat);
  if (m.reg_mode == RegularizerNorm::Reduced) return s_hat.norm();
  if (m.sketch) return lift_vector(*m.sketch, s_hat).norm();
  return s_hat.norm();
}

double quadratic_part(const ReducedModel& m, const VectorXd& s_hat) {
  check_dim(m, s_hat);
  return m.f0 + m.g_hat.dot(s_hat) + 0.5 * s_hat.dot(m.B_hat * s_hat);
}

double model_value(const ReducedModel& m, const VectorXd& s_hat) {
  const double r = regularizer_norm(m, s_hat);
  return quadratic_part(m, s_hat) + r * r * r / (3.0 * m.alpha);
}

VectorXd model_gradient(const ReducedModel& m, const VectorXd& s_hat) {
  const double r = regularizer_norm(m, s_hat);
  return m.g_hat + m.B_hat * s_hat + (r / m.alpha) * metric_apply(m, s_hat);
}

MatrixXd model_hessian(const ReducedModel& m, const VectorXd& s_hat) {
  const double r = regularizer_norm(m, s_hat);
  if (r == 0.0) throw NumericError("model Hessian is undefined where the regularizer norm vanishes");
  const VectorXd w = metric_apply(m, s_hat);
  const Index l = m.dim();
  const MatrixXd metric = m.reg_mode == RegularizerNorm::Reduced ? MatrixXd::Identity(l, l) : m.gram;
  MatrixXd h = m.B_hat + (1.0 / m.alpha) * ((w * w.transpose()) / r + r * metric);
  return 0.5 * (h + h.transpose());
}

}  // namespace rarc

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "rarc/error.hpp"
#include "rarc/subproblem.hpp"

namespace rarc {
namespace {

using testing::grid_min_cubic;
using testing::random_symmetric;
using testing::random_vector;

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

ReducedModel reduced(VectorXd g, MatrixXd b, double alpha) {
  return make_model(0.0, std::move(g), std::move(b), alpha, RegularizerNorm::Reduced);
}

TEST(SolveCubic, StationaryStartReturnsZero) {
  VectorXd d(2);
  d << 1, 2;
  for (double alpha : {0.1, 1.0, 1e6}) {
    const auto sol = solve_cubic(reduced(VectorXd::Zero(2), d.asDiagonal(), alpha), 1, 1, true);
    EXPECT_EQ(sol.s_hat, VectorXd::Zero(2));
    EXPECT_EQ(sol.model_decrease, 0.0);
  }
}

TEST(SolveCubic, OneDimensionalLinear) {
  const auto m = reduced(vec({1}), MatrixXd::Zero(1, 1), 1.0);
  const auto sol = solve_cubic(m, 1, 1, true);
  EXPECT_NEAR(sol.s_hat(0), -1.0, 1e-12);
  EXPECT_NEAR(model_value(m, sol.s_hat) - model_value(m, VectorXd::Zero(1)), -2.0 / 3.0, 1e-12);
  // Grid over [-3, 3] at step 1e-4.
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 60000; ++i) best = std::min(best, model_value(m, vec({-3.0 + 1e-4 * i})));
  EXPECT_LE(model_value(m, sol.s_hat), best + 1e-12);
}

TEST(SolveCubic, OneDimensionalNegativeCurvatureTieBreak) {
  const auto m = reduced(vec({0}), -MatrixXd::Identity(1, 1), 1.0);
  const auto sol = solve_cubic(m, 1, 1, true);
  EXPECT_NEAR(sol.s_hat(0), 1.0, 1e-12);
  EXPECT_NEAR(sol.model_decrease, 1.0 / 6.0, 1e-12);
  EXPECT_TRUE(sol.hard_case);
}

TEST(SolveCubic, HardCaseTwoDimensional) {
  // g is orthogonal to the leftmost eigenvector e2 and the interior solution
  // is too short, so the minimizer picks up an e2 component.
  VectorXd diag(2);
  diag << 1, -2;
  const auto m = reduced(vec({1, 0}), diag.asDiagonal(), 1.0);
  const auto sol = solve_cubic(m, 0, 0, true);
  EXPECT_TRUE(sol.hard_case);
  // lambda = 2, s1 = -1/3, |s| = 2.
  EXPECT_NEAR(sol.s_hat(0), -1.0 / 3.0, 1e-10);
  EXPECT_NEAR(sol.s_hat.norm(), 2.0, 1e-10);
  EXPECT_GT(sol.s_hat(1), 0.0);
  EXPECT_LE(model_value(m, sol.s_hat), grid_min_cubic(m.g_hat, m.B_hat, 1.0, 5.0, 401) + 1e-9);
}

TEST(SolveCubic, DominatesGridSearch) {
  std::mt19937_64 gen(100);
  std::uniform_real_distribution<double> alpha(0.1, 3.0);
  std::uniform_int_distribution<int> dim(1, 3);
  for (int t = 0; t < 40; ++t) {
    const Index l = dim(gen);
    const auto m = reduced(random_vector(gen, l), random_symmetric(gen, l), alpha(gen));
    const auto sol = solve_cubic(m, 0, 0, true);
    const double grid = grid_min_cubic(m.g_hat, m.B_hat, m.alpha, 5.0, 41);
    EXPECT_LE(model_value(m, sol.s_hat), grid + 1e-6) << "t=" << t;
  }
}

MatrixXd random_case(std::mt19937_64& gen, int t, VectorXd& g) {
  const Index l = 1 + t % 8;
  MatrixXd b = random_symmetric(gen, l, t % 3 == 0 ? 10.0 : 1.0);
  g = random_vector(gen, l);
  if (t % 5 == 0) {
    // Near-hard case: g almost orthogonal to the leftmost eigenvector.
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(b);
    const VectorXd u = eig.eigenvectors().col(0);
    g -= u * u.dot(g);
    g += 1e-14 * u;
  }
  return b;
}

TEST(SolveCubic, CertificatesAlwaysHold) {
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> log_alpha(-4, 3);
  for (int t = 0; t < 500; ++t) {
    VectorXd g;
    const MatrixXd b = random_case(gen, t, g);
    const auto m = reduced(g, b, std::pow(10.0, log_alpha(gen)));
    const auto sol = solve_cubic(m, 0, 0, false);
    EXPECT_GE(sol.model_decrease, -1e-12);
    EXPECT_LE(sol.grad_norm, 1e-8 * (1.0 + g.norm())) << "t=" << t;
    EXPECT_GE(sol.min_curvature, -1e-8 * (1.0 + b.norm())) << "t=" << t;
    EXPECT_TRUE(sol.conds[0] && sol.conds[1] && sol.conds[2]) << "t=" << t;
  }
}

TEST(SolveCubic, VeryLongStepsStayAtRoundingFloor) {
  // With alpha up to 1e8 and negative curvature the step length reaches
  // ~1e9, where |B s| alone carries an absolute rounding error of ~1e-6.
  std::mt19937_64 gen(104);
  std::uniform_real_distribution<double> log_alpha(3, 8);
  for (int t = 0; t < 300; ++t) {
    VectorXd g;
    const MatrixXd b = random_case(gen, t, g);
    const auto m = reduced(g, b, std::pow(10.0, log_alpha(gen)));
    const auto sol = solve_cubic(m, 0, 0, true);
    const double n = sol.s_hat.norm();
    const double floor = 1.0 + g.norm() + b.norm() * n + n * n / m.alpha;
    EXPECT_LE(sol.grad_norm, 1e-8 * floor) << "t=" << t;
    EXPECT_GE(sol.model_decrease, -1e-12);
  }
}

TEST(SolveCubic, LargeAlphaApproachesNewtonStep) {
  std::mt19937_64 gen(102);
  for (int t = 0; t < 20; ++t) {
    const Index l = 2 + t % 4;
    MatrixXd a = random_symmetric(gen, l);
    const MatrixXd b = a * a + MatrixXd::Identity(l, l);
    const VectorXd g = random_vector(gen, l);
    const auto sol = solve_cubic(reduced(g, b, 1e8), 1, 1, true);
    const VectorXd newton = -b.ldlt().solve(g);
    EXPECT_LE((sol.s_hat - newton).norm(), 1e-4 * newton.norm());
  }
}

TEST(SolveCubic, SubspaceModeDominatesGridSearch) {
  // Grid over s_hat directly with the |S^T s| regularizer.
  std::mt19937_64 gen(103);
  for (int t = 0; t < 15; ++t) {
    const Index l = 1 + t % 2;
    auto sk = std::make_shared<const SketchMatrix>(draw_sketch(Ensemble::gaussian(), l, 6, t));
    const auto m = make_model(0.0, random_vector(gen, l), random_symmetric(gen, l), 1.0,
                              RegularizerNorm::Subspace, sk);
    const auto sol = solve_cubic(m, 0, 0, true);
    double best = std::numeric_limits<double>::infinity();
    const int n = 201;
    VectorXd s(l);
    for (int i = 0; i < (l == 1 ? n : n * n); ++i) {
      s(0) = -5.0 + 10.0 * (i % n) / (n - 1);
      if (l == 2) s(1) = -5.0 + 10.0 * (i / n) / (n - 1);
      best = std::min(best, model_value(m, s));
    }
    EXPECT_LE(model_value(m, sol.s_hat), best + 1e-9) << "t=" << t;
    EXPECT_LE(sol.grad_norm, 1e-8 * (1.0 + m.g_hat.norm()));
  }
}

TEST(SolveCubic, SubspaceModeWithRankDeficientGram) {
  // Sampling sketches can repeat a column, making S S^T singular.
  SketchMatrix::Storage rows(2, 4);
  rows << 0, std::sqrt(2.0), 0, 0, 0, std::sqrt(2.0), 0, 0;
  auto sk = std::make_shared<const SketchMatrix>(rows, Ensemble::sampling(), 0);
  VectorXd g(2);
  g << 1.0, 1.0;
  const MatrixXd b = MatrixXd::Constant(2, 2, 2.0);
  const auto m = make_model(0.0, g, b, 1.0, RegularizerNorm::Subspace, sk);
  const auto sol = solve_cubic(m, 1, 1, true);
  EXPECT_TRUE(sol.conds[0] && sol.conds[1] && sol.conds[2]);
  EXPECT_GT(sol.model_decrease, 0.0);
}

TEST(SolveCubic, RejectsNonFiniteData) {
  EXPECT_THROW(solve_cubic(reduced(vec({std::nan("")}), MatrixXd::Zero(1, 1), 1.0), 1, 1, false),
               NumericError);
  EXPECT_THROW(minimize_cubic(vec({1}), MatrixXd::Zero(1, 1), 0.0), NumericError);
}

}  // namespace
}  // namespace rarc

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "oracles.hpp"
#include "rarc/error.hpp"
#include "rarc/random.hpp"
#include "rarc/sketch.hpp"

namespace rarc {
namespace {

using testing::naive_matvec;
using testing::random_rank_r;
using testing::random_vector;

const std::vector<Ensemble> kRandomEnsembles = {Ensemble::gaussian(), Ensemble::sampling(), Ensemble::haar(),
                                                Ensemble::hashing(1), Ensemble::hashing(3)};

TEST(DrawSketch, IdentityIsIdentity) {
  const auto s = draw_sketch(Ensemble::identity(), 3, 3, 123);
  EXPECT_TRUE(s.entries().isApprox(MatrixXd::Identity(3, 3), 0.0));
  EXPECT_EQ(s.entries(), MatrixXd::Identity(3, 3));
}

TEST(DrawSketch, SamplingExample) {
  const auto s = draw_sketch(Ensemble::sampling(), 2, 8, 7);
  for (Index i = 0; i < 2; ++i) {
    int nonzero = 0;
    for (Index j = 0; j < 8; ++j) {
      if (s.entries()(i, j) != 0.0) {
        ++nonzero;
        EXPECT_EQ(s.entries()(i, j), 2.0);
      }
    }
    EXPECT_EQ(nonzero, 1);
  }
}

TEST(DrawSketch, GaussianVarianceExample) {
  const auto s = draw_sketch(Ensemble::gaussian(), 50, 500, 1);
  const double n = static_cast<double>(s.entries().size());
  const double mean = s.entries().sum() / n;
  const double var = (s.entries().array() - mean).square().sum() / (n - 1.0);
  EXPECT_GE(var, 0.8 / 50);
  EXPECT_LE(var, 1.2 / 50);
  // Mean of 25000 draws with sd 1/sqrt(50): standard error ~9e-4.
  EXPECT_NEAR(mean, 0.0, 5e-3);
}

TEST(DrawSketch, Errors) {
  EXPECT_THROW(draw_sketch(Ensemble::gaussian(), 6, 5, 0), DimensionError);
  EXPECT_THROW(draw_sketch(Ensemble::gaussian(), 0, 5, 0), DimensionError);
  EXPECT_THROW(draw_sketch(Ensemble::identity(), 3, 5, 0), DimensionError);
  EXPECT_THROW(draw_sketch(Ensemble::hashing(4), 3, 5, 0), ParameterError);
  EXPECT_THROW(draw_sketch(Ensemble::hashing(0), 3, 5, 0), ParameterError);
}

TEST(DrawSketch, SamplingOneNonzeroPerRow) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = draw_sketch(Ensemble::sampling(), 7, 30, seed);
    const double v = std::sqrt(30.0 / 7.0);
    for (Index i = 0; i < s.rows(); ++i) {
      int nz = 0;
      for (Index j = 0; j < s.cols(); ++j) {
        if (s.entries()(i, j) != 0.0) {
          ++nz;
          EXPECT_DOUBLE_EQ(s.entries()(i, j), v);
        }
      }
      EXPECT_EQ(nz, 1);
    }
  }
}

TEST(DrawSketch, HashingColumnsHaveSNonzeros) {
  for (int s_nz : {1, 2, 4}) {
    const auto s = draw_sketch(Ensemble::hashing(s_nz), 6, 40, 99 + s_nz);
    const double v = 1.0 / std::sqrt(static_cast<double>(s_nz));
    for (Index j = 0; j < s.cols(); ++j) {
      int nz = 0;
      for (Index i = 0; i < s.rows(); ++i) {
        const double e = s.entries()(i, j);
        if (e != 0.0) {
          ++nz;
          EXPECT_DOUBLE_EQ(std::abs(e), v);
        }
      }
      EXPECT_EQ(nz, s_nz);
    }
  }
}

TEST(DrawSketch, HaarRowsOrthogonal) {
  for (auto [l, d] : {std::pair<Index, Index>{3, 10}, {10, 40}, {40, 40}, {1, 7}}) {
    const auto s = draw_sketch(Ensemble::haar(), l, d, 17);
    const MatrixXd gram = s.entries() * s.entries().transpose();
    const double scale = static_cast<double>(d) / static_cast<double>(l);
    EXPECT_LE((gram - scale * MatrixXd::Identity(l, l)).cwiseAbs().maxCoeff(), 1e-10);
    Eigen::JacobiSVD<MatrixXd> svd(s.entries());
    EXPECT_NEAR(svd.singularValues()(0), std::sqrt(scale), 1e-10);
  }
}

TEST(DrawSketch, Determinism) {
  for (const auto& e : kRandomEnsembles) {
    const auto a = draw_sketch(e, 4, 25, 2024);
    const auto b = draw_sketch(e, 4, 25, 2024);
    EXPECT_EQ(a.entries(), b.entries()) << to_string(e);
  }
  const auto a = draw_sketch(Ensemble::gaussian(), 4, 25, 1);
  const auto b = draw_sketch(Ensemble::gaussian(), 4, 25, 2);
  EXPECT_NE(a.entries(), b.entries());
}

TEST(SketchVector, Examples) {
  const auto id = draw_sketch(Ensemble::identity(), 3, 3, 0);
  EXPECT_EQ(sketch_vector(id, VectorXd::LinSpaced(3, 1, 3)), VectorXd::LinSpaced(3, 1, 3));

  SketchMatrix::Storage row(1, 4);
  row << 0, 0, 2, 0;  // sqrt(4/1) in column 2
  const SketchMatrix samp(row, Ensemble::sampling(), 0);
  VectorXd v(4);
  v << 0, 0, 5, 0;
  EXPECT_EQ(sketch_vector(samp, v)(0), 10.0);
}

TEST(SketchVector, MatchesNaiveProduct) {
  std::mt19937_64 gen(8);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = draw_sketch(Ensemble::gaussian(), 9, 33, seed);
    const VectorXd v = random_vector(gen, 33);
    const VectorXd expect = naive_matvec(s.entries(), v);
    EXPECT_LE((sketch_vector(s, v) - expect).cwiseAbs().maxCoeff(), 1e-12);
    const VectorXd w = random_vector(gen, 9);
    const VectorXd lifted = naive_matvec(s.entries().transpose(), w);
    EXPECT_LE((lift_vector(s, w) - lifted).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SketchVector, DimensionMismatch) {
  const auto s = draw_sketch(Ensemble::gaussian(), 2, 5, 0);
  EXPECT_THROW(sketch_vector(s, VectorXd::Ones(4)), DimensionError);
  EXPECT_THROW(lift_vector(s, VectorXd::Ones(3)), DimensionError);
}

TEST(SketchVector, Linearity) {
  std::mt19937_64 gen(21);
  for (const auto& e : kRandomEnsembles) {
    const auto s = draw_sketch(e, 5, 20, 77);
    const VectorXd u = random_vector(gen, 20), v = random_vector(gen, 20);
    const double a = 1.7, b = -0.3;
    const VectorXd lhs = sketch_vector(s, a * u + b * v);
    const VectorXd rhs = a * sketch_vector(s, u) + b * sketch_vector(s, v);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12) << to_string(e);
  }
}

TEST(SketchHessian, Examples) {
  std::mt19937_64 gen(4);
  const MatrixXd h = testing::random_symmetric(gen, 6);
  const auto id = draw_sketch(Ensemble::identity(), 6, 6, 0);
  const MatrixXd b = sketch_hessian(id, [&](const VectorXd& v) { VectorXd r = h * v; return r; });
  EXPECT_LE((b - h).cwiseAbs().maxCoeff(), 1e-14);

  const auto s = draw_sketch(Ensemble::gaussian(), 4, 6, 3);
  const MatrixXd bs = sketch_hessian(s, [](const VectorXd& v) { return v; });
  const MatrixXd sst = s.entries() * s.entries().transpose();
  EXPECT_LE((bs - sst).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(SketchHessian, ExactlySymmetric) {
  std::mt19937_64 gen(6);
  // Deliberately nonsymmetric operator: output must still be symmetric.
  MatrixXd a(12, 12);
  for (Index i = 0; i < 12; ++i)
    for (Index j = 0; j < 12; ++j) a(i, j) = std::sin(1.0 + i * 3.0 + j);
  for (const auto& e : kRandomEnsembles) {
    const auto s = draw_sketch(e, 5, 12, 1);
    const MatrixXd b = sketch_hessian(s, [&](const VectorXd& v) { VectorXd r = a * v; return r; });
    EXPECT_TRUE(b == b.transpose()) << to_string(e);
  }
}

TEST(SketchHessian, RankOneStaysRankOne) {
  std::mt19937_64 gen(10);
  const VectorXd u = random_vector(gen, 15).normalized();
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = draw_sketch(Ensemble::gaussian(), 5, 15, seed);
    const MatrixXd b = sketch_hessian(s, [&](const VectorXd& v) { VectorXd r = u * u.dot(v); return r; });
    if (numeric_rank(b, 1e-8) == 1) ++hits;
  }
  EXPECT_GE(hits, 99);
}

TEST(NumericRank, Examples) {
  EXPECT_EQ(numeric_rank(MatrixXd::Zero(4, 4), 1e-10), 0);
  VectorXd diag(3);
  diag << 5, 3, 1e-14;
  EXPECT_EQ(numeric_rank(MatrixXd(diag.asDiagonal()), 1e-10), 2);
  // The threshold is relative to max(1, spectral radius).
  VectorXd small(2);
  small << 1e-11, 1e-12;
  EXPECT_EQ(numeric_rank(MatrixXd(small.asDiagonal()), 1e-10), 0);
}

TEST(NumericRank, SketchedRankThreeMatrix) {
  std::mt19937_64 gen(12);
  const MatrixXd a = random_rank_r(gen, 20, 3);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto s = draw_sketch(Ensemble::gaussian(), 7, 20, seed);
    const MatrixXd b = s.entries() * a * s.entries().transpose();
    if (numeric_rank(0.5 * (b + b.transpose()), 1e-10) == 3) ++hits;
  }
  EXPECT_GE(hits, 990);
}

TEST(EmbeddingTrial, IdentityAlwaysEmbeds) {
  std::mt19937_64 gen(1);
  const std::vector<VectorXd> ys = {random_vector(gen, 6), random_vector(gen, 6)};
  EXPECT_EQ(embedding_trial(Ensemble::identity(), 6, 6, ys, 0.01, 20, 5), 1.0);
}

TEST(EmbeddingTrial, GaussianFullDimensionSingleVector) {
  // |S y|^2 / |y|^2 ~ chi^2_l / l for Gaussian S with l rows, so the exact
  // success probability is P(l/2 <= chi^2_l <= 3l/2).
  const Index d = 60;
  const boost::math::chi_squared chi(static_cast<double>(d));
  const double p = boost::math::cdf(chi, 1.5 * d) - boost::math::cdf(chi, 0.5 * d);
  ASSERT_GT(p, 0.99);
  std::mt19937_64 gen(2);
  const std::vector<VectorXd> ys = {random_vector(gen, d)};
  EXPECT_GE(embedding_trial(Ensemble::gaussian(), d, d, ys, 0.5, 200, 31), 0.95);
}

TEST(EmbeddingTrial, JohnsonLindenstraussBound) {
  const double eps = 0.5, delta = 0.1;
  const int count = 4;
  const Index l = static_cast<Index>(std::ceil(8.0 / (eps * eps) * std::log(count / delta)));
  ASSERT_EQ(l, 119);
  std::mt19937_64 gen(3);
  std::vector<VectorXd> ys;
  for (int i = 0; i < count; ++i) ys.push_back(random_vector(gen, 200));
  EXPECT_GE(embedding_trial(Ensemble::gaussian(), l, 200, ys, eps, 500, 77), 1.0 - delta);
}

TEST(EmbeddingTrial, Errors) {
  EXPECT_THROW(embedding_trial(Ensemble::gaussian(), 2, 5, {}, 0.5, 10, 0), ParameterError);
  EXPECT_THROW(embedding_trial(Ensemble::gaussian(), 2, 5, {VectorXd::Zero(5)}, 0.5, 10, 0), ParameterError);
  EXPECT_THROW(embedding_trial(Ensemble::gaussian(), 2, 5, {VectorXd::Ones(5)}, 0.5, 0, 0), ParameterError);
}

TEST(EmbeddingTrial, Deterministic) {
  const std::vector<VectorXd> ys = {VectorXd::Ones(30)};
  EXPECT_EQ(embedding_trial(Ensemble::gaussian(), 5, 30, ys, 0.3, 50, 4),
            embedding_trial(Ensemble::gaussian(), 5, 30, ys, 0.3, 50, 4));
}

TEST(Ensemble, NamesRoundTrip) {
  for (const auto& e : {Ensemble::gaussian(), Ensemble::sampling(), Ensemble::haar(), Ensemble::identity()}) {
    EXPECT_EQ(parse_ensemble(to_string(e)), e);
  }
  EXPECT_EQ(parse_ensemble("hashing", 3), Ensemble::hashing(3));
  EXPECT_THROW(parse_ensemble("srht"), ConfigError);
}

}  // namespace
}  // namespace rarc

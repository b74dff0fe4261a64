#include "rarc/sketch.hpp"

#include <cmath>
#include <numeric>

#include "rarc/error.hpp"
#include "rarc/random.hpp"

namespace rarc {

std::string to_string(const Ensemble& ensemble) {
  switch (ensemble.kind) {
    case EnsembleKind::ScaledGaussian: return "gaussian";
    case EnsembleKind::ScaledSampling: return "sampling";
    case EnsembleKind::ScaledHaar: return "haar";
    case EnsembleKind::SHashing: return "hashing";
    case EnsembleKind::Identity: return "identity";
  }
  return "unknown";
}

Ensemble parse_ensemble(const std::string& name, int hashing_s) {
  if (name == "gaussian") return Ensemble::gaussian();
  if (name == "sampling") return Ensemble::sampling();
  if (name == "haar") return Ensemble::haar();
  if (name == "hashing") return Ensemble::hashing(hashing_s);
  if (name == "identity") return Ensemble::identity();
  throw ConfigError("unknown ensemble '" + name + "'");
}

SketchMatrix::SketchMatrix(Storage entries, Ensemble ensemble, std::uint64_t seed)
    : entries_(std::move(entries)), ensemble_(ensemble), seed_(seed) {
  if (entries_.rows() < 1 || entries_.rows() > entries_.cols()) {
    throw DimensionError("sketch must satisfy 1 <= l <= d, got l=" +
                         std::to_string(entries_.rows()) +
                         " d=" + std::to_string(entries_.cols()));
  }
}

namespace {

using Storage = SketchMatrix::Storage;

Storage gaussian_entries(Index l, Index d, Rng& rng) {
  Storage s(l, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(l));
  for (Index i = 0; i < l; ++i)
    for (Index j = 0; j < d; ++j) s(i, j) = scale * rng.normal();
  return s;
}

Storage sampling_entries(Index l, Index d, Rng& rng) {
  Storage s = Storage::Zero(l, d);
  const double value = std::sqrt(static_cast<double>(d) / static_cast<double>(l));
  for (Index i = 0; i < l; ++i) s(i, static_cast<Index>(rng.below(d))) = value;
  return s;
}

Storage haar_entries(Index l, Index d, Rng& rng) {
  // Columns of G are iid N(0, 1); the thin Q factor with diag(R) > 0 is
  // Haar distributed on the Stiefel manifold.
  MatrixXd g(d, l);
  for (Index j = 0; j < l; ++j)
    for (Index i = 0; i < d; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(d, l);
  const MatrixXd& r = qr.matrixQR();
  for (Index j = 0; j < l; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  const double scale = std::sqrt(static_cast<double>(d) / static_cast<double>(l));
  return Storage(scale * q.transpose());
}

Storage hashing_entries(Index l, Index d, int s, Rng& rng) {
  Storage out = Storage::Zero(l, d);
  const double value = 1.0 / std::sqrt(static_cast<double>(s));
  std::vector<Index> rows(static_cast<std::size_t>(l));
  for (Index j = 0; j < d; ++j) {
    std::iota(rows.begin(), rows.end(), Index{0});
    // Partial Fisher-Yates: the first s slots become a uniform s-subset.
    for (int k = 0; k < s; ++k) {
      const auto pick = static_cast<std::size_t>(k) + rng.below(static_cast<std::uint64_t>(l - k));
      std::swap(rows[static_cast<std::size_t>(k)], rows[pick]);
      const double sign = (rng.next_u64() >> 63) != 0 ? -1.0 : 1.0;
      out(rows[static_cast<std::size_t>(k)], j) = sign * value;
    }
  }
  return out;
}

}  // namespace

SketchMatrix draw_sketch(const Ensemble& ensemble, Index l, Index d, std::uint64_t seed) {
  if (l < 1 || d < 1 || l > d) {
    throw DimensionError("sketch dimension must satisfy 1 <= l <= d, got l=" +
                         std::to_string(l) + " d=" + std::to_string(d));
  }
  Rng rng(seed);
  switch (ensemble.kind) {
    case EnsembleKind::ScaledGaussian:
      return {gaussian_entries(l, d, rng), ensemble, seed};
    case EnsembleKind::ScaledSampling:
      return {sampling_entries(l, d, rng), ensemble, seed};
    case EnsembleKind::ScaledHaar:
      return {haar_entries(l, d, rng), ensemble, seed};
    case EnsembleKind::SHashing:
      if (ensemble.hashing_s < 1 || ensemble.hashing_s > l) {
        throw ParameterError("s-hashing requires 1 <= s <= l, got s=" +
                             std::to_string(ensemble.hashing_s));
      }
      return {hashing_entries(l, d, ensemble.hashing_s, rng), ensemble, seed};
    case EnsembleKind::Identity:
      if (l != d) throw DimensionError("identity sketch requires l == d");
      return {Storage::Identity(d, d), ensemble, seed};
  }
  throw ParameterError("unknown ensemble kind");
}

VectorXd sketch_vector(const SketchMatrix& sketch, const VectorXd& v) {
  if (v.size() != sketch.cols()) {
    throw DimensionError("sketch_vector: expected length " + std::to_string(sketch.cols()) +
                         ", got " + std::to_string(v.size()));
  }
  return sketch.entries() * v;
}

VectorXd lift_vector(const SketchMatrix& sketch, const VectorXd& s_hat) {
  if (s_hat.size() != sketch.rows()) {
    throw DimensionError("lift_vector: expected length " + std::to_string(sketch.rows()) +
                         ", got " + std::to_string(s_hat.size()));
  }
  return sketch.entries().transpose() * s_hat;
}

MatrixXd sketch_hessian(const SketchMatrix& sketch, const HessianVectorProduct& hvp) {
  const Index l = sketch.rows();
  const Index d = sketch.cols();
  // Column j of S H S^T is S (H S^T e_j).
  MatrixXd b(l, l);
  for (Index j = 0; j < l; ++j) {
    VectorXd hv = hvp(sketch.entries().row(j).transpose());
    if (hv.size() != d) throw DimensionError("sketch_hessian: hvp returned wrong length");
    b.col(j) = sketch.entries() * hv;
  }
  MatrixXd sym = 0.5 * (b + b.transpose());
  return sym;
}

Index numeric_rank(const MatrixXd& symmetric, double rel_tol) {
  if (symmetric.rows() != symmetric.cols()) throw DimensionError("numeric_rank: matrix not square");
  if (symmetric.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(symmetric, Eigen::EigenvaluesOnly);
  const VectorXd magnitudes = eig.eigenvalues().cwiseAbs();
  const double threshold = rel_tol * std::max(1.0, magnitudes.maxCoeff());
  return (magnitudes.array() > threshold).count();
}

double embedding_trial(const Ensemble& ensemble, Index l, Index d,
                       const std::vector<VectorXd>& vectors, double eps, int trials,
                       std::uint64_t seed) {
  if (vectors.empty()) throw ParameterError("embedding_trial: empty vector set");
  if (trials < 1) throw ParameterError("embedding_trial: trials must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("embedding_trial: eps must lie in (0, 1)");
  for (const auto& y : vectors) {
    if (y.size() != d) throw DimensionError("embedding_trial: vector length differs from d");
    if (y.squaredNorm() == 0.0) throw ParameterError("embedding_trial: zero vector");
  }
  int successes = 0;
  for (int t = 0; t < trials; ++t) {
    const SketchMatrix s = draw_sketch(ensemble, l, d, derive_seed(seed, static_cast<std::uint64_t>(t)));
    bool all = true;
    for (const auto& y : vectors) {
      const double ratio = sketch_vector(s, y).squaredNorm() / y.squaredNorm();
      if (ratio < 1.0 - eps || ratio > 1.0 + eps) {
        all = false;
        break;
      }
    }
    if (all) ++successes;
  }
  return static_cast<double>(successes) / static_cast<double>(trials);
}

}  // namespace rarc

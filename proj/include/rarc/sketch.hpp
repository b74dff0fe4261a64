#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rarc {

using Index = Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class EnsembleKind { ScaledGaussian, ScaledSampling, ScaledHaar, SHashing, Identity };

/// Distribution a sketching matrix is drawn from. `hashing_s` is the number
/// of nonzeros per column and is only meaningful for SHashing.
struct Ensemble {
  EnsembleKind kind = EnsembleKind::ScaledGaussian;
  int hashing_s = 1;

  static Ensemble gaussian() { return {EnsembleKind::ScaledGaussian, 1}; }
  static Ensemble sampling() { return {EnsembleKind::ScaledSampling, 1}; }
  static Ensemble haar() { return {EnsembleKind::ScaledHaar, 1}; }
  static Ensemble hashing(int s) { return {EnsembleKind::SHashing, s}; }
  static Ensemble identity() { return {EnsembleKind::Identity, 1}; }

  friend bool operator==(const Ensemble&, const Ensemble&) = default;
};

/// Short lower-case name: gaussian, sampling, haar, hashing, identity.
std::string to_string(const Ensemble& ensemble);
/// Inverse of to_string; throws ConfigError for unknown names.
Ensemble parse_ensemble(const std::string& name, int hashing_s = 1);

/// An l x d random embedding together with the ensemble and seed it was
/// drawn from. Immutable after construction.
class SketchMatrix {
 public:
  using Storage = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  /// Wraps explicit entries. Throws DimensionError unless 1 <= rows <= cols.
  SketchMatrix(Storage entries, Ensemble ensemble, std::uint64_t seed);

  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }
  const Storage& entries() const { return entries_; }
  const Ensemble& ensemble() const { return ensemble_; }
  std::uint64_t seed() const { return seed_; }

 private:
  Storage entries_;
  Ensemble ensemble_;
  std::uint64_t seed_;
};

/// Draws S in R^{l x d}. Identical arguments give bit-identical entries.
///
///  - ScaledGaussian: iid N(0, 1/l).
///  - ScaledSampling: each row picks a column uniformly, value sqrt(d/l).
///  - ScaledHaar: sqrt(d/l) times l orthonormal rows, obtained from the QR
///    factorization of a Gaussian draw with the sign convention diag(R) > 0.
///  - SHashing: each column gets s distinct rows with values +-1/sqrt(s).
///  - Identity: requires l == d.
///
/// Throws DimensionError if l > d (or l != d for Identity) and ParameterError
/// if s is not in [1, l].
SketchMatrix draw_sketch(const Ensemble& ensemble, Index l, Index d, std::uint64_t seed);

/// S v.
VectorXd sketch_vector(const SketchMatrix& sketch, const VectorXd& v);

/// S^T s_hat, mapping a reduced step back to the full space.
VectorXd lift_vector(const SketchMatrix& sketch, const VectorXd& s_hat);

using HessianVectorProduct = std::function<VectorXd(const VectorXd&)>;

/// S H S^T from l Hessian-vector products along the rows of S. The result is
/// symmetrized as (B + B^T) / 2.
MatrixXd sketch_hessian(const SketchMatrix& sketch, const HessianVectorProduct& hvp);

inline constexpr double kDefaultRankTol = 1e-10;

/// Number of eigenvalues with |lambda| > rel_tol * max(1, max |lambda|).
Index numeric_rank(const MatrixXd& symmetric, double rel_tol = kDefaultRankTol);

/// Fraction of `trials` independent draws for which every vector y in
/// `vectors` satisfies (1 - eps)|y|^2 <= |S y|^2 <= (1 + eps)|y|^2.
/// Trial t uses the seed derive_seed(seed, t).
double embedding_trial(const Ensemble& ensemble, Index l, Index d,
                       const std::vector<VectorXd>& vectors, double eps, int trials,
                       std::uint64_t seed);

}  // namespace rarc

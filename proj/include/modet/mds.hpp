#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "modet/common.hpp"
#include "modet/core.hpp"
#include "modet/metrics.hpp"

namespace modet {

struct MdsConfig {
  std::size_t d = 2;
  /// Eigenvalues at or below this are treated as zero. Negative means "auto":
  /// 1e-10 times the largest eigenvalue, so the cutoff scales with the data.
  double eigen_tolerance = -1.0;
};

/// Torgerson (classical) multidimensional scaling.
///
/// S = squared distances, B = -1/2 J S J with J the centering projector;
/// the top eigenpairs of B give coordinates eigvec_k * sqrt(eigval_k).
/// Negative eigenvalues (non-Euclidean dissimilarities) are discarded. If
/// fewer than cfg.d eigenvalues exceed the tolerance, the embedding comes
/// back with the smaller dimension and truncated() reports it.
///
/// Deterministic sign convention: in every coordinate column the entry of
/// largest absolute value is nonnegative, ties broken by smallest index.
/// Full O(n^3) eigendecomposition; fine at desk scale (n up to ~10,000).
inline Embedding torgerson_mds(const DistanceMatrix& dist, const MdsConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(dist.n());
  require(n >= 2, errc::degenerate_input, "need at least 2 observations, got " + std::to_string(n));
  require(cfg.d >= 1 && cfg.d <= static_cast<std::size_t>(n - 1), errc::invalid_argument,
          "embedding dimension must satisfy 1 <= d <= n-1");

  // B(i,j) = -1/2 (S_ij - rowmean_i - colmean_j + grandmean); S symmetric.
  Eigen::MatrixXd b = dist.entries.array().square();
  const Eigen::VectorXd mean = b.rowwise().mean();
  const double grand = mean.mean();
  b.colwise() -= mean;
  b.rowwise() -= mean.transpose();
  b.array() += grand;
  b *= -0.5;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  require(solver.info() == Eigen::Success, errc::non_finite, "eigendecomposition failed");
  const Eigen::VectorXd& eigenvalues = solver.eigenvalues();  // ascending

  const double largest = eigenvalues(n - 1);
  const double tol = cfg.eigen_tolerance >= 0.0 ? cfg.eigen_tolerance
                                                : 1e-10 * std::max(largest, 0.0);
  Eigen::Index kept = 0;
  while (kept < static_cast<Eigen::Index>(cfg.d) && eigenvalues(n - 1 - kept) > tol) ++kept;
  require(kept > 0, errc::no_positive_eigenvalues,
          "no eigenvalue exceeds tolerance " + format_double(tol) + "; all points coincide");

  Embedding emb;
  emb.requested_dim = cfg.d;
  emb.coords.resize(n, kept);
  emb.eigenvalues.resize(kept);
  for (Eigen::Index k = 0; k < kept; ++k) {
    const double lambda = eigenvalues(n - 1 - k);
    emb.eigenvalues(k) = lambda;
    emb.coords.col(k) = solver.eigenvectors().col(n - 1 - k) * std::sqrt(lambda);
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(emb.coords(i, k));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (emb.coords(arg, k) < 0.0) emb.coords.col(k) = -emb.coords.col(k);
  }
  return emb;
}

/// Worst-case absolute distance distortion:
/// max over i<j of | ||y_i - y_j||_2 - dist[i][j] |.
inline double reconstruction_error(const DistanceMatrix& dist, const Embedding& emb) {
  require(emb.n() == dist.n(), errc::size_mismatch,
          "embedding has " + std::to_string(emb.n()) + " rows, distance matrix " +
              std::to_string(dist.n()));
  const auto n = static_cast<Eigen::Index>(dist.n());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (emb.coords.row(i) - emb.coords.row(j)).norm();
      worst = std::max(worst, std::abs(d - dist.entries(i, j)));
    }
  return worst;
}

/// Embedding coordinates as a row-major observation matrix (for rescoring).
inline ObsMatrix embedding_rows(const Embedding& emb) { return ObsMatrix(emb.coords); }

}  // namespace modet

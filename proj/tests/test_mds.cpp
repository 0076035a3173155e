#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "modet/mds.hpp"
#include "modet/metrics.hpp"
#include "modet/rng.hpp"

using namespace modet;
using Catch::Matchers::WithinAbs;

namespace {

ObsMatrix random_config(Rng& rng, std::size_t n, std::size_t d) {
  ObsMatrix m(n, d);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-5.0, 5.0);
  return m;
}

}  // namespace

TEST_CASE("line configuration embeds isometrically in one dimension") {
  Eigen::MatrixXd m(3, 3);
  m << 0, 1, 3, 1, 0, 2, 3, 2, 0;
  const auto dist = validate_distance_matrix(m);
  const auto emb = torgerson_mds(dist, MdsConfig{1, -1.0});
  REQUIRE(emb.dim() == 1);
  CHECK_THAT((emb.coords.row(0) - emb.coords.row(1)).norm(), WithinAbs(1.0, 1e-12));
  CHECK_THAT((emb.coords.row(0) - emb.coords.row(2)).norm(), WithinAbs(3.0, 1e-12));
  CHECK_THAT((emb.coords.row(1) - emb.coords.row(2)).norm(), WithinAbs(2.0, 1e-12));
  CHECK_THAT(emb.coords.col(0).sum(), WithinAbs(0.0, 1e-12));
}

TEST_CASE("L2 distances from a d'-dimensional configuration are recovered exactly at d = d'") {
  Rng rng(3);
  for (std::size_t d : {1u, 2u, 5u}) {
    const auto config = random_config(rng, 20, d);
    const auto dist = euclidean_pairwise(config);
    const auto emb = torgerson_mds(dist, MdsConfig{d, -1.0});
    CHECK(reconstruction_error(dist, emb) <= 1e-8 * dist.max_entry());
  }
}

TEST_CASE("all-zero distances have no positive eigenvalues") {
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 4);
  CHECK_THROWS_MATCHES(torgerson_mds(validate_distance_matrix(zero), MdsConfig{2, -1.0}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::no_positive_eigenvalues;
                       }));
}

TEST_CASE("degenerate input and bad dimensions are rejected") {
  Eigen::MatrixXd one = Eigen::MatrixXd::Zero(1, 1);
  CHECK_THROWS_MATCHES(torgerson_mds(validate_distance_matrix(one), MdsConfig{1, -1.0}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::degenerate_input;
                       }));
  Eigen::MatrixXd m(3, 3);
  m << 0, 1, 3, 1, 0, 2, 3, 2, 0;
  CHECK_THROWS_AS(torgerson_mds(validate_distance_matrix(m), MdsConfig{3, -1.0}), Error);
  CHECK_THROWS_AS(torgerson_mds(validate_distance_matrix(m), MdsConfig{0, -1.0}), Error);
}

TEST_CASE("embedding requests beyond the positive spectrum come back truncated") {
  // Planar configuration: only 2 positive eigenvalues no matter how many are
  // requested.
  Rng rng(8);
  const auto config = random_config(rng, 12, 2);
  const auto dist = euclidean_pairwise(config);
  const auto emb = torgerson_mds(dist, MdsConfig{6, -1.0});
  CHECK(emb.requested_dim == 6);
  CHECK(emb.dim() == 2);
  CHECK(emb.truncated());
}

TEST_CASE("coordinate columns are centered and eigenvalues strictly descending") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 5 + rng.below(20);
    const auto config = random_config(rng, n, 4);
    const auto dist = euclidean_pairwise(config);
    const auto emb = torgerson_mds(dist, MdsConfig{3, -1.0});
    for (Eigen::Index k = 0; k < emb.coords.cols(); ++k) {
      const double scale = emb.coords.col(k).cwiseAbs().maxCoeff();
      CHECK(std::abs(emb.coords.col(k).sum()) <= 1e-9 * static_cast<double>(n) * scale);
    }
    for (Eigen::Index k = 1; k < emb.eigenvalues.size(); ++k)
      CHECK(emb.eigenvalues(k - 1) > emb.eigenvalues(k));
    CHECK(emb.eigenvalues.minCoeff() > 0.0);
  }
}

TEST_CASE("sign convention: largest-magnitude entry of every column is nonnegative") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto config = random_config(rng, 15, 3);
    const auto dist = euclidean_pairwise(config);
    const auto emb = torgerson_mds(dist, MdsConfig{3, -1.0});
    for (Eigen::Index k = 0; k < emb.coords.cols(); ++k) {
      Eigen::Index arg = 0;
      double best = -1.0;
      for (Eigen::Index i = 0; i < emb.coords.rows(); ++i)
        if (std::abs(emb.coords(i, k)) > best) {
          best = std::abs(emb.coords(i, k));
          arg = i;
        }
      CHECK(emb.coords(arg, k) >= 0.0);
    }
  }
}

TEST_CASE("nested embeddings share leading columns when eigenvalues are separated") {
  Rng rng(31);
  const auto config = random_config(rng, 18, 5);
  const auto dist = euclidean_pairwise(config);
  const auto small = torgerson_mds(dist, MdsConfig{2, -1.0});
  const auto large = torgerson_mds(dist, MdsConfig{3, -1.0});
  REQUIRE(large.dim() >= small.dim());
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(small.dim()); ++k) {
    if (k + 1 < large.eigenvalues.size() &&
        std::abs(large.eigenvalues(k) - large.eigenvalues(k + 1)) <= 1e-9)
      continue;  // touching eigenvalues: column not identifiable
    const double same = (small.coords.col(k) - large.coords.col(k)).norm();
    const double flipped = (small.coords.col(k) + large.coords.col(k)).norm();
    CHECK(std::min(same, flipped) <= 1e-9 * large.coords.col(k).norm());
  }
}

TEST_CASE("reconstruction_error measures worst-case distortion") {
  Rng rng(41);
  const auto config = random_config(rng, 20, 3);
  const auto dist = euclidean_pairwise(config);

  // Degenerate embedding at the origin: error equals the largest distance.
  Embedding zero;
  zero.coords = Eigen::MatrixXd::Zero(20, 2);
  zero.eigenvalues = Eigen::VectorXd::Ones(2);
  zero.requested_dim = 2;
  CHECK(reconstruction_error(dist, zero) == dist.max_entry());

  // Full-dimension embedding: matches an independent double-loop recomputation.
  const auto emb = torgerson_mds(dist, MdsConfig{3, -1.0});
  double worst = 0.0;
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = i + 1; j < 20; ++j) {
      double sq = 0.0;
      for (Eigen::Index k = 0; k < emb.coords.cols(); ++k) {
        const double diff = emb.coords(static_cast<Eigen::Index>(i), k) -
                            emb.coords(static_cast<Eigen::Index>(j), k);
        sq += diff * diff;
      }
      worst = std::max(worst, std::abs(std::sqrt(sq) - dist(i, j)));
    }
  CHECK_THAT(reconstruction_error(dist, emb), WithinAbs(worst, 1e-15));

  Embedding mismatched;
  mismatched.coords = Eigen::MatrixXd::Zero(5, 2);
  mismatched.eigenvalues = Eigen::VectorXd::Ones(2);
  CHECK_THROWS_MATCHES(reconstruction_error(dist, mismatched), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::size_mismatch;
                       }));
}

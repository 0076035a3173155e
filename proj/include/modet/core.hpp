#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "modet/common.hpp"

namespace modet {

/// Observations stored one per row; row-major so a row is a contiguous span.
using ObsMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kSymmetryTol = 1e-12;

/// Symmetric nonnegative matrix with zero diagonal; the interchange format
/// between metrics, embedding, and scoring. Construct via
/// validate_distance_matrix or the library ops that guarantee the invariants.
struct DistanceMatrix {
  Eigen::MatrixXd entries;

  std::size_t n() const { return static_cast<std::size_t>(entries.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  double max_entry() const { return entries.size() == 0 ? 0.0 : entries.maxCoeff(); }
};

/// n x d coordinates with per-dimension eigenvalue metadata, eigenvalues
/// strictly positive and sorted descending. requested_dim records the d that
/// was asked for; dim() can be smaller when the spectrum ran out.
struct Embedding {
  Eigen::MatrixXd coords;
  Eigen::VectorXd eigenvalues;
  std::size_t requested_dim = 0;

  std::size_t n() const { return static_cast<std::size_t>(coords.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(coords.cols()); }
  bool truncated() const { return dim() < requested_dim; }
};

/// Per-observation LOF scores plus descending outlyingness ranks
/// (rank 1 = highest score, ties broken by observation index).
struct ScoreVector {
  std::vector<double> scores;
  std::vector<std::size_t> ranks;

  std::size_t n() const { return scores.size(); }
};

/// Simple undirected graph: vertices 0..vertex_count-1, no self-loops, no
/// duplicate edges. Edges kept normalized (u < v) and sorted.
struct Graph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;

  static Graph make(int vertex_count, std::vector<std::pair<int, int>> edges) {
    require(vertex_count > 0, errc::invalid_argument, "graph needs at least one vertex");
    for (auto& [u, v] : edges) {
      require(u != v, errc::invalid_argument, "self-loop at vertex " + std::to_string(u));
      require(u >= 0 && v >= 0 && u < vertex_count && v < vertex_count, errc::invalid_argument,
              "edge endpoint out of range");
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    require(std::adjacent_find(edges.begin(), edges.end()) == edges.end(),
            errc::invalid_argument, "duplicate edge");
    return Graph{vertex_count, std::move(edges)};
  }
};

enum class ObsKind { vectors, graphs };

/// Observations (vectors or graphs on a common vertex count) with optional
/// ground-truth flags, class labels and generative parameters. Immutable by
/// convention after construction.
struct LabeledDataset {
  std::variant<ObsMatrix, std::vector<Graph>> observations;
  std::vector<std::uint8_t> structural_flags;      // empty = absent
  std::vector<std::uint8_t> distributional_flags;  // empty = absent
  std::vector<std::vector<double>> params;         // empty = absent
  std::vector<std::string> labels;                 // empty = absent

  ObsKind kind() const {
    return std::holds_alternative<ObsMatrix>(observations) ? ObsKind::vectors : ObsKind::graphs;
  }
  bool is_vectors() const { return kind() == ObsKind::vectors; }
  const ObsMatrix& vectors() const { return std::get<ObsMatrix>(observations); }
  const std::vector<Graph>& graphs() const { return std::get<std::vector<Graph>>(observations); }

  std::size_t size() const {
    if (is_vectors()) return static_cast<std::size_t>(vectors().rows());
    return graphs().size();
  }

  bool structural(std::size_t i) const {
    return !structural_flags.empty() && structural_flags[i] != 0;
  }
  bool distributional(std::size_t i) const {
    return !distributional_flags.empty() && distributional_flags[i] != 0;
  }

  void check() const {
    const std::size_t n = size();
    require(structural_flags.empty() || structural_flags.size() == n, errc::size_mismatch,
            "structural flags must cover every observation");
    require(distributional_flags.empty() || distributional_flags.size() == n, errc::size_mismatch,
            "distributional flags must cover every observation");
    require(params.empty() || params.size() == n, errc::size_mismatch,
            "params must cover every observation");
    require(labels.empty() || labels.size() == n, errc::size_mismatch,
            "labels must cover every observation");
    if (!structural_flags.empty() && !distributional_flags.empty()) {
      for (std::size_t i = 0; i < n; ++i)
        require(!(structural_flags[i] && distributional_flags[i]), errc::invalid_argument,
                "observation " + std::to_string(i) + " flagged both structural and distributional");
    }
    if (!is_vectors()) {
      const auto& gs = graphs();
      for (std::size_t i = 1; i < gs.size(); ++i)
        require(gs[i].vertex_count == gs[0].vertex_count, errc::vertex_count_mismatch,
                "all graphs must share one vertex count");
    }
  }
};

/// Validates a raw square matrix as a DistanceMatrix. Symmetry and the zero
/// diagonal are enforced within absolute tolerance kSymmetryTol; the result is
/// symmetrized as (m + m^T)/2 with the diagonal forced to zero, so an already
/// valid matrix passes through bit-identically.
inline DistanceMatrix validate_distance_matrix(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  require(m.cols() == n, errc::non_square,
          "matrix is " + std::to_string(n) + "x" + std::to_string(m.cols()));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = m(i, j);
      require(std::isfinite(v), errc::non_finite,
              "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not finite");
      require(v >= 0.0, errc::negative_entry,
              "entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " + format_double(v));
    }
  for (Eigen::Index i = 0; i < n; ++i)
    require(std::abs(m(i, i)) <= kSymmetryTol, errc::nonzero_diagonal,
            "diagonal entry " + std::to_string(i) + " = " + format_double(m(i, i)));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      require(std::abs(m(i, j) - m(j, i)) <= kSymmetryTol, errc::asymmetry_beyond_tolerance,
              "entries (" + std::to_string(i) + "," + std::to_string(j) + ") differ by " +
                  format_double(std::abs(m(i, j) - m(j, i))));
  DistanceMatrix out;
  out.entries = (m + m.transpose()) / 2.0;
  out.entries.diagonal().setZero();
  return out;
}

/// Rank 1 goes to the largest score; ties broken by ascending observation
/// index. Infinities order naturally; NaN is rejected.
inline std::vector<std::size_t> ranks_from_scores(const std::vector<double>& scores) {
  for (std::size_t i = 0; i < scores.size(); ++i)
    require(!std::isnan(scores[i]), errc::non_finite,
            "score " + std::to_string(i) + " is NaN");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<std::size_t> ranks(scores.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) ranks[order[pos]] = pos + 1;
  return ranks;
}

}  // namespace modet

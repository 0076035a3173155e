#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "modet/common.hpp"
#include "modet/core.hpp"

namespace modet {

enum class MetricKind { lp, frobenius_laplacian, dtw, wasserstein1 };

inline const char* metric_kind_name(MetricKind k) {
  switch (k) {
    case MetricKind::lp: return "lp";
    case MetricKind::frobenius_laplacian: return "frobenius_laplacian";
    case MetricKind::dtw: return "dtw";
    case MetricKind::wasserstein1: return "wasserstein1";
  }
  return "?";
}

struct MetricSpec {
  MetricKind kind = MetricKind::lp;
  double p = 2.0;  // lp only, p >= 1

  static MetricSpec l2() { return MetricSpec{MetricKind::lp, 2.0}; }
  static MetricSpec lp(double p) { return MetricSpec{MetricKind::lp, p}; }
  static MetricSpec dtw() { return MetricSpec{MetricKind::dtw, 2.0}; }
  static MetricSpec wasserstein1() { return MetricSpec{MetricKind::wasserstein1, 2.0}; }
  static MetricSpec frobenius_laplacian() {
    return MetricSpec{MetricKind::frobenius_laplacian, 2.0};
  }

  void check() const {
    if (kind == MetricKind::lp)
      require(std::isfinite(p) && p >= 1.0, errc::invalid_p, "lp requires p >= 1, got " + format_double(p));
  }
};

/// (sum_k |x_k - y_k|^p)^(1/p) on the shared evaluation grid, no quadrature
/// weights. p = 1 and p = 2 take the usual direct forms.
inline double lp_distance(std::span<const double> x, std::span<const double> y, double p) {
  require(x.size() == y.size(), errc::length_mismatch,
          "vectors of length " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  require(std::isfinite(p) && p >= 1.0, errc::invalid_p, "p = " + format_double(p));
  for (std::size_t k = 0; k < x.size(); ++k)
    require(std::isfinite(x[k]) && std::isfinite(y[k]), errc::non_finite,
            "non-finite coordinate at index " + std::to_string(k));
  if (p == 2.0) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double d = x[k] - y[k];
      s += d * d;
    }
    return std::sqrt(s);
  }
  if (p == 1.0) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += std::abs(x[k] - y[k]);
    return s;
  }
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += std::pow(std::abs(x[k] - y[k]), p);
  return std::pow(s, 1.0 / p);
}

/// Combinatorial Laplacian L = Deg - Adj.
inline Eigen::MatrixXd laplacian(const Graph& g) {
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(g.vertex_count, g.vertex_count);
  for (const auto& [u, v] : g.edges) {
    lap(u, v) -= 1.0;
    lap(v, u) -= 1.0;
    lap(u, u) += 1.0;
    lap(v, v) += 1.0;
  }
  return lap;
}

inline double frobenius_laplacian_distance(const Graph& g1, const Graph& g2) {
  require(g1.vertex_count == g2.vertex_count, errc::vertex_count_mismatch,
          std::to_string(g1.vertex_count) + " vs " + std::to_string(g2.vertex_count) + " vertices");
  return (laplacian(g1) - laplacian(g2)).norm();
}

/// Classic DTW: |x_i - y_j| local cost, steps {(1,0),(0,1),(1,1)}, anchored at
/// both ends, no window, no path-length normalization. Not a metric; returns
/// the accumulated cost.
inline double dtw_distance(std::span<const double> x, std::span<const double> y) {
  require(!x.empty() && !y.empty(), errc::empty_input, "dtw needs nonempty inputs");
  const std::size_t m = x.size(), n = y.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(n + 1, inf), curr(n + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    curr[0] = inf;
    for (std::size_t j = 1; j <= n; ++j) {
      const double cost = std::abs(x[i - 1] - y[j - 1]);
      curr[j] = cost + std::min({prev[j], curr[j - 1], prev[j - 1]});
    }
    std::swap(prev, curr);
  }
  return prev[n];
}

/// Unnormalized 1-D Wasserstein-1 on a unit-spaced grid: L1 distance between
/// cumulative sums. Masses need not match; nothing is rescaled.
inline double wasserstein1_distance(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), errc::length_mismatch,
          "vectors of length " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  for (std::size_t k = 0; k < x.size(); ++k) {
    require(std::isfinite(x[k]) && std::isfinite(y[k]), errc::non_finite,
            "non-finite mass at index " + std::to_string(k));
    require(x[k] >= 0.0 && y[k] >= 0.0, errc::negative_mass,
            "negative mass at index " + std::to_string(k));
  }
  double cx = 0.0, cy = 0.0, total = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    cx += x[k];
    cy += y[k];
    total += std::abs(cx - cy);
  }
  return total;
}

inline std::span<const double> row_span(const ObsMatrix& m, std::size_t i) {
  return {m.data() + static_cast<std::ptrdiff_t>(i) * m.cols(), static_cast<std::size_t>(m.cols())};
}

namespace detail {

/// Fills the upper triangle via fn(i, j) over a flattened pair index; each
/// entry is computed exactly once so the result is schedule-independent.
template <typename PairFn>
DistanceMatrix assemble_pairwise(std::size_t n, unsigned threads, PairFn&& fn) {
  DistanceMatrix out;
  out.entries = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const std::size_t pairs = n * (n - 1) / 2;
  parallel_for(pairs, threads, [&](std::size_t begin, std::size_t end) {
    // Unrank the first pair index, then walk the triangle row by row.
    std::size_t i = 0, offset = 0;
    while (offset + (n - 1 - i) <= begin) {
      offset += n - 1 - i;
      ++i;
    }
    std::size_t j = i + 1 + (begin - offset);
    for (std::size_t t = begin; t < end; ++t) {
      const double d = fn(i, j);
      out.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
      out.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d;
      if (++j == n) {
        ++i;
        j = i + 1;
      }
    }
  });
  return out;
}

}  // namespace detail

/// Pairwise Euclidean distances between the rows of a coordinate matrix
/// (used to score embeddings).
inline DistanceMatrix euclidean_pairwise(const ObsMatrix& coords, unsigned threads = 0) {
  const auto n = static_cast<std::size_t>(coords.rows());
  return detail::assemble_pairwise(n, threads, [&](std::size_t i, std::size_t j) {
    return lp_distance(row_span(coords, i), row_span(coords, j), 2.0);
  });
}

/// entries[i][j] = metric(obs_i, obs_j), computed once per unordered pair and
/// mirrored. Pairs may be evaluated concurrently.
inline DistanceMatrix pairwise_matrix(const LabeledDataset& data, const MetricSpec& metric,
                                      unsigned threads = 0) {
  metric.check();
  data.check();
  const std::size_t n = data.size();
  require(n >= 1, errc::empty_input, "dataset has no observations");
  if (metric.kind == MetricKind::frobenius_laplacian) {
    require(!data.is_vectors(), errc::metric_kind_mismatch,
            "frobenius_laplacian needs graph observations");
    const auto& gs = data.graphs();
    std::vector<Eigen::MatrixXd> laps(n);
    for (std::size_t i = 0; i < n; ++i) laps[i] = laplacian(gs[i]);
    return detail::assemble_pairwise(
        n, threads, [&](std::size_t i, std::size_t j) { return (laps[i] - laps[j]).norm(); });
  }
  require(data.is_vectors(), errc::metric_kind_mismatch,
          std::string(metric_kind_name(metric.kind)) + " needs vector observations");
  const ObsMatrix& m = data.vectors();
  switch (metric.kind) {
    case MetricKind::lp:
      return detail::assemble_pairwise(n, threads, [&](std::size_t i, std::size_t j) {
        return lp_distance(row_span(m, i), row_span(m, j), metric.p);
      });
    case MetricKind::dtw:
      return detail::assemble_pairwise(n, threads, [&](std::size_t i, std::size_t j) {
        return dtw_distance(row_span(m, i), row_span(m, j));
      });
    case MetricKind::wasserstein1:
      return detail::assemble_pairwise(n, threads, [&](std::size_t i, std::size_t j) {
        return wasserstein1_distance(row_span(m, i), row_span(m, j));
      });
    default:
      fail(errc::metric_kind_mismatch, "unhandled metric kind");
  }
}

}  // namespace modet

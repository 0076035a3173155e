#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "modet/common.hpp"
#include "modet/core.hpp"

namespace modet {

/// k = min(n - 1, max(1, floor(k_fraction * n))). The tiny nudge keeps
/// decimal fractions like 0.1 * 110 from flooring one below the intended
/// integer product.
inline std::size_t resolve_k(std::size_t n, double k_fraction) {
  require(n >= 2, errc::too_few_observations, "need at least 2 observations");
  require(k_fraction > 0.0 && k_fraction <= 1.0, errc::invalid_argument,
          "k_fraction must be in (0, 1], got " + format_double(k_fraction));
  const auto floored =
      static_cast<std::size_t>(std::floor(k_fraction * static_cast<double>(n) + 1e-9));
  return std::min(n - 1, std::max<std::size_t>(1, floored));
}

struct LofConfig {
  std::size_t k = 0;         // used when > 0
  double k_fraction = 0.0;   // used when k == 0

  static LofConfig neighbors(std::size_t k) { return LofConfig{k, 0.0}; }
  static LofConfig fraction(double f) { return LofConfig{0, f}; }

  std::size_t resolve(std::size_t n) const {
    if (k > 0) {
      require(n >= 2, errc::too_few_observations, "need at least 2 observations");
      require(k <= n - 1, errc::invalid_k,
              "k = " + std::to_string(k) + " must be <= n-1 = " + std::to_string(n - 1));
      return k;
    }
    return resolve_k(n, k_fraction);
  }
};

/// Local Outlier Factor (Breunig et al. 2000) on a distance matrix.
///
///   k-distance(p) = distance to the k-th nearest other point
///   N_k(p)        = { o != p : d(p,o) <= k-distance(p) }   (ties included)
///   reach_k(p,o)  = max(k-distance(o), d(p,o))
///   lrd_k(p)      = |N_k(p)| / sum_{o in N_k(p)} reach_k(p,o)
///   LOF_k(p)      = mean_{o in N_k(p)} lrd_k(o) / lrd_k(p)
///
/// A zero reach sum (point duplicated more than k times) gives lrd = +inf;
/// inf/inf ratios are defined as 1 so duplicated inliers score 1 instead of
/// blowing up. Phases parallelize over points; output is deterministic.
inline ScoreVector lof_scores(const DistanceMatrix& dist, const LofConfig& cfg,
                              unsigned threads = 0) {
  const std::size_t n = dist.n();
  require(n >= 2, errc::too_few_observations, "need at least 2 observations");
  const std::size_t k = cfg.resolve(n);
  require(k >= 1 && k <= n - 1, errc::invalid_k, "resolved k = " + std::to_string(k));

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> kdist(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> row(n - 1);
    for (std::size_t p = begin; p < end; ++p) {
      std::size_t m = 0;
      for (std::size_t o = 0; o < n; ++o)
        if (o != p) row[m++] = dist(p, o);
      std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end());
      kdist[p] = row[k - 1];
    }
  });

  std::vector<double> lrd(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      double reach_sum = 0.0;
      std::size_t count = 0;
      for (std::size_t o = 0; o < n; ++o) {
        if (o == p) continue;
        const double d = dist(p, o);
        if (d <= kdist[p]) {
          reach_sum += std::max(kdist[o], d);
          ++count;
        }
      }
      lrd[p] = reach_sum == 0.0 ? inf : static_cast<double>(count) / reach_sum;
    }
  });

  ScoreVector out;
  out.scores.resize(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      double ratio_sum = 0.0;
      std::size_t count = 0;
      for (std::size_t o = 0; o < n; ++o) {
        if (o == p) continue;
        if (dist(p, o) <= kdist[p]) {
          ratio_sum += (std::isinf(lrd[o]) && std::isinf(lrd[p])) ? 1.0 : lrd[o] / lrd[p];
          ++count;
        }
      }
      out.scores[p] = ratio_sum / static_cast<double>(count);
    }
  });
  out.ranks = ranks_from_scores(out.scores);
  return out;
}

}  // namespace modet

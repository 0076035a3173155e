#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "modet/common.hpp"
#include "modet/core.hpp"
#include "modet/lof.hpp"
#include "modet/mds.hpp"
#include "modet/metrics.hpp"
#include "modet/rng.hpp"
#include "modet/simgen.hpp"

namespace modet {

/// Injects n_out = round(r * n_in) observations (minimum 1 when r > 0,
/// recorded as a warning if the product rounded to 0) sampled uniformly
/// without replacement from the pool, then shuffles the combined dataset
/// deterministically. structural_flags mark exactly the injected rows.
inline LabeledDataset contaminate(const LabeledDataset& inliers, const LabeledDataset& outlier_pool,
                                  double r, std::uint64_t seed,
                                  std::vector<std::string>* warnings = nullptr) {
  require(r > 0.0, errc::invalid_argument, "outlier ratio must be positive");
  require(inliers.kind() == outlier_pool.kind(), errc::metric_kind_mismatch,
          "inlier and outlier observations must be the same kind");
  const std::size_t n_in = inliers.size();
  const std::size_t pool = outlier_pool.size();
  std::size_t n_out = static_cast<std::size_t>(std::llround(r * static_cast<double>(n_in)));
  if (n_out == 0) {
    n_out = 1;
    if (warnings)
      warnings->push_back("ratio " + format_double(r) + " rounds to 0 outliers for n_in = " +
                          std::to_string(n_in) + "; forcing n_out = 1");
  }
  require(pool >= n_out, errc::pool_too_small,
          "need " + std::to_string(n_out) + " outliers but pool has " + std::to_string(pool));

  Rng rng(seed);
  // Partial Fisher-Yates: the first n_out slots are a uniform sample
  // without replacement.
  std::vector<std::size_t> pool_index(pool);
  std::iota(pool_index.begin(), pool_index.end(), std::size_t{0});
  for (std::size_t i = 0; i < n_out; ++i)
    std::swap(pool_index[i], pool_index[i + rng.below(pool - i)]);

  const std::size_t n = n_in + n_out;
  std::vector<std::size_t> position(n);
  std::iota(position.begin(), position.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i)
    std::swap(position[i - 1], position[rng.below(i)]);

  const bool keep_labels = !inliers.labels.empty() && !outlier_pool.labels.empty();
  LabeledDataset out;
  out.structural_flags.assign(n, 0);
  if (keep_labels) out.labels.resize(n);

  // source(slot) = inlier slot or sampled pool observation
  auto fill = [&](auto& dst, const auto& src_in, const auto& src_pool, auto copy_row) {
    for (std::size_t slot = 0; slot < n; ++slot) {
      const std::size_t src = position[slot];
      if (src < n_in) {
        copy_row(dst, slot, src_in, src);
        if (keep_labels) out.labels[slot] = inliers.labels[src];
      } else {
        const std::size_t p = pool_index[src - n_in];
        copy_row(dst, slot, src_pool, p);
        out.structural_flags[slot] = 1;
        if (keep_labels) out.labels[slot] = outlier_pool.labels[p];
      }
    }
  };

  if (inliers.is_vectors()) {
    const ObsMatrix& a = inliers.vectors();
    const ObsMatrix& b = outlier_pool.vectors();
    require(a.cols() == b.cols(), errc::length_mismatch,
            "inlier and pool vectors differ in length");
    ObsMatrix m(n, a.cols());
    fill(m, a, b, [](ObsMatrix& dst, std::size_t slot, const ObsMatrix& src, std::size_t i) {
      dst.row(static_cast<Eigen::Index>(slot)) = src.row(static_cast<Eigen::Index>(i));
    });
    out.observations = std::move(m);
  } else {
    const auto& a = inliers.graphs();
    const auto& b = outlier_pool.graphs();
    require(a.empty() || b.empty() || a[0].vertex_count == b[0].vertex_count,
            errc::vertex_count_mismatch, "inlier and pool graphs differ in vertex count");
    std::vector<Graph> gs(n);
    fill(gs, a, b,
         [](std::vector<Graph>& dst, std::size_t slot, const std::vector<Graph>& src,
            std::size_t i) { dst[slot] = src[i]; });
    out.observations = std::move(gs);
  }
  out.check();
  return out;
}

/// ROC-AUC in the Mann-Whitney form: probability that a uniformly random
/// (outlier, inlier) pair has outlier score > inlier score, ties counting
/// one half. Computed from the scores directly (rank-equivalent). The single
/// final division keeps the tie-symmetric identity auc(s) + auc(-s) = 1.
inline double roc_auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& flags) {
  require(scores.size() == flags.size(), errc::size_mismatch,
          "scores and flags differ in length");
  std::int64_t n_out = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    require(!std::isnan(scores[i]), errc::non_finite, "score " + std::to_string(i) + " is NaN");
    n_out += flags[i] ? 1 : 0;
  }
  const std::int64_t n_in = static_cast<std::int64_t>(flags.size()) - n_out;
  require(n_out > 0 && n_in > 0, errc::single_class,
          "need at least one flagged and one unflagged observation");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] < scores[b];
    return a < b;
  });

  // Sweep ascending, grouping ties: every outlier beats the inliers strictly
  // below its group and halves against the inliers inside it.
  std::int64_t twice_wins = 0;  // 2*wins + ties
  std::int64_t inliers_below = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::int64_t group_in = 0, group_out = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (flags[order[j]]) ++group_out; else ++group_in;
      ++j;
    }
    twice_wins += group_out * (2 * inliers_below + group_in);
    inliers_below += group_in;
    i = j;
  }
  return static_cast<double>(twice_wins) / static_cast<double>(2 * n_out * n_in);
}

struct BenchConfig {
  LabeledDataset inliers;       // resolved M_co observations
  LabeledDataset outlier_pool;  // resolved M_an pool
  std::vector<double> ratios{0.01, 0.025, 0.05, 0.1};        // ascending, in (0, 0.5]
  std::vector<double> k_fractions{0.01, 0.1, 0.75, 0.9};     // distinct, in (0, 1]
  std::size_t replications = 50;
  std::size_t embed_dim = 2;
  MetricSpec metric = MetricSpec::l2();
  std::uint64_t base_seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency

  void check() const {
    inliers.check();
    outlier_pool.check();
    metric.check();
    require(replications >= 1, errc::invalid_argument, "replications must be >= 1");
    require(!ratios.empty(), errc::invalid_argument, "need at least one outlier ratio");
    require(std::is_sorted(ratios.begin(), ratios.end()), errc::invalid_argument,
            "ratios must be sorted ascending");
    for (double r : ratios)
      require(r > 0.0 && r <= 0.5, errc::invalid_argument,
              "ratio " + format_double(r) + " outside (0, 0.5]");
    require(!k_fractions.empty(), errc::invalid_argument, "need at least one k fraction");
    for (double f : k_fractions)
      require(f > 0.0 && f <= 1.0, errc::invalid_argument,
              "k_fraction " + format_double(f) + " outside (0, 1]");
    auto sorted = k_fractions;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            errc::invalid_argument, "k_fractions must be distinct");
    require(embed_dim >= 1, errc::invalid_argument, "embed_dim must be >= 1");
  }
};

struct BenchReport {
  std::vector<double> ratios;
  std::vector<double> k_fractions;
  std::size_t replications = 0;
  std::size_t n_in = 0;
  std::vector<std::size_t> n_out;  // per ratio
  std::uint64_t base_seed = 0;
  std::string metric;
  std::size_t embed_dim = 0;

  /// auc[ratio][k_fraction][replication]
  std::vector<std::vector<std::vector<double>>> per_replication;
  /// seeds[ratio][replication]
  std::vector<std::vector<std::uint64_t>> seeds;
  /// wall seconds per (ratio, replication) cell (pairwise + embed + scoring)
  std::vector<std::vector<double>> cell_seconds;
  std::vector<std::string> warnings;

  double mean_auc(std::size_t ri, std::size_t ki) const {
    const auto& v = per_replication[ri][ki];
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  }

  double sd_auc(std::size_t ri, std::size_t ki) const {
    const auto& v = per_replication[ri][ki];
    if (v.size() < 2) return 0.0;
    const double m = mean_auc(ri, ki);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
  }
};

/// Seed for the (replication, ratio) cell: base_seed mixed with the
/// replication index and the ratio's bit pattern.
inline std::uint64_t derive_cell_seed(std::uint64_t base, std::size_t replication, double ratio) {
  return mix_seed(mix_seed(base, replication), std::bit_cast<std::uint64_t>(ratio));
}

/// Full contamination benchmark. For every (replication, ratio) cell:
/// contaminate -> pairwise distances under cfg.metric -> Torgerson MDS at
/// embed_dim -> LOF on Euclidean distances between the embedding coordinates
/// for each k fraction -> ROC-AUC against the structural flags. Cells run
/// concurrently; a failed cell aborts the whole run with context.
inline BenchReport run_benchmark(const BenchConfig& cfg) {
  cfg.check();
  const std::size_t n_ratio = cfg.ratios.size();
  const std::size_t n_k = cfg.k_fractions.size();

  BenchReport report;
  report.ratios = cfg.ratios;
  report.k_fractions = cfg.k_fractions;
  report.replications = cfg.replications;
  report.n_in = cfg.inliers.size();
  report.base_seed = cfg.base_seed;
  report.metric = metric_kind_name(cfg.metric.kind);
  if (cfg.metric.kind == MetricKind::lp) report.metric += "(p=" + format_double(cfg.metric.p) + ")";
  report.embed_dim = cfg.embed_dim;
  report.n_out.resize(n_ratio);
  report.per_replication.assign(n_ratio,
                                std::vector<std::vector<double>>(n_k, std::vector<double>(cfg.replications, 0.0)));
  report.seeds.assign(n_ratio, std::vector<std::uint64_t>(cfg.replications, 0));
  report.cell_seconds.assign(n_ratio, std::vector<double>(cfg.replications, 0.0));

  for (std::size_t ri = 0; ri < n_ratio; ++ri) {
    const auto rounded = static_cast<std::size_t>(
        std::llround(cfg.ratios[ri] * static_cast<double>(report.n_in)));
    report.n_out[ri] = std::max<std::size_t>(1, rounded);
    if (rounded == 0)
      report.warnings.push_back("ratio " + format_double(cfg.ratios[ri]) +
                                " rounds to 0 outliers; forcing n_out = 1");
  }

  const std::size_t cells = n_ratio * cfg.replications;
  parallel_for(cells, cfg.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t cell = begin; cell < end; ++cell) {
      const std::size_t ri = cell / cfg.replications;
      const std::size_t rep = cell % cfg.replications;
      const double ratio = cfg.ratios[ri];
      const std::uint64_t seed = derive_cell_seed(cfg.base_seed, rep, ratio);
      report.seeds[ri][rep] = seed;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        const LabeledDataset mixed = contaminate(cfg.inliers, cfg.outlier_pool, ratio, seed);
        const DistanceMatrix dist = pairwise_matrix(mixed, cfg.metric, 1);
        const Embedding emb = torgerson_mds(dist, MdsConfig{cfg.embed_dim, -1.0});
        const DistanceMatrix emb_dist = euclidean_pairwise(embedding_rows(emb), 1);
        for (std::size_t ki = 0; ki < n_k; ++ki) {
          const ScoreVector sv = lof_scores(emb_dist, LofConfig::fraction(cfg.k_fractions[ki]), 1);
          report.per_replication[ri][ki][rep] = roc_auc(sv.scores, mixed.structural_flags);
        }
        report.cell_seconds[ri][rep] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      } catch (const Error& e) {
        throw Error(e.code(), "replication " + std::to_string(rep) + ", ratio " +
                                  format_double(ratio) + ": " + e.what());
      }
    }
  });
  return report;
}

/// One row per (ratio, k_fraction) cell.
inline std::string bench_report_csv(const BenchReport& r) {
  std::string out = "ratio,k_fraction,mean_auc,sd_auc,n_in,n_out,replications\n";
  for (std::size_t ri = 0; ri < r.ratios.size(); ++ri)
    for (std::size_t ki = 0; ki < r.k_fractions.size(); ++ki) {
      out += format_double(r.ratios[ri]) + ',' + format_double(r.k_fractions[ki]) + ',' +
             format_double(r.mean_auc(ri, ki)) + ',' + format_double(r.sd_auc(ri, ki)) + ',' +
             std::to_string(r.n_in) + ',' + std::to_string(r.n_out[ri]) + ',' +
             std::to_string(r.replications) + '\n';
    }
  return out;
}

/// Mean-AUC grid formatted like the paper's results table: one row per
/// outlier ratio, one column per k fraction.
inline std::string bench_report_table(const BenchReport& r) {
  std::ostringstream os;
  os << "Mean ROC-AUC over " << r.replications << " replications (n_in = " << r.n_in
     << ", metric = " << r.metric << ", embedding dim = " << r.embed_dim << ")\n";
  os << "        ";
  for (double f : r.k_fractions) {
    std::string head = "k=" + format_double(f) + "n";
    os << ' ' << head;
    for (std::size_t pad = head.size(); pad < 8; ++pad) os << ' ';
  }
  os << '\n';
  os.setf(std::ios::fixed);
  os.precision(2);
  for (std::size_t ri = 0; ri < r.ratios.size(); ++ri) {
    std::string head = "r: " + format_double(100.0 * r.ratios[ri]) + "%";
    os << head;
    for (std::size_t pad = head.size(); pad < 8; ++pad) os << ' ';
    for (std::size_t ki = 0; ki < r.k_fractions.size(); ++ki) {
      os << ' ' << r.mean_auc(ri, ki) << "    ";
    }
    os << '\n';
  }
  for (const auto& w : r.warnings) os << "warning: " << w << '\n';
  return os.str();
}

}  // namespace modet

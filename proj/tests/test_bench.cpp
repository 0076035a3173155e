#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "modet/bench.hpp"
#include "modet/config.hpp"
#include "modet/simgen.hpp"
#include "oracles.hpp"

using namespace modet;
using Catch::Matchers::WithinAbs;

namespace {

LabeledDataset line_dataset(std::size_t n, double start, double step) {
  LabeledDataset data;
  ObsMatrix m(n, 1);
  for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), 0) = start + step * i;
  data.observations = m;
  data.labels.assign(n, "x");
  return data;
}

void load_generated(BenchConfig& cfg, const LabeledDataset& data) {
  split_source(data, "", cfg.inliers, cfg.outlier_pool);
}

}  // namespace

TEST_CASE("contaminate rounds half up with a floor of one") {
  const auto inliers = line_dataset(97, 0.0, 1.0);
  const auto pool = line_dataset(50, 1000.0, 1.0);

  auto mixed = contaminate(inliers, pool, 0.01, 5);  // round(0.97) = 1
  CHECK(mixed.size() == 98);
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < mixed.size(); ++i) flagged += mixed.structural(i) ? 1 : 0;
  CHECK(flagged == 1);

  const auto big = line_dataset(750, 0.0, 1.0);
  const auto big_pool = line_dataset(100, 1000.0, 1.0);
  auto mixed2 = contaminate(big, big_pool, 0.1, 5);
  CHECK(mixed2.size() == 825);

  std::vector<std::string> warnings;
  const auto tiny = line_dataset(10, 0.0, 1.0);
  auto mixed3 = contaminate(tiny, pool, 0.01, 5, &warnings);  // round(0.1) = 0 -> forced 1
  CHECK(mixed3.size() == 11);
  CHECK(warnings.size() == 1);
}

TEST_CASE("contaminate flags exactly the injected observations") {
  const auto inliers = line_dataset(30, 0.0, 1.0);
  const auto pool = line_dataset(20, 1000.0, 1.0);
  const auto mixed = contaminate(inliers, pool, 0.2, 9);
  REQUIRE(mixed.size() == 36);
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    const double v = mixed.vectors()(static_cast<Eigen::Index>(i), 0);
    CHECK(mixed.structural(i) == (v >= 1000.0));
  }
}

TEST_CASE("contaminate samples without replacement and shuffles deterministically") {
  const auto inliers = line_dataset(10, 0.0, 1.0);
  const auto pool = line_dataset(8, 1000.0, 1.0);
  const auto a = contaminate(inliers, pool, 0.5, 77);
  const auto b = contaminate(inliers, pool, 0.5, 77);
  CHECK(a.vectors() == b.vectors());
  CHECK(a.structural_flags == b.structural_flags);

  std::vector<double> injected;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.structural(i)) injected.push_back(a.vectors()(static_cast<Eigen::Index>(i), 0));
  std::sort(injected.begin(), injected.end());
  CHECK(std::adjacent_find(injected.begin(), injected.end()) == injected.end());

  const auto c = contaminate(inliers, pool, 0.5, 78);
  CHECK(a.vectors() != c.vectors());
}

TEST_CASE("contaminate rejects an exhausted pool") {
  const auto inliers = line_dataset(100, 0.0, 1.0);
  const auto pool = line_dataset(3, 1000.0, 1.0);
  CHECK_THROWS_MATCHES(contaminate(inliers, pool, 0.1, 1), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::pool_too_small;
                       }));
}

TEST_CASE("roc_auc handles perfect separation and all-tied scores") {
  const std::vector<double> sep{5.0, 6.0, 1.0, 2.0};
  const std::vector<std::uint8_t> flags{1, 1, 0, 0};
  CHECK(roc_auc(sep, flags) == 1.0);
  const std::vector<double> tied{3.0, 3.0, 3.0, 3.0};
  CHECK(roc_auc(tied, flags) == 0.5);
  const std::vector<double> inverted{1.0, 2.0, 5.0, 6.0};
  CHECK(roc_auc(inverted, flags) == 0.0);
  CHECK_THROWS_MATCHES(roc_auc(sep, std::vector<std::uint8_t>{1, 1, 1, 1}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::single_class;
                       }));
}

TEST_CASE("roc_auc matches the all-pairs oracle exactly") {
  Rng rng(1234);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.below(30);
    std::vector<double> scores(n);
    std::vector<std::uint8_t> flags(n, 0);
    for (auto& s : scores) s = std::floor(rng.uniform(0.0, 8.0)) / 2.0;  // ties common
    std::size_t n_out = 1 + rng.below(n - 1);
    for (std::size_t i = 0; i < n_out; ++i) flags[i] = 1;
    for (std::size_t i = n; i > 1; --i) {
      const auto j = rng.below(i);
      std::swap(flags[i - 1], flags[j]);
    }
    CHECK(roc_auc(scores, flags) == oracle::roc_auc(scores, flags));
  }
}

TEST_CASE("roc_auc is invariant under strictly increasing transforms") {
  Rng rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + rng.below(20);
    std::vector<double> scores(n);
    std::vector<std::uint8_t> flags(n, 0);
    for (auto& s : scores) s = rng.uniform(-3.0, 3.0);
    flags[rng.below(n)] = 1;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.bernoulli(0.3)) flags[i] = 1;
    bool has_in = false;
    for (auto f : flags) has_in |= !f;
    if (!has_in) flags[0] = 0;

    const double base = roc_auc(scores, flags);
    std::vector<double> exp_scores(n), affine(n);
    for (std::size_t i = 0; i < n; ++i) {
      exp_scores[i] = std::exp(scores[i]);
      affine[i] = 4.0 * scores[i] + 11.0;
    }
    CHECK(roc_auc(exp_scores, flags) == base);
    CHECK(roc_auc(affine, flags) == base);

    std::vector<double> negated(n);
    for (std::size_t i = 0; i < n; ++i) negated[i] = -scores[i];
    CHECK(roc_auc(scores, flags) + roc_auc(negated, flags) == 1.0);
  }
}

TEST_CASE("cell seeds differ across replications and ratios") {
  const auto s00 = derive_cell_seed(42, 0, 0.01);
  const auto s01 = derive_cell_seed(42, 0, 0.025);
  const auto s10 = derive_cell_seed(42, 1, 0.01);
  CHECK(s00 != s01);
  CHECK(s00 != s10);
  CHECK(s01 != s10);
  CHECK(derive_cell_seed(42, 0, 0.01) == s00);
}

TEST_CASE("run_benchmark is deterministic and aggregates correctly") {
  BenchConfig cfg;
  load_generated(cfg, gen_dataset_a(40, 20, 30, 5));
  cfg.ratios = {0.05, 0.1};
  cfg.k_fractions = {0.1, 0.75};
  cfg.replications = 3;
  cfg.embed_dim = 2;
  cfg.base_seed = 7;
  cfg.threads = 2;

  const auto r1 = run_benchmark(cfg);
  const auto r2 = run_benchmark(cfg);
  CHECK(r1.per_replication == r2.per_replication);
  CHECK(r1.seeds == r2.seeds);
  CHECK(bench_report_csv(r1) == bench_report_csv(r2));

  REQUIRE(r1.per_replication.size() == 2);
  REQUIRE(r1.per_replication[0].size() == 2);
  REQUIRE(r1.per_replication[0][0].size() == 3);
  for (std::size_t ri = 0; ri < 2; ++ri)
    for (std::size_t ki = 0; ki < 2; ++ki) {
      double sum = 0.0;
      for (double v : r1.per_replication[ri][ki]) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        sum += v;
      }
      CHECK_THAT(r1.mean_auc(ri, ki), WithinAbs(sum / 3.0, 1e-15));
    }
  CHECK(r1.n_out == std::vector<std::size_t>{2, 4});
  CHECK(r1.n_in == 40);
}

TEST_CASE("single replication reports zero standard deviation") {
  BenchConfig cfg;
  load_generated(cfg, gen_gaussian(20, 10, 15, 3));
  cfg.ratios = {0.1};
  cfg.k_fractions = {0.5};
  cfg.replications = 1;
  cfg.base_seed = 1;
  const auto r = run_benchmark(cfg);
  CHECK(r.sd_auc(0, 0) == 0.0);
  const auto csv = bench_report_csv(r);
  CHECK(csv.find("ratio,k_fraction,mean_auc,sd_auc,n_in,n_out,replications") == 0);
}

TEST_CASE("config validation rejects malformed grids") {
  BenchConfig cfg;
  load_generated(cfg, gen_gaussian(6, 4, 5, 3));

  cfg.ratios = {0.1, 0.05};
  CHECK_THROWS_AS(run_benchmark(cfg), Error);
  cfg.ratios = {0.1};
  cfg.k_fractions = {0.5, 0.5};
  CHECK_THROWS_AS(run_benchmark(cfg), Error);
  cfg.k_fractions = {0.5};
  cfg.replications = 0;
  CHECK_THROWS_AS(run_benchmark(cfg), Error);
}

TEST_CASE("bench report table is shaped like the paper's results table") {
  BenchConfig cfg;
  load_generated(cfg, gen_gaussian(20, 5, 10, 3));
  cfg.ratios = {0.1, 0.2};
  cfg.k_fractions = {0.1, 0.75};
  cfg.replications = 2;
  cfg.base_seed = 3;
  const auto table = bench_report_table(run_benchmark(cfg));
  CHECK(table.find("k=0.1n") != std::string::npos);
  CHECK(table.find("k=0.75n") != std::string::npos);
  CHECK(table.find("r: 10%") != std::string::npos);
  CHECK(table.find("r: 20%") != std::string::npos);
}

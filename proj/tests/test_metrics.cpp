#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "modet/metrics.hpp"
#include "modet/rng.hpp"
#include "modet/simgen.hpp"

using namespace modet;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t d, double lo = -10.0, double hi = 10.0) {
  std::vector<double> v(d);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

Graph random_graph(Rng& rng, int vertices, double p) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < vertices; ++u)
    for (int v = u + 1; v < vertices; ++v)
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
  return Graph::make(vertices, std::move(edges));
}

}  // namespace

TEST_CASE("lp_distance examples") {
  const std::vector<double> x{0.0, 0.0}, y{3.0, 4.0};
  CHECK(lp_distance(x, x, 2.0) == 0.0);
  CHECK(lp_distance(x, y, 2.0) == 5.0);
  // (3^10 + 4^10)^(1/10) = 1107625^(1/10), evaluated independently at high
  // precision: 4.0219741498223316...
  CHECK_THAT(lp_distance(x, y, 10.0), WithinRel(4.0219741498223316, 1e-14));
}

TEST_CASE("lp_distance input validation") {
  const std::vector<double> x{0.0, 0.0}, y{1.0};
  CHECK_THROWS_MATCHES(lp_distance(x, y, 2.0), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::length_mismatch;
                       }));
  const std::vector<double> z{1.0, 2.0};
  CHECK_THROWS_MATCHES(lp_distance(x, z, 0.5), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::invalid_p;
                       }));
  const std::vector<double> bad{1.0, std::numeric_limits<double>::infinity()};
  CHECK_THROWS_MATCHES(lp_distance(x, bad, 2.0), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::non_finite;
                       }));
}

TEST_CASE("laplacian examples") {
  const auto empty2 = Graph::make(2, {});
  CHECK(laplacian(empty2) == Eigen::MatrixXd::Zero(2, 2));

  const auto edge2 = Graph::make(2, {{0, 1}});
  Eigen::MatrixXd expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK(laplacian(edge2) == expected);

  const auto triangle = Graph::make(3, {{0, 1}, {1, 2}, {0, 2}});
  Eigen::MatrixXd tri(3, 3);
  tri << 2, -1, -1, -1, 2, -1, -1, -1, 2;
  CHECK(laplacian(triangle) == tri);
}

TEST_CASE("frobenius_laplacian_distance examples") {
  const auto edge2 = Graph::make(2, {{0, 1}});
  const auto empty2 = Graph::make(2, {});
  CHECK(frobenius_laplacian_distance(edge2, edge2) == 0.0);
  CHECK(frobenius_laplacian_distance(edge2, empty2) == 2.0);
  CHECK_THROWS_MATCHES(frobenius_laplacian_distance(edge2, Graph::make(3, {})), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::vertex_count_mismatch;
                       }));
}

TEST_CASE("frobenius distance is invariant under simultaneous relabeling") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int v = 6;
    const auto g1 = random_graph(rng, v, 0.4);
    const auto g2 = random_graph(rng, v, 0.2);
    std::vector<int> perm(v);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = v; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    auto relabel = [&](const Graph& g) {
      std::vector<std::pair<int, int>> edges;
      for (auto [a, b] : g.edges) edges.emplace_back(perm[a], perm[b]);
      return Graph::make(v, std::move(edges));
    };
    CHECK_THAT(frobenius_laplacian_distance(relabel(g1), relabel(g2)),
               WithinRel(frobenius_laplacian_distance(g1, g2), 1e-12));
  }
}

TEST_CASE("dtw_distance examples") {
  const std::vector<double> x{0.0, 0.0, 1.0}, y{0.0, 1.0, 1.0};
  CHECK(dtw_distance(x, x) == 0.0);
  CHECK(dtw_distance(x, y) == 0.0);  // warping absorbs the step
  CHECK(dtw_distance(std::vector<double>{0.0}, std::vector<double>{5.0}) == 5.0);
  CHECK_THROWS_MATCHES(dtw_distance({}, x), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::empty_input;
                       }));
}

TEST_CASE("wasserstein1_distance examples") {
  const std::vector<double> a{1.0, 0.0, 0.0, 0.0}, b{0.0, 0.0, 0.0, 1.0};
  CHECK(wasserstein1_distance(a, a) == 0.0);
  CHECK(wasserstein1_distance(a, b) == 3.0);
  CHECK(wasserstein1_distance(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 2.0}) == 2.0);
  CHECK_THROWS_MATCHES(wasserstein1_distance(std::vector<double>{-1.0}, std::vector<double>{1.0}),
                       Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::negative_mass;
                       }));
}

TEST_CASE("all metrics satisfy identity, symmetry and nonnegativity") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + rng.below(12);
    const auto x = random_vector(rng, d, 0.0, 10.0);  // nonnegative for wasserstein
    const auto y = random_vector(rng, d, 0.0, 10.0);
    const double p = 1.0 + rng.uniform(0.0, 9.0);
    for (auto metric : {+[](const std::vector<double>& a, const std::vector<double>& b, double pp) {
                          return lp_distance(a, b, pp);
                        },
                        +[](const std::vector<double>& a, const std::vector<double>& b, double) {
                          return dtw_distance(a, b);
                        },
                        +[](const std::vector<double>& a, const std::vector<double>& b, double) {
                          return wasserstein1_distance(a, b);
                        }}) {
      CHECK(metric(x, x, p) == 0.0);
      CHECK(metric(x, y, p) == metric(y, x, p));
      CHECK(metric(x, y, p) >= 0.0);
    }
    const auto g1 = random_graph(rng, 8, 0.3);
    const auto g2 = random_graph(rng, 8, 0.3);
    CHECK(frobenius_laplacian_distance(g1, g1) == 0.0);
    CHECK(frobenius_laplacian_distance(g1, g2) == frobenius_laplacian_distance(g2, g1));
    CHECK(frobenius_laplacian_distance(g1, g2) >= 0.0);
  }
}

TEST_CASE("lp and frobenius satisfy the triangle inequality on random triples") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + rng.below(10);
    const auto x = random_vector(rng, d);
    const auto y = random_vector(rng, d);
    const auto z = random_vector(rng, d);
    for (double p : {1.0, 1.5, 2.0, 10.0}) {
      const double xy = lp_distance(x, y, p);
      const double yz = lp_distance(y, z, p);
      const double xz = lp_distance(x, z, p);
      CHECK(xz <= (xy + yz) * (1.0 + 1e-9));
    }
    const auto g1 = random_graph(rng, 7, 0.3);
    const auto g2 = random_graph(rng, 7, 0.5);
    const auto g3 = random_graph(rng, 7, 0.2);
    CHECK(frobenius_laplacian_distance(g1, g3) <=
          (frobenius_laplacian_distance(g1, g2) + frobenius_laplacian_distance(g2, g3)) *
              (1.0 + 1e-9));
  }
}

TEST_CASE("lp_distance is non-increasing in p") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + rng.below(20);
    const auto x = random_vector(rng, d);
    const auto y = random_vector(rng, d);
    double prev = lp_distance(x, y, 1.0);
    for (double p : {1.5, 2.0, 3.0, 5.0, 10.0}) {
      const double curr = lp_distance(x, y, p);
      CHECK(curr <= prev * (1.0 + 1e-12));
      prev = curr;
    }
  }
}

TEST_CASE("pairwise_matrix: three points on a line under L2") {
  LabeledDataset data;
  ObsMatrix m(3, 1);
  m << 0.0, 1.0, 3.0;
  data.observations = m;
  const auto dist = pairwise_matrix(data, MetricSpec::l2());
  CHECK(dist(0, 1) == 1.0);
  CHECK(dist(0, 2) == 3.0);
  CHECK(dist(1, 2) == 2.0);
  CHECK_NOTHROW(validate_distance_matrix(dist.entries));
}

TEST_CASE("pairwise_matrix matches the naive two-loop oracle bitwise") {
  Rng rng(21);
  for (auto metric : {MetricSpec::l2(), MetricSpec::lp(10.0), MetricSpec::dtw(),
                      MetricSpec::wasserstein1()}) {
    LabeledDataset data;
    ObsMatrix m(10, 6);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(0.0, 10.0);
    data.observations = m;
    const auto dist = pairwise_matrix(data, metric, 4);
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(dist(i, i) == 0.0);
      for (std::size_t j = i + 1; j < 10; ++j) {
        double expected = 0.0;
        switch (metric.kind) {
          case MetricKind::lp:
            expected = lp_distance(row_span(m, i), row_span(m, j), metric.p);
            break;
          case MetricKind::dtw:
            expected = dtw_distance(row_span(m, i), row_span(m, j));
            break;
          case MetricKind::wasserstein1:
            expected = wasserstein1_distance(row_span(m, i), row_span(m, j));
            break;
          default:
            FAIL("unexpected kind");
        }
        CHECK(dist(i, j) == expected);  // bitwise
        CHECK(dist(j, i) == expected);
      }
    }
  }
}

TEST_CASE("pairwise_matrix on graphs matches per-pair frobenius distances") {
  const auto data = gen_er_graphs(8, 3, 10, 0.2, 0.5, 3);
  const auto dist = pairwise_matrix(data, MetricSpec::frobenius_laplacian(), 3);
  const auto& gs = data.graphs();
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = i + 1; j < gs.size(); ++j)
      CHECK(dist(i, j) == frobenius_laplacian_distance(gs[i], gs[j]));
}

TEST_CASE("pairwise_matrix rejects incompatible metric kinds") {
  const auto graphs = gen_er_graphs(3, 1, 5, 0.3, 0.5, 1);
  CHECK_THROWS_MATCHES(pairwise_matrix(graphs, MetricSpec::l2()), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::metric_kind_mismatch;
                       }));
  LabeledDataset vectors;
  ObsMatrix m(2, 2);
  m.setZero();
  vectors.observations = m;
  CHECK_THROWS_MATCHES(pairwise_matrix(vectors, MetricSpec::frobenius_laplacian()), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::metric_kind_mismatch;
                       }));
}

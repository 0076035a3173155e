#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "modet/common.hpp"
#include "modet/core.hpp"
#include "modet/rng.hpp"

namespace modet {

/// Standard normal quantile, Wichura's algorithm AS 241 (PPND16),
/// accurate to ~1e-15 over (0, 1).
inline double normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, errc::invalid_argument, "quantile needs p in (0,1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

/// Minimum volume set specification for 1-D parametric parameter
/// distributions. Only the normal family has a well-defined implementation
/// (central interval mu +- z*sigma); the uniform family is refused because
/// its flat density makes the minimum volume set non-unique.
struct MinimumVolumeSpec {
  enum class Family { normal, uniform };
  Family family = Family::normal;
  double mu = 0.0;
  double sigma = 1.0;
  double alpha = 0.95;

  void check() const {
    require(sigma > 0.0, errc::invalid_argument, "sigma must be positive");
    require(alpha > 0.0 && alpha < 1.0, errc::invalid_argument, "alpha must be in (0,1)");
  }
};

/// Flags parameters falling outside the minimum volume set at level alpha.
/// For Normal(mu, sigma) that is |theta - mu| > z * sigma with
/// z = Phi^{-1}((1 + alpha)/2).
inline std::vector<std::uint8_t> distributional_labels(std::span<const double> params,
                                                       const MinimumVolumeSpec& spec) {
  spec.check();
  require(spec.family == MinimumVolumeSpec::Family::normal, errc::unsupported_family,
          "minimum volume sets are implemented only for the normal family");
  const double z = normal_quantile((1.0 + spec.alpha) / 2.0);
  std::vector<std::uint8_t> flags(params.size(), 0);
  for (std::size_t i = 0; i < params.size(); ++i) {
    require(std::isfinite(params[i]), errc::non_finite,
            "parameter " + std::to_string(i) + " is not finite");
    flags[i] = std::abs(params[i] - spec.mu) > z * spec.sigma ? 1 : 0;
  }
  return flags;
}

/// Labels the inliers of a generated dataset by their first stored parameter;
/// structural observations always come back unflagged, so the two flag kinds
/// never overlap.
inline void label_distributional(LabeledDataset& data, const MinimumVolumeSpec& spec) {
  require(!data.params.empty(), errc::invalid_argument, "dataset carries no parameters");
  const std::size_t n = data.size();
  std::vector<std::uint8_t> flags(n, 0);
  std::vector<double> inlier_params;
  std::vector<std::size_t> inlier_index;
  for (std::size_t i = 0; i < n; ++i) {
    if (data.structural(i)) continue;
    require(!data.params[i].empty(), errc::invalid_argument,
            "observation " + std::to_string(i) + " has no parameter");
    inlier_params.push_back(data.params[i][0]);
    inlier_index.push_back(i);
  }
  const auto inlier_flags = distributional_labels(inlier_params, spec);
  for (std::size_t j = 0; j < inlier_index.size(); ++j) flags[inlier_index[j]] = inlier_flags[j];
  data.distributional_flags = std::move(flags);
  data.check();
}

namespace detail {

inline void check_counts(std::size_t n_in, std::size_t n_out, std::size_t dim_or_vertices,
                         const char* dim_name) {
  require(n_in >= 1, errc::invalid_argument, "n_in must be >= 1");
  require(dim_or_vertices >= 1, errc::invalid_argument, std::string(dim_name) + " must be >= 1");
  (void)n_out;  // n_out >= 0 holds by type
}

inline std::vector<std::uint8_t> structural_flag_vector(std::size_t n_in, std::size_t n_out) {
  std::vector<std::uint8_t> flags(n_in + n_out, 0);
  for (std::size_t i = n_in; i < n_in + n_out; ++i) flags[i] = 1;
  return flags;
}

}  // namespace detail

/// Functional dataset A: inliers a + 0.01 t + sin(pi t^2) with a ~ N(15, 4);
/// outliers split between b + 0.05 t + cos(20 pi t), b ~ N(5, 3), and
/// (c - 0.05 t) + e_t with c ~ N(25, 3) and white noise e_t ~ N(0, 4) drawn
/// independently per evaluation point. Grid: D equally spaced points on
/// [0, 1] including both endpoints. family1 < 0 means an even split with the
/// odd observation going to the first family.
inline LabeledDataset gen_dataset_a(std::size_t n_in, std::size_t n_out, std::size_t D,
                                    std::uint64_t seed, long family1 = -1) {
  detail::check_counts(n_in, n_out, D, "D");
  std::size_t f1 = family1 < 0 ? (n_out + 1) / 2 : static_cast<std::size_t>(family1);
  require(f1 <= n_out, errc::invalid_argument, "family split exceeds n_out");
  const std::size_t n = n_in + n_out;
  constexpr double pi = std::numbers::pi;

  LabeledDataset data;
  ObsMatrix obs(n, D);
  data.params.resize(n);
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(mix_seed(seed, i));
    const bool outlier = i >= n_in;
    data.labels[i] = outlier ? "structural" : "inlier";
    if (!outlier) {
      const double a = rng.normal(15.0, 4.0);
      data.params[i] = {a};
      for (std::size_t k = 0; k < D; ++k) {
        const double t = D == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(D - 1);
        obs(i, k) = a + 0.01 * t + std::sin(pi * t * t);
      }
    } else if (i - n_in < f1) {
      const double b = rng.normal(5.0, 3.0);
      data.params[i] = {b};
      for (std::size_t k = 0; k < D; ++k) {
        const double t = D == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(D - 1);
        obs(i, k) = b + 0.05 * t + std::cos(20.0 * pi * t);
      }
    } else {
      const double c = rng.normal(25.0, 3.0);
      data.params[i] = {c};
      for (std::size_t k = 0; k < D; ++k) {
        const double t = D == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(D - 1);
        obs(i, k) = (c - 0.05 * t) + rng.normal(0.0, 4.0);
      }
    }
  }
  data.observations = std::move(obs);
  data.structural_flags = detail::structural_flag_vector(n_in, n_out);
  data.check();
  return data;
}

/// Beta density evaluated at t; diverges at the endpoints when alpha < 1 or
/// beta < 1, which the midpoint grid below never touches.
inline double beta_density(double t, double alpha, double beta) {
  const double log_norm = std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
  const double v = std::exp((alpha - 1.0) * std::log(t) + (beta - 1.0) * std::log1p(-t) - log_norm);
  require(std::isfinite(v), errc::beta_density_overflow,
          "beta density overflow at t = " + format_double(t));
  return v;
}

/// Functional dataset B: inliers are Beta(alpha, beta) density curves with
/// alpha, beta ~ U[0.1, 2]; outliers add a vertical shift b ~ U[-5, 5].
/// Evaluated on the interior midpoint grid t_k = (k + 1/2)/D, which avoids the
/// endpoint singularities independently of the parameters. Note the overlap:
/// an outlier with b near 0 is essentially an inlier curve.
inline LabeledDataset gen_dataset_b(std::size_t n_in, std::size_t n_out, std::size_t D,
                                    std::uint64_t seed) {
  detail::check_counts(n_in, n_out, D, "D");
  const std::size_t n = n_in + n_out;
  LabeledDataset data;
  ObsMatrix obs(n, D);
  data.params.resize(n);
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(mix_seed(seed, i));
    const bool outlier = i >= n_in;
    data.labels[i] = outlier ? "structural" : "inlier";
    const double alpha = rng.uniform(0.1, 2.0);
    const double beta = rng.uniform(0.1, 2.0);
    const double shift = outlier ? rng.uniform(-5.0, 5.0) : 0.0;
    if (outlier)
      data.params[i] = {alpha, beta, shift};
    else
      data.params[i] = {alpha, beta};
    for (std::size_t k = 0; k < D; ++k) {
      const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(D);
      obs(i, k) = shift + beta_density(t, alpha, beta);
    }
  }
  data.observations = std::move(obs);
  data.structural_flags = detail::structural_flag_vector(n_in, n_out);
  data.check();
  return data;
}

/// Erdos-Renyi graphs: every unordered vertex pair is an edge independently
/// with the class's probability (inliers p_in, outliers p_out). Pairs are
/// visited in lexicographic order, one substream per graph.
inline LabeledDataset gen_er_graphs(std::size_t n_in, std::size_t n_out, int vertices,
                                    double p_in, double p_out, std::uint64_t seed) {
  detail::check_counts(n_in, n_out, static_cast<std::size_t>(vertices > 0 ? vertices : 0),
                       "vertices");
  for (double p : {p_in, p_out})
    require(p >= 0.0 && p <= 1.0, errc::invalid_probability,
            "edge probability " + format_double(p) + " outside [0,1]");
  const std::size_t n = n_in + n_out;
  std::vector<Graph> graphs;
  graphs.reserve(n);
  LabeledDataset data;
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(mix_seed(seed, i));
    const bool outlier = i >= n_in;
    data.labels[i] = outlier ? "structural" : "inlier";
    const double p = outlier ? p_out : p_in;
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < vertices; ++u)
      for (int v = u + 1; v < vertices; ++v)
        if (rng.bernoulli(p)) edges.emplace_back(u, v);
    graphs.push_back(Graph::make(vertices, std::move(edges)));
  }
  data.observations = std::move(graphs);
  data.structural_flags = detail::structural_flag_vector(n_in, n_out);
  data.check();
  return data;
}

/// Tabular Gaussian mixture: inliers i.i.d. N(0, I_D), outliers N(1, I_D).
inline LabeledDataset gen_gaussian(std::size_t n_in, std::size_t n_out, std::size_t D,
                                   std::uint64_t seed) {
  detail::check_counts(n_in, n_out, D, "D");
  const std::size_t n = n_in + n_out;
  LabeledDataset data;
  ObsMatrix obs(n, D);
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(mix_seed(seed, i));
    const bool outlier = i >= n_in;
    data.labels[i] = outlier ? "structural" : "inlier";
    const double mean = outlier ? 1.0 : 0.0;
    for (std::size_t k = 0; k < D; ++k) obs(i, k) = mean + rng.normal();
  }
  data.observations = std::move(obs);
  data.structural_flags = detail::structural_flag_vector(n_in, n_out);
  data.check();
  return data;
}

/// Declarative generator description; carries everything needed to reproduce
/// a dataset, and is what the sidecar metadata records.
struct GeneratorSpec {
  enum class Kind { dataset_a, dataset_b, er_graphs, gaussian };

  Kind kind = Kind::dataset_a;
  std::size_t n_in = 100;
  std::size_t n_out = 10;
  std::size_t D = 500;       // evaluation points / coordinates (vector kinds)
  int vertices = 20;         // er_graphs
  double p_in = 0.1;         // er_graphs
  double p_out = 0.4;        // er_graphs
  std::uint64_t seed = 0;

  static GeneratorSpec defaults(Kind kind) {
    GeneratorSpec s;
    s.kind = kind;
    switch (kind) {
      case Kind::dataset_a: s.n_in = 100; s.n_out = 10; s.D = 500; break;
      case Kind::dataset_b: s.n_in = 100; s.n_out = 10; s.D = 50; break;
      case Kind::er_graphs: s.n_in = 100; s.n_out = 10; break;
      case Kind::gaussian: s.n_in = 750; s.n_out = 75; s.D = 1000; break;
    }
    return s;
  }

  LabeledDataset generate() const {
    switch (kind) {
      case Kind::dataset_a: return gen_dataset_a(n_in, n_out, D, seed);
      case Kind::dataset_b: return gen_dataset_b(n_in, n_out, D, seed);
      case Kind::er_graphs: return gen_er_graphs(n_in, n_out, vertices, p_in, p_out, seed);
      case Kind::gaussian: return gen_gaussian(n_in, n_out, D, seed);
    }
    fail(errc::invalid_argument, "unknown generator kind");
  }
};

inline const char* generator_kind_name(GeneratorSpec::Kind k) {
  switch (k) {
    case GeneratorSpec::Kind::dataset_a: return "dataset-a";
    case GeneratorSpec::Kind::dataset_b: return "dataset-b";
    case GeneratorSpec::Kind::er_graphs: return "er-graphs";
    case GeneratorSpec::Kind::gaussian: return "gaussian";
  }
  return "?";
}

}  // namespace modet

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modet/bench.hpp"
#include "modet/common.hpp"
#include "modet/io.hpp"
#include "modet/metrics.hpp"
#include "modet/simgen.hpp"

namespace modet {

inline MetricSpec metric_spec_from_name(const std::string& name, double p) {
  if (name == "l2") return MetricSpec::l2();
  if (name == "lp") return MetricSpec::lp(p);
  if (name == "dtw") return MetricSpec::dtw();
  if (name == "wasserstein1") return MetricSpec::wasserstein1();
  if (name == "frobenius-laplacian" || name == "frobenius_laplacian")
    return MetricSpec::frobenius_laplacian();
  fail(errc::invalid_argument, "unknown metric '" + name + "'");
}

inline std::optional<GeneratorSpec::Kind> generator_kind_from_name(const std::string& name) {
  if (name == "dataset-a") return GeneratorSpec::Kind::dataset_a;
  if (name == "dataset-b") return GeneratorSpec::Kind::dataset_b;
  if (name == "er-graphs") return GeneratorSpec::Kind::er_graphs;
  if (name == "gaussian") return GeneratorSpec::Kind::gaussian;
  return std::nullopt;
}

/// Splits a labeled dataset into the inlier class and the pooled rest.
/// When inlier_label is empty the dataset's structural flags decide.
inline void split_source(const LabeledDataset& data, const std::string& inlier_label,
                         LabeledDataset& inliers, LabeledDataset& pool) {
  const std::size_t n = data.size();
  std::vector<std::size_t> in_idx, out_idx;
  for (std::size_t i = 0; i < n; ++i) {
    bool is_inlier;
    if (!inlier_label.empty()) {
      require(!data.labels.empty(), errc::invalid_argument,
              "inlier_label given but the dataset has no labels");
      is_inlier = data.labels[i] == inlier_label;
    } else {
      require(!data.structural_flags.empty(), errc::invalid_argument,
              "source needs class labels or structural flags to split inliers from outliers");
      is_inlier = !data.structural(i);
    }
    (is_inlier ? in_idx : out_idx).push_back(i);
  }
  require(!in_idx.empty(), errc::single_class, "no inlier observations in source");
  require(!out_idx.empty(), errc::single_class, "no outlier observations in source");

  auto subset = [&](const std::vector<std::size_t>& idx) {
    LabeledDataset sub;
    if (data.is_vectors()) {
      const ObsMatrix& m = data.vectors();
      ObsMatrix s(idx.size(), m.cols());
      for (std::size_t i = 0; i < idx.size(); ++i)
        s.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(idx[i]));
      sub.observations = std::move(s);
    } else {
      std::vector<Graph> gs;
      gs.reserve(idx.size());
      for (std::size_t i : idx) gs.push_back(data.graphs()[i]);
      sub.observations = std::move(gs);
    }
    if (!data.labels.empty())
      for (std::size_t i : idx) sub.labels.push_back(data.labels[i]);
    return sub;
  };
  inliers = subset(in_idx);
  pool = subset(out_idx);
}

/// Flat `key = value` config for the bench command. '#' starts a comment.
///
/// Keys: source (required; generator kind, csv, or edges), file + inlier_label
/// (file sources), n_in, n_out, d, vertices, p_in, p_out, generator_seed,
/// ratios, k_fractions, replications, embed_dim, metric, p, base_seed,
/// threads.
inline BenchConfig bench_config_from_text(const std::string& text,
                                          const std::string& base_dir = "") {
  std::map<std::string, std::string> kv;
  for (const auto& raw : detail::non_empty_lines_kept(text)) {
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string_view::npos, errc::parse_error,
            "expected 'key = value', got '" + std::string(line) + "'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    require(!key.empty(), errc::parse_error, "empty key in config");
    require(!kv.count(key), errc::parse_error, "duplicate key '" + key + "'");
    kv[key] = value;
  }

  static const std::vector<std::string> known = {
      "source", "file", "inlier_label", "n_in", "n_out", "d", "vertices", "p_in",
      "p_out", "generator_seed", "ratios", "k_fractions", "replications",
      "embed_dim", "metric", "p", "base_seed", "threads"};
  for (const auto& [key, value] : kv)
    require(std::find(known.begin(), known.end(), key) != known.end(), errc::parse_error,
            "unknown key '" + key + "'");

  require(kv.count("source"), errc::parse_error, "missing required key 'source'");
  auto get = [&](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto num = [&](const char* key, double fallback) {
    auto v = get(key);
    return v ? parse_double(*v, std::string("key ") + key) : fallback;
  };
  auto list = [&](const char* key, std::vector<double> fallback) {
    auto v = get(key);
    if (!v) return fallback;
    std::vector<double> values;
    for (const auto& cell : detail::split(*v, ','))
      values.push_back(parse_double(detail::trim(cell), std::string("key ") + key));
    return values;
  };

  BenchConfig cfg;
  const std::string source = *get("source");
  if (auto kind = generator_kind_from_name(source)) {
    GeneratorSpec spec = GeneratorSpec::defaults(*kind);
    if (*kind == GeneratorSpec::Kind::gaussian) spec.n_out = 250;  // benchmark pool
    spec.n_in = static_cast<std::size_t>(num("n_in", static_cast<double>(spec.n_in)));
    spec.n_out = static_cast<std::size_t>(num("n_out", static_cast<double>(spec.n_out)));
    spec.D = static_cast<std::size_t>(num("d", static_cast<double>(spec.D)));
    spec.vertices = static_cast<int>(num("vertices", spec.vertices));
    spec.p_in = num("p_in", spec.p_in);
    spec.p_out = num("p_out", spec.p_out);
    spec.seed = static_cast<std::uint64_t>(num("generator_seed", 0.0));
    split_source(spec.generate(), "", cfg.inliers, cfg.outlier_pool);
    if (*kind == GeneratorSpec::Kind::er_graphs)
      cfg.metric = MetricSpec::frobenius_laplacian();
  } else if (source == "csv" || source == "edges") {
    require(kv.count("file"), errc::parse_error, "missing required key 'file'");
    require(kv.count("inlier_label"), errc::parse_error, "missing required key 'inlier_label'");
    std::string path = *get("file");
    if (!base_dir.empty() && !path.empty() && path[0] != '/') path = base_dir + "/" + path;
    const std::string content = read_file(path);
    const LabeledDataset data =
        source == "csv" ? dataset_from_csv(content) : dataset_from_edge_list(content);
    split_source(data, *get("inlier_label"), cfg.inliers, cfg.outlier_pool);
    if (source == "edges") cfg.metric = MetricSpec::frobenius_laplacian();
  } else {
    fail(errc::parse_error, "unknown source '" + source + "'");
  }

  if (auto m = get("metric")) cfg.metric = metric_spec_from_name(*m, num("p", 2.0));
  cfg.ratios = list("ratios", cfg.ratios);
  cfg.k_fractions = list("k_fractions", cfg.k_fractions);
  cfg.replications = static_cast<std::size_t>(num("replications", 50.0));
  cfg.embed_dim = static_cast<std::size_t>(num("embed_dim", 2.0));
  cfg.base_seed = static_cast<std::uint64_t>(num("base_seed", 0.0));
  cfg.threads = static_cast<unsigned>(num("threads", 0.0));
  cfg.check();
  return cfg;
}

}  // namespace modet

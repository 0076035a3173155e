// modet — geometric outlier detection for high-dimensional and non-tabular
// data: pluggable distances -> classical MDS embedding -> LOF scoring, plus
// synthetic generators and the contamination/ROC-AUC benchmark.
//
// Exit codes: 0 success, 1 runtime/numerical failure, 2 usage/validation
// error. Diagnostics go to stderr; stdout stays machine-readable.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "modet/modet.hpp"

namespace {

using namespace modet;

int exit_code_for(errc code) {
  switch (code) {
    case errc::non_finite:
    case errc::degenerate_input:
    case errc::no_positive_eigenvalues:
    case errc::beta_density_overflow:
      return 1;  // numerical failure mid-computation
    default:
      return 2;  // bad input, config or usage
  }
}

LabeledDataset load_dataset(const std::string& path) {
  const std::string content = read_file(path);
  const auto start = content.find_first_not_of(" \t\r\n");
  if (start != std::string::npos && content.compare(start, 9, "vertices ") == 0)
    return dataset_from_edge_list(content);
  return dataset_from_csv(content);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file(out_path, content);
}

struct GenerateOptions {
  std::string kind;
  std::string out;
  std::uint64_t seed = 0;
  std::int64_t n_in = -1;
  std::int64_t n_out = -1;
  std::int64_t d = -1;
  std::int64_t vertices = -1;
  double p_in = -1.0;
  double p_out = -1.0;
};

int run_generate(const GenerateOptions& opt) {
  const auto kind = generator_kind_from_name(opt.kind);
  if (!kind) {
    std::cerr << "modet: unknown dataset kind '" << opt.kind << "'\n";
    return 2;
  }
  GeneratorSpec spec = GeneratorSpec::defaults(*kind);
  spec.seed = opt.seed;
  if (opt.n_in >= 0) spec.n_in = static_cast<std::size_t>(opt.n_in);
  if (opt.n_out >= 0) spec.n_out = static_cast<std::size_t>(opt.n_out);
  if (opt.d >= 0) spec.D = static_cast<std::size_t>(opt.d);
  if (opt.vertices >= 0) spec.vertices = static_cast<int>(opt.vertices);
  if (opt.p_in >= 0.0) spec.p_in = opt.p_in;
  if (opt.p_out >= 0.0) spec.p_out = opt.p_out;

  const LabeledDataset data = spec.generate();
  const std::string payload =
      data.is_vectors() ? dataset_to_csv(data) : dataset_to_edge_list(data);
  write_file(opt.out, payload);
  write_file(opt.out + ".meta.json", sidecar_json(spec, data));
  return 0;
}

struct ScoreOptions {
  std::string in;
  std::string out;
  std::string metric = "l2";
  bool metric_given = false;
  double p = 2.0;
  std::size_t embed_dim = 2;
  double k_fraction = 0.75;
  bool raw_distances = false;
};

int run_score(const ScoreOptions& opt) {
  const LabeledDataset data = load_dataset(opt.in);
  MetricSpec metric = metric_spec_from_name(opt.metric, opt.p);
  if (!opt.metric_given && !data.is_vectors()) metric = MetricSpec::frobenius_laplacian();

  const DistanceMatrix dist = pairwise_matrix(data, metric);
  ScoreTable table;
  if (opt.raw_distances) {
    const ScoreVector sv = lof_scores(dist, LofConfig::fraction(opt.k_fraction));
    table.scores = sv.scores;
    table.ranks = sv.ranks;
  } else {
    // tiny inputs: an n-point configuration supports at most n-1 dimensions
    const std::size_t dim = std::min(opt.embed_dim, data.size() - 1);
    const Embedding emb = torgerson_mds(dist, MdsConfig{dim, -1.0});
    if (emb.truncated())
      std::cerr << "modet: spectrum supports only " << emb.dim() << " of " << emb.requested_dim
                << " requested dimensions\n";
    const DistanceMatrix emb_dist = euclidean_pairwise(embedding_rows(emb));
    const ScoreVector sv = lof_scores(emb_dist, LofConfig::fraction(opt.k_fraction));
    table.scores = sv.scores;
    table.ranks = sv.ranks;
    table.coords = embedding_rows(emb);
  }
  table.index.resize(data.size());
  std::iota(table.index.begin(), table.index.end(), std::size_t{0});
  table.labels = data.labels;
  emit(opt.out, score_table_to_csv(table));
  return 0;
}

struct BenchOptions {
  std::string config;
  std::string out;
};

int run_bench(const BenchOptions& opt) {
  const std::string base_dir = std::filesystem::path(opt.config).parent_path().string();
  const BenchConfig cfg = bench_config_from_text(read_file(opt.config), base_dir);
  const BenchReport report = run_benchmark(cfg);
  const std::string csv = bench_report_csv(report);
  const std::string table = bench_report_table(report);
  if (opt.out.empty()) {
    std::cout << csv;
    std::cerr << table;
  } else {
    write_file(opt.out, csv);
    std::cout << table;
  }
  return 0;
}

struct PlotOptions {
  std::string scores;
  std::string out;
  std::size_t top = 10;
};

int run_plot(const PlotOptions& opt) {
  const ScoreTable table = score_table_from_csv(read_file(opt.scores));
  emit(opt.out, scatter_svg(table, opt.top));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometric outlier detection: distances -> MDS embedding -> LOF scores"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "generate a synthetic dataset with ground truth");
  generate->add_option("kind", gen.kind, "dataset-a | dataset-b | er-graphs | gaussian")
      ->required();
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("--out", gen.out, "output file (CSV or edge list)")->required();
  generate->add_option("--n-in", gen.n_in, "inlier count");
  generate->add_option("--n-out", gen.n_out, "structural outlier count");
  generate->add_option("--d", gen.d, "evaluation points / coordinates");
  generate->add_option("--vertices", gen.vertices, "graph vertex count (er-graphs)");
  generate->add_option("--p-in", gen.p_in, "inlier edge probability (er-graphs)");
  generate->add_option("--p-out", gen.p_out, "outlier edge probability (er-graphs)");

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "embed a dataset and compute LOF scores");
  score_cmd->add_option("--in", score.in, "input dataset (CSV or edge list)")->required();
  auto* metric_opt = score_cmd->add_option(
      "--metric", score.metric, "l2 | lp | dtw | wasserstein1 | frobenius-laplacian");
  score_cmd->add_option("--p", score.p, "exponent for --metric lp");
  score_cmd->add_option("--embed-dim", score.embed_dim, "MDS embedding dimension");
  score_cmd->add_option("--k-fraction", score.k_fraction, "LOF neighborhood fraction of n");
  score_cmd->add_flag("--raw-distances", score.raw_distances,
                      "score on the raw distance matrix, skipping the embedding");
  score_cmd->add_option("--out", score.out, "output CSV (stdout when absent)");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "run the contamination/ROC-AUC benchmark");
  bench_cmd->add_option("--config", bench.config, "flat key = value config file")->required();
  bench_cmd->add_option("--out", bench.out, "report CSV path (stdout when absent)");

  PlotOptions plot;
  auto* plot_cmd = app.add_subcommand("plot", "render a scored embedding as an SVG scatter plot");
  plot_cmd->add_option("--scores", plot.scores, "CSV produced by the score command")->required();
  plot_cmd->add_option("--top", plot.top, "annotate this many top LOF ranks");
  plot_cmd->add_option("--out", plot.out, "output SVG (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  score.metric_given = metric_opt->count() > 0;

  try {
    if (app.got_subcommand(generate)) return run_generate(gen);
    if (app.got_subcommand(score_cmd)) return run_score(score);
    if (app.got_subcommand(bench_cmd)) return run_bench(bench);
    if (app.got_subcommand(plot_cmd)) return run_plot(plot);
  } catch (const Error& e) {
    std::cerr << "modet: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "modet: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "modet/common.hpp"
#include "modet/core.hpp"
#include "modet/rng.hpp"
#include "modet/simgen.hpp"

namespace modet {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), errc::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), errc::io_error, "cannot open " + path + " for writing");
  out << content;
  require(out.good(), errc::io_error, "write to " + path + " failed");
}

namespace detail {

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      cells.emplace_back(line.substr(start));
      break;
    }
    cells.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cells;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> non_empty_lines_kept(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find('\n', start);
    if (pos == std::string::npos) pos = text.size();
    lines.emplace_back(trim(std::string_view(text).substr(start, pos - start)));
    start = pos + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace detail

/// Functional/tabular CSV: rows are observations, columns evaluation points,
/// optional leading `label` column, optional header (detected when every cell
/// of the first row fails to parse as a number). Labels "structural" and
/// "distributional" map onto the corresponding flags.
inline std::string dataset_to_csv(const LabeledDataset& data) {
  require(data.is_vectors(), errc::invalid_argument, "CSV carries vector observations only");
  const ObsMatrix& m = data.vectors();
  const auto n = static_cast<std::size_t>(m.rows());
  const auto d = static_cast<std::size_t>(m.cols());
  const bool with_labels = !data.labels.empty() || !data.structural_flags.empty() ||
                           !data.distributional_flags.empty();
  std::string out;
  if (with_labels) out += "label";
  for (std::size_t k = 0; k < d; ++k) {
    if (with_labels || k > 0) out += ',';
    out += 't' + std::to_string(k + 1);
  }
  out += '\n';
  for (std::size_t i = 0; i < n; ++i) {
    if (with_labels) {
      if (!data.labels.empty())
        out += data.labels[i];
      else if (data.structural(i))
        out += "structural";
      else if (data.distributional(i))
        out += "distributional";
      else
        out += "inlier";
    }
    for (std::size_t k = 0; k < d; ++k) {
      if (with_labels || k > 0) out += ',';
      out += format_double(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
    }
    out += '\n';
  }
  return out;
}

inline LabeledDataset dataset_from_csv(const std::string& text) {
  auto lines = detail::non_empty_lines_kept(text);
  while (!lines.empty() && lines.front().empty()) lines.erase(lines.begin());
  require(!lines.empty(), errc::parse_error, "empty CSV");

  auto first = detail::split(lines[0], ',');
  bool header = true;
  for (const auto& cell : first) {
    double v;
    if (try_parse_double(detail::trim(cell), v)) {
      header = false;
      break;
    }
  }
  const std::size_t data_start = header ? 1 : 0;
  require(lines.size() > data_start, errc::parse_error, "CSV has a header but no data rows");

  auto probe = detail::split(lines[data_start], ',');
  require(!probe.empty(), errc::parse_error, "empty CSV row");
  double v;
  const bool labeled = !try_parse_double(detail::trim(probe[0]), v);
  const std::size_t width = probe.size();
  require(width > (labeled ? 1u : 0u), errc::parse_error, "CSV rows carry no numeric cells");

  const std::size_t n = lines.size() - data_start;
  const std::size_t d = width - (labeled ? 1 : 0);
  LabeledDataset data;
  ObsMatrix m(n, d);
  std::vector<std::string> labels;
  bool any_structural = false, any_distributional = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& line = lines[data_start + i];
    require(!line.empty(), errc::parse_error, "blank row " + std::to_string(i + 1) + " inside CSV");
    auto cells = detail::split(line, ',');
    require(cells.size() == width, errc::parse_error,
            "row " + std::to_string(i + 1) + " has " + std::to_string(cells.size()) +
                " cells, expected " + std::to_string(width));
    if (labeled) {
      std::string label(detail::trim(cells[0]));
      any_structural |= label == "structural";
      any_distributional |= label == "distributional";
      labels.push_back(std::move(label));
    }
    for (std::size_t k = 0; k < d; ++k) {
      const double x = parse_double(detail::trim(cells[k + (labeled ? 1 : 0)]),
                                    "row " + std::to_string(i + 1));
      require(std::isfinite(x), errc::non_finite,
              "row " + std::to_string(i + 1) + " has a non-finite value");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = x;
    }
  }
  data.observations = std::move(m);
  if (labeled) {
    if (any_structural) {
      data.structural_flags.resize(n);
      for (std::size_t i = 0; i < n; ++i) data.structural_flags[i] = labels[i] == "structural";
    }
    if (any_distributional) {
      data.distributional_flags.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        data.distributional_flags[i] = labels[i] == "distributional";
    }
    data.labels = std::move(labels);
  }
  data.check();
  return data;
}

/// Edge-list file: `vertices <n>` header, then one block per graph separated
/// by blank lines; a block is an optional `label <string>` line followed by
/// `u v` lines. Generated files always carry label lines, so empty graphs
/// round-trip.
inline std::string dataset_to_edge_list(const LabeledDataset& data) {
  require(!data.is_vectors(), errc::invalid_argument, "edge list carries graph observations only");
  const auto& gs = data.graphs();
  require(!gs.empty(), errc::empty_input, "no graphs");
  std::string out = "vertices " + std::to_string(gs[0].vertex_count) + "\n";
  for (std::size_t i = 0; i < gs.size(); ++i) {
    out += '\n';
    if (!data.labels.empty())
      out += "label " + data.labels[i] + "\n";
    else if (!data.structural_flags.empty())
      out += std::string("label ") + (data.structural(i) ? "structural" : "inlier") + "\n";
    for (const auto& [u, v] : gs[i].edges)
      out += std::to_string(u) + ' ' + std::to_string(v) + '\n';
  }
  return out;
}

inline LabeledDataset dataset_from_edge_list(const std::string& text) {
  auto lines = detail::non_empty_lines_kept(text);
  require(!lines.empty(), errc::parse_error, "empty edge list");
  std::size_t idx = 0;
  while (idx < lines.size() && lines[idx].empty()) ++idx;
  require(idx < lines.size() && lines[idx].rfind("vertices ", 0) == 0, errc::parse_error,
          "edge list must start with 'vertices <n>'");
  const int vertices = static_cast<int>(parse_double(
      detail::trim(std::string_view(lines[idx]).substr(9)), "vertices header"));
  require(vertices >= 1, errc::parse_error, "vertex count must be >= 1");
  ++idx;

  std::vector<Graph> graphs;
  std::vector<std::string> labels;
  bool any_label = false;
  while (idx < lines.size()) {
    while (idx < lines.size() && lines[idx].empty()) ++idx;
    if (idx >= lines.size()) break;
    std::string label;
    std::vector<std::pair<int, int>> edges;
    bool saw_content = false;
    while (idx < lines.size() && !lines[idx].empty()) {
      const std::string& line = lines[idx];
      if (line.rfind("label ", 0) == 0) {
        require(!saw_content, errc::parse_error, "label line must open its graph block");
        label = detail::trim(std::string_view(line).substr(6));
        any_label = true;
      } else {
        auto cells = detail::split(line, ' ');
        std::vector<std::string> parts;
        for (auto& c : cells)
          if (!detail::trim(c).empty()) parts.emplace_back(detail::trim(c));
        require(parts.size() == 2, errc::parse_error, "expected 'u v', got '" + line + "'");
        edges.emplace_back(static_cast<int>(parse_double(parts[0], "edge endpoint")),
                           static_cast<int>(parse_double(parts[1], "edge endpoint")));
      }
      saw_content = true;
      ++idx;
    }
    graphs.push_back(Graph::make(vertices, std::move(edges)));
    labels.push_back(label);
  }
  require(!graphs.empty(), errc::parse_error, "edge list contains no graphs");

  LabeledDataset data;
  data.observations = std::move(graphs);
  if (any_label) {
    bool any_structural = false;
    for (const auto& l : labels) any_structural |= l == "structural";
    if (any_structural) {
      data.structural_flags.resize(labels.size());
      for (std::size_t i = 0; i < labels.size(); ++i)
        data.structural_flags[i] = labels[i] == "structural";
    }
    data.labels = std::move(labels);
  }
  data.check();
  return data;
}

/// Sidecar metadata written next to generated datasets: the generator spec,
/// the RNG family, and the ground-truth flags.
inline std::string sidecar_json(const GeneratorSpec& spec, const LabeledDataset& data) {
  nlohmann::json j;
  j["generator"]["kind"] = generator_kind_name(spec.kind);
  j["generator"]["n_in"] = spec.n_in;
  j["generator"]["n_out"] = spec.n_out;
  j["generator"]["seed"] = spec.seed;
  if (spec.kind == GeneratorSpec::Kind::er_graphs) {
    j["generator"]["vertices"] = spec.vertices;
    j["generator"]["p_in"] = spec.p_in;
    j["generator"]["p_out"] = spec.p_out;
  } else {
    j["generator"]["d"] = spec.D;
  }
  j["rng_family"] = kRngFamily;
  j["structural_flags"] = data.structural_flags;
  if (!data.distributional_flags.empty()) j["distributional_flags"] = data.distributional_flags;
  return j.dump(2) + "\n";
}

/// Per-observation scoring result: index, optional label, LOF score, rank and
/// (when scored on an embedding) the embedding coordinates.
struct ScoreTable {
  std::vector<std::size_t> index;
  std::vector<std::string> labels;  // empty = absent
  std::vector<double> scores;
  std::vector<std::size_t> ranks;
  ObsMatrix coords;  // 0x0 when scored on raw distances

  std::size_t n() const { return scores.size(); }
  bool has_coords() const { return coords.size() > 0; }
};

inline std::string score_table_to_csv(const ScoreTable& t) {
  std::string out = "index";
  if (!t.labels.empty()) out += ",label";
  out += ",score,rank";
  for (Eigen::Index k = 0; k < t.coords.cols(); ++k) out += ",y" + std::to_string(k + 1);
  out += '\n';
  for (std::size_t i = 0; i < t.n(); ++i) {
    out += std::to_string(t.index[i]);
    if (!t.labels.empty()) out += ',' + t.labels[i];
    out += ',' + format_double(t.scores[i]) + ',' + std::to_string(t.ranks[i]);
    for (Eigen::Index k = 0; k < t.coords.cols(); ++k)
      out += ',' + format_double(t.coords(static_cast<Eigen::Index>(i), k));
    out += '\n';
  }
  return out;
}

inline ScoreTable score_table_from_csv(const std::string& text) {
  auto lines = detail::non_empty_lines_kept(text);
  require(lines.size() >= 2, errc::parse_error, "score CSV needs a header and at least one row");
  auto header = detail::split(lines[0], ',');
  std::map<std::string, std::size_t> col;
  for (std::size_t c = 0; c < header.size(); ++c) col[std::string(detail::trim(header[c]))] = c;
  require(col.count("index") && col.count("score") && col.count("rank"), errc::parse_error,
          "score CSV must have index, score and rank columns");
  const bool labeled = col.count("label") > 0;
  std::vector<std::size_t> ycols;
  for (std::size_t k = 1; col.count("y" + std::to_string(k)); ++k)
    ycols.push_back(col["y" + std::to_string(k)]);

  ScoreTable t;
  const std::size_t n = lines.size() - 1;
  t.coords.resize(static_cast<Eigen::Index>(ycols.empty() ? 0 : n),
                  static_cast<Eigen::Index>(ycols.size()));
  for (std::size_t i = 0; i < n; ++i) {
    auto cells = detail::split(lines[i + 1], ',');
    require(cells.size() == header.size(), errc::parse_error,
            "row " + std::to_string(i + 1) + " has " + std::to_string(cells.size()) + " cells");
    t.index.push_back(
        static_cast<std::size_t>(parse_double(detail::trim(cells[col["index"]]), "index")));
    if (labeled) t.labels.emplace_back(detail::trim(cells[col["label"]]));
    t.scores.push_back(parse_double(detail::trim(cells[col["score"]]), "score"));
    t.ranks.push_back(
        static_cast<std::size_t>(parse_double(detail::trim(cells[col["rank"]]), "rank")));
    for (std::size_t k = 0; k < ycols.size(); ++k)
      t.coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          parse_double(detail::trim(cells[ycols[k]]), "coordinate");
  }
  return t;
}

}  // namespace modet

// Copyright 2026 The DRGL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "drgl/graph.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string_view>

#include <nlohmann/json.hpp>

namespace drgl {
namespace {

namespace fs = std::filesystem;
using Kind = GraphFormatError::Kind;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "features.bin I/O assumes a little-endian host");

[[noreturn]] void fail(Kind kind, const std::string& msg) {
  throw GraphFormatError(kind, msg);
}

std::ifstream open_or_fail(const fs::path& path, std::ios::openmode mode = {}) {
  std::ifstream in(path, std::ios::in | mode);
  if (!in) fail(Kind::kMissingFile, "missing file: " + path.string());
  return in;
}

json read_json(const fs::path& path) {
  auto in = open_or_fail(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(Kind::kMalformedHeader, path.filename().string() + ": " + e.what());
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool looks_like_header(std::string_view line) {
  return std::any_of(line.begin(), line.end(), [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) && c != 'e' && c != 'E';
  });
}

template <typename T>
T parse_number(std::string_view field, const std::string& where) {
  field = trim(field);
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end)
    fail(Kind::kMalformedRecord,
         where + ": cannot parse '" + std::string(field) + "'");
  return value;
}

// Calls fn(fields, line_number) for each non-empty line; a leading
// non-numeric line is treated as a column header and skipped.
template <typename Fn>
void for_each_csv_row(const fs::path& path, Fn&& fn) {
  auto in = open_or_fail(path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    if (line_no == 1 && looks_like_header(view)) continue;
    fields.clear();
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      fields.push_back(view.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    fn(fields, path.filename().string() + ":" + std::to_string(line_no));
  }
}

std::int32_t checked_index(std::int64_t value, std::int64_t n,
                           const std::string& where) {
  if (value < 0 || value >= n)
    fail(Kind::kIndexOutOfRange, where + ": index out of range (" +
                                     std::to_string(value) + " not in [0, " +
                                     std::to_string(n) + "))");
  return static_cast<std::int32_t>(value);
}

std::vector<std::int32_t> read_index_array(const json& splits,
                                           const char* key, std::int64_t n) {
  std::vector<std::int32_t> out;
  if (!splits.contains(key)) return out;
  const auto& arr = splits.at(key);
  if (!arr.is_array())
    fail(Kind::kMalformedHeader, std::string("splits.json: '") + key +
                                     "' must be an array");
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number_integer())
      fail(Kind::kMalformedHeader,
           std::string("splits.json: non-integer entry in '") + key + "'");
    out.push_back(checked_index(v.get<std::int64_t>(), n,
                                std::string("splits.json[") + key + "]"));
  }
  return out;
}

}  // namespace

std::vector<Edge> canonical_edges(std::vector<Edge> edges) {
  std::erase_if(edges, [](const Edge& e) { return e.u == e.v; });
  for (auto& e : edges)
    if (e.u > e.v) std::swap(e.u, e.v);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

void validate(const Graph& graph) {
  const auto n = graph.num_nodes();
  if (!graph.features.allFinite())
    throw InvalidArgument("graph features contain non-finite values");
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    const Edge& e = graph.edges[k];
    if (e.u < 0 || e.v >= n || e.u >= e.v)
      throw InvalidArgument("edge " + std::to_string(k) +
                            " is out of range or not oriented u < v");
    if (k > 0 && !(graph.edges[k - 1] < e))
      throw InvalidArgument("edge list is not sorted and deduplicated");
  }
}

void validate(const LabelSet& labels, Eigen::Index num_nodes) {
  if (labels.num_classes < 1)
    throw InvalidArgument("label set needs at least one class");
  std::vector<char> seen(static_cast<std::size_t>(num_nodes), 0);
  auto claim = [&](std::int32_t node, const char* what) {
    if (node < 0 || node >= num_nodes)
      throw InvalidArgument(std::string(what) + " node out of range");
    if (seen[node]++)
      throw InvalidArgument("node " + std::to_string(node) +
                            " appears in more than one split");
  };
  std::vector<char> present(labels.num_classes, 0);
  for (const auto& [node, label] : labels.observed) {
    claim(node, "observed");
    if (label < 0 || label >= labels.num_classes)
      throw InvalidArgument("observed label out of range");
    present[label] = 1;
  }
  for (auto node : labels.unobserved) claim(node, "unobserved");
  for (auto node : labels.test) claim(node, "test");
  for (int m = 0; m < labels.num_classes; ++m)
    if (!present[m])
      throw InvalidArgument("class " + std::to_string(m) +
                            " absent from observed labels");
}

LoadedGraph load_graph(const fs::path& dir) {
  if (!fs::is_directory(dir))
    fail(Kind::kMissingFile, "missing graph directory: " + dir.string());

  const json meta = read_json(dir / "meta.json");
  std::int64_t n = 0, d = 0, num_classes = 0;
  try {
    n = meta.at("n").get<std::int64_t>();
    d = meta.at("d").get<std::int64_t>();
    num_classes = meta.at("M").get<std::int64_t>();
  } catch (const json::exception& e) {
    fail(Kind::kMalformedHeader, std::string("meta.json: ") + e.what());
  }
  if (n < 1 || d < 1 || num_classes < 1)
    fail(Kind::kMalformedHeader, "meta.json: n, d and M must be positive");

  LoadedGraph out;
  Graph& g = out.graph;
  g.name = meta.value("name", dir.filename().string());
  g.features.resize(n, d);

  const fs::path bin = dir / "features.bin";
  if (fs::exists(bin)) {
    const auto expected = static_cast<std::uintmax_t>(n * d) * sizeof(float);
    if (fs::file_size(bin) != expected)
      fail(Kind::kMalformedRecord,
           "features.bin: expected " + std::to_string(expected) + " bytes, found " +
               std::to_string(fs::file_size(bin)));
    auto in = open_or_fail(bin, std::ios::binary);
    in.read(reinterpret_cast<char*>(g.features.data()),
            static_cast<std::streamsize>(expected));
    out.diagnostics.binary_features = true;
  } else {
    std::int64_t row = 0;
    for_each_csv_row(dir / "features.csv", [&](const auto& fields,
                                               const std::string& where) {
      if (row >= n) fail(Kind::kMalformedRecord, where + ": more than n rows");
      if (static_cast<std::int64_t>(fields.size()) != d)
        fail(Kind::kMalformedRecord, where + ": expected d values");
      for (std::int64_t c = 0; c < d; ++c)
        g.features(row, c) = parse_number<float>(fields[c], where);
      ++row;
    });
    if (row != n)
      fail(Kind::kMalformedRecord, "features.csv: expected n rows");
  }
  if (!g.features.allFinite())
    fail(Kind::kInvalidValue, "features contain non-finite values");

  std::vector<Edge> raw;
  for_each_csv_row(dir / "edges.csv", [&](const auto& fields,
                                          const std::string& where) {
    if (fields.size() != 2)
      fail(Kind::kMalformedRecord, where + ": expected 'src,dst'");
    const auto u = checked_index(parse_number<std::int64_t>(fields[0], where), n, where);
    const auto v = checked_index(parse_number<std::int64_t>(fields[1], where), n, where);
    raw.push_back({u, v});
  });
  auto& diag = out.diagnostics;
  diag.edge_records = raw.size();
  diag.self_loops_dropped = static_cast<std::size_t>(
      std::count_if(raw.begin(), raw.end(), [](const Edge& e) { return e.u == e.v; }));
  g.edges = canonical_edges(std::move(raw));
  diag.undirected_pairs = g.edges.size();
  diag.directed_edges = 2 * g.edges.size();
  diag.duplicates_dropped =
      diag.edge_records - diag.self_loops_dropped - diag.undirected_pairs;

  LabelSet& labels = out.labels;
  labels.num_classes = static_cast<int>(num_classes);
  labels.truth.assign(static_cast<std::size_t>(n), -1);
  for_each_csv_row(dir / "labels.csv", [&](const auto& fields,
                                           const std::string& where) {
    if (fields.size() != 2)
      fail(Kind::kMalformedRecord, where + ": expected 'node,label'");
    const auto node = checked_index(parse_number<std::int64_t>(fields[0], where), n, where);
    const auto label = checked_index(parse_number<std::int64_t>(fields[1], where),
                                     num_classes, where + " (label)");
    labels.truth[node] = label;
  });

  const json splits = read_json(dir / "splits.json");
  for (auto node : read_index_array(splits, "observed", n)) {
    if (labels.truth[node] < 0)
      fail(Kind::kMalformedRecord, "splits.json: observed node " +
                                       std::to_string(node) + " has no label");
    labels.observed.push_back({node, labels.truth[node]});
  }
  labels.unobserved = read_index_array(splits, "unobserved", n);
  labels.test = read_index_array(splits, "test", n);

  std::vector<char> present(static_cast<std::size_t>(num_classes), 0);
  for (const auto& ln : labels.observed) present[ln.label] = 1;
  for (std::int64_t m = 0; m < num_classes; ++m)
    if (!present[m])
      fail(Kind::kClassAbsent, "class " + std::to_string(m) +
                                   " absent from the observed set");
  try {
    validate(labels, n);
  } catch (const InvalidArgument& e) {
    fail(Kind::kMalformedRecord, std::string("splits.json: ") + e.what());
  }
  return out;
}

void save_graph(const fs::path& dir, const Graph& graph, const LabelSet& labels) {
  fs::create_directories(dir);
  json meta = {{"name", graph.name},
               {"n", graph.num_nodes()},
               {"d", graph.feature_dim()},
               {"M", labels.num_classes}};
  std::ofstream(dir / "meta.json") << meta.dump(2) << '\n';

  {
    std::ofstream out(dir / "features.bin", std::ios::binary);
    out.write(reinterpret_cast<const char*>(graph.features.data()),
              static_cast<std::streamsize>(graph.features.size() * sizeof(float)));
  }
  {
    std::ofstream out(dir / "edges.csv");
    for (const auto& e : graph.edges) out << e.u << ',' << e.v << '\n';
  }
  {
    std::ofstream out(dir / "labels.csv");
    for (std::size_t i = 0; i < labels.truth.size(); ++i)
      if (labels.truth[i] >= 0) out << i << ',' << labels.truth[i] << '\n';
  }
  json splits;
  std::vector<std::int32_t> observed;
  for (const auto& ln : labels.observed) observed.push_back(ln.node);
  splits["observed"] = observed;
  splits["unobserved"] = labels.unobserved;
  splits["test"] = labels.test;
  std::ofstream(dir / "splits.json") << splits.dump() << '\n';
}

NormalizedAdjacency normalize_adjacency(const Graph& graph) {
  const auto n = graph.num_nodes();
  std::vector<double> degree(static_cast<std::size_t>(n), 1.0);
  for (const auto& e : graph.edges) {
    degree[e.u] += 1.0;
    degree[e.v] += 1.0;
  }
  std::vector<double> inv_sqrt(degree.size());
  std::transform(degree.begin(), degree.end(), inv_sqrt.begin(),
                 [](double deg) { return 1.0 / std::sqrt(deg); });

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) + 2 * graph.edges.size());
  for (Eigen::Index i = 0; i < n; ++i)
    triplets.emplace_back(i, i, inv_sqrt[i] * inv_sqrt[i]);
  for (const auto& e : graph.edges) {
    const double w = inv_sqrt[e.u] * inv_sqrt[e.v];
    triplets.emplace_back(e.u, e.v, w);
    triplets.emplace_back(e.v, e.u, w);
  }
  NormalizedAdjacency adj;
  adj.matrix.resize(n, n);
  adj.matrix.setFromTriplets(triplets.begin(), triplets.end());
  adj.matrix.makeCompressed();
  return adj;
}

double feature_std(const Graph& graph) {
  const auto count = graph.features.size();
  if (count < 2)
    throw InvalidArgument("feature_std needs at least two feature entries");
  const auto values = graph.features.cast<double>().array();
  const double mean = values.sum() / static_cast<double>(count);
  const double var = (values - mean).square().sum() / static_cast<double>(count);
  return std::sqrt(var);
}

Eigen::MatrixXd dense_features(const Graph& graph) {
  return graph.features.cast<double>();
}

}  // namespace drgl

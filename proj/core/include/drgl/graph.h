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

#ifndef DRGL_GRAPH_H_
#define DRGL_GRAPH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "drgl/error.h"

namespace drgl {

// Dense node attributes, one row per node, stored as 32-bit floats.
using FeatureMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Undirected edge stored once with u < v.
struct Edge {
  std::int32_t u = 0;
  std::int32_t v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Observed noisy attributed graph. Edges are undirected, deduplicated and
// free of self-loops; self-loops are only introduced by normalization.
struct Graph {
  std::string name;
  FeatureMatrix features;
  std::vector<Edge> edges;

  Eigen::Index num_nodes() const { return features.rows(); }
  Eigen::Index feature_dim() const { return features.cols(); }
};

struct LabeledNode {
  std::int32_t node = 0;
  std::int32_t label = 0;

  friend bool operator==(const LabeledNode&, const LabeledNode&) = default;
};

// Label information for semi-supervised training.
//
// `observed` holds the training pool with its labels. `truth` carries every
// label known to the dataset (-1 where unknown) and is only consulted for
// scoring the test split.
struct LabelSet {
  int num_classes = 0;
  std::vector<LabeledNode> observed;
  std::vector<std::int32_t> unobserved;
  std::vector<std::int32_t> test;
  std::vector<std::int32_t> truth;
};

// D^{-1/2} (A + I) D^{-1/2}, with D the degree matrix of A + I.
struct NormalizedAdjacency {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;

  Eigen::Index size() const { return matrix.rows(); }
};

// Thrown by load_graph. Each failure class has its own kind so callers can
// tell a missing file from a bad index.
class GraphFormatError : public Error {
 public:
  enum class Kind {
    kMissingFile,
    kMalformedHeader,
    kMalformedRecord,
    kIndexOutOfRange,
    kClassAbsent,
    kInvalidValue,
  };

  GraphFormatError(Kind kind, const std::string& what)
      : Error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Counts gathered while reading edges.csv. Benchmark dumps often list both
// directions of each citation, so both conventions are reported.
struct LoadDiagnostics {
  std::size_t edge_records = 0;
  std::size_t undirected_pairs = 0;
  std::size_t directed_edges = 0;  // 2 * undirected_pairs
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
  bool binary_features = false;
};

struct LoadedGraph {
  Graph graph;
  LabelSet labels;
  LoadDiagnostics diagnostics;
};

// Reads a portable graph directory (meta.json, features.bin|features.csv,
// edges.csv, labels.csv, splits.json). Throws GraphFormatError.
LoadedGraph load_graph(const std::filesystem::path& dir);

// Writes the portable format; features are always emitted as features.bin.
void save_graph(const std::filesystem::path& dir, const Graph& graph,
                const LabelSet& labels);

// Throws InvalidArgument when an invariant of Graph / LabelSet is broken.
void validate(const Graph& graph);
void validate(const LabelSet& labels, Eigen::Index num_nodes);

// Sorts, deduplicates and orients (u < v) an edge list; drops self-loops.
std::vector<Edge> canonical_edges(std::vector<Edge> edges);

NormalizedAdjacency normalize_adjacency(const Graph& graph);

// Population standard deviation of all n*d feature entries pooled.
double feature_std(const Graph& graph);

// Features widened to 64-bit for computation.
Eigen::MatrixXd dense_features(const Graph& graph);

}  // namespace drgl

#endif  // DRGL_GRAPH_H_

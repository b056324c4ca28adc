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

#ifndef DRGL_CLASSIFY_H_
#define DRGL_CLASSIFY_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "drgl/adam.h"
#include "drgl/graph.h"
#include "drgl/lfd.h"

namespace drgl {

// Per-node class probabilities with their argmax and entropy.
struct PredictionSet {
  std::vector<std::int32_t> nodes;
  std::vector<std::int32_t> predicted;  // argmax, lowest class on ties
  Eigen::MatrixXd probabilities;        // one probability row per node
  Eigen::VectorXd entropy;              // natural log
  // Rows that carry no information (uniform fallback).
  std::vector<char> flagged;

  std::size_t size() const { return nodes.size(); }
};

// Natural-log entropy with 0 log 0 = 0.
double entropy(std::span<const double> p);
double entropy(const Eigen::VectorXd& p);

// Numerically stable row-wise softmax.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

// Fills predicted/entropy from probability rows.
PredictionSet make_predictions(std::vector<std::int32_t> nodes,
                               Eigen::MatrixXd probabilities,
                               std::vector<char> flagged = {});

// Fraction of nodes whose prediction equals truth[node], in percent.
double accuracy_percent(const PredictionSet& predictions,
                        std::span<const std::int32_t> truth);

struct HeadConfig {
  int hidden = 16;
  int epochs = 500;
  double learning_rate = 1e-2;
  std::uint64_t seed = 0;
};

// Two-layer network h -> hidden -> M (ReLU, softmax output).
class SoftmaxHead {
 public:
  SoftmaxHead(Eigen::Index input_dim, int num_classes, const HeadConfig& config);

  Eigen::MatrixXd probabilities(const Eigen::MatrixXd& embeddings) const;

  // Mean cross-entropy over rows of `embeddings` against `labels`.
  double loss(const Eigen::MatrixXd& embeddings,
              std::span<const std::int32_t> labels) const;

  // One full-batch Adam step; returns the loss before the step.
  double step(const Eigen::MatrixXd& embeddings,
              std::span<const std::int32_t> labels);

  int num_classes() const { return static_cast<int>(w2_.cols()); }

 private:
  Eigen::MatrixXd w1_, b1_, w2_, b2_;
  Adam optimizer_;
};

// Trains on the observed rows of frozen embeddings (n x h).
SoftmaxHead train_softmax_head(const Eigen::MatrixXd& embeddings,
                               const LabelSet& labels, const HeadConfig& config);

// Head predictions for `nodes` (rows of embeddings).
PredictionSet predict(const SoftmaxHead& head, const Eigen::MatrixXd& embeddings,
                      std::span<const std::int32_t> nodes);

inline constexpr double kKnnEpsilon = 1e-8;

// Weighted k-NN: each of the k nearest training points votes for its class
// with weight 1 / (distance + 1e-8); votes are normalized. Distance ties
// go to the lower training index. `nodes` labels the query rows.
PredictionSet knn_predict(const Eigen::MatrixXd& train_points,
                          std::span<const std::int32_t> train_labels,
                          const Eigen::MatrixXd& queries,
                          std::span<const std::int32_t> nodes, int k,
                          int num_classes);

// f_m(x) = sum_j p*_m(j) exp(-|x - xi_j|^2 / (2 bandwidth^2)), normalized
// over classes; all-zero scores fall back to uniform (flagged).
PredictionSet kde_lfd_predict(const LfdSolution& solution,
                              const Eigen::MatrixXd& support,
                              const Eigen::MatrixXd& queries,
                              std::span<const std::int32_t> nodes,
                              double bandwidth);

// Silverman's rule of thumb on the support embeddings:
// mean per-dimension std * (4 / ((h + 2) s))^(1 / (h + 4)); 1.0 if the
// support has no spread.
double silverman_bandwidth(const Eigen::MatrixXd& support);

// Y <- A Y with observed rows re-clamped to one-hot after each step. Rows
// that receive no mass are uniform and flagged. Covers every node.
PredictionSet label_propagation(const NormalizedAdjacency& adjacency,
                                const LabelSet& labels, int iterations);

}  // namespace drgl

#endif  // DRGL_CLASSIFY_H_

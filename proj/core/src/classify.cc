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

#include "drgl/classify.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drgl/random.h"

namespace drgl {

using Eigen::Index;

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

double entropy(const Eigen::VectorXd& p) {
  return entropy(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out = logits.colwise() - logits.rowwise().maxCoeff();
  out = out.array().exp();
  out.array().colwise() /= out.rowwise().sum().array();
  return out;
}

PredictionSet make_predictions(std::vector<std::int32_t> nodes,
                               Eigen::MatrixXd probabilities,
                               std::vector<char> flagged) {
  const Index n = probabilities.rows();
  PredictionSet out;
  out.nodes = std::move(nodes);
  out.probabilities = std::move(probabilities);
  out.flagged = flagged.empty() ? std::vector<char>(n, 0) : std::move(flagged);
  out.predicted.resize(n);
  out.entropy.resize(n);
  for (Index i = 0; i < n; ++i) {
    Index best = 0;
    for (Index m = 1; m < out.probabilities.cols(); ++m)
      if (out.probabilities(i, m) > out.probabilities(i, best)) best = m;
    out.predicted[i] = static_cast<std::int32_t>(best);
    out.entropy[i] = entropy(Eigen::VectorXd(out.probabilities.row(i).transpose()));
  }
  return out;
}

double accuracy_percent(const PredictionSet& predictions,
                        std::span<const std::int32_t> truth) {
  std::size_t scored = 0, correct = 0;
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    const auto node = predictions.nodes[k];
    if (node < 0 || static_cast<std::size_t>(node) >= truth.size() || truth[node] < 0)
      continue;
    ++scored;
    correct += predictions.predicted[k] == truth[node];
  }
  if (scored == 0) throw InvalidArgument("accuracy: no labeled nodes to score");
  return 100.0 * static_cast<double>(correct) / static_cast<double>(scored);
}

namespace {

Eigen::MatrixXd glorot(Index rows, Index cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Eigen::MatrixXd w(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) w(r, c) = (2.0 * rng.uniform() - 1.0) * limit;
  return w;
}

}  // namespace

SoftmaxHead::SoftmaxHead(Index input_dim, int num_classes, const HeadConfig& config)
    : optimizer_(config.learning_rate) {
  if (input_dim < 1 || num_classes < 1 || config.hidden < 1)
    throw InvalidArgument("softmax head: dimensions must be positive");
  Rng rng(config.seed);
  w1_ = glorot(input_dim, config.hidden, rng);
  b1_ = Eigen::MatrixXd::Zero(1, config.hidden);
  w2_ = glorot(config.hidden, num_classes, rng);
  b2_ = Eigen::MatrixXd::Zero(1, num_classes);
}

Eigen::MatrixXd SoftmaxHead::probabilities(const Eigen::MatrixXd& x) const {
  const Eigen::MatrixXd hidden = ((x * w1_).rowwise() + b1_.row(0)).cwiseMax(0.0);
  return softmax_rows((hidden * w2_).rowwise() + b2_.row(0));
}

double SoftmaxHead::loss(const Eigen::MatrixXd& x,
                         std::span<const std::int32_t> labels) const {
  const Eigen::MatrixXd p = probabilities(x);
  double total = 0.0;
  for (Index i = 0; i < p.rows(); ++i)
    total -= std::log(std::max(p(i, labels[i]), 1e-300));
  return total / static_cast<double>(p.rows());
}

double SoftmaxHead::step(const Eigen::MatrixXd& x,
                         std::span<const std::int32_t> labels) {
  const Index n = x.rows();
  if (static_cast<std::size_t>(n) != labels.size() || n == 0)
    throw InvalidArgument("softmax head: embeddings and labels disagree");
  const Eigen::MatrixXd pre = (x * w1_).rowwise() + b1_.row(0);
  const Eigen::MatrixXd hidden = pre.cwiseMax(0.0);
  Eigen::MatrixXd p = softmax_rows((hidden * w2_).rowwise() + b2_.row(0));
  double loss_value = 0.0;
  for (Index i = 0; i < n; ++i) {
    loss_value -= std::log(std::max(p(i, labels[i]), 1e-300));
    p(i, labels[i]) -= 1.0;
  }
  loss_value /= static_cast<double>(n);
  if (!std::isfinite(loss_value)) throw NumericalError("softmax head: non-finite loss");
  const Eigen::MatrixXd dlogits = p / static_cast<double>(n);

  Eigen::MatrixXd grads[4];
  grads[2] = hidden.transpose() * dlogits;
  grads[3] = dlogits.colwise().sum();
  const Eigen::MatrixXd dpre = (dlogits * w2_.transpose())
                                   .cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
  grads[0] = x.transpose() * dpre;
  grads[1] = dpre.colwise().sum();

  optimizer_.step({&w1_, &b1_, &w2_, &b2_},
                  {&grads[0], &grads[1], &grads[2], &grads[3]});
  return loss_value;
}

SoftmaxHead train_softmax_head(const Eigen::MatrixXd& embeddings,
                               const LabelSet& labels, const HeadConfig& config) {
  if (config.epochs < 0) throw InvalidArgument("softmax head: epochs must be >= 0");
  SoftmaxHead head(embeddings.cols(), labels.num_classes, config);
  const auto n = static_cast<Index>(labels.observed.size());
  Eigen::MatrixXd x(n, embeddings.cols());
  std::vector<std::int32_t> y(n);
  for (Index k = 0; k < n; ++k) {
    x.row(k) = embeddings.row(labels.observed[k].node);
    y[k] = labels.observed[k].label;
  }
  for (int epoch = 0; epoch < config.epochs; ++epoch) head.step(x, y);
  return head;
}

PredictionSet predict(const SoftmaxHead& head, const Eigen::MatrixXd& embeddings,
                      std::span<const std::int32_t> nodes) {
  Eigen::MatrixXd x(static_cast<Index>(nodes.size()), embeddings.cols());
  for (std::size_t k = 0; k < nodes.size(); ++k) x.row(k) = embeddings.row(nodes[k]);
  return make_predictions({nodes.begin(), nodes.end()}, head.probabilities(x));
}

PredictionSet knn_predict(const Eigen::MatrixXd& train_points,
                          std::span<const std::int32_t> train_labels,
                          const Eigen::MatrixXd& queries,
                          std::span<const std::int32_t> nodes, int k,
                          int num_classes) {
  const Index n = train_points.rows();
  if (k < 1) throw InvalidArgument("knn: k must be >= 1");
  if (k > n) throw InvalidArgument("knn: k exceeds the number of training points");
  if (static_cast<std::size_t>(n) != train_labels.size() ||
      nodes.size() != static_cast<std::size_t>(queries.rows()))
    throw InvalidArgument("knn: size mismatch");

  Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(queries.rows(), num_classes);
  std::vector<Index> order(n);
  std::vector<double> dist(n);
  for (Index q = 0; q < queries.rows(); ++q) {
    for (Index j = 0; j < n; ++j) dist[j] = (queries.row(q) - train_points.row(j)).norm();
    std::iota(order.begin(), order.end(), Index{0});
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](Index a, Index b) {
                        return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                      });
    for (int r = 0; r < k; ++r) {
      const Index j = order[r];
      probs(q, train_labels[j]) += 1.0 / (dist[j] + kKnnEpsilon);
    }
    probs.row(q) /= probs.row(q).sum();
  }
  return make_predictions({nodes.begin(), nodes.end()}, std::move(probs));
}

PredictionSet kde_lfd_predict(const LfdSolution& solution,
                              const Eigen::MatrixXd& support,
                              const Eigen::MatrixXd& queries,
                              std::span<const std::int32_t> nodes,
                              double bandwidth) {
  if (!(bandwidth > 0.0)) throw InvalidArgument("kde: bandwidth must be positive");
  const Index s = support.rows();
  const Index num_classes = solution.lfd.rows();
  if (solution.lfd.cols() != s || nodes.size() != static_cast<std::size_t>(queries.rows()))
    throw InvalidArgument("kde: size mismatch");

  Eigen::MatrixXd probs(queries.rows(), num_classes);
  std::vector<char> flagged(queries.rows(), 0);
  Eigen::VectorXd exponent(s);
  for (Index q = 0; q < queries.rows(); ++q) {
    for (Index j = 0; j < s; ++j)
      exponent[j] = -(queries.row(q) - support.row(j)).squaredNorm() /
                    (2.0 * bandwidth * bandwidth);
    // The class ratio is unchanged by a common shift; it avoids underflow.
    const Eigen::VectorXd kernel = (exponent.array() - exponent.maxCoeff()).exp();
    const Eigen::VectorXd scores = solution.lfd * kernel;
    const double total = scores.sum();
    if (total > 0.0) {
      probs.row(q) = scores.transpose() / total;
    } else {
      probs.row(q).setConstant(1.0 / static_cast<double>(num_classes));
      flagged[q] = 1;
    }
  }
  return make_predictions({nodes.begin(), nodes.end()}, std::move(probs),
                          std::move(flagged));
}

double silverman_bandwidth(const Eigen::MatrixXd& support) {
  const Index s = support.rows();
  const Index h = support.cols();
  if (s < 2) return 1.0;
  const Eigen::RowVectorXd mean = support.colwise().mean();
  const Eigen::RowVectorXd sd =
      ((support.rowwise() - mean).array().square().colwise().sum() /
       static_cast<double>(s - 1))
          .sqrt();
  const double sigma = sd.mean();
  if (!(sigma > 0.0)) return 1.0;
  const double dim = static_cast<double>(h);
  return sigma * std::pow(4.0 / ((dim + 2.0) * static_cast<double>(s)), 1.0 / (dim + 4.0));
}

PredictionSet label_propagation(const NormalizedAdjacency& adjacency,
                                const LabelSet& labels, int iterations) {
  if (iterations < 1) throw InvalidArgument("label propagation: iterations must be >= 1");
  const Index n = adjacency.size();
  const int num_classes = labels.num_classes;
  Eigen::MatrixXd clamp = Eigen::MatrixXd::Zero(n, num_classes);
  std::vector<char> is_observed(n, 0);
  for (const auto& [node, label] : labels.observed) {
    clamp(node, label) = 1.0;
    is_observed[node] = 1;
  }
  Eigen::MatrixXd y = clamp;
  for (int it = 0; it < iterations; ++it) {
    y = adjacency.matrix * y;
    for (Index i = 0; i < n; ++i)
      if (is_observed[i]) y.row(i) = clamp.row(i);
  }
  std::vector<char> flagged(n, 0);
  for (Index i = 0; i < n; ++i) {
    const double total = y.row(i).sum();
    if (total > 0.0) {
      y.row(i) /= total;
    } else {
      y.row(i).setConstant(1.0 / num_classes);
      flagged[i] = 1;
    }
  }
  std::vector<std::int32_t> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 0);
  return make_predictions(std::move(nodes), std::move(y), std::move(flagged));
}

}  // namespace drgl

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

#include "drgl/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "drgl/classify.h"
#include "drgl/dro_grad.h"
#include "drgl/random.h"

namespace drgl {

using Eigen::Index;

void validate(const TrainConfig& config, int num_classes) {
  if (!(config.learning_rate >= 0.0))
    throw InvalidArgument("train: learning_rate must be non-negative");
  if (config.epochs < 1) throw InvalidArgument("train: epochs must be >= 1");
  if (config.miniset_size != 0 && config.miniset_size < num_classes)
    throw InvalidArgument("train: miniset_size must be >= number of classes");
  if (config.objective_sign != 1 && config.objective_sign != -1)
    throw InvalidArgument("train: objective_sign must be +1 or -1");
  validate(config.dro);
}

int effective_miniset_size(const TrainConfig& config, int num_classes) {
  return config.miniset_size > 0 ? config.miniset_size
                                 : std::max(2 * num_classes, 16);
}

nlohmann::json to_json(const EpochRecord& r) {
  return {{"epoch", r.epoch},
          {"mean_margin", r.mean_margin},
          {"mean_risk", r.mean_risk},
          {"embedding_grad_norm", r.embedding_grad_norm},
          {"param_grad_norm", r.param_grad_norm},
          {"minisets", r.minisets},
          {"replicated", r.replicated}};
}

nlohmann::json timing_to_json(const EpochRecord& r) {
  return {{"epoch", r.epoch}, {"wall_seconds", r.wall_seconds}};
}

MiniSetPartition make_minisets(const LabelSet& labels, int size,
                               std::uint64_t seed) {
  const int num_classes = labels.num_classes;
  if (size < num_classes)
    throw InvalidArgument("make_minisets: size must be >= number of classes");
  if (labels.observed.empty())
    throw InvalidArgument("make_minisets: no observed nodes");

  std::vector<LabeledNode> order = labels.observed;
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<std::vector<LabeledNode>> sets;
  for (std::size_t start = 0; start < order.size(); start += size)
    sets.emplace_back(order.begin() + start,
                      order.begin() + std::min(order.size(), start + size));

  auto count_class = [](const std::vector<LabeledNode>& set, int m) {
    return std::count_if(set.begin(), set.end(),
                         [m](const LabeledNode& x) { return x.label == m; });
  };
  auto covers = [&](const std::vector<LabeledNode>& set) {
    for (int m = 0; m < num_classes; ++m)
      if (count_class(set, m) == 0) return false;
    return true;
  };

  MiniSetPartition out;
  if (sets.size() > 1 && !covers(sets.back())) {
    auto& prev = sets[sets.size() - 2];
    prev.insert(prev.end(), sets.back().begin(), sets.back().end());
    sets.pop_back();
    out.repairs.push_back("merged short trailing mini-set into its predecessor");
  }

  for (std::size_t k = 0; k < sets.size(); ++k) {
    for (int m = 0; m < num_classes; ++m) {
      if (count_class(sets[k], m) > 0) continue;
      std::size_t donor = sets.size();
      long best = 1;
      for (std::size_t q = 0; q < sets.size(); ++q) {
        const long c = count_class(sets[q], m);
        if (q != k && c > best) {
          best = c;
          donor = q;
        }
      }
      if (donor < sets.size()) {
        auto& from = sets[donor];
        auto it = std::min_element(from.begin(), from.end(),
                                   [m](const LabeledNode& a, const LabeledNode& b) {
                                     if ((a.label == m) != (b.label == m))
                                       return a.label == m;
                                     return a.node < b.node;
                                   });
        sets[k].push_back(*it);
        out.repairs.push_back("moved node " + std::to_string(it->node) +
                              " (class " + std::to_string(m) + ") from mini-set " +
                              std::to_string(donor) + " to " + std::to_string(k));
        from.erase(it);
      } else {
        const auto it = std::min_element(
            labels.observed.begin(), labels.observed.end(),
            [m](const LabeledNode& a, const LabeledNode& b) {
              if ((a.label == m) != (b.label == m)) return a.label == m;
              return a.node < b.node;
            });
        sets[k].push_back(*it);
        ++out.replicated;
        out.repairs.push_back("replicated node " + std::to_string(it->node) +
                              " (class " + std::to_string(m) + ") into mini-set " +
                              std::to_string(k));
      }
    }
  }

  for (const auto& set : sets) {
    MiniSet ms;
    for (const auto& x : set) {
      ms.nodes.push_back(x.node);
      ms.labels.push_back(x.label);
    }
    out.sets.push_back(std::move(ms));
  }
  return out;
}

TrainResult train(const Graph& graph, const LabelSet& labels,
                  EncoderParams params, const TrainConfig& config) {
  validate(graph);
  validate(labels, graph.num_nodes());
  validate(params);
  validate(config, labels.num_classes);
  const int num_classes = labels.num_classes;
  const int size = effective_miniset_size(config, num_classes);

  const NormalizedAdjacency adjacency = normalize_adjacency(graph);
  const Eigen::MatrixXd features = dense_features(graph);
  Adam adam(config.learning_rate, config.adam);

  TrainResult result;
  MiniSetPartition partition;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    const std::uint64_t epoch_seed = derive_seed(config.seed, epoch);
    if (epoch == 1 || !config.fixed_partition) {
      partition = make_minisets(labels, size, derive_seed(epoch_seed, 0));
      for (const auto& r : partition.repairs)
        result.report.repairs.push_back("epoch " + std::to_string(epoch) + ": " + r);
    }

    ForwardResult fwd = forward(params, adjacency, features, /*training=*/true,
                                derive_seed(epoch_seed, 1));
    const Eigen::MatrixXd& xi = fwd.embeddings;
    Eigen::MatrixXd grad_xi = Eigen::MatrixXd::Zero(xi.rows(), xi.cols());

    double margin_sum = 0.0;
    for (const MiniSet& set : partition.sets) {
      const auto s = static_cast<Index>(set.nodes.size());
      Eigen::MatrixXd support(s, xi.cols());
      for (Index i = 0; i < s; ++i) support.row(i) = xi.row(set.nodes[i]);

      const Eigen::MatrixXd costs = pairwise_costs(support, config.dro.cost_kind);
      // Throws when a class is missing, which make_minisets rules out.
      const EmpiricalDistribution phat = empirical_distributions(set.labels, num_classes);
      const LfdSolution sol = solve_lfd(costs, phat, config.dro);
      margin_sum += sol.total_margin;

      Eigen::MatrixXd cost_grad = total_cost_gradient(sol);
      if (config.differentiate_radius &&
          config.dro.radius_rule == RadiusRule::kMedianFraction)
        cost_grad += radius_cost_gradient(sol, costs, config.dro.rho);
      const Eigen::MatrixXd g =
          chain_cost_gradient(cost_grad, support, config.dro.cost_kind);
      for (Index i = 0; i < s; ++i) grad_xi.row(set.nodes[i]) += g.row(i);
    }

    // Adam descends, so ascent on J feeds it -dJ/dxi.
    grad_xi *= -static_cast<double>(config.objective_sign);
    const EncoderGradients grads = backward(params, fwd.tape, grad_xi);
    if (!grads.w1.allFinite() || !grads.w2.allFinite())
      throw NumericalError("train: non-finite gradient at epoch " +
                           std::to_string(epoch));
    adam.step({&params.w1, &params.w2}, {&grads.w1, &grads.w2});

    EpochRecord record;
    record.epoch = epoch;
    record.minisets = static_cast<int>(partition.sets.size());
    record.replicated = partition.replicated;
    record.mean_margin = margin_sum / record.minisets;
    record.mean_risk = num_classes - record.mean_margin;
    record.embedding_grad_norm = grad_xi.norm();
    record.param_grad_norm =
        std::sqrt(grads.w1.squaredNorm() + grads.w2.squaredNorm());
    record.wall_seconds = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - started)
                              .count();
    result.report.epochs.push_back(record);
  }
  result.params = std::move(params);
  return result;
}

EncoderParams pretrain_supervised(const Graph& graph, const LabelSet& labels,
                                  EncoderParams params,
                                  const PretrainConfig& config) {
  validate(graph);
  validate(labels, graph.num_nodes());
  validate(params);
  if (config.epochs < 0) throw InvalidArgument("pretrain: epochs must be >= 0");
  if (config.epochs == 0) return params;

  const NormalizedAdjacency adjacency = normalize_adjacency(graph);
  const Eigen::MatrixXd features = dense_features(graph);
  const int num_classes = labels.num_classes;
  const auto num_obs = static_cast<Index>(labels.observed.size());

  Rng rng(derive_seed(config.seed, 0));
  const double limit =
      std::sqrt(6.0 / static_cast<double>(params.output_dim() + num_classes));
  Eigen::MatrixXd head(params.output_dim(), num_classes);
  for (Index r = 0; r < head.rows(); ++r)
    for (Index c = 0; c < head.cols(); ++c)
      head(r, c) = (2.0 * rng.uniform() - 1.0) * limit;
  Eigen::MatrixXd bias = Eigen::MatrixXd::Zero(1, num_classes);

  Adam adam(config.learning_rate);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    ForwardResult fwd = forward(params, adjacency, features, true,
                                derive_seed(config.seed, epoch));
    Eigen::MatrixXd observed(num_obs, params.output_dim());
    for (Index k = 0; k < num_obs; ++k)
      observed.row(k) = fwd.embeddings.row(labels.observed[k].node);
    const Eigen::MatrixXd logits =
        (observed * head).rowwise() + bias.row(0);
    Eigen::MatrixXd dlogits = softmax_rows(logits);
    for (Index k = 0; k < num_obs; ++k) dlogits(k, labels.observed[k].label) -= 1.0;
    dlogits /= static_cast<double>(num_obs);

    const Eigen::MatrixXd grad_head = observed.transpose() * dlogits;
    const Eigen::MatrixXd grad_bias = dlogits.colwise().sum();
    const Eigen::MatrixXd d_observed = dlogits * head.transpose();
    Eigen::MatrixXd grad_xi =
        Eigen::MatrixXd::Zero(fwd.embeddings.rows(), fwd.embeddings.cols());
    for (Index k = 0; k < num_obs; ++k)
      grad_xi.row(labels.observed[k].node) += d_observed.row(k);

    EncoderGradients grads = backward(params, fwd.tape, grad_xi);
    grads.w1 += config.weight_decay * params.w1;
    if (!grads.w1.allFinite() || !grads.w2.allFinite())
      throw NumericalError("pretrain: non-finite gradient");
    adam.step({&params.w1, &params.w2, &head, &bias},
              {&grads.w1, &grads.w2, &grad_head, &grad_bias});
  }
  return params;
}

}  // namespace drgl

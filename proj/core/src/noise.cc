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

#include "drgl/noise.h"

#include <cassert>
#include <cmath>
#include <numeric>

#include "drgl/random.h"

namespace drgl {

void validate(const NoiseSpec& spec) {
  if (!(spec.sigma_multiplier >= 0.0) || !std::isfinite(spec.sigma_multiplier))
    throw InvalidArgument("noise: sigma_multiplier must be finite and >= 0");
  if (!(spec.edge_removal_rate >= 0.0 && spec.edge_removal_rate < 1.0))
    throw InvalidArgument("noise: edge_removal_rate must lie in [0, 1)");
}

Graph add_feature_noise(const Graph& graph, const NoiseSpec& spec) {
  validate(spec);
  Graph out = graph;
  if (spec.sigma_multiplier == 0.0) return out;

  const double sigma = spec.sigma_multiplier * feature_std(graph);
  Rng rng(spec.seed);
  float* data = out.features.data();
  for (Eigen::Index k = 0; k < out.features.size(); ++k) {
    data[k] = static_cast<float>(static_cast<double>(data[k]) + sigma * rng.normal());
    assert(std::isfinite(data[k]));
  }
  return out;
}

Graph remove_edges(const Graph& graph, const NoiseSpec& spec) {
  validate(spec);
  const std::size_t total = graph.edges.size();
  const auto num_removed = static_cast<std::size_t>(
      std::floor(spec.edge_removal_rate * static_cast<double>(total)));
  Graph out = graph;
  if (num_removed == 0) return out;

  // Partial Fisher-Yates: the first num_removed slots become the sample.
  std::vector<std::size_t> index(total);
  std::iota(index.begin(), index.end(), std::size_t{0});
  Rng rng(spec.seed);
  std::vector<char> removed(total, 0);
  for (std::size_t k = 0; k < num_removed; ++k) {
    const auto j = k + static_cast<std::size_t>(rng.below(total - k));
    std::swap(index[k], index[j]);
    removed[index[k]] = 1;
  }
  out.edges.clear();
  out.edges.reserve(total - num_removed);
  for (std::size_t k = 0; k < total; ++k)
    if (!removed[k]) out.edges.push_back(graph.edges[k]);
  return out;
}

Graph apply_noise(const Graph& graph, const NoiseSpec& spec) {
  NoiseSpec features = spec;
  features.seed = derive_seed(spec.seed, 0);
  NoiseSpec edges = spec;
  edges.seed = derive_seed(spec.seed, 1);
  return remove_edges(add_feature_noise(graph, features), edges);
}

}  // namespace drgl

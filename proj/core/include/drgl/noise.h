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

#ifndef DRGL_NOISE_H_
#define DRGL_NOISE_H_

#include <cstdint>

#include "drgl/graph.h"

namespace drgl {

// Corruption applied to a clean graph. sigma_multiplier is expressed in
// units of feature_std(graph); edge_removal_rate is the fraction of
// undirected pairs dropped.
struct NoiseSpec {
  double sigma_multiplier = 0.0;
  double edge_removal_rate = 0.0;
  std::uint64_t seed = 0;
};

void validate(const NoiseSpec& spec);

// X + eps with eps ~ N(0, (sigma_multiplier * feature_std)^2) i.i.d.
// Features are not clipped. A zero multiplier returns the input unchanged.
Graph add_feature_noise(const Graph& graph, const NoiseSpec& spec);

// Removes exactly floor(rate * |E|) undirected pairs, uniformly without
// replacement. Surviving edges keep their order.
Graph remove_edges(const Graph& graph, const NoiseSpec& spec);

// Both corruptions, each with its own stream derived from spec.seed.
Graph apply_noise(const Graph& graph, const NoiseSpec& spec);

}  // namespace drgl

#endif  // DRGL_NOISE_H_

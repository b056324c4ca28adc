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

#ifndef DRGL_SYNTHETIC_H_
#define DRGL_SYNTHETIC_H_

#include <cstdint>

#include "drgl/graph.h"

namespace drgl {

// Stochastic block model with class-shifted Gaussian features.
//
// Node i belongs to block i % num_classes. Features are N(0, 1) per
// coordinate, plus `feature_shift` on the coordinates owned by the node's
// block (the feature dimension is split into num_classes contiguous slices).
// A `test_fraction` of nodes forms the test split; the rest is the observed
// training pool.
struct SbmSpec {
  int num_nodes = 200;
  int num_classes = 2;
  double p_in = 0.1;
  double p_out = 0.01;
  int feature_dim = 20;
  double feature_shift = 1.0;
  double test_fraction = 0.5;
  std::uint64_t seed = 1;
};

struct SyntheticDataset {
  Graph graph;
  LabelSet labels;
};

SyntheticDataset make_sbm(const SbmSpec& spec);

}  // namespace drgl

#endif  // DRGL_SYNTHETIC_H_

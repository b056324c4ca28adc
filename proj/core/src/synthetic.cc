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

#include "drgl/synthetic.h"

#include <algorithm>
#include <numeric>

#include "drgl/random.h"

namespace drgl {

SyntheticDataset make_sbm(const SbmSpec& spec) {
  if (spec.num_nodes < 1 || spec.num_classes < 1 || spec.feature_dim < 1)
    throw InvalidArgument("make_sbm: sizes must be positive");
  if (spec.p_in < 0 || spec.p_in > 1 || spec.p_out < 0 || spec.p_out > 1)
    throw InvalidArgument("make_sbm: probabilities must lie in [0, 1]");
  if (spec.test_fraction < 0 || spec.test_fraction >= 1)
    throw InvalidArgument("make_sbm: test_fraction must lie in [0, 1)");

  const int n = spec.num_nodes;
  const int classes = spec.num_classes;
  Rng edge_rng(derive_seed(spec.seed, 0));
  Rng feature_rng(derive_seed(spec.seed, 1));
  Rng split_rng(derive_seed(spec.seed, 2));

  SyntheticDataset out;
  Graph& g = out.graph;
  g.name = "sbm";
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const double p = (u % classes == v % classes) ? spec.p_in : spec.p_out;
      if (edge_rng.bernoulli(p)) g.edges.push_back({u, v});
    }

  g.features.resize(n, spec.feature_dim);
  const int slice = std::max(1, spec.feature_dim / classes);
  for (int i = 0; i < n; ++i) {
    const int block = i % classes;
    for (int c = 0; c < spec.feature_dim; ++c) {
      double x = feature_rng.normal();
      if (c / slice == block) x += spec.feature_shift;
      g.features(i, c) = static_cast<float>(x);
    }
  }

  LabelSet& labels = out.labels;
  labels.num_classes = classes;
  labels.truth.resize(n);
  for (int i = 0; i < n; ++i) labels.truth[i] = i % classes;

  std::vector<std::int32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  split_rng.shuffle(order);
  const auto num_test = static_cast<std::size_t>(spec.test_fraction * n);
  labels.test.assign(order.begin(), order.begin() + num_test);
  std::sort(labels.test.begin(), labels.test.end());
  std::vector<std::int32_t> pool(order.begin() + num_test, order.end());
  std::sort(pool.begin(), pool.end());
  for (auto node : pool) labels.observed.push_back({node, labels.truth[node]});
  return out;
}

}  // namespace drgl

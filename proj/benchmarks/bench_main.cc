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

#include <benchmark/benchmark.h>

#include "drgl/encoder.h"
#include "drgl/lfd.h"
#include "drgl/random.h"
#include "drgl/synthetic.h"

namespace {

void BM_SolveLfd(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  const int classes = 3;
  drgl::Rng rng(17);
  Eigen::MatrixXd support(s, 8);
  for (Eigen::Index k = 0; k < support.size(); ++k) support.data()[k] = rng.normal();
  std::vector<std::int32_t> labels;
  for (int i = 0; i < s; ++i) labels.push_back(i % classes);
  const Eigen::MatrixXd costs = drgl::pairwise_costs(support, drgl::CostKind::kEuclidean);
  const auto phat = drgl::empirical_distributions(labels, classes);
  const drgl::DroConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(drgl::solve_lfd(costs, phat, config));
}
BENCHMARK(BM_SolveLfd)->Arg(6)->Arg(12)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_EncoderForward(benchmark::State& state) {
  drgl::SbmSpec spec;
  spec.num_nodes = static_cast<int>(state.range(0));
  spec.num_classes = 4;
  spec.feature_dim = 64;
  const auto data = drgl::make_sbm(spec);
  const auto adj = drgl::normalize_adjacency(data.graph);
  const Eigen::MatrixXd x = drgl::dense_features(data.graph);
  const auto params = drgl::init_encoder(64, 16, 16, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(drgl::forward(params, adj, x, false, 0).embeddings);
}
BENCHMARK(BM_EncoderForward)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
